use std::fmt;
use std::sync::Arc;


use crate::error::Error;
use crate::poly::{Coeff, ModuleOrder, Monomial, Polynomial, VarUniverse};
use crate::Result;

/// An element of the free module `R^q`, stored as one polynomial per
/// component.  Rank-1 elements double as plain ring elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModuleElement {
    components: Vec<Polynomial>,
}

impl FreeModuleElement {
    pub fn new(components: Vec<Polynomial>) -> Self {
        assert!(!components.is_empty(), "module elements need at least one component");
        let u = components[0].universe();
        assert!(
            components.iter().all(|p| p.universe() == u),
            "universe mismatch among components"
        );
        FreeModuleElement { components }
    }

    pub fn zero(universe: &Arc<VarUniverse>, rank: usize) -> Self {
        Self::new(vec![Polynomial::zero(universe); rank])
    }

    pub fn from_poly(p: Polynomial) -> Self {
        FreeModuleElement { components: vec![p] }
    }

    /// `p * e_j` in rank `rank`.
    pub fn basis_times(universe: &Arc<VarUniverse>, rank: usize, j: usize, p: Polynomial) -> Self {
        let mut comps = vec![Polynomial::zero(universe); rank];
        comps[j] = p;
        Self::new(comps)
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        self.components[0].universe()
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Converts a rank-1 element back to its polynomial.
    pub fn into_poly(mut self) -> Result<Polynomial> {
        if self.components.len() != 1 {
            return Err(Error::RankMismatch { expected: 1, found: self.components.len() });
        }
        Ok(self.components.pop().unwrap())
    }

    pub fn add(&self, other: &FreeModuleElement) -> FreeModuleElement {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        FreeModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &FreeModuleElement) -> FreeModuleElement {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        FreeModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale_poly(&self, p: &Polynomial) -> FreeModuleElement {
        FreeModuleElement { components: self.components.iter().map(|c| c * p).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> FreeModuleElement {
        FreeModuleElement {
            components: self.components.iter().map(|p| p.mul_term(m, c)).collect(),
        }
    }

    /// Leading module term `(component, monomial, coefficient)` under `order`;
    /// `None` for the zero element.
    pub fn leading(&self, order: &ModuleOrder) -> Option<(usize, Monomial, Coeff)> {
        let mut best: Option<(usize, &Monomial, &Coeff)> = None;
        for (j, p) in self.components.iter().enumerate() {
            for (m, c) in p.terms() {
                let better = match &best {
                    None => true,
                    Some((bj, bm, _)) => {
                        order.compare((j, m), (*bj, bm)) == std::cmp::Ordering::Greater
                    }
                };
                if better {
                    best = Some((j, m, c));
                }
            }
        }
        best.map(|(j, m, c)| (j, m.clone(), c.clone()))
    }

    pub fn map_components(&self, f: impl Fn(&Polynomial) -> Polynomial) -> FreeModuleElement {
        FreeModuleElement { components: self.components.iter().map(f).collect() }
    }

    pub fn try_map_components(
        &self,
        f: impl Fn(&Polynomial) -> Result<Polynomial>,
    ) -> Result<FreeModuleElement> {
        let comps: Result<Vec<_>> = self.components.iter().map(f).collect();
        Ok(FreeModuleElement { components: comps? })
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.components.iter().filter_map(Polynomial::total_degree).max()
    }
}

impl fmt::Display for FreeModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 1 {
            return write!(f, "{}", self.components[0]);
        }
        write!(f, "(")?;
        for (i, p) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
