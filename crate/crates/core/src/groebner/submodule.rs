use std::sync::{Arc, OnceLock};

use super::engine::{self, GbStats, SElem};
use super::FreeModuleElement;
use crate::error::Error;
use crate::par;
use crate::poly::{ModuleOrder, Polynomial, VarUniverse};
use crate::Result;

/// A reduced Gröbner basis together with the order it was computed under and
/// the engine statistics of the run.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    order: ModuleOrder,
    elements: Vec<FreeModuleElement>,
    pub(crate) selems: Vec<SElem>,
    stats: GbStats,
}

impl GroebnerBasis {
    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    /// Basis elements: monic, fully tail-reduced, pairwise indivisible leading
    /// terms, sorted ascending by leading term.
    pub fn elements(&self) -> &[FreeModuleElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn stats(&self) -> &GbStats {
        &self.stats
    }

    /// True when some basis element is a unit (detects the full ring/module
    /// quickly for ideals).
    pub fn contains_unit(&self) -> bool {
        self.elements.iter().any(|e| {
            e.components()
                .iter()
                .any(|p| !p.is_zero() && p.total_degree() == Some(0))
        })
    }
}

/// A finitely generated submodule of `R^q` (ideals are the rank-1 case).
///
/// Generators are immutable after construction; the reduced Gröbner basis is
/// computed on demand and cached (the first computed order claims the cache,
/// later requests under other orders compute fresh bases without storing
/// them).
#[derive(Debug)]
pub struct Submodule {
    universe: Arc<VarUniverse>,
    rank: usize,
    gens: Vec<FreeModuleElement>,
    cache: OnceLock<Arc<GroebnerBasis>>,
}

impl Clone for Submodule {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(gb) = self.cache.get() {
            let _ = cache.set(Arc::clone(gb));
        }
        Submodule {
            universe: Arc::clone(&self.universe),
            rank: self.rank,
            gens: self.gens.clone(),
            cache,
        }
    }
}

impl PartialEq for Submodule {
    /// Structural equality of the generator lists (use [`Submodule::equals`]
    /// for equality as submodules).
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.rank == other.rank && self.gens == other.gens
    }
}

impl Submodule {
    /// Builds a submodule from generators; zero generators are dropped.
    pub fn new(
        universe: &Arc<VarUniverse>,
        rank: usize,
        gens: Vec<FreeModuleElement>,
    ) -> Result<Self> {
        assert!(rank >= 1, "rank must be at least 1");
        for g in &gens {
            if g.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, found: g.rank() });
            }
            if g.universe() != universe {
                return Err(Error::UniverseMismatch);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Submodule {
            universe: Arc::clone(universe),
            rank,
            gens,
            cache: OnceLock::new(),
        })
    }

    /// Rank-1 convenience constructor.
    pub fn ideal(universe: &Arc<VarUniverse>, gens: Vec<Polynomial>) -> Result<Self> {
        Self::new(
            universe,
            1,
            gens.into_iter().map(FreeModuleElement::from_poly).collect(),
        )
    }

    pub fn zero(universe: &Arc<VarUniverse>, rank: usize) -> Self {
        Self::new(universe, rank, Vec::new()).expect("empty generator list is valid")
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[FreeModuleElement] {
        &self.gens
    }

    /// Generators of a rank-1 module as plain polynomials.
    pub fn gen_polys(&self) -> Vec<Polynomial> {
        assert_eq!(self.rank, 1, "gen_polys requires a rank-1 module");
        self.gens.iter().map(|g| g.component(0).clone()).collect()
    }

    pub fn is_zero_module(&self) -> bool {
        self.gens.is_empty()
    }

    /// Union of generator lists (the submodule sum `M + N`).
    pub fn plus(&self, other: &Submodule) -> Result<Submodule> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(&self.universe, self.rank, gens)
    }

    /// The reduced Gröbner basis under `order`.  The first computed basis
    /// claims the cache; requests under other orders compute fresh bases.
    pub fn gb(&self, order: &ModuleOrder) -> Arc<GroebnerBasis> {
        let computed = self.gb_reusing_cache(order);
        // Either this wins the slot or another thread computed the identical
        // basis first; both outcomes are fine.
        let _ = self.cache.set(Arc::clone(&computed));
        computed
    }

    /// Like [`Submodule::gb`] but never claims the cache (used by elimination
    /// orders, which would otherwise evict the standard-order slot for good).
    pub(crate) fn gb_reusing_cache(&self, order: &ModuleOrder) -> Arc<GroebnerBasis> {
        if let Some(cached) = self.cache.get() {
            if cached.order() == order {
                return Arc::clone(cached);
            }
        }
        Arc::new(self.compute_gb(order))
    }

    fn compute_gb(&self, order: &ModuleOrder) -> GroebnerBasis {
        let inputs: Vec<SElem> = self.gens.iter().map(|g| engine::flatten(g, order)).collect();
        let (selems, stats) = engine::buchberger(order, &inputs);
        let elements = selems
            .iter()
            .map(|s| engine::unflatten(s, &self.universe, self.rank))
            .collect();
        GroebnerBasis { order: order.clone(), elements, selems, stats }
    }

    /// Fully reduced normal form of `f` against this module's basis.
    pub fn normal_form(
        &self,
        f: &FreeModuleElement,
        order: &ModuleOrder,
    ) -> Result<FreeModuleElement> {
        if f.universe() != &self.universe {
            return Err(Error::UniverseMismatch);
        }
        if f.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: f.rank() });
        }
        let gb = self.gb(order);
        let nf = engine::normal_form_selem(order, engine::flatten(f, order), &gb.selems, None);
        Ok(engine::unflatten(&nf, &self.universe, self.rank))
    }

    pub fn contains(&self, f: &FreeModuleElement) -> Result<bool> {
        Ok(self.normal_form(f, &ModuleOrder::standard())?.is_zero())
    }

    pub fn contains_poly(&self, p: &Polynomial) -> Result<bool> {
        self.contains(&FreeModuleElement::from_poly(p.clone()))
    }

    /// Batch membership, data-parallel under the `parallel` feature.
    pub fn contains_all(&self, fs: &[FreeModuleElement]) -> Result<bool> {
        // Force the basis once so workers only read the cache.
        let _ = self.gb(&ModuleOrder::standard());
        let results = par::map_slice(fs, |f| self.contains(f));
        for r in results {
            if !r? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as submodules (mutual containment of generators).
    pub fn equals(&self, other: &Submodule) -> Result<bool> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(self.contains_all(&other.gens)? && other.contains_all(&self.gens)?)
    }
}
