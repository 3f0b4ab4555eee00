use std::sync::Arc;

use super::engine::divide_exact;
use super::submodule::{GroebnerBasis, Submodule};
use super::FreeModuleElement;
use crate::error::Error;
use crate::par;
use crate::poly::{ModuleOrder, Polynomial};
use crate::Result;

impl Submodule {
    /// Basis under an arbitrary order, reusing the cache when it matches but
    /// never claiming it (elimination orders stay off the cache).
    pub(crate) fn gb_for(&self, order: &ModuleOrder) -> Arc<GroebnerBasis> {
        self.gb_reusing_cache(order)
    }

    /// Colon module `(self : f) = { g : f*g ∈ self }`.
    pub fn colon(&self, f: &Polynomial) -> Result<Submodule> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial("colon divisor"));
        }
        if f.universe() != self.universe() {
            return Err(Error::UniverseMismatch);
        }
        let q = self.rank();
        let u = self.universe();
        let f_free = Submodule::new(
            u,
            q,
            (0..q)
                .map(|j| FreeModuleElement::basis_times(u, q, j, f.clone()))
                .collect(),
        )?;
        let inter = self.intersect(&f_free)?;
        // Every intersection generator lies in f·R^q, so the division below
        // is exact; multiplying back is a cheap self-check.
        let gens: Vec<FreeModuleElement> = inter
            .gens()
            .iter()
            .map(|h| {
                let g = h.try_map_components(|p| {
                    divide_exact(p, f).ok_or(Error::Input(
                        "internal: intersection generator not divisible by colon divisor".into(),
                    ))
                })?;
                debug_assert!(g.scale_poly(f) == *h);
                Ok(g)
            })
            .collect::<Result<_>>()?;
        Submodule::new(u, q, gens)
    }

    /// Saturation `(self : f^∞)` by iterated colon, together with the least
    /// `k` such that `(self : f^k) = (self : f^(k+1))`.
    pub fn saturate(&self, f: &Polynomial) -> Result<(Submodule, usize)> {
        let mut current = self.clone();
        let mut k = 0usize;
        loop {
            let next = current.colon(f)?;
            if next.equals(&current)? {
                return Ok((current, k));
            }
            current = next;
            k += 1;
        }
    }

    /// One-shot saturation through the auxiliary-variable trick
    /// (`self·R[t] + (1 - t·f)·R[t]^q`, then eliminate `t`).  Kept as an
    /// independent cross-check of [`Submodule::saturate`].
    pub fn saturate_oneshot(&self, f: &Polynomial) -> Result<Submodule> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial("saturation divisor"));
        }
        if f.universe() != self.universe() {
            return Err(Error::UniverseMismatch);
        }
        let u = self.universe();
        let q = self.rank();
        let (ext, t_idx) = u.with_aux("t");
        let t = Polynomial::var(&ext, t_idx);
        let one_minus_tf = &Polynomial::one(&ext) - &(&t * &f.extend_appended(&ext));
        let mut gens: Vec<FreeModuleElement> = self
            .gens()
            .iter()
            .map(|g| g.map_components(|p| p.extend_appended(&ext)))
            .collect();
        for j in 0..q {
            gens.push(FreeModuleElement::basis_times(&ext, q, j, one_minus_tf.clone()));
        }
        let big = Submodule::new(&ext, q, gens)?;
        let elim = big.eliminate(&[t_idx]);
        let back: Vec<FreeModuleElement> = elim
            .gens()
            .iter()
            .map(|g| g.try_map_components(|p| p.contract_appended(u)))
            .collect::<Result<_>>()?;
        Submodule::new(u, q, back)
    }

    /// Intersection via the auxiliary-variable trick: eliminate `t` from
    /// `t·self + (1-t)·other`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        if self.universe() != other.universe() {
            return Err(Error::UniverseMismatch);
        }
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        let u = self.universe();
        let q = self.rank();
        let (ext, t_idx) = u.with_aux("t");
        let t = Polynomial::var(&ext, t_idx);
        let one_minus_t = &Polynomial::one(&ext) - &t;
        let mut gens: Vec<FreeModuleElement> = Vec::new();
        for g in self.gens() {
            gens.push(g.map_components(|p| &p.extend_appended(&ext) * &t));
        }
        for g in other.gens() {
            gens.push(g.map_components(|p| &p.extend_appended(&ext) * &one_minus_t));
        }
        let big = Submodule::new(&ext, q, gens)?;
        let elim = big.eliminate(&[t_idx]);
        let back: Vec<FreeModuleElement> = elim
            .gens()
            .iter()
            .map(|g| g.try_map_components(|p| p.contract_appended(u)))
            .collect::<Result<_>>()?;
        Submodule::new(u, q, back)
    }

    /// Intersection with the subring generated by the variables *not* listed:
    /// computes a basis under a block elimination order and keeps the elements
    /// free of the eliminated variables.  The result lives in the same
    /// universe.
    pub fn eliminate(&self, vars: &[usize]) -> Submodule {
        if vars.is_empty() {
            return self.clone();
        }
        let keep: Vec<usize> = (0..self.universe().len())
            .filter(|i| !vars.contains(i))
            .collect();
        let order = ModuleOrder::eliminating(vars.to_vec());
        let gb = self.gb_for(&order);
        let gens: Vec<FreeModuleElement> = gb
            .elements()
            .iter()
            .filter(|e| e.components().iter().all(|p| p.supported_on(&keep)))
            .cloned()
            .collect();
        Submodule::new(self.universe(), self.rank(), gens).expect("same universe and rank")
    }

    /// The ideal `{ r ∈ R : r·n ⊆ self }`, the annihilator of `n/self`.
    /// Requires `self ⊆ n`.
    pub fn quotient_ideal(&self, n: &Submodule) -> Result<Submodule> {
        if self.universe() != n.universe() {
            return Err(Error::UniverseMismatch);
        }
        if self.rank() != n.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: n.rank() });
        }
        if !n.contains_all(self.gens())? {
            return Err(Error::NotContained);
        }
        let u = self.universe();
        if n.is_zero_module() {
            return Submodule::ideal(u, vec![Polynomial::one(u)]);
        }
        // One colon ideal per generator of n, intersected; the per-generator
        // computations are independent and run in parallel.
        let colons = par::map_slice(n.gens(), |g| self.colon_by_element(g));
        let mut acc: Option<Submodule> = None;
        for c in colons {
            let c = c?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.expect("n has at least one generator"))
    }

    /// The ideal `{ r : r·g ∈ self }` for a single module element `g`.
    fn colon_by_element(&self, g: &FreeModuleElement) -> Result<Submodule> {
        let u = self.universe();
        if g.is_zero() {
            return Submodule::ideal(u, vec![Polynomial::one(u)]);
        }
        let cyclic = Submodule::new(u, self.rank(), vec![g.clone()])?;
        let inter = self.intersect(&cyclic)?;
        let pivot = g
            .components()
            .iter()
            .position(|p| !p.is_zero())
            .expect("nonzero element has a nonzero component");
        let rs: Vec<Polynomial> = inter
            .gens()
            .iter()
            .map(|h| {
                let r = divide_exact(h.component(pivot), g.component(pivot))
                    .expect("intersection generator is a ring multiple of g");
                debug_assert!(g.scale_poly(&r) == *h);
                r
            })
            .collect();
        Submodule::ideal(u, rs)
    }

    /// Krull dimension of `R/self` for a rank-1 module, via counting maximal
    /// independent variable sets against the leading-term ideal.  The unit
    /// ideal reports -1, the zero ideal the full variable count.
    pub fn krull_dimension(&self) -> i64 {
        assert_eq!(self.rank(), 1, "dimension is defined for ideals");
        let n = self.universe().len();
        assert!(n <= 24, "dimension enumeration limited to 24 variables");
        let gb = self.gb(&ModuleOrder::standard());
        let supports: Vec<u64> = gb
            .elements()
            .iter()
            .map(|e| {
                let (_, m, _) = e
                    .leading(&ModuleOrder::standard())
                    .expect("basis elements are nonzero");
                m.support_mask()
            })
            .collect();
        let mut best: i64 = -1;
        for s in 0u64..(1u64 << n) {
            if supports.iter().all(|&supp| supp & !s != 0) {
                best = best.max(s.count_ones() as i64);
            }
        }
        best
    }

    /// Radical membership via the auxiliary-variable trick: `f ∈ √self` iff
    /// `1 ∈ self + (1 - t·f)`.
    pub fn radical_contains(&self, f: &Polynomial) -> Result<bool> {
        assert_eq!(self.rank(), 1, "radical membership is defined for ideals");
        if f.universe() != self.universe() {
            return Err(Error::UniverseMismatch);
        }
        if f.is_zero() {
            return Ok(true);
        }
        let u = self.universe();
        let (ext, t_idx) = u.with_aux("t");
        let t = Polynomial::var(&ext, t_idx);
        let mut gens: Vec<Polynomial> =
            self.gen_polys().iter().map(|p| p.extend_appended(&ext)).collect();
        gens.push(&Polynomial::one(&ext) - &(&t * &f.extend_appended(&ext)));
        let test = Submodule::ideal(&ext, gens)?;
        Ok(test.gb(&ModuleOrder::standard()).contains_unit())
    }

    /// For a rank-1 module (an ideal), the submodule `self · R^rank`
    /// generated by `p·e_j` for every generator `p` and component `j`.
    pub fn times_free_module(&self, rank: usize) -> Submodule {
        assert_eq!(self.rank(), 1, "times_free_module starts from an ideal");
        let u = self.universe();
        let gens = self
            .gen_polys()
            .into_iter()
            .flat_map(|p| {
                (0..rank)
                    .map(|j| FreeModuleElement::basis_times(u, rank, j, p.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        Submodule::new(u, rank, gens).expect("well-formed generators")
    }

    /// True when every reduced-basis element vanishes at the origin, i.e. the
    /// module is contained in the maximal ideal at 0 (times the free module).
    pub fn vanishes_at_origin(&self) -> bool {
        use num_traits::Zero;
        self.gb(&ModuleOrder::standard())
            .elements()
            .iter()
            .all(|e| e.components().iter().all(|p| p.constant_term().is_zero()))
    }
}
