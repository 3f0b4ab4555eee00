use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, VarUniverse};
use crate::error::Error;
use crate::Result;

/// Exact rational coefficient, always in lowest terms with positive denominator.
pub type Coeff = BigRational;

#[cfg(test)]
pub(crate) fn coeff_int(n: i64) -> Coeff {
    BigRational::from_integer(num_bigint::BigInt::from(n))
}

/// A sparse multivariate polynomial over one variable universe.
///
/// Terms live in a `BTreeMap` under the storage order of [`Monomial`]; zero
/// coefficients are never stored, so `terms.is_empty()` iff the polynomial is
/// zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    universe: Arc<VarUniverse>,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(universe: &Arc<VarUniverse>) -> Self {
        Polynomial { universe: Arc::clone(universe), terms: BTreeMap::new() }
    }

    pub fn one(universe: &Arc<VarUniverse>) -> Self {
        Self::constant(universe, Coeff::one())
    }

    pub fn constant(universe: &Arc<VarUniverse>, c: Coeff) -> Self {
        let mut p = Self::zero(universe);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(universe.len()), c);
        }
        p
    }

    pub fn var(universe: &Arc<VarUniverse>, i: usize) -> Self {
        let mut p = Self::zero(universe);
        p.terms.insert(Monomial::var(universe.len(), i), Coeff::one());
        p
    }

    pub fn monomial(universe: &Arc<VarUniverse>, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.nvars(), universe.len(), "monomial length does not match universe");
        let mut p = Self::zero(universe);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(universe: &Arc<VarUniverse>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut p = Self::zero(universe);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::one(self.universe.len()))
    }

    /// Total degree; zero polynomial reports `None`.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Largest term under `order`; errors on the zero polynomial.
    pub fn leading_term(&self, order: &MonomialOrder) -> Result<(&Monomial, &Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .ok_or(Error::ZeroPolynomial("leading term"))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe,
            "universe mismatch in polynomial arithmetic"
        );
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        Polynomial {
            universe: Arc::clone(&self.universe),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiplication by one term.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        Polynomial {
            universe: Arc::clone(&self.universe),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Substitutes every variable: `images[i]` replaces variable `i`.  All
    /// images must share one universe, which becomes the result's universe.
    /// This is the full ring homomorphism; powers are memoized per variable.
    pub fn substitute_all(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.universe.len(), "one image required per variable");
        let target = images
            .first()
            .map(|p| Arc::clone(p.universe()))
            .unwrap_or_else(|| Arc::clone(&self.universe));
        for im in images {
            assert!(im.universe() == &target, "universe mismatch among substitution images");
        }
        // Memoize images[i]^e for the exponents that actually occur.
        let mut powers: Vec<BTreeMap<u32, Polynomial>> = vec![BTreeMap::new(); images.len()];
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers[i]
                    .entry(e)
                    .or_insert_with(|| pow_poly(&images[i], e))
                    .clone();
                acc = &acc * &p;
            }
            out += &acc;
        }
        out
    }

    /// Substitutes the listed variables only; all images must live in this
    /// polynomial's own universe.
    pub fn substitute(&self, map: &BTreeMap<usize, Polynomial>) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.universe.len())
            .map(|i| match map.get(&i) {
                Some(p) => {
                    assert!(p.universe() == &self.universe, "universe mismatch in substitution");
                    p.clone()
                }
                None => Polynomial::var(&self.universe, i),
            })
            .collect();
        self.substitute_all(&images)
    }

    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.universe.len());
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Lowest-degree homogeneous part (zero input gives zero).
    pub fn initial_form(&self) -> Polynomial {
        let Some(dmin) = self.terms.keys().map(|m| m.total_degree()).min() else {
            return Self::zero(&self.universe);
        };
        Polynomial {
            universe: Arc::clone(&self.universe),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == dmin)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the polynomial in a universe that extends this one by
    /// appended variables (names of the shared prefix must agree).
    pub fn extend_appended(&self, target: &Arc<VarUniverse>) -> Polynomial {
        assert!(target.len() >= self.universe.len(), "target universe too small");
        for i in 0..self.universe.len() {
            assert_eq!(target.name(i), self.universe.name(i), "universe prefix mismatch");
        }
        let pad = target.len() - self.universe.len();
        Polynomial {
            universe: Arc::clone(target),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.exps().to_vec();
                    e.extend(std::iter::repeat(0).take(pad));
                    (Monomial::from_exps(e), c.clone())
                })
                .collect(),
        }
    }

    /// Inverse of [`extend_appended`]: drops trailing variables, which must
    /// not occur in any term.
    pub fn contract_appended(&self, target: &Arc<VarUniverse>) -> Result<Polynomial> {
        assert!(target.len() <= self.universe.len());
        for i in 0..target.len() {
            assert_eq!(target.name(i), self.universe.name(i), "universe prefix mismatch");
        }
        let keep = target.len();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exps()[keep..].iter().any(|&e| e > 0) {
                return Err(Error::VariableOutOfScope {
                    name: self.universe.name(keep).to_string(),
                    context: "contraction to the smaller universe",
                });
            }
            terms.insert(Monomial::from_exps(m.exps()[..keep].to_vec()), c.clone());
        }
        Ok(Polynomial { universe: Arc::clone(target), terms })
    }

    /// Moves the polynomial to a same-length universe (a rename); exponent
    /// vectors are unchanged.
    pub fn rename_universe(&self, target: &Arc<VarUniverse>) -> Polynomial {
        assert_eq!(target.len(), self.universe.len(), "rename requires equal lengths");
        Polynomial { universe: Arc::clone(target), terms: self.terms.clone() }
    }

    /// True when every monomial only uses variables from `vars`.
    pub fn supported_on(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|m| m.supported_on(vars))
    }

    /// `self` raised to the `e`-th power by repeated squaring.
    pub fn pow(&self, e: u32) -> Polynomial {
        pow_poly(self, e)
    }
}

fn pow_poly(p: &Polynomial, e: u32) -> Polynomial {
    let mut acc = Polynomial::one(p.universe());
    let mut base = p.clone();
    let mut e = e;
    loop {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = &base * &base;
    }
    acc
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.assert_compatible(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        self.assert_compatible(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut out = Polynomial::zero(&self.universe);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            universe: Arc::clone(&self.universe),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    /// Canonical rendering: terms in decreasing graded reverse-lex order,
    /// coefficients as `a/b`, explicit `*` between factors, `^` for powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Coeff)> = self.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.compare(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let factors: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.universe.name(i).to_string()
                    } else {
                        format!("{}^{}", self.universe.name(i), e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}
