//! Shared test support: an independent linear-algebra oracle for the
//! module operations, plus random-instance generators.
//!
//! The oracle never calls the basis engine. It models a degree slice of a
//! submodule as an exact row space over the finite basis of module
//! monomials up to a degree cap, computed by multiplying generators by all
//! monomials up to a growing cofactor bound until the slice stabilizes on
//! two consecutive bounds. Colon and annihilator spaces are solved as
//! nullspaces of explicit constraint matrices over the rationals.

#![allow(dead_code)]

use flatcheck::groebner::FreeModuleElement;
use flatcheck::poly::{Coeff, Monomial, Polynomial, VarUniverse};
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// How many consecutive equal slices are required before a bound is trusted,
/// and how far past the cap the cofactor bound may grow before giving up.
const STABLE_RUNS: usize = 2;
const MAX_EXTRA_DEGREE: u64 = 16;

// ---------------------------------------------------------------------------
// Monomial bases for degree slices
// ---------------------------------------------------------------------------

/// All monomials in `nvars` variables of total degree at most `max_deg`,
/// sorted by total degree descending, then exponents lexicographically.
/// With that ordering the degree-≤`cap` monomials form a contiguous suffix
/// of the list for any larger bound, in the same relative order.
pub fn monomials_up_to(nvars: usize, max_deg: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    collect_monomials(&mut exps, 0, max_deg as u32, &mut out);
    out.sort_by(|a, b| {
        b.total_degree()
            .cmp(&a.total_degree())
            .then_with(|| a.exps().cmp(b.exps()))
    });
    out
}

fn collect_monomials(exps: &mut Vec<u32>, var: usize, budget: u32, out: &mut Vec<Monomial>) {
    if var == exps.len() {
        out.push(Monomial::from_exps(exps.clone()));
        return;
    }
    for e in 0..=budget {
        exps[var] = e;
        collect_monomials(exps, var + 1, budget - e, out);
    }
    exps[var] = 0;
}

/// Column basis for degree-≤`max_deg` elements of a rank-`rank` free module:
/// pairs `(component, monomial)` with the same degree-descending ordering.
pub struct SliceBasis {
    pub universe: Arc<VarUniverse>,
    pub rank: usize,
    pub max_deg: u64,
    pub columns: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl SliceBasis {
    pub fn new(universe: &Arc<VarUniverse>, rank: usize, max_deg: u64) -> Self {
        let monos = monomials_up_to(universe.len(), max_deg);
        let mut columns = Vec::with_capacity(monos.len() * rank);
        for m in &monos {
            for comp in 0..rank {
                columns.push((comp, m.clone()));
            }
        }
        let index = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        SliceBasis { universe: universe.clone(), rank, max_deg, columns, index }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Coordinate vector of `e`, or `None` if any term exceeds the cap.
    pub fn vector_of(&self, e: &FreeModuleElement) -> Option<Vec<Coeff>> {
        let mut v = vec![Coeff::zero(); self.dim()];
        for (comp, poly) in e.components().iter().enumerate() {
            for (mono, coeff) in poly.terms() {
                let col = *self.index.get(&(comp, mono.clone()))?;
                v[col] = coeff.clone();
            }
        }
        Some(v)
    }

    pub fn vector_of_poly(&self, p: &Polynomial) -> Option<Vec<Coeff>> {
        self.vector_of(&FreeModuleElement::from_poly(p.clone()))
    }

    /// Index of the first column of degree ≤ `cap` (they form a suffix).
    pub fn suffix_start(&self, cap: u64) -> usize {
        self.columns
            .iter()
            .position(|(_, m)| m.total_degree() <= cap)
            .unwrap_or(self.columns.len())
    }
}

// ---------------------------------------------------------------------------
// Exact linear algebra
// ---------------------------------------------------------------------------

/// Reduced row echelon form with unit pivots, rows sorted by pivot column,
/// zero rows dropped. Equal row spaces give equal output, so the result is
/// a canonical form usable for space equality.
pub fn rref(mut rows: Vec<Vec<Coeff>>) -> Vec<Vec<Coeff>> {
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_rows: Vec<Vec<Coeff>> = Vec::new();
    for row in rows {
        let mut row = row;
        reduce_row(&mut row, &pivot_rows);
        if let Some(p) = first_nonzero(&row) {
            let inv = row[p].clone();
            for c in row.iter_mut() {
                if !c.is_zero() {
                    *c = &*c / &inv;
                }
            }
            for existing in pivot_rows.iter_mut() {
                let factor = existing[p].clone();
                if !factor.is_zero() {
                    for j in p..ncols {
                        let delta = &factor * &row[j];
                        existing[j] = &existing[j] - &delta;
                    }
                }
            }
            pivot_rows.push(row);
        }
    }
    pivot_rows.sort_by_key(|r| first_nonzero(r).unwrap());
    pivot_rows
}

fn first_nonzero(row: &[Coeff]) -> Option<usize> {
    row.iter().position(|c| !c.is_zero())
}

/// Reduce `row` modulo a set of rows in reduced echelon form, in place.
pub fn reduce_row(row: &mut [Coeff], basis: &[Vec<Coeff>]) {
    for b in basis {
        let p = match first_nonzero(b) {
            Some(p) => p,
            None => continue,
        };
        let factor = &row[p] / &b[p];
        if factor.is_zero() {
            continue;
        }
        for j in p..row.len() {
            let delta = &factor * &b[j];
            row[j] = &row[j] - &delta;
        }
    }
}

/// Basis of the solution space of `constraints · u = 0`, canonicalized by a
/// final `rref`. `constraints` rows have `nunknowns` columns.
pub fn nullspace(constraints: Vec<Vec<Coeff>>, nunknowns: usize) -> Vec<Vec<Coeff>> {
    let reduced = rref(constraints);
    let pivots: Vec<usize> = reduced.iter().map(|r| first_nonzero(r).unwrap()).collect();
    let mut basis = Vec::new();
    for free in 0..nunknowns {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Coeff::zero(); nunknowns];
        v[free] = Coeff::one();
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    rref(basis)
}

// ---------------------------------------------------------------------------
// Degree slices of submodules
// ---------------------------------------------------------------------------

/// Exact degree-≤`cap` slice of the module generated by `gens`, as canonical
/// RREF rows over `SliceBasis::new(universe, rank, cap)`. The cofactor bound
/// starts at `cap` and grows until the extracted slice repeats.
pub fn bounded_slice(
    universe: &Arc<VarUniverse>,
    rank: usize,
    gens: &[FreeModuleElement],
    cap: u64,
) -> Vec<Vec<Coeff>> {
    let mut previous: Option<Vec<Vec<Coeff>>> = None;
    let mut stable = 0;
    for extra in 0..=MAX_EXTRA_DEGREE {
        let bound = cap + extra;
        let slice = slice_at_bound(universe, rank, gens, cap, bound);
        match &previous {
            Some(p) if *p == slice => {
                stable += 1;
                if stable + 1 >= STABLE_RUNS {
                    return slice;
                }
            }
            _ => stable = 0,
        }
        previous = Some(slice);
    }
    panic!("degree slice failed to stabilize within {MAX_EXTRA_DEGREE} extra degrees");
}

fn slice_at_bound(
    universe: &Arc<VarUniverse>,
    rank: usize,
    gens: &[FreeModuleElement],
    cap: u64,
    bound: u64,
) -> Vec<Vec<Coeff>> {
    let big = SliceBasis::new(universe, rank, bound);
    let mut rows = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let gdeg = g.total_degree().expect("nonzero");
        if gdeg > bound {
            continue;
        }
        for m in monomials_up_to(universe.len(), bound - gdeg) {
            let shifted = g.mul_term(&m, &Coeff::one());
            rows.push(big.vector_of(&shifted).expect("within bound"));
        }
    }
    let reduced = rref(rows);
    let start = big.suffix_start(cap);
    reduced
        .iter()
        .filter(|r| r[..start].iter().all(|c| c.is_zero()))
        .map(|r| r[start..].to_vec())
        .collect()
}

/// Membership of a single element via the exact slice at its own degree.
pub fn slice_contains(
    universe: &Arc<VarUniverse>,
    rank: usize,
    gens: &[FreeModuleElement],
    elem: &FreeModuleElement,
) -> bool {
    if elem.is_zero() {
        return true;
    }
    let cap = elem.total_degree().expect("nonzero");
    let basis = SliceBasis::new(universe, rank, cap);
    let slice = bounded_slice(universe, rank, gens, cap);
    let mut v = basis.vector_of(elem).expect("within cap");
    reduce_row(&mut v, &slice);
    v.iter().all(|c| c.is_zero())
}

// ---------------------------------------------------------------------------
// Brute-force solution spaces
// ---------------------------------------------------------------------------

/// Degree-≤`cap` part of the colon module `{ g : f·g ∈ M }`, as canonical
/// RREF rows over `SliceBasis::new(universe, rank, cap)`.
pub fn colon_space(
    universe: &Arc<VarUniverse>,
    rank: usize,
    gens: &[FreeModuleElement],
    f: &Polynomial,
    cap: u64,
) -> Vec<Vec<Coeff>> {
    let fdeg = f.total_degree().expect("nonzero divisor");
    let unknowns = SliceBasis::new(universe, rank, cap);
    let ambient = SliceBasis::new(universe, rank, cap + fdeg);
    let slice = bounded_slice(universe, rank, gens, cap + fdeg);
    let mut residues: Vec<Vec<Coeff>> = Vec::with_capacity(unknowns.dim());
    for (comp, mono) in &unknowns.columns {
        let unit = FreeModuleElement::basis_times(
            universe,
            rank,
            *comp,
            Polynomial::monomial(universe, mono.clone(), Coeff::one()),
        );
        let image = unit.scale_poly(f);
        let mut v = ambient.vector_of(&image).expect("degree fits");
        reduce_row(&mut v, &slice);
        residues.push(v);
    }
    // One constraint per ambient coordinate; unknowns are the g-coordinates.
    let mut constraints = vec![vec![Coeff::zero(); unknowns.dim()]; ambient.dim()];
    for (j, res) in residues.iter().enumerate() {
        for (i, c) in res.iter().enumerate() {
            if !c.is_zero() {
                constraints[i][j] = c.clone();
            }
        }
    }
    nullspace(constraints, unknowns.dim())
}

/// Degree-≤`cap` part of `{ r in R : r·g ∈ M for every generator g of N }`,
/// as canonical RREF rows over the scalar basis `SliceBasis::new(u, 1, cap)`.
pub fn annihilator_space(
    universe: &Arc<VarUniverse>,
    rank: usize,
    m_gens: &[FreeModuleElement],
    n_gens: &[FreeModuleElement],
    cap: u64,
) -> Vec<Vec<Coeff>> {
    let unknowns = SliceBasis::new(universe, 1, cap);
    let mut constraints: Vec<Vec<Coeff>> = Vec::new();
    for g in n_gens {
        if g.is_zero() {
            continue;
        }
        let gdeg = g.total_degree().expect("nonzero");
        let ambient = SliceBasis::new(universe, rank, cap + gdeg);
        let slice = bounded_slice(universe, rank, m_gens, cap + gdeg);
        let mut residues = Vec::with_capacity(unknowns.dim());
        for (_, mono) in &unknowns.columns {
            let scaled = g.mul_term(mono, &Coeff::one());
            let mut v = ambient.vector_of(&scaled).expect("degree fits");
            reduce_row(&mut v, &slice);
            residues.push(v);
        }
        let mut block = vec![vec![Coeff::zero(); unknowns.dim()]; ambient.dim()];
        for (j, res) in residues.iter().enumerate() {
            for (i, c) in res.iter().enumerate() {
                if !c.is_zero() {
                    block[i][j] = c.clone();
                }
            }
        }
        constraints.extend(block);
    }
    nullspace(constraints, unknowns.dim())
}

/// Intersection of the degree-≤`cap` slices of two modules over the same
/// ambient basis, as canonical RREF rows.
pub fn intersection_space(
    universe: &Arc<VarUniverse>,
    rank: usize,
    a_gens: &[FreeModuleElement],
    b_gens: &[FreeModuleElement],
    cap: u64,
) -> Vec<Vec<Coeff>> {
    let a = bounded_slice(universe, rank, a_gens, cap);
    let b = bounded_slice(universe, rank, b_gens, cap);
    let dim = SliceBasis::new(universe, rank, cap).dim();
    // v ∈ A∩B  ⟺  v = λᵀA = μᵀB: solve [Aᵀ | -Bᵀ]·(λ,μ) = 0 and map λ back.
    let nl = a.len();
    let nm = b.len();
    let mut constraints = vec![vec![Coeff::zero(); nl + nm]; dim];
    for (j, row) in a.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            constraints[i][j] = c.clone();
        }
    }
    for (j, row) in b.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            constraints[i][nl + j] = -c.clone();
        }
    }
    let solutions = nullspace(constraints, nl + nm);
    let mut vectors = Vec::new();
    for sol in solutions {
        let mut v = vec![Coeff::zero(); dim];
        for (j, lam) in sol[..nl].iter().enumerate() {
            if !lam.is_zero() {
                for (i, c) in a[j].iter().enumerate() {
                    let delta = lam * c;
                    v[i] = &v[i] + &delta;
                }
            }
        }
        vectors.push(v);
    }
    rref(vectors)
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

/// Random polynomial with up to `max_terms` terms of degree ≤ `max_deg` and
/// small integer coefficients. May be zero only if `allow_zero`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    universe: &Arc<VarUniverse>,
    max_deg: u32,
    max_terms: usize,
    allow_zero: bool,
) -> Polynomial {
    loop {
        let mut p = Polynomial::zero(universe);
        let nterms = rng.gen_range(1..=max_terms);
        for _ in 0..nterms {
            let mut exps = vec![0u32; universe.len()];
            let mut budget = max_deg;
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..=budget);
                budget -= *e;
            }
            let c = loop {
                let c: i64 = rng.gen_range(-3..=3);
                if c != 0 {
                    break c;
                }
            };
            p = &p + &Polynomial::monomial(
                universe,
                Monomial::from_exps(exps),
                Coeff::from_integer(c.into()),
            );
        }
        if allow_zero || !p.is_zero() {
            return p;
        }
    }
}

/// Random free-module element of the given rank built from `random_poly`
/// components, at least one of them nonzero.
pub fn random_element<R: Rng>(
    rng: &mut R,
    universe: &Arc<VarUniverse>,
    rank: usize,
    max_deg: u32,
    max_terms: usize,
) -> FreeModuleElement {
    loop {
        let comps: Vec<Polynomial> = (0..rank)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    random_poly(rng, universe, max_deg, max_terms, true)
                } else {
                    Polynomial::zero(universe)
                }
            })
            .collect();
        let e = FreeModuleElement::new(comps);
        if !e.is_zero() {
            return e;
        }
    }
}

// ---------------------------------------------------------------------------
// Univariate elementary-divisor oracle.
//
// Over a one-variable base the ring is a principal ideal domain, so a
// presented module splits as a direct sum of cyclic pieces once the
// presentation matrix is diagonalized by row and column operations. The
// quotient is flat at the origin exactly when no nonzero diagonal entry
// vanishes there. This route shares nothing with the basis engine.
// ---------------------------------------------------------------------------

/// Dense univariate polynomial: coefficient of `y^i` at index `i`, with no
/// trailing zeros.
pub type UPoly = Vec<Coeff>;

pub fn utrim(mut p: UPoly) -> UPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn uis_zero(p: &UPoly) -> bool {
    p.is_empty()
}

pub fn udeg(p: &UPoly) -> usize {
    debug_assert!(!uis_zero(p));
    p.len() - 1
}

pub fn usub(a: &UPoly, b: &UPoly) -> UPoly {
    let mut out = vec![Coeff::from_integer(0.into()); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    utrim(out)
}

pub fn umul(a: &UPoly, b: &UPoly) -> UPoly {
    if uis_zero(a) || uis_zero(b) {
        return Vec::new();
    }
    let mut out = vec![Coeff::from_integer(0.into()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    utrim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn udivmod(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    assert!(!uis_zero(b));
    let mut rem = a.clone();
    let mut quo = vec![Coeff::from_integer(0.into()); a.len().saturating_sub(b.len() - 1)];
    while !uis_zero(&rem) && udeg(&rem) >= udeg(b) {
        let shift = udeg(&rem) - udeg(b);
        let factor = &rem[udeg(&rem)] / b.last().unwrap();
        quo[shift] = factor.clone();
        let mut shifted = vec![Coeff::from_integer(0.into()); shift];
        shifted.extend(b.iter().map(|c| c * &factor));
        rem = usub(&rem, &shifted);
    }
    (utrim(quo), rem)
}

/// Diagonalize the presentation matrix by row and column operations and
/// return the diagonal. The matrix has one column per generator of the
/// relation module; rows index the free-module coordinates.
pub fn diagonalize(mut a: Vec<Vec<UPoly>>) -> Vec<UPoly> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let steps = rows.min(cols);
    let mut diagonal = Vec::with_capacity(steps);
    for t in 0..steps {
        'pivot: loop {
            // Smallest-degree nonzero entry of the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !uis_zero(&a[i][j])
                        && best.map_or(true, |(bi, bj)| udeg(&a[i][j]) < udeg(&a[bi][bj]))
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            // Clear the pivot column; a nonzero remainder strictly drops
            // the minimal degree, so the loop terminates.
            for i in t + 1..rows {
                if uis_zero(&a[i][t]) {
                    continue;
                }
                let (q, _r) = udivmod(&a[i][t], &a[t][t]);
                for j in t..cols {
                    let scaled = umul(&q, &a[t][j]);
                    a[i][j] = usub(&a[i][j], &scaled);
                }
                if !uis_zero(&a[i][t]) {
                    continue 'pivot;
                }
            }
            // Clear the pivot row the same way.
            for j in t + 1..cols {
                if uis_zero(&a[t][j]) {
                    continue;
                }
                let (q, _r) = udivmod(&a[t][j], &a[t][t]);
                for i in t..rows {
                    let scaled = umul(&q, &a[i][t]);
                    a[i][j] = usub(&a[i][j], &scaled);
                }
                if !uis_zero(&a[t][j]) {
                    continue 'pivot;
                }
            }
            break 'pivot;
        }
        diagonal.push(a[t][t].clone());
    }
    diagonal
}

/// Whether the presented quotient of the free module by the columns of
/// the matrix is flat at the origin of the line: flat exactly when no
/// nonzero diagonal entry of the diagonalization vanishes at zero.
pub fn univariate_flat(matrix: Vec<Vec<UPoly>>) -> bool {
    diagonalize(matrix)
        .iter()
        .all(|d| uis_zero(d) || !d[0].is_zero())
}

pub fn upoly_to_polynomial(p: &UPoly, universe: &Arc<VarUniverse>) -> Polynomial {
    let mut out = Polynomial::zero(universe);
    let nvars = universe.len();
    for (i, c) in p.iter().enumerate() {
        let mut exps = vec![0u32; nvars];
        exps[0] = i as u32;
        out = &out + &Polynomial::monomial(universe, Monomial::from_exps(exps), c.clone());
    }
    out
}

pub fn random_upoly<R: Rng>(rng: &mut R, max_deg: usize) -> UPoly {
    let deg = rng.gen_range(0..=max_deg);
    let mut p = vec![Coeff::from_integer(0.into()); deg + 1];
    for c in p.iter_mut() {
        *c = Coeff::from_integer(rng.gen_range(-4i64..=4).into());
    }
    utrim(p)
}
