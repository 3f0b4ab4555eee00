//! Internal Buchberger engine.
//!
//! Elements are flattened to term lists sorted strictly descending under the
//! active module order, so leading terms are `terms[0]` and reductions are
//! sorted-list merges.  The public module types convert in and out at the
//! boundary.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::FreeModuleElement;
use crate::par;
use crate::poly::{Coeff, ModuleOrder, Monomial, MonomialOrder, Polynomial, VarUniverse};

#[derive(Debug, Clone)]
pub(crate) struct STerm {
    pub comp: usize,
    pub mono: Monomial,
    pub coeff: Coeff,
}

/// Term list sorted strictly descending under the order it was built with.
pub(crate) type SElem = Vec<STerm>;

/// Counters from one Buchberger run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GbStats {
    /// S-pairs popped from the queue (including ones discarded by criteria).
    pub pairs_considered: u64,
    /// Pairs discarded by the coprimality or chain criterion.
    pub pairs_skipped: u64,
    /// Reductions that produced a new basis element.
    pub reductions_nonzero: u64,
    /// Reductions to zero.
    pub reductions_zero: u64,
    /// Size of the final reduced basis.
    pub basis_size: usize,
    /// Largest intermediate basis size.
    pub max_basis_size: usize,
}

pub(crate) fn flatten(e: &FreeModuleElement, order: &ModuleOrder) -> SElem {
    let mut terms: SElem = Vec::new();
    for (j, p) in e.components().iter().enumerate() {
        for (m, c) in p.terms() {
            terms.push(STerm { comp: j, mono: m.clone(), coeff: c.clone() });
        }
    }
    terms.sort_by(|a, b| order.compare((b.comp, &b.mono), (a.comp, &a.mono)));
    terms
}

pub(crate) fn unflatten(
    terms: &SElem,
    universe: &Arc<VarUniverse>,
    rank: usize,
) -> FreeModuleElement {
    let mut per_comp: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
    for t in terms {
        per_comp[t.comp].push((t.mono.clone(), t.coeff.clone()));
    }
    FreeModuleElement::new(
        per_comp
            .into_iter()
            .map(|v| Polynomial::from_terms(universe, v))
            .collect(),
    )
}

fn cmp_terms(order: &ModuleOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    order.compare(a, b)
}

/// `a - c * x^m * b`, both inputs and the result sorted descending.
fn sub_scaled(order: &ModuleOrder, a: &SElem, b: &SElem, m: &Monomial, c: &Coeff) -> SElem {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0usize;
    let mut j = 0usize;
    while i < a.len() || j < b.len() {
        if j >= b.len() {
            out.push(a[i].clone());
            i += 1;
            continue;
        }
        let bj_mono = b[j].mono.mul(m);
        if i >= a.len() {
            out.push(STerm { comp: b[j].comp, mono: bj_mono, coeff: -(&b[j].coeff * c) });
            j += 1;
            continue;
        }
        match cmp_terms(order, (a[i].comp, &a[i].mono), (b[j].comp, &bj_mono)) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(STerm { comp: b[j].comp, mono: bj_mono, coeff: -(&b[j].coeff * c) });
                j += 1;
            }
            Ordering::Equal => {
                let coeff = &a[i].coeff - &(&b[j].coeff * c);
                if !coeff.is_zero() {
                    out.push(STerm { comp: a[i].comp, mono: bj_mono, coeff });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn make_monic(e: &mut SElem) {
    if let Some(lead) = e.first().map(|t| t.coeff.clone()) {
        if !lead.is_one() {
            for t in e.iter_mut() {
                t.coeff = &t.coeff / &lead;
            }
        }
    }
}

/// Full normal form of `work` against `basis` (each assumed monic, sorted
/// descending).  The reducer is always the smallest basis index whose leading
/// term divides, so reduction is deterministic; `skip` excludes one index
/// (used during tail reduction).
pub(crate) fn normal_form_selem(
    order: &ModuleOrder,
    mut work: SElem,
    basis: &[SElem],
    skip: Option<usize>,
) -> SElem {
    let mut rem: SElem = Vec::new();
    'outer: while !work.is_empty() {
        let (top_comp, top_mono) = (work[0].comp, work[0].mono.clone());
        for (bi, g) in basis.iter().enumerate() {
            if Some(bi) == skip || g.is_empty() {
                continue;
            }
            let lt = &g[0];
            if lt.comp == top_comp && lt.mono.divides(&top_mono) {
                let m = lt.mono.div(&top_mono).expect("divisibility checked");
                let c = work[0].coeff.clone();
                work = sub_scaled(order, &work, g, &m, &c);
                continue 'outer;
            }
        }
        rem.push(work.remove(0));
    }
    rem
}

/// Buchberger's algorithm returning the unique reduced basis (monic, tails
/// fully reduced, pairwise indivisible leading terms) sorted ascending by
/// leading term, plus run statistics.
pub(crate) fn buchberger(order: &ModuleOrder, inputs: &[SElem]) -> (Vec<SElem>, GbStats) {
    let mut stats = GbStats::default();
    let mut basis: Vec<SElem> = Vec::new();
    // (lcm degree, i, j) selects the minimal-degree pair first, then the
    // smallest index pair; `pending` mirrors the queue for the chain test.
    let mut queue: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let insert_element = |e: SElem,
                              basis: &mut Vec<SElem>,
                              queue: &mut BTreeSet<(u64, usize, usize)>,
                              pending: &mut BTreeSet<(usize, usize)>,
                              stats: &mut GbStats| {
        let k = basis.len();
        let lt_new = (e[0].comp, e[0].mono.clone());
        // The coprimality (product) criterion is only sound when both
        // elements live entirely in one component: the rewrite behind it
        // multiplies one element by the other's tail, which is a ring
        // element exactly in that case. For genuinely multi-component
        // vectors the pair must be kept.
        let new_single = e.iter().all(|t| t.comp == lt_new.0);
        for (i, g) in basis.iter().enumerate() {
            let lt = &g[0];
            if lt.comp != lt_new.0 {
                continue;
            }
            if new_single
                && lt.mono.coprime(&lt_new.1)
                && g.iter().all(|t| t.comp == lt.comp)
            {
                stats.pairs_skipped += 1;
                continue;
            }
            let deg = lt.mono.lcm(&lt_new.1).total_degree();
            queue.insert((deg, i, k));
            pending.insert((i, k));
        }
        basis.push(e);
        stats.max_basis_size = stats.max_basis_size.max(basis.len());
    };

    for input in inputs {
        if input.is_empty() {
            continue;
        }
        let mut r = normal_form_selem(order, input.clone(), &basis, None);
        if r.is_empty() {
            stats.reductions_zero += 1;
            continue;
        }
        stats.reductions_nonzero += 1;
        make_monic(&mut r);
        insert_element(r, &mut basis, &mut queue, &mut pending, &mut stats);
    }

    while let Some(&(deg, i, j)) = queue.iter().next() {
        queue.remove(&(deg, i, j));
        pending.remove(&(i, j));
        stats.pairs_considered += 1;

        let lcm = basis[i][0].mono.lcm(&basis[j][0].mono);
        // Chain criterion: another leading term divides the pair lcm and both
        // connecting pairs were already handled.
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].comp == basis[i][0].comp
                && basis[k][0].mono.divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            stats.pairs_skipped += 1;
            continue;
        }

        let mi = basis[i][0].mono.div(&lcm).expect("lcm divisible");
        let mj = basis[j][0].mono.div(&lcm).expect("lcm divisible");
        let lifted: SElem = basis[i]
            .iter()
            .map(|t| STerm { comp: t.comp, mono: t.mono.mul(&mi), coeff: t.coeff.clone() })
            .collect();
        let spoly = sub_scaled(order, &lifted, &basis[j], &mj, &Coeff::one());
        let mut r = normal_form_selem(order, spoly, &basis, None);
        if r.is_empty() {
            stats.reductions_zero += 1;
            continue;
        }
        stats.reductions_nonzero += 1;
        make_monic(&mut r);
        insert_element(r, &mut basis, &mut queue, &mut pending, &mut stats);
    }

    let reduced = reduce_basis(order, basis);
    stats.basis_size = reduced.len();
    (reduced, stats)
}

/// Minimalizes then tail-reduces a Gröbner basis, yielding the unique reduced
/// basis sorted ascending by leading term.
fn reduce_basis(order: &ModuleOrder, basis: Vec<SElem>) -> Vec<SElem> {
    let mut by_lt: Vec<usize> = (0..basis.len()).collect();
    by_lt.sort_by(|&a, &b| {
        cmp_terms(
            order,
            (basis[a][0].comp, &basis[a][0].mono),
            (basis[b][0].comp, &basis[b][0].mono),
        )
    });
    let mut kept: Vec<SElem> = Vec::new();
    for idx in by_lt {
        let lt = &basis[idx][0];
        let redundant = kept
            .iter()
            .any(|g| g[0].comp == lt.comp && g[0].mono.divides(&lt.mono));
        if !redundant {
            kept.push(basis[idx].clone());
        }
    }
    // Tail reduction against the frozen minimal set; leading terms are
    // pairwise indivisible so each element keeps its own leading term, and the
    // outputs form the unique reduced basis regardless of evaluation order.
    let indices: Vec<usize> = (0..kept.len()).collect();
    let mut reduced = par::map_slice(&indices, |&i| {
        let mut r = normal_form_selem(order, kept[i].clone(), &kept, Some(i));
        make_monic(&mut r);
        r
    });
    reduced.sort_by(|a, b| cmp_terms(order, (a[0].comp, &a[0].mono), (b[0].comp, &b[0].mono)));
    reduced
}

/// Exact polynomial division: `Some(p / f)` when `f` divides `p`, else `None`.
/// (Single-divisor division under graded reverse-lex; the remainder-free run
/// certifies divisibility.)
pub(crate) fn divide_exact(p: &Polynomial, f: &Polynomial) -> Option<Polynomial> {
    assert!(!f.is_zero(), "division by the zero polynomial");
    let order = MonomialOrder::GrevLex;
    let (flm, flc) = f.leading_term(&order).expect("nonzero divisor");
    let flm = flm.clone();
    let flc = flc.clone();
    let mut work = p.clone();
    let mut quot = Polynomial::zero(p.universe());
    while !work.is_zero() {
        let (wlm, wlc) = work.leading_term(&order).expect("nonzero loop invariant");
        let Some(m) = flm.div(wlm) else {
            return None;
        };
        let c = wlc / &flc;
        let t = Polynomial::monomial(p.universe(), m, c);
        quot = &quot + &t;
        work = &work - &(&t * f);
    }
    Some(quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarUniverse;

    fn poly_xy() -> (Arc<VarUniverse>, Polynomial, Polynomial) {
        let u = VarUniverse::new(&["x", "y"], &[]).unwrap();
        (u.clone(), Polynomial::var(&u, 0), Polynomial::var(&u, 1))
    }

    #[test]
    fn exact_division() {
        let (_, x, y) = poly_xy();
        let f = &x + &y;
        let p = &(&x * &x) - &(&y * &y); // (x+y)(x-y)
        let q = divide_exact(&p, &f).unwrap();
        assert_eq!(q, &x - &y);
        assert!(divide_exact(&x, &f).is_none());
        assert!(divide_exact(&Polynomial::zero(x.universe()), &f).unwrap().is_zero());
    }

    #[test]
    fn flatten_round_trip() {
        let (u, x, y) = poly_xy();
        let order = ModuleOrder::standard();
        let e = FreeModuleElement::new(vec![&x + &y, &x * &y]);
        let s = flatten(&e, &order);
        assert_eq!(s.len(), 3);
        assert_eq!(unflatten(&s, &u, 2), e);
        // Leading term is the component-0 part under position-over-term.
        assert_eq!(s[0].comp, 0);
    }
}
