use std::cmp::Ordering;

use super::Monomial;

/// A term order on monomials.  Earlier universe indices are the larger
/// variables for every kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Pure lexicographic.
    Lex,
    /// Total degree, ties broken lexicographically.
    GrLex,
    /// Total degree, ties broken by the smallest last nonzero difference
    /// (graded reverse lexicographic).
    GrevLex,
    /// Elimination order: the `eliminated` variables are compared first with
    /// `inner`, the remaining variables with `outer`.  Any monomial touching
    /// an eliminated variable is larger than every monomial that does not.
    Block {
        eliminated: Vec<usize>,
        inner: Box<MonomialOrder>,
        outer: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Elimination order with graded reverse-lex inside both blocks.
    pub fn elimination(eliminated: Vec<usize>) -> Self {
        MonomialOrder::Block {
            eliminated,
            inner: Box::new(MonomialOrder::GrevLex),
            outer: Box::new(MonomialOrder::GrevLex),
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a.exps(), b.exps()),
            MonomialOrder::GrLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| lex(a.exps(), b.exps())),
            MonomialOrder::GrevLex => grevlex(a.exps(), b.exps()),
            MonomialOrder::Block { eliminated, inner, outer } => {
                let nvars = a.nvars();
                let in_block = |i: usize| eliminated.contains(&i);
                let pa = split(a, nvars, &in_block);
                let pb = split(b, nvars, &in_block);
                inner
                    .compare(&pa.0, &pb.0)
                    .then_with(|| outer.compare(&pa.1, &pb.1))
            }
        }
    }
}

/// Projections of a monomial onto (block, complement), keeping vector length.
fn split(m: &Monomial, nvars: usize, in_block: &dyn Fn(usize) -> bool) -> (Monomial, Monomial) {
    let mut inner = vec![0u32; nvars];
    let mut outer = vec![0u32; nvars];
    for (i, &e) in m.exps().iter().enumerate() {
        if in_block(i) {
            inner[i] = e;
        } else {
            outer[i] = e;
        }
    }
    (Monomial::from_exps(inner), Monomial::from_exps(outer))
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // Smaller exponent in the last differing (cheapest) variable wins.
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

/// How module terms weigh the component index against the monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// Compare components first; the lower component index is the larger term.
    PositionOverTerm,
    /// Compare monomials first; ties go to the lower component index.
    TermOverPosition,
}

/// A term order on free-module monomials `(component, monomial)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub position: Position,
}

impl ModuleOrder {
    /// The default order for verdict computations.
    pub fn standard() -> Self {
        ModuleOrder { mono: MonomialOrder::GrevLex, position: Position::PositionOverTerm }
    }

    pub fn with_mono(mono: MonomialOrder) -> Self {
        ModuleOrder { mono, position: Position::PositionOverTerm }
    }

    /// Order used for elimination steps: the monomial block must dominate the
    /// component so that a leading monomial free of eliminated variables
    /// certifies the whole element is.
    pub fn eliminating(eliminated: Vec<usize>) -> Self {
        ModuleOrder {
            mono: MonomialOrder::elimination(eliminated),
            position: Position::TermOverPosition,
        }
    }

    pub fn compare(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        match self.position {
            Position::PositionOverTerm => {
                // Lower component index is the larger term.
                b.0.cmp(&a.0).then_with(|| self.mono.compare(a.1, b.1))
            }
            Position::TermOverPosition => {
                self.mono.compare(a.1, b.1).then_with(|| b.0.cmp(&a.0))
            }
        }
    }
}
