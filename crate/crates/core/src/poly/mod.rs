//! Sparse multivariate polynomials over the rationals.
//!
//! # Design notes
//!
//! - Coefficients are arbitrary-precision rationals kept in lowest terms with
//!   positive denominator (maintained by `num_rational`).
//! - A [`VarUniverse`] fixes the ordered variable list once; polynomials store
//!   an `Arc` to it and dense exponent vectors of that length.  Arithmetic
//!   panics on a universe mismatch — that is a programming error, while user
//!   input is validated at parse time.
//! - Term storage is order-agnostic (a `BTreeMap` under a fixed storage
//!   order); monomial orders are supplied per operation and only decide
//!   leading-term selection and display.

mod monomial;
mod order;
mod polynomial;
mod universe;

pub use monomial::Monomial;
pub use order::{ModuleOrder, MonomialOrder, Position};
pub use polynomial::{Coeff, Polynomial};
pub use universe::{VarTag, VarUniverse};
