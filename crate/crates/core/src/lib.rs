//! Exact computer algebra over the rationals for deciding, at the origin,
//! whether a finitely generated polynomial module is flat over its base ring,
//! and whether a polynomial map germ is open.
//!
//! The verdict pipeline works on one blow-up chart of the base: generators are
//! pushed through the chart substitution, the relevant ideal is saturated by
//! the exceptional variable, and flatness reduces to a module/colon equality
//! (torsion detection).  Openness reduces to the absence of vertical
//! components in a fibre-product ideal, checked by saturation plus radical
//! membership.
//!
//! Layering, bottom up:
//! - [`poly`]: variable universes, monomials, sparse rational polynomials,
//!   monomial and module orders.
//! - [`groebner`]: free-module elements, submodules with cached reduced
//!   Gröbner bases, and the derived ideal/module operations (colon,
//!   saturation, intersection, elimination, quotient annihilator, Krull
//!   dimension, radical membership).
//! - [`blowup`]: chart substitutions, strict transforms, chart properness at
//!   the origin, linear coordinate changes and chart selection.
//! - [`flatness`]: the regular-base and singular-base flatness tests with
//!   machine-checked torsion witnesses.
//! - [`openness`]: the fibre-product vertical-component test.
//! - [`input`]: the problem-file parser shared by the CLI and tests.
//!
//! All coefficient arithmetic is exact (`num_rational::BigRational`); every
//! operation is deterministic, and batch entry points run data-parallel under
//! the `parallel` feature (sequential fallback otherwise).

pub mod blowup;
pub mod error;
pub mod flatness;
pub mod groebner;
pub mod input;
pub mod openness;
pub(crate) mod par;
pub mod poly;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
