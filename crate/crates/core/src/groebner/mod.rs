//! Gröbner bases for submodules of free modules over the polynomial ring,
//! and the operations derived from them.
//!
//! # Key operations
//!
//! - [`Submodule::gb`]: reduced Gröbner basis (Buchberger with the normal
//!   pair-selection strategy and both classical pair criteria), cached on the
//!   module after the first computation.
//! - [`Submodule::normal_form`] / [`Submodule::contains`] /
//!   [`Submodule::equals`]: reduction-based membership.
//! - [`Submodule::colon`], [`Submodule::saturate`] (iterated colon, returning
//!   the stabilization exponent), [`Submodule::intersect`] (auxiliary-variable
//!   trick), [`Submodule::eliminate`] (block orders),
//!   [`Submodule::quotient_ideal`] (annihilator of a module quotient),
//!   [`Submodule::krull_dimension`], [`Submodule::radical_contains`].
//!
//! # Design notes
//!
//! - Everything is deterministic: pair selection breaks ties by stored index,
//!   reducers are chosen by smallest basis index, and the final basis is the
//!   unique reduced one, sorted by leading term.
//! - Coefficient growth is controlled by keeping basis elements monic
//!   (content-normalized) after every update; no modular or floating-point
//!   shortcuts anywhere.

mod element;
mod engine;
mod ops;
mod submodule;

pub use element::FreeModuleElement;
pub use engine::GbStats;
pub use submodule::{GroebnerBasis, Submodule};
