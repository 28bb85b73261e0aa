//! Numerical semigroups, their factorization invariants, and linear
//! parametrized families `P_n = ⟨w₁n + r₁, …, w_kn + r_k⟩`.
//!
//! - [`semigroup`]: membership, Apéry sets, Frobenius number, genus, type.
//! - [`factorizations`]: factorization sets, length sets, delta sets, Betti
//!   elements and minimal presentations.
//! - [`weighted`]: weighted lengths, weighted delta sets and the eventual
//!   recurrences of the weighted extreme length functions.
//! - [`parametric`]: the shifted families, the transport map `Φₙ`, and the
//!   closed-form Apéry and pseudo-Frobenius descriptions.
//! - [`quasipoly`]: fitting and detecting quasipolynomial behaviour in
//!   sampled invariants.

pub mod error;
pub mod factorizations;
pub mod parametric;
pub mod quasipoly;
pub mod semigroup;
pub mod weighted;

pub use error::{Error, Result};
pub use factorizations::{Factorization, Relation};
pub use parametric::{FamilySource, FamilySpec, Invariant, LinearFamily, PolynomialFamily};
pub use quasipoly::QuasiPolynomial;
pub use semigroup::{AperySet, Semigroup, WilfFormula};
pub use weighted::WeightVector;
