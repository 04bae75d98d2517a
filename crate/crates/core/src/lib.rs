//! Exact computations for the first Grigorchuk group and its finitely
//! presented approximants `Γ_n`.
//!
//! The algebra is generic over exact scalar types (see [`scalar`]); the
//! aliases below fix the arbitrary-precision instantiations used everywhere
//! else in the crate.

pub mod cosets;
pub mod grig;
pub mod growth;
pub mod lambda;
pub mod permgrp;
pub mod presentations;
pub mod scalar;
pub mod smith;
pub mod words;

pub use lambda::{CubicNumber, WeightTable};
pub use words::{Letter, Word};

/// Element of `Q(λ)` over arbitrary-precision rationals.
pub type Cubic = CubicNumber<num_rational::BigRational>;
/// λ-metric letter weights over arbitrary-precision rationals.
pub type Weights = WeightTable<num_rational::BigRational>;
/// Exact integers used for index bounds and Smith normal forms.
pub type Int = num_bigint::BigInt;
