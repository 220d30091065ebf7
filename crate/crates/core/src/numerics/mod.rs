//! Arbitrary-precision evaluation of zeta values, multiple zeta values and
//! related classical identities.

pub mod bigfloat;
pub mod complex;
pub mod identities;
pub mod mzv;

pub use bigfloat::{BigReal, Context};
pub use complex::BigComplex;
pub use mzv::{associator_numeric, mzv, regularized_word_value, zeta, MzvEvaluator, MzvValue};
