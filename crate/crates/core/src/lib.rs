//! Exact and high-precision computation with multiple zeta values: the
//! shuffle Hopf algebra, the motivic coaction, the Ihara action and
//! iterated Eichler integrals of modular forms.

pub mod coaction;
pub mod error;
pub mod exact;
pub mod ihara;
pub mod modular;
pub mod numerics;
pub mod words;

pub use error::{Error, Result};
