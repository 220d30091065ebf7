//! Motivic iterated integrals, the infinitesimal coaction and the
//! recursive relation checker built on it.

pub mod db;
pub mod relation;
pub mod symbols;
pub mod tensor;

pub use db::{RelationDb, RelationRecord};
pub use relation::{motivic_associator, zagier_motivic_rhs, RelationEngine, Verdict};
pub use symbols::{normalize, ISymbol, Monomial, MotivicCombination, UnipotentSymbol};
pub use tensor::{coaction_d, coaction_d_combination, coaction_dr, TensorSum};
