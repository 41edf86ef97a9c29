//! Instances, quantified conjunctive formulas and polymorphisms.

mod formula;
mod instance;
mod polymorphism;
pub mod text;

pub use formula::{eval_qc_formula, Atom, QcFormula};
pub use instance::{substitute, Constraint, Library, QcspInstance, Quantifier, Target};
pub use polymorphism::{check_polymorphism, g_operation, FiniteOperation, PolyCheck};
