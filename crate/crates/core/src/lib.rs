//! Finite-domain quantified constraint satisfaction.
//!
//! The crate covers relation algebra over small domains, quantified
//! conjunctive formulas and polymorphisms, exhaustive game evaluation of QCSP
//! instances, the induced CSP of a game, hardness encoders for two fixed
//! constraint languages, and verifiers for mighty tuples.

pub mod corpus;
pub mod error;
pub mod gamesolver;
pub mod inducedcsp;
pub mod mightytuples;
pub mod qcspmodel;
pub mod reductions;
pub mod relcore;
pub mod verify;

pub use error::{Error, Result};
pub use relcore::{Domain, Elem, ParamRelation, Relation, Signature};
