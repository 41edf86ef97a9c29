//! Finite relations over a small domain and the relation algebra built on them.
//!
//! Elements are stored 0-based (`0..size`). Text formats print them 1-based,
//! or through the domain's labels when present.

mod algebra;
pub mod capacity;
mod domain;
mod param;
mod relation;
pub mod text;

pub use algebra::{
    compose, compose_inv, factorial_exponent, join_equiv, project, rel_then_unary, repeat,
    trans_sym_closure, unary_compose, unary_compose_inv,
};
pub use domain::{all_tuples, Domain, Elem, Tuples};
pub use param::{ParamRelation, Signature};
pub use relation::Relation;
