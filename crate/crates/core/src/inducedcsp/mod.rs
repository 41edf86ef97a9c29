//! The induced CSP of a quantified sentence, its strengthened relations,
//! z-parameterized arc consistency and universal-subset witnesses.

mod instance;
mod relations;
mod witness;

pub use instance::{
    build_induced, check_equivalence_lemma, param_arc_consistency, param_arc_consistency_from, EquivalenceReport,
    InducedConstraint, InducedInstance, PReduction,
};
pub use relations::{game_length, s_relation, tilde_relations, w_relation};
pub use witness::{compose_witnesses, s_in_w_witness, verify_universal_subset, UWitness};
