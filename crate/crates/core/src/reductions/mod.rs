//! Hardness encoders and the fixed constraint languages they target.

mod gadget;
mod gamma;
mod pi2;
mod qbf;

pub use gadget::{
    encode_q3cnf_complement, operand_signature, q_phi_operator, q_phi_relation, GadgetEdge, GadgetGraph, Slot,
};
pub use gamma::{
    canonical_v_relations, delta1_formula, four_domain, gamma4, gamma6, gamma6_constants, or_n,
    six_domain, Language,
};
pub use pi2::{encode_pi2_1in3, encode_pi2_1in3_wide_or};
pub use qbf::{parse_1in3, parse_qdimacs, write_1in3, write_qdimacs, MatrixKind, OneInThree, QBoolFormula};
