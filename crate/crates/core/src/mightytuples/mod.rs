//! Mighty tuples: condition checkers for kinds I–V′, the quadruple property
//! battery with its claim transformations, and the constructions that turn
//! one kind into another.

mod claims;
mod common;
mod construct;
mod quadruple;
mod tuple;

pub use claims::{
    apply_claim, check_requirement, derive_ii_from_iii, derive_iii_from_iv, props_ii_kappa, satisfies_all, Claim, Derivation,
    DerivationStep, MeasureEffect, Requirement,
};
pub use common::odd_girth;
pub use construct::{phi, symmetric_even_case, symmetric_odd_step, tuple_i_from_quadruple, tuple_ii_from_classification, tuple_to_prime};
pub use quadruple::{
    check_quadruple_property, holding_properties, Property, PropertyCheck, QFrame, Quadruple, PROPS_II, PROPS_III, PROPS_IV,
    PROPS_J,
};
pub use tuple::{check_mighty, ConditionCheck, MightyKind, MightyReport, MightyTuple};
