//! Game evaluation of QCSP instances, CSP solving with arc consistency, and
//! the optimal-move solver for the six-element language.

mod csp;
mod game;
mod pi2;
mod restricted;

pub use csp::{arc_consistency, solve_csp, CspConstraint, CspInstance};
pub use game::{eval_formula_by_game, eval_qcsp, replay_strategy, ExistentialTable, GameResult, Strategy};
pub use pi2::{optimal_move, solve_pi2_style, Pi2Solver};
pub use restricted::{eval_restricted, greedy_restriction_set, switch_bounded_set};
