use super::gamma::{gamma6, or_n};
use super::qbf::OneInThree;
use crate::error::{invalid, Result};
use crate::qcspmodel::{Constraint, QcspInstance, Quantifier};

/// The Γ₆ sentence `Ψ` for `∀x₁…∀x_m ∃x_{m+1}…∃x_n ⋀ 1IN3`.
///
/// Universals `x_i^0, x_i^1` (named `x<i>_0`, `x<i>_1`) for `i ≤ m`;
/// existentials `x₁…x_n`, `z₁…z_n`, `z`. The OR gate collects `z₁…z_m`,
/// the outputs of the AND gates. `z_{m+1}…z_n` are quantified but left
/// unconstrained: wiring them into the OR as well would let the EP set one of
/// them outside `{0,1}` and satisfy the gate outright.
pub fn encode_pi2_1in3(f: &OneInThree) -> Result<QcspInstance> {
    build(f, f.m)
}

/// `Ψ` with the OR gate over all of `z₁…z_n`. For `n > m` this sentence is
/// true for every input; kept to exhibit that failure.
pub fn encode_pi2_1in3_wide_or(f: &OneInThree) -> Result<QcspInstance> {
    build(f, f.n)
}

fn build(f: &OneInThree, or_width: usize) -> Result<QcspInstance> {
    let (n, m) = (f.n, f.m);
    if m < 2 {
        return invalid(format!("the encoding needs at least two universal variables, found {m}"));
    }
    let lang = gamma6();
    let mut library = lang.library;
    let or_name = format!("OR{or_width}");
    library.insert(or_name.clone(), or_n(or_width)?);

    let x = |i: usize| format!("x{i}");
    let xb = |i: usize, b: u8| format!("x{i}_{b}");
    let z = |i: usize| format!("z{i}");
    let mut prefix = Vec::new();
    for i in 1..=m {
        prefix.push((Quantifier::Forall, xb(i, 0)));
        prefix.push((Quantifier::Forall, xb(i, 1)));
    }
    prefix.extend((1..=n).map(|i| (Quantifier::Exists, x(i))));
    prefix.extend((1..=n).map(|i| (Quantifier::Exists, z(i))));
    prefix.push((Quantifier::Exists, "z".into()));

    let mut cons = Vec::new();
    for i in 1..=m {
        cons.push(Constraint::new("DELTA0", [xb(i, 0), x(i)]));
        cons.push(Constraint::new("DELTA1", [xb(i, 1), x(i)]));
    }
    for i in 1..=m {
        cons.push(Constraint::new("AND2", [xb(i, 0), xb(i, 1), z(i)]));
    }
    let mut or_args: Vec<String> = (1..=or_width).map(z).collect();
    or_args.push("z".into());
    cons.push(Constraint::new(or_name, or_args));
    for i in 1..=n {
        cons.push(Constraint::new("EPS", ["z".to_string(), x(i)]));
    }
    for c in &f.clauses {
        cons.push(Constraint::new("ONE_IN_THREE", c.map(x)));
    }
    QcspInstance::new(lang.domain, library, prefix, cons)
}
