use crate::error::{invalid, Result};
use crate::qcspmodel::{eval_qc_formula, Library, QcFormula};
use crate::relcore::Relation;

/// `n` for a relation of arity `2n+1`.
pub fn game_length(r: &Relation) -> Result<usize> {
    if r.arity().is_multiple_of(2) {
        return invalid(format!("expected arity 2n+1, found {}", r.arity()));
    }
    Ok(r.arity() / 2)
}

fn check_level(r: &Relation, m: usize) -> Result<usize> {
    let n = game_length(r)?;
    if m > n {
        return invalid(format!("level {m} exceeds n = {n}"));
    }
    Ok(n)
}

fn y(i: usize) -> String {
    format!("y{i}")
}

fn x(i: usize) -> String {
    format!("x{i}")
}

/// Free variables `y₀…y_m, x₁…x_m`.
fn head(m: usize) -> QcFormula {
    QcFormula::new((0..=m).map(y).chain((1..=m).map(x)))
}

fn lib_of(r: &Relation) -> Library {
    Library::from([("R".to_string(), r.clone())])
}

/// `𝓦_R^m(y₀…y_m, x₁…x_m) = ∀x ∃y_{m+1}…∃y_n R(y₀…y_n, x₁…x_m, x…x)`;
/// `𝓦_R^n = R`.
pub fn w_relation(r: &Relation, m: usize) -> Result<Relation> {
    let n = check_level(r, m)?;
    if m == n {
        return Ok(r.clone());
    }
    let mut args: Vec<String> = (0..=n).map(y).chain((1..=m).map(x)).collect();
    args.extend(std::iter::repeat_n("x".to_string(), n - m));
    let f = head(m).forall(["x"]).exists((m + 1..=n).map(y)).atom("R", args);
    eval_qc_formula(&f, &lib_of(r), r.domain())
}

/// `𝓢_R^m = ∀x ∃y_{m+1} ∀x′ ∃y_{m+2}…∃y_n R(y₀…y_n, x₁…x_m, x, x′…x′)`;
/// `𝓢_R^n = R`.
pub fn s_relation(r: &Relation, m: usize) -> Result<Relation> {
    let n = check_level(r, m)?;
    if m == n {
        return Ok(r.clone());
    }
    let mut args: Vec<String> = (0..=n).map(y).chain((1..=m).map(x)).collect();
    args.push("x".into());
    args.extend(std::iter::repeat_n("xp".to_string(), n - m - 1));
    let mut f = head(m).forall(["x"]).exists([y(m + 1)]);
    if m + 1 < n {
        f = f.forall(["xp"]).exists((m + 2..=n).map(y));
    }
    eval_qc_formula(&f.atom("R", args), &lib_of(r), r.domain())
}

/// `rel` (over `y₀…y_i, x₁…x_i`) lifted to the coordinates `y₀…y_m, x₁…x_m`.
fn lift(rel: &Relation, i: usize, m: usize) -> Result<Relation> {
    Relation::from_fn(rel.domain(), 2 * m + 1, |t| {
        let mut u: Vec<_> = t[..=i].to_vec();
        u.extend_from_slice(&t[m + 1..m + 1 + i]);
        rel.contains(&u)
    })
}

/// `(W̃_R^m, S̃_R^m)`: `W̃ = ⋀_{i≤m} 𝓦^i` and `S̃ = 𝓢^m ∧ ⋀_{i<m} 𝓦^i`, each
/// `𝓦^i` on the leading coordinates.
pub fn tilde_relations(r: &Relation, m: usize) -> Result<(Relation, Relation)> {
    check_level(r, m)?;
    let mut lower = Relation::full(r.domain(), 2 * m + 1)?;
    for i in 0..m {
        lower = lower.intersect(&lift(&w_relation(r, i)?, i, m)?);
    }
    let w = lower.intersect(&w_relation(r, m)?);
    let s = lower.intersect(&s_relation(r, m)?);
    Ok((w, s))
}
