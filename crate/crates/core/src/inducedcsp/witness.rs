use std::collections::BTreeMap;

use super::relations::{game_length, s_relation, w_relation};
use crate::error::{invalid, Result};
use crate::gamesolver::eval_formula_by_game;
use crate::qcspmodel::{Library, QcFormula, Quantifier};
use crate::relcore::{all_tuples, Domain, Relation};

/// A claimed `S ⊴ W` with its witness `R′ ⊆ A^{t+s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UWitness {
    pub r: Relation,
    pub s: Relation,
    pub w: Relation,
}

impl UWitness {
    pub fn t(&self) -> usize {
        self.s.arity()
    }

    /// Number of quantified coordinates of the witness.
    pub fn extra(&self) -> usize {
        self.r.arity() - self.t()
    }
}

/// Checks `S(ȳ) = ∀x₁…∀x_s R′(ȳ,x̄)` and `W(ȳ) = ∀x R′(ȳ,x,…,x)` as set
/// equalities.
pub fn verify_universal_subset(u: &UWitness) -> Result<bool> {
    let t = u.s.arity();
    if u.w.arity() != t || u.r.arity() <= t {
        return invalid(format!(
            "arity mismatch: S {}, W {}, witness {} (needs at least one extra coordinate)",
            t,
            u.w.arity(),
            u.r.arity()
        ));
    }
    if !u.r.domain().same_size(u.s.domain()) || !u.r.domain().same_size(u.w.domain()) {
        return invalid("witness and relations live over different domains");
    }
    let s = u.r.arity() - t;
    let size = u.r.size();
    for ys in all_tuples(size, t) {
        let mut tuple = ys.clone();
        let all = all_tuples(size, s).all(|xs| {
            tuple.truncate(t);
            tuple.extend_from_slice(&xs);
            u.r.contains(&tuple)
        });
        let diag = u.r.domain().elements().all(|a| {
            tuple.truncate(t);
            tuple.extend(std::iter::repeat_n(a, s));
            u.r.contains(&tuple)
        });
        if all != u.s.contains(&ys) || diag != u.w.contains(&ys) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The witness for `𝓢_R^m ⊴ 𝓦_R^m`:
/// `Q(ȳ, x̄, x, x¹…x^{|A|}) = ∃y_{m+1} ⋀_a ∃y_{m+2}…∃y_n R(…, x̄, x, x^a…x^a)`.
/// At `m = n` both sides are `R` and the witness adds one fictitious coordinate.
pub fn s_in_w_witness(r: &Relation, m: usize) -> Result<UWitness> {
    let n = game_length(r)?;
    let s = s_relation(r, m)?;
    let w = w_relation(r, m)?;
    let d = r.domain();
    if m == n {
        let t = r.arity();
        let q = Relation::from_fn(d, t + 1, |tu| r.contains(&tu[..t]))?;
        return Ok(UWitness { r: q, s, w });
    }
    let size = d.size();
    let ys: Vec<String> = (0..=m).map(|i| format!("y{i}")).collect();
    let xs: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let uppers: Vec<String> = (1..=size).map(|a| format!("xa{a}")).collect();
    let mut free = ys.clone();
    free.extend(xs.iter().cloned());
    free.push("x".into());
    free.extend(uppers.iter().cloned());
    let mut f = QcFormula::new(free).exists([format!("y{}", m + 1)]);
    for (a, xa) in uppers.iter().enumerate() {
        let copies: Vec<String> = (m + 2..=n).map(|i| format!("y{i}_{a}")).collect();
        f = f.exists(copies.iter().cloned());
        let mut args = ys.clone();
        args.push(format!("y{}", m + 1));
        args.extend(copies);
        args.extend(xs.iter().cloned());
        args.push("x".into());
        args.extend(std::iter::repeat_n(xa.clone(), n - m - 1));
        f = f.atom("R", args);
    }
    let lib = Library::from([("R".to_string(), r.clone())]);
    let q = eval_formula_by_game(&f, &lib, d)?;
    Ok(UWitness { r: q, s, w })
}

/// Composes witnesses along an existential conjunctive formula. Atoms of
/// `formula` name entries of `parts`. The result has `|A|` extra coordinates:
/// `R(ȳ, x₁…x_k) = ∃ū ⋀_i ⋀_{φ:[k_i]→[k]} R_i(z̄_i, x_φ) ∧ ⋀_i W_i(z̄_i)`.
pub fn compose_witnesses(parts: &BTreeMap<String, UWitness>, formula: &QcFormula, domain: &Domain) -> Result<UWitness> {
    if formula.quantified.iter().any(|(q, _)| *q != Quantifier::Exists) {
        return invalid("composition needs an existential formula");
    }
    let k = domain.size();
    let xs: Vec<String> = (1..=k).map(|i| format!("__x{i}")).collect();
    let mut wit = formula.clone();
    wit.free.extend(xs.iter().cloned());
    wit.atoms.clear();
    let mut lib_r = Library::new();
    let mut lib_s = Library::new();
    let mut lib_w = Library::new();
    for (name, p) in parts {
        lib_r.insert(format!("R_{name}"), p.r.clone());
        lib_w.insert(format!("W_{name}"), p.w.clone());
        lib_s.insert(name.clone(), p.s.clone());
        lib_w.insert(name.clone(), p.w.clone());
    }
    for atom in &formula.atoms {
        let Some(p) = parts.get(&atom.rel) else {
            return invalid(format!("unknown part {}", atom.rel));
        };
        for phi in all_tuples(k, p.extra()) {
            let mut args = atom.vars.clone();
            args.extend(phi.iter().map(|&j| xs[j as usize].clone()));
            wit.atoms.push(crate::qcspmodel::Atom::new(format!("R_{}", atom.rel), args));
        }
        wit.atoms.push(crate::qcspmodel::Atom::new(format!("W_{}", atom.rel), atom.vars.clone()));
    }
    let r = eval_formula_by_game(&wit, &lib_r.into_iter().chain(lib_w.clone()).collect(), domain)?;
    let s = eval_formula_by_game(formula, &lib_s, domain)?;
    let w = eval_formula_by_game(formula, &lib_w, domain)?;
    Ok(UWitness { r, s, w })
}
