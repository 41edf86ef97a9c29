use std::collections::BTreeSet;

use super::instance::{Library, Quantifier};
use crate::error::{invalid, Result};
use crate::relcore::{all_tuples, Domain, Elem, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub rel: String,
    pub vars: Vec<String>,
}

impl Atom {
    pub fn new<S: Into<String>>(rel: impl Into<String>, vars: impl IntoIterator<Item = S>) -> Atom {
        Atom {
            rel: rel.into(),
            vars: vars.into_iter().map(Into::into).collect(),
        }
    }
}

/// A quantified conjunctive formula: free variables, then quantified
/// variables in evaluation order, over a conjunction of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QcFormula {
    pub free: Vec<String>,
    pub quantified: Vec<(Quantifier, String)>,
    pub atoms: Vec<Atom>,
}

impl QcFormula {
    pub fn new<S: Into<String>>(free: impl IntoIterator<Item = S>) -> QcFormula {
        QcFormula {
            free: free.into_iter().map(Into::into).collect(),
            ..QcFormula::default()
        }
    }

    pub fn exists<S: Into<String>>(mut self, vars: impl IntoIterator<Item = S>) -> QcFormula {
        self.quantified
            .extend(vars.into_iter().map(|v| (Quantifier::Exists, v.into())));
        self
    }

    pub fn forall<S: Into<String>>(mut self, vars: impl IntoIterator<Item = S>) -> QcFormula {
        self.quantified
            .extend(vars.into_iter().map(|v| (Quantifier::Forall, v.into())));
        self
    }

    pub fn atom<S: Into<String>>(mut self, rel: impl Into<String>, vars: impl IntoIterator<Item = S>) -> QcFormula {
        self.atoms.push(Atom::new(rel, vars));
        self
    }

    fn var_order(&self) -> Vec<&str> {
        self.free
            .iter()
            .map(String::as_str)
            .chain(self.quantified.iter().map(|(_, v)| v.as_str()))
            .collect()
    }
}

struct Compiled<'a> {
    quants: Vec<Quantifier>,
    nfree: usize,
    /// Atoms grouped by the position of their last variable (+1; 0 = no variables).
    checks: Vec<Vec<(&'a Relation, Vec<usize>)>>,
}

fn compile<'a>(f: &QcFormula, lib: &'a Library, domain: &Domain) -> Result<Compiled<'a>> {
    let order = f.var_order();
    let mut seen = BTreeSet::new();
    for v in &order {
        if !seen.insert(*v) {
            return invalid(format!("variable {v} is declared twice"));
        }
    }
    let mut checks: Vec<Vec<(&Relation, Vec<usize>)>> = vec![Vec::new(); order.len() + 1];
    for a in &f.atoms {
        let Some(r) = lib.get(&a.rel) else {
            return invalid(format!("unknown relation {}", a.rel));
        };
        if r.arity() != a.vars.len() {
            return invalid(format!(
                "relation {} has arity {} but the atom has {} variables",
                a.rel,
                r.arity(),
                a.vars.len()
            ));
        }
        if !r.domain().same_size(domain) {
            return invalid(format!("relation {} is over another domain", a.rel));
        }
        let mut scope = Vec::with_capacity(a.vars.len());
        for v in &a.vars {
            match order.iter().position(|w| w == v) {
                Some(p) => scope.push(p),
                None => return invalid(format!("variable {v} is neither free nor quantified")),
            }
        }
        let at = scope.iter().map(|&p| p + 1).max().unwrap_or(0);
        checks[at].push((r, scope));
    }
    Ok(Compiled {
        quants: f.quantified.iter().map(|(q, _)| *q).collect(),
        nfree: f.free.len(),
        checks,
    })
}

fn atoms_hold(c: &Compiled, level: usize, vals: &[Elem], buf: &mut Vec<Elem>) -> bool {
    c.checks[level].iter().all(|(r, scope)| {
        buf.clear();
        buf.extend(scope.iter().map(|&p| vals[p]));
        r.contains(buf)
    })
}

/// Quantifier recursion in declared order; `vals[..depth]` is assigned.
fn eval_from(c: &Compiled, n: Elem, depth: usize, vals: &mut Vec<Elem>, buf: &mut Vec<Elem>) -> bool {
    let qi = depth - c.nfree;
    if qi == c.quants.len() {
        return true;
    }
    let q = c.quants[qi];
    for a in 0..n {
        vals.push(a);
        let ok = atoms_hold(c, depth + 1, vals, buf) && eval_from(c, n, depth + 1, vals, buf);
        vals.pop();
        match q {
            Quantifier::Exists if ok => return true,
            Quantifier::Forall if !ok => return false,
            _ => {}
        }
    }
    q == Quantifier::Forall
}

/// The relation over `f.free` (in order) defined by `f`.
pub fn eval_qc_formula(f: &QcFormula, lib: &Library, domain: &Domain) -> Result<Relation> {
    let c = compile(f, lib, domain)?;
    let n = domain.size() as Elem;
    let mut buf = Vec::new();
    let mut out = Relation::empty(domain, f.free.len())?;
    if !atoms_hold(&c, 0, &[], &mut buf) {
        return Ok(out);
    }
    for (i, t) in all_tuples(domain.size(), f.free.len()).enumerate() {
        // Atoms over free variables only are checked level by level.
        let mut vals = Vec::with_capacity(f.free.len() + f.quantified.len());
        let mut ok = true;
        for (d, &e) in t.iter().enumerate() {
            vals.push(e);
            if !atoms_hold(&c, d + 1, &vals, &mut buf) {
                ok = false;
                break;
            }
        }
        if ok && eval_from(&c, n, f.free.len(), &mut vals, &mut buf) {
            out.set_index(i, true);
        }
    }
    Ok(out)
}
