use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{invalid, Result};
use crate::relcore::{Domain, Elem, Relation};

/// Named relations available to constraints.
pub type Library = BTreeMap<String, Relation>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn letter(self) -> &'static str {
        match self {
            Quantifier::Forall => "A",
            Quantifier::Exists => "E",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "∀",
            Quantifier::Exists => "∃",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub rel: String,
    pub vars: Vec<String>,
}

impl Constraint {
    pub fn new<S: Into<String>>(rel: impl Into<String>, vars: impl IntoIterator<Item = S>) -> Constraint {
        Constraint {
            rel: rel.into(),
            vars: vars.into_iter().map(Into::into).collect(),
        }
    }
}

/// A sentence `Q₁v₁ … Qₙvₙ ⋀ constraints` over a relation library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcspInstance {
    pub domain: Domain,
    pub library: Library,
    pub prefix: Vec<(Quantifier, String)>,
    pub constraints: Vec<Constraint>,
}

impl QcspInstance {
    /// Builds and validates an instance.
    pub fn new(
        domain: Domain,
        library: Library,
        prefix: Vec<(Quantifier, String)>,
        constraints: Vec<Constraint>,
    ) -> Result<QcspInstance> {
        let inst = QcspInstance {
            domain,
            library,
            prefix,
            constraints,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (_, v) in &self.prefix {
            if !seen.insert(v.as_str()) {
                return invalid(format!("variable {v} is quantified twice"));
            }
        }
        for (name, r) in &self.library {
            if !r.domain().same_size(&self.domain) {
                return invalid(format!("relation {name} is over a domain of size {}", r.size()));
            }
        }
        for c in &self.constraints {
            let Some(r) = self.library.get(&c.rel) else {
                return invalid(format!("unknown relation {}", c.rel));
            };
            if r.arity() != c.vars.len() {
                return invalid(format!(
                    "relation {} has arity {} but is applied to {} variables",
                    c.rel,
                    r.arity(),
                    c.vars.len()
                ));
            }
            if let Some(v) = c.vars.iter().find(|v| !seen.contains(v.as_str())) {
                return invalid(format!("variable {v} is not in the prefix"));
            }
        }
        Ok(())
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.prefix.iter().position(|(_, v)| v == var)
    }

    pub fn universals(&self) -> Vec<usize> {
        self.positions_of(Quantifier::Forall)
    }

    pub fn existentials(&self) -> Vec<usize> {
        self.positions_of(Quantifier::Exists)
    }

    fn positions_of(&self, q: Quantifier) -> Vec<usize> {
        self.prefix
            .iter()
            .enumerate()
            .filter(|(_, (qq, _))| *qq == q)
            .map(|(i, _)| i)
            .collect()
    }

    /// Constraints as (relation, prefix positions).
    pub fn compiled(&self) -> Vec<(&Relation, Vec<usize>)> {
        self.constraints
            .iter()
            .map(|c| {
                let scope = c
                    .vars
                    .iter()
                    .map(|v| self.position(v).expect("validated"))
                    .collect();
                (&self.library[&c.rel], scope)
            })
            .collect()
    }

    /// Whether a full assignment (indexed by prefix position) satisfies every constraint.
    pub fn satisfied_by(&self, values: &[Elem]) -> bool {
        self.compiled().iter().all(|(r, scope)| {
            let t: Vec<Elem> = scope.iter().map(|&p| values[p]).collect();
            r.contains(&t)
        })
    }

    /// Human-readable one-line rendering.
    pub fn display(&self) -> String {
        let pre: Vec<String> = self.prefix.iter().map(|(q, v)| format!("{q}{v}")).collect();
        let cons: Vec<String> = self
            .constraints
            .iter()
            .map(|c| format!("{}({})", c.rel, c.vars.join(",")))
            .collect();
        format!("{} {}", pre.join(" "), cons.join(" ∧ "))
    }
}

/// Substitution target: another variable name or a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Var(String),
    Const(Elem),
}

/// Name of the singleton relation used to pin a variable to `e`.
pub fn const_relation_name(domain: &Domain, e: Elem) -> String {
    format!("const_{}", domain.label(e))
}

/// Renames variables and pins constants. A variable mapped to a constant
/// keeps its quantifier and gains a unary singleton constraint.
pub fn substitute(inst: &QcspInstance, map: &BTreeMap<String, Target>) -> Result<QcspInstance> {
    for (from, to) in map {
        if inst.position(from).is_none() {
            return invalid(format!("substitution source {from} is not a variable"));
        }
        if let Target::Const(e) = to {
            if *e as usize >= inst.domain.size() {
                return invalid(format!("constant {e} leaves the domain"));
            }
        }
    }
    let rename = |v: &String| -> String {
        match map.get(v) {
            Some(Target::Var(w)) => w.clone(),
            _ => v.clone(),
        }
    };
    let mut out = inst.clone();
    let mut names = BTreeSet::new();
    for (_, v) in out.prefix.iter_mut() {
        let w = rename(v);
        if !names.insert(w.clone()) {
            return invalid(format!("substitution captures the quantified name {w}"));
        }
        *v = w;
    }
    for c in out.constraints.iter_mut() {
        c.vars = c.vars.iter().map(rename).collect();
    }
    for (from, to) in map {
        if let Target::Const(e) = to {
            let name = const_relation_name(&inst.domain, *e);
            let rel = Relation::singleton(&inst.domain, *e)?;
            match out.library.get(&name) {
                Some(existing) if *existing != rel => {
                    return invalid(format!("library already has a different {name}"));
                }
                _ => {
                    out.library.insert(name.clone(), rel);
                }
            }
            out.constraints.push(Constraint::new(name, [rename(from)]));
        }
    }
    out.validate()?;
    Ok(out)
}
