use std::sync::Arc;

use super::csp::{solve_csp, CspInstance};
use crate::error::{invalid, Error, Result};
use crate::qcspmodel::{check_polymorphism, g_operation, QcspInstance, Quantifier};
use crate::reductions::six_domain;
use crate::relcore::Elem;

/// Optimal-move solver for instances over `{0,1,2,0′,1′,2′}` whose relations
/// are all preserved by `g`. Validation happens once, at construction.
pub struct Pi2Solver<'a> {
    inst: &'a QcspInstance,
    rels: Vec<(Arc<crate::relcore::Relation>, Vec<usize>)>,
    one: Elem,
    /// Tie-break order among `{0′,1′,2}`: 2, then 0′, then 1′.
    preferred: [Elem; 3],
}

impl<'a> Pi2Solver<'a> {
    pub fn new(inst: &'a QcspInstance) -> Result<Pi2Solver<'a>> {
        if inst.domain.size() != 6 {
            return Err(Error::Precondition(format!(
                "optimal-move solving needs the six-element domain, got {} elements",
                inst.domain.size()
            )));
        }
        let g = g_operation();
        let mut used: Vec<&String> = inst.constraints.iter().map(|c| &c.rel).collect();
        used.sort();
        used.dedup();
        for name in used {
            let r = &inst.library[name];
            let check = check_polymorphism(&g, r)?;
            if !check.holds {
                return Err(Error::Precondition(format!(
                    "relation {name} is not preserved by g (rows {:?} give {:?})",
                    check.rows, check.image
                )));
            }
        }
        let d = six_domain();
        Ok(Pi2Solver {
            inst,
            rels: inst
                .compiled()
                .into_iter()
                .map(|(r, s)| (Arc::new(r.clone()), s))
                .collect(),
            one: d.elem("1"),
            preferred: [d.elem("2"), d.elem("0'"), d.elem("1'")],
        })
    }

    /// The EP's move at position `partial.len()`, or `None` when no value
    /// keeps the pinned CSP satisfiable.
    pub fn optimal_move(&self, partial: &[Elem]) -> Result<Option<Elem>> {
        let p = partial.len();
        match self.inst.prefix.get(p) {
            Some((Quantifier::Exists, _)) => {}
            Some((Quantifier::Forall, v)) => {
                return invalid(format!("position {p} ({v}) is universal, not an EP move"));
            }
            None => return invalid("partial assignment covers the whole prefix"),
        }
        if partial.iter().any(|&e| e as usize >= 6) {
            return invalid("partial assignment leaves the domain");
        }
        let mut options = Vec::new();
        for d in 0..6u8 {
            if self.pinned_csp_satisfiable(partial, d)? {
                options.push(d);
            }
        }
        Ok(match options.as_slice() {
            [] => None,
            [b] => Some(*b),
            _ => {
                let c = self
                    .preferred
                    .iter()
                    .copied()
                    .find(|c| options.contains(c))
                    .ok_or_else(|| Error::Internal(format!("move set {options:?} misses {{0',1',2}}")))?;
                Some(c)
            }
        })
    }

    /// Later universals set to 1, `y_p = d`, earlier values pinned.
    fn pinned_csp_satisfiable(&self, partial: &[Elem], d: Elem) -> Result<bool> {
        let mut csp = CspInstance::new(self.inst.domain.clone());
        for (i, (q, v)) in self.inst.prefix.iter().enumerate() {
            let x = csp.add_var(v.clone());
            if i < partial.len() {
                csp.restrict(x, 1 << partial[i]);
            } else if i == partial.len() {
                csp.restrict(x, 1 << d);
            } else if *q == Quantifier::Forall {
                csp.restrict(x, 1 << self.one);
            }
        }
        for (r, scope) in &self.rels {
            csp.add_constraint(r.clone(), scope.clone())?;
        }
        Ok(solve_csp(&csp).is_some())
    }

    /// Enumerates every universal play in lexicographic order, answering with
    /// optimal moves; true iff every play ends with the matrix satisfied.
    pub fn solve(&self) -> Result<bool> {
        let mut vals = Vec::with_capacity(self.inst.prefix.len());
        self.play(&mut vals)
    }

    fn play(&self, vals: &mut Vec<Elem>) -> Result<bool> {
        let p = vals.len();
        if p == self.inst.prefix.len() {
            return Ok(self.inst.satisfied_by(vals));
        }
        match self.inst.prefix[p].0 {
            Quantifier::Forall => {
                for a in 0..6u8 {
                    vals.push(a);
                    let ok = self.play(vals)?;
                    vals.pop();
                    if !ok {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Quantifier::Exists => match self.optimal_move(vals)? {
                None => Ok(false),
                Some(c) => {
                    vals.push(c);
                    let ok = self.play(vals)?;
                    vals.pop();
                    Ok(ok)
                }
            },
        }
    }
}

pub fn optimal_move(inst: &QcspInstance, partial: &[Elem]) -> Result<Option<Elem>> {
    Pi2Solver::new(inst)?.optimal_move(partial)
}

pub fn solve_pi2_style(inst: &QcspInstance) -> Result<bool> {
    Pi2Solver::new(inst)?.solve()
}
