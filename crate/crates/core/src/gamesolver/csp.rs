use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::relcore::{Domain, Elem, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspConstraint {
    pub rel: Arc<Relation>,
    pub scope: Vec<usize>,
}

/// A CSP with optional per-variable domain restrictions (bitmasks over A).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    pub domain: Domain,
    pub vars: Vec<String>,
    pub constraints: Vec<CspConstraint>,
    pub restrictions: Vec<Option<u64>>,
}

impl CspInstance {
    pub fn new(domain: Domain) -> CspInstance {
        CspInstance {
            domain,
            vars: Vec::new(),
            constraints: Vec::new(),
            restrictions: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> usize {
        self.vars.push(name.into());
        self.restrictions.push(None);
        self.vars.len() - 1
    }

    pub fn restrict(&mut self, var: usize, mask: u64) {
        let full = self.full_mask();
        let cur = self.restrictions[var].unwrap_or(full);
        self.restrictions[var] = Some(cur & mask);
    }

    pub fn add_constraint(&mut self, rel: Arc<Relation>, scope: Vec<usize>) -> Result<()> {
        if rel.arity() != scope.len() {
            return invalid(format!("constraint arity {} vs scope {}", rel.arity(), scope.len()));
        }
        if !rel.domain().same_size(&self.domain) {
            return invalid("constraint over another domain");
        }
        if let Some(&v) = scope.iter().find(|&&v| v >= self.vars.len()) {
            return invalid(format!("scope refers to undeclared variable {v}"));
        }
        self.constraints.push(CspConstraint { rel, scope });
        Ok(())
    }

    pub fn full_mask(&self) -> u64 {
        if self.domain.size() == 64 {
            u64::MAX
        } else {
            (1u64 << self.domain.size()) - 1
        }
    }

    fn initial_domains(&self) -> Vec<u64> {
        let full = self.full_mask();
        self.restrictions.iter().map(|r| r.unwrap_or(full) & full).collect()
    }

    pub fn satisfied_by(&self, vals: &[Elem]) -> bool {
        self.constraints.iter().all(|c| {
            let t: Vec<Elem> = c.scope.iter().map(|&v| vals[v]).collect();
            c.rel.contains(&t)
        }) && self
            .restrictions
            .iter()
            .zip(vals)
            .all(|(r, &v)| r.is_none_or(|m| m >> v & 1 == 1))
    }
}

/// Tuple lists and variable-to-constraint incidence, computed once.
struct Prepared {
    tuples: Vec<Vec<Vec<Elem>>>,
    watch: Vec<Vec<usize>>,
}

impl Prepared {
    fn new(inst: &CspInstance) -> Prepared {
        let mut watch = vec![Vec::new(); inst.vars.len()];
        for (ci, c) in inst.constraints.iter().enumerate() {
            for &v in &c.scope {
                if !watch[v].contains(&ci) {
                    watch[v].push(ci);
                }
            }
        }
        Prepared {
            tuples: inst.constraints.iter().map(|c| c.rel.tuples()).collect(),
            watch,
        }
    }
}

/// Generalized arc consistency to a fixpoint. `false` when a domain empties.
fn propagate(inst: &CspInstance, prep: &Prepared, doms: &mut [u64], mut queue: Vec<usize>) -> bool {
    if doms.contains(&0) {
        return false;
    }
    let mut queued = vec![false; inst.constraints.len()];
    for &c in &queue {
        queued[c] = true;
    }
    while let Some(ci) = queue.pop() {
        queued[ci] = false;
        let scope = &inst.constraints[ci].scope;
        let mut support = vec![0u64; scope.len()];
        'tuples: for t in &prep.tuples[ci] {
            for (i, &v) in scope.iter().enumerate() {
                if doms[v] >> t[i] & 1 == 0 {
                    continue 'tuples;
                }
                if scope[..i].iter().zip(t).any(|(&w, &e)| w == v && e != t[i]) {
                    continue 'tuples;
                }
            }
            for (i, s) in support.iter_mut().enumerate() {
                *s |= 1 << t[i];
            }
        }
        if scope.is_empty() && prep.tuples[ci].is_empty() {
            return false;
        }
        for (i, &v) in scope.iter().enumerate() {
            let nd = doms[v] & support[i];
            if nd != doms[v] {
                doms[v] = nd;
                if nd == 0 {
                    return false;
                }
                for &c2 in &prep.watch[v] {
                    if !queued[c2] {
                        queued[c2] = true;
                        queue.push(c2);
                    }
                }
            }
        }
    }
    true
}

/// The largest arc-consistent reduction of the initial domains, as bitmasks,
/// or `None` when some domain becomes empty.
pub fn arc_consistency(inst: &CspInstance) -> Option<Vec<u64>> {
    let prep = Prepared::new(inst);
    let mut doms = inst.initial_domains();
    let all: Vec<usize> = (0..inst.constraints.len()).collect();
    propagate(inst, &prep, &mut doms, all).then_some(doms)
}

fn search(inst: &CspInstance, prep: &Prepared, doms: Vec<u64>) -> Option<Vec<u64>> {
    let pick = (0..doms.len())
        .filter(|&v| doms[v].count_ones() > 1 && !prep.watch[v].is_empty())
        .min_by_key(|&v| doms[v].count_ones());
    let Some(v) = pick else {
        return Some(doms);
    };
    let mut bits = doms[v];
    while bits != 0 {
        let a = bits.trailing_zeros();
        bits &= bits - 1;
        let mut next = doms.clone();
        next[v] = 1 << a;
        if propagate(inst, prep, &mut next, prep.watch[v].clone()) {
            if let Some(sol) = search(inst, prep, next) {
                return Some(sol);
            }
        }
    }
    None
}

/// A satisfying assignment, or `None` when the instance is unsatisfiable.
/// Backtracking on the smallest domain with arc consistency after every choice.
pub fn solve_csp(inst: &CspInstance) -> Option<Vec<Elem>> {
    let prep = Prepared::new(inst);
    let mut doms = inst.initial_domains();
    let all: Vec<usize> = (0..inst.constraints.len()).collect();
    if !propagate(inst, &prep, &mut doms, all) {
        return None;
    }
    let sol = search(inst, &prep, doms)?;
    Some(sol.iter().map(|&m| m.trailing_zeros() as Elem).collect())
}
