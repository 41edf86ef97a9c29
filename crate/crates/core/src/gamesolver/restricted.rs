use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::csp::{solve_csp, CspInstance};
use super::game::eval_qcsp;
use crate::error::{invalid, Result};
use crate::qcspmodel::{QcspInstance, Quantifier};
use crate::relcore::{all_tuples, Domain, Elem};

/// Truth of the sentence with the UP confined to plays in `s`, decided as the
/// CSP whose variables are the EP's Skolem-table entries on prefixes of `s`.
pub fn eval_restricted(inst: &QcspInstance, s: &[Vec<Elem>]) -> Result<bool> {
    let univ = inst.universals();
    if let Some(t) = s.iter().find(|t| t.len() != univ.len()) {
        return invalid(format!(
            "restriction tuple {:?} has length {}, expected {}",
            t,
            t.len(),
            univ.len()
        ));
    }
    if let Some(t) = s.iter().find(|t| t.iter().any(|&e| e as usize >= inst.domain.size())) {
        return invalid(format!("restriction tuple {t:?} leaves the domain"));
    }
    // Number of universal variables before each position.
    let mut before = Vec::with_capacity(inst.prefix.len());
    let mut k = 0;
    for (q, _) in &inst.prefix {
        before.push(k);
        if *q == Quantifier::Forall {
            k += 1;
        }
    }

    let mut csp = CspInstance::new(inst.domain.clone());
    let mut table_vars: BTreeMap<(usize, Vec<Elem>), usize> = BTreeMap::new();
    let mut const_vars: BTreeMap<Elem, usize> = BTreeMap::new();
    let compiled = inst.compiled();
    let rels: Vec<_> = compiled.iter().map(|(r, _)| Arc::new((*r).clone())).collect();

    let plays: BTreeSet<&Vec<Elem>> = s.iter().collect();
    for play in plays {
        let mut var_at = Vec::with_capacity(inst.prefix.len());
        for (pos, (q, name)) in inst.prefix.iter().enumerate() {
            let v = match q {
                Quantifier::Forall => {
                    let a = play[before[pos]];
                    *const_vars.entry(a).or_insert_with(|| {
                        let v = csp.add_var(format!("={}", inst.domain.label(a)));
                        csp.restrict(v, 1 << a);
                        v
                    })
                }
                Quantifier::Exists => {
                    let key = (pos, play[..before[pos]].to_vec());
                    *table_vars.entry(key).or_insert_with_key(|(_, pre)| {
                        csp.add_var(format!("{name}@{}", inst.domain.format_tuple(pre)))
                    })
                }
            };
            var_at.push(v);
        }
        for (ci, (_, scope)) in compiled.iter().enumerate() {
            csp.add_constraint(rels[ci].clone(), scope.iter().map(|&p| var_at[p]).collect())?;
        }
    }
    Ok(solve_csp(&csp).is_some())
}

/// All tuples of `A^n` with at most `k` positions where consecutive entries differ.
pub fn switch_bounded_set(n: usize, k: usize, d: &Domain) -> Vec<Vec<Elem>> {
    all_tuples(d.size(), n)
        .filter(|t| t.windows(2).filter(|w| w[0] != w[1]).count() <= k)
        .collect()
}

/// Diagnostic for false instances: starting from all universal plays, drops
/// plays one at a time (lexicographic order) while the restricted sentence
/// stays false. Returns `None` for true instances. No minimality claim.
pub fn greedy_restriction_set(inst: &QcspInstance) -> Result<Option<Vec<Vec<Elem>>>> {
    if eval_qcsp(inst, false)?.truth {
        return Ok(None);
    }
    let mut s: Vec<Vec<Elem>> = all_tuples(inst.domain.size(), inst.universals().len()).collect();
    let mut i = 0;
    while i < s.len() {
        let removed = s.remove(i);
        if eval_restricted(inst, &s)? {
            s.insert(i, removed);
            i += 1;
        }
    }
    Ok(Some(s))
}
