use crate::error::{invalid, Error, Result};
use crate::relcore::{all_tuples, Domain, Elem, ParamRelation, Relation, Signature};

/// Length of the z-group shared by a bundle: `|A|` when any member depends
/// on z, otherwise 0.
pub(crate) fn bundle_zlen(rels: &[&ParamRelation]) -> usize {
    rels.iter().map(|r| r.sig().z).max().unwrap_or(0)
}

pub(crate) fn alpha_index(n: usize, alpha: &[Elem]) -> usize {
    alpha.iter().fold(0usize, |acc, &e| acc * n + e as usize)
}

/// Indices of the constant tuples `(a,…,a)` among `A^m` in lexicographic order.
pub(crate) fn constant_indices(n: usize, m: usize) -> Vec<usize> {
    (0..n).map(|a| alpha_index(n, &vec![a as Elem; m])).collect()
}

pub(crate) fn intersect_all<'a>(domain: &Domain, arity: usize, rels: impl IntoIterator<Item = &'a Relation>) -> Relation {
    let mut acc = Relation::full(domain, arity).expect("value slice fits");
    for r in rels {
        acc = acc.intersect(r);
    }
    acc
}

/// `R^{x₁…x_{|A|}} = ⋀_{i ∈ [|A|]^k} Q^{x_{i₁}…x_{i_k}}` applied to a list of
/// α-slices of width `k`.
pub(crate) fn kappa_expand_slices(domain: &Domain, k: usize, slices: &[Relation]) -> Vec<Relation> {
    let n = domain.size();
    let maps: Vec<Vec<Elem>> = all_tuples(n, k).collect();
    all_tuples(n, n)
        .map(|x| {
            let arity = slices[0].arity();
            intersect_all(
                domain,
                arity,
                maps.iter().map(|i| {
                    let a: Vec<Elem> = i.iter().map(|&j| x[j as usize]).collect();
                    &slices[alpha_index(n, &a)]
                }),
            )
        })
        .collect()
}

/// Reassembles a relation with a z-group of length `zlen` from one relation
/// per z-tuple (lexicographic), each covering the remaining coordinates.
pub(crate) fn from_z_parts(domain: &Domain, sig: Signature, parts: &[Relation]) -> Result<ParamRelation> {
    let n = domain.size();
    let rest = sig.arity() - sig.z;
    if parts.len() != n.pow(sig.z as u32) || parts.iter().any(|p| p.arity() != rest) {
        return Err(Error::Internal("z-parts do not match the signature".into()));
    }
    let base = Relation::from_fn(domain, sig.arity(), |t| {
        let zi = alpha_index(n, &t[..sig.z]);
        parts[zi].contains(&t[sig.z..])
    })?;
    ParamRelation::new(base, sig)
}

/// Concatenates α-slices into one relation over `(α, value)`.
pub(crate) fn stack_alpha(domain: &Domain, alpha: usize, slices: &[Relation]) -> Result<Relation> {
    let value = slices[0].arity();
    let n = domain.size();
    Relation::from_fn(domain, alpha + value, |t| slices[alpha_index(n, &t[..alpha])].contains(&t[alpha..]))
}

pub(crate) fn same_domain(rels: &[&ParamRelation]) -> Result<()> {
    let d = rels[0].domain();
    if rels.iter().any(|r| !r.domain().same_size(d)) {
        return invalid("relations live over different domains");
    }
    Ok(())
}

pub(crate) fn check_sig(r: &ParamRelation, name: &str, delta: usize, alpha: Option<usize>, value: usize) -> Result<()> {
    let s = r.sig();
    let alpha_ok = match alpha {
        Some(a) => s.alpha == a,
        None => s.alpha >= 1,
    };
    if s.delta != delta || !alpha_ok || s.value != value {
        let want_alpha = alpha.map_or("m≥1".to_string(), |a| a.to_string());
        return Err(Error::InvalidArgument(format!(
            "{name} has signature (z={}, δ={}, α={}, value={}); expected δ={delta}, α={want_alpha}, value={value}",
            s.z, s.delta, s.alpha, s.value
        )));
    }
    Ok(())
}

/// `z=(…) δ=(…) α=(…)` for witnesses; empty groups are left out.
pub(crate) fn at(domain: &Domain, z: &[Elem], delta: &[Elem], alpha: Option<&[Elem]>) -> String {
    let zs = if z.is_empty() { String::new() } else { domain.format_tuple(z) };
    let mut parts = vec![format!("z=({zs})")];
    if !delta.is_empty() {
        parts.push(format!("δ=({})", domain.format_tuple(delta)));
    }
    if let Some(a) = alpha {
        parts.push(format!("α=({})", domain.format_tuple(a)));
    }
    parts.join(" ")
}

/// `s` is a nonempty class of `e`: every member's row equals `s`.
pub(crate) fn is_class(s: &Relation, e: &Relation) -> bool {
    !s.is_empty() && s.elems().into_iter().all(|x| e.class_of(x) == *s)
}

/// Length of the shortest odd closed walk in `r`, if any. Only lengths up to
/// `|A|` need to be tried.
pub fn odd_girth(r: &Relation) -> Option<usize> {
    let n = r.size();
    let mut walk = r.clone();
    let square = crate::relcore::compose(r, r).expect("binary");
    let mut len = 1;
    while len <= n.max(1) {
        if walk.has_loop() {
            return Some(len);
        }
        walk = crate::relcore::compose(&walk, &square).expect("binary");
        len += 2;
    }
    None
}
