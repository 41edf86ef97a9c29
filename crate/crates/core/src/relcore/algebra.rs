use super::domain::Elem;
use super::relation::Relation;
use crate::error::{invalid, Result};

fn check_binary(r: &Relation, what: &str) -> Result<()> {
    if r.arity() != 2 {
        return invalid(format!("{what}: expected a binary relation, got arity {}", r.arity()));
    }
    Ok(())
}

fn check_unary(r: &Relation, what: &str) -> Result<()> {
    if r.arity() != 1 {
        return invalid(format!("{what}: expected a unary relation, got arity {}", r.arity()));
    }
    Ok(())
}

fn check_same_domain(a: &Relation, b: &Relation, what: &str) -> Result<()> {
    if !a.domain().same_size(b.domain()) {
        return invalid(format!(
            "{what}: domain mismatch ({} vs {})",
            a.size(),
            b.size()
        ));
    }
    Ok(())
}

/// Successor lists of a binary relation.
fn adjacency(s: &Relation) -> Vec<u64> {
    let mut adj = vec![0u64; s.size()];
    for t in s.iter() {
        adj[t[0] as usize] |= 1 << t[1];
    }
    adj
}

fn from_adjacency(template: &Relation, adj: &[u64]) -> Relation {
    let mut r = Relation::empty(template.domain(), 2).expect("binary fits");
    for (x, &row) in adj.iter().enumerate() {
        for y in 0..adj.len() {
            if row >> y & 1 == 1 {
                r.insert(&[x as Elem, y as Elem]);
            }
        }
    }
    r
}

fn compose_adj(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|&row| {
            let mut out = 0u64;
            for (z, &next) in b.iter().enumerate() {
                if row >> z & 1 == 1 {
                    out |= next;
                }
            }
            out
        })
        .collect()
}

/// `S₁ + S₂ = {(x,y) : ∃z S₁(x,z) ∧ S₂(z,y)}`.
pub fn compose(s1: &Relation, s2: &Relation) -> Result<Relation> {
    check_binary(s1, "compose")?;
    check_binary(s2, "compose")?;
    check_same_domain(s1, s2, "compose")?;
    Ok(from_adjacency(s1, &compose_adj(&adjacency(s1), &adjacency(s2))))
}

/// `S₁ − S₂ = {(x,y) : ∃z S₁(x,z) ∧ S₂(y,z)}`.
pub fn compose_inv(s1: &Relation, s2: &Relation) -> Result<Relation> {
    check_binary(s1, "compose_inv")?;
    check_binary(s2, "compose_inv")?;
    check_same_domain(s1, s2, "compose_inv")?;
    compose(s1, &s2.converse())
}

/// `m·S`, the m-fold composition.
pub fn repeat(s: &Relation, m: usize) -> Result<Relation> {
    check_binary(s, "repeat")?;
    if m == 0 {
        return invalid("repeat: m must be positive");
    }
    let base = adjacency(s);
    let mut acc = base.clone();
    for _ in 1..m {
        acc = compose_adj(&acc, &base);
    }
    Ok(from_adjacency(s, &acc))
}

/// `|A|!·|A|²`, the repetition count after which `N·R` is idempotent.
pub fn factorial_exponent(size: usize) -> usize {
    (1..=size).product::<usize>() * size * size
}

/// `U + S = {x : ∃z U(z) ∧ S(z,x)}`.
pub fn unary_compose(u: &Relation, s: &Relation) -> Result<Relation> {
    check_unary(u, "unary_compose")?;
    check_binary(s, "unary_compose")?;
    check_same_domain(u, s, "unary_compose")?;
    let adj = adjacency(s);
    let m = u.elems().iter().fold(0u64, |m, &z| m | adj[z as usize]);
    Ok(Relation::from_mask(u.domain(), m))
}

/// `U − S = {x : ∃z U(z) ∧ S(x,z)}`.
pub fn unary_compose_inv(u: &Relation, s: &Relation) -> Result<Relation> {
    unary_compose(u, &s.converse())
}

/// `S + U = {x : ∃z S(x,z) ∧ U(z)}`.
pub fn rel_then_unary(s: &Relation, u: &Relation) -> Result<Relation> {
    unary_compose(u, &s.converse())
}

/// `R₁ ⩔ R₂`: the least equivalence relation on `d` containing both inputs,
/// computed by alternating compositions until nothing changes.
pub fn join_equiv(r1: &Relation, r2: &Relation, d: &Relation) -> Result<Relation> {
    check_binary(r1, "join_equiv")?;
    check_binary(r2, "join_equiv")?;
    check_unary(d, "join_equiv")?;
    check_same_domain(r1, r2, "join_equiv")?;
    check_same_domain(r1, d, "join_equiv")?;
    if !r1.is_equivalence_on(d) || !r2.is_equivalence_on(d) {
        return invalid("join_equiv: inputs must be equivalence relations on d");
    }
    let mut cur = r1.clone();
    loop {
        let next = compose(&compose(&cur, r2)?, r1)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// The least symmetric transitive relation containing `r`. When `r` is
/// reflexive on `d` this equals `R−R+R−⋯` run to a fixpoint.
pub fn trans_sym_closure(r: &Relation, d: &Relation) -> Result<Relation> {
    check_binary(r, "trans_sym_closure")?;
    check_unary(d, "trans_sym_closure")?;
    check_same_domain(r, d, "trans_sym_closure")?;
    let mut adj = adjacency(&r.union(&r.converse()));
    loop {
        let next: Vec<u64> = compose_adj(&adj, &adj)
            .iter()
            .zip(&adj)
            .map(|(a, b)| a | b)
            .collect();
        if next == adj {
            return Ok(from_adjacency(r, &adj));
        }
        adj = next;
    }
}

/// Image of `r` under restriction to `coords`, in that order. Coordinates may
/// repeat.
pub fn project(r: &Relation, coords: &[usize]) -> Result<Relation> {
    if let Some(&c) = coords.iter().find(|&&c| c >= r.arity()) {
        return invalid(format!("project: coordinate {c} out of range for arity {}", r.arity()));
    }
    let mut out = Relation::empty(r.domain(), coords.len())?;
    for t in r.iter() {
        let p: Vec<Elem> = coords.iter().map(|&c| t[c]).collect();
        out.insert(&p);
    }
    Ok(out)
}
