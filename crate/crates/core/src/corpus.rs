//! Seeded random instance generators.
//!
//! Every corpus is drawn from SplitMix64 (Steele, Lea and Flood, 2014) seeded
//! with the user's `u64` seed, through `rand`'s uniform sampling. The same
//! seed always yields the same corpus.

use rand::{Rng, SeedableRng};
pub use rand_xoshiro::SplitMix64;

use crate::gamesolver::CspInstance;
use crate::mightytuples::{satisfies_all, Quadruple, PROPS_III};
use crate::qcspmodel::{Constraint, Library, QcspInstance, Quantifier};
use crate::reductions::gamma6;
use crate::relcore::{Domain, ParamRelation, Relation, Signature};

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Each tuple is included independently with probability `p`.
pub fn random_relation(rng: &mut SplitMix64, d: &Domain, arity: usize, p: f64) -> Relation {
    Relation::from_fn(d, arity, |_| rng.gen_bool(p)).expect("small relation")
}

/// A relation of arity `2n+1` for the induced-instance experiments, with a
/// density drawn from `[0.35, 0.95]`.
pub fn random_game_relation(rng: &mut SplitMix64, d: &Domain, n: usize) -> Relation {
    let p = rng.gen_range(0.35..0.95);
    random_relation(rng, d, 2 * n + 1, p)
}

fn random_prefix(rng: &mut SplitMix64, univ: usize, exist: usize) -> Vec<(Quantifier, String)> {
    let mut qs: Vec<Quantifier> = std::iter::repeat_n(Quantifier::Forall, univ)
        .chain(std::iter::repeat_n(Quantifier::Exists, exist))
        .collect();
    for i in (1..qs.len()).rev() {
        let j = rng.gen_range(0..=i);
        qs.swap(i, j);
    }
    let (mut nx, mut ny) = (0, 0);
    qs.into_iter()
        .map(|q| match q {
            Quantifier::Forall => {
                nx += 1;
                (q, format!("x{nx}"))
            }
            Quantifier::Exists => {
                ny += 1;
                (q, format!("y{ny}"))
            }
        })
        .collect()
}

fn random_constraints(
    rng: &mut SplitMix64,
    prefix: &[(Quantifier, String)],
    names: &[(String, usize)],
    count: usize,
) -> Vec<Constraint> {
    (0..count)
        .map(|_| {
            let (name, arity) = &names[rng.gen_range(0..names.len())];
            let vars: Vec<String> = (0..*arity)
                .map(|_| prefix[rng.gen_range(0..prefix.len())].1.clone())
                .collect();
            Constraint::new(name.clone(), vars)
        })
        .collect()
}

/// A random instance over `size` elements: a shuffled prefix of up to
/// `max_univ` universal and up to `max_exist` (at least one) existential
/// variables, and up to `max_cons` constraints over three random relations of
/// arities 1, 2 and 3.
pub fn random_qcsp(
    rng: &mut SplitMix64,
    size: usize,
    max_univ: usize,
    max_exist: usize,
    max_cons: usize,
) -> QcspInstance {
    let d = Domain::new(size).expect("valid size");
    let univ = rng.gen_range(0..=max_univ);
    let exist = rng.gen_range(1..=max_exist.max(1));
    let prefix = random_prefix(rng, univ, exist);
    let mut library = Library::new();
    let mut names = Vec::new();
    for arity in 1..=3usize {
        let p = rng.gen_range(0.3..0.9);
        library.insert(format!("R{arity}"), random_relation(rng, &d, arity, p));
        names.push((format!("R{arity}"), arity));
    }
    let count = rng.gen_range(1..=max_cons.max(1));
    let constraints = random_constraints(rng, &prefix, &names, count);
    QcspInstance::new(d, library, prefix, constraints).expect("well-formed by construction")
}

/// A random instance over the six-element language with at most two
/// universal, one or two existential variables and one to three constraints.
pub fn random_gamma6_instance(rng: &mut SplitMix64) -> QcspInstance {
    let lang = gamma6();
    let univ = rng.gen_range(0..=2);
    let exist = rng.gen_range(1..=2);
    let prefix = random_prefix(rng, univ, exist);
    let names: Vec<(String, usize)> = lang.library.iter().map(|(n, r)| (n.clone(), r.arity())).collect();
    let count = rng.gen_range(1..=3);
    let constraints = random_constraints(rng, &prefix, &names, count);
    QcspInstance::new(lang.domain, lang.library, prefix, constraints).expect("well-formed by construction")
}

/// A random CSP over at most three elements and at most six variables, with
/// occasional domain restrictions.
pub fn random_csp(rng: &mut SplitMix64) -> CspInstance {
    let d = Domain::new(rng.gen_range(2..=3)).expect("valid size");
    let nvars = rng.gen_range(1..=6);
    let mut csp = CspInstance::new(d.clone());
    for i in 0..nvars {
        let v = csp.add_var(format!("v{i}"));
        if rng.gen_bool(0.2) {
            let m = rng.gen_range(0..(1u64 << d.size()));
            csp.restrict(v, m);
        }
    }
    for _ in 0..rng.gen_range(0..=6) {
        let arity = rng.gen_range(1..=3usize);
        let p = rng.gen_range(0.3..0.9);
        let r = random_relation(rng, &d, arity, p);
        let scope = (0..arity).map(|_| rng.gen_range(0..nvars)).collect();
        csp.add_constraint(r.into(), scope).expect("well-formed");
    }
    csp
}

fn random_unary_param(rng: &mut SplitMix64, d: &Domain) -> ParamRelation {
    let z = if rng.gen_bool(0.5) { d.size() } else { 0 };
    let p = rng.gen_range(0.3..0.9);
    ParamRelation::from_fn(d, Signature::new(z, 0, 0, 1), |_, _, _, _| rng.gen_bool(p)).expect("small relation")
}

/// A random quadruple over `size` elements: R of α-width 1 or 2, each
/// member depending on z with probability 1/2.
pub fn random_quadruple(rng: &mut SplitMix64, size: usize) -> Quadruple {
    let d = Domain::new(size).expect("valid size");
    let z = if rng.gen_bool(0.5) { size } else { 0 };
    let k = rng.gen_range(1..=2);
    let p = rng.gen_range(0.4..0.95);
    let r = ParamRelation::from_fn(&d, Signature::new(z, 0, k, 2), |_, _, _, _| rng.gen_bool(p)).expect("small relation");
    let dd = random_unary_param(rng, &d);
    let b = random_unary_param(rng, &d);
    let c = random_unary_param(rng, &d);
    Quadruple::new(r, dd, b, c).expect("shapes agree")
}

/// Rejection-samples a quadruple with full D satisfying the properties of a
/// mighty tuple III.
pub fn random_iii_quadruple(rng: &mut SplitMix64, size: usize) -> Quadruple {
    loop {
        let q = random_quadruple(rng, size);
        let q = Quadruple::from_iii(q.r, q.b, q.c).expect("shapes agree");
        if satisfies_all(&q, &PROPS_III).expect("valid quadruple") {
            return q;
        }
    }
}
