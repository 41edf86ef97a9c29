use std::collections::BTreeSet;

use proptest::prelude::*;
use qcsp_core::error::Error;
use qcsp_core::mightytuples::*;
use qcsp_core::relcore::{all_tuples, compose, Domain, Elem, ParamRelation, Relation, Signature};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

type Set1 = BTreeSet<Elem>;
type Set2 = BTreeSet<(Elem, Elem)>;

fn dom(n: usize) -> Domain {
    Domain::new(n).unwrap()
}

fn unary(d: &Domain, xs: &[Elem]) -> Relation {
    Relation::unary(d, xs.iter().copied()).unwrap()
}

fn plain(r: Relation) -> ParamRelation {
    ParamRelation::plain(r)
}

// ---- set-based oracle, reading tuples straight from the base relation ----

fn params_of(p: &ParamRelation, z: &[Elem], delta: &[Elem], alpha: &[Elem]) -> Vec<Elem> {
    let s = p.sig();
    let mut v = Vec::new();
    if s.z > 0 {
        v.extend_from_slice(z);
    }
    v.extend_from_slice(delta);
    v.extend_from_slice(alpha);
    v
}

fn o_unary(p: &ParamRelation, z: &[Elem]) -> Set1 {
    let pre = params_of(p, z, &[], &[]);
    p.base().iter().filter(|t| t[..pre.len()] == pre[..]).map(|t| t[pre.len()]).collect()
}

fn o_binary(p: &ParamRelation, z: &[Elem], alpha: &[Elem]) -> Set2 {
    let pre = params_of(p, z, &[], alpha);
    p.base()
        .iter()
        .filter(|t| t[..pre.len()] == pre[..])
        .map(|t| (t[pre.len()], t[pre.len() + 1]))
        .collect()
}

fn o_all(p: &ParamRelation, z: &[Elem], n: usize) -> Set2 {
    let m = p.sig().alpha;
    let mut it = (0..n as Elem).map(|a| o_binary(p, z, &vec![a; m]));
    let first = it.next().unwrap();
    it.fold(first, |acc, s| acc.intersection(&s).copied().collect())
}

fn o_allall(p: &ParamRelation, z: &[Elem], n: usize) -> Set2 {
    let mut it = all_tuples(n, p.sig().alpha).map(|a| o_binary(p, z, &a));
    let first = it.next().unwrap();
    it.fold(first, |acc, s| acc.intersection(&s).copied().collect())
}

fn o_img(u: &Set1, s: &Set2) -> Set1 {
    s.iter().filter(|(a, _)| u.contains(a)).map(|&(_, b)| b).collect()
}

fn o_pre(s: &Set2, u: &Set1) -> Set1 {
    s.iter().filter(|(_, b)| u.contains(b)).map(|&(a, _)| a).collect()
}

fn o_equiv_on(s: &Set2, d: &Set1) -> bool {
    let on = s.iter().all(|(a, b)| d.contains(a) && d.contains(b));
    let refl = d.iter().all(|&x| s.contains(&(x, x)));
    let sym = s.iter().all(|&(a, b)| s.contains(&(b, a)));
    let trans = s.iter().all(|&(a, b)| s.iter().filter(|(c, _)| *c == b).all(|&(_, e)| s.contains(&(a, e))));
    on && refl && sym && trans
}

/// Pass/fail per condition for kinds II, III, IV, V with every relation
/// δ-free.
fn oracle(t: &MightyTuple) -> Vec<bool> {
    let n = t.domain().size();
    let zs: Vec<Vec<Elem>> = all_tuples(n, n).collect();
    let q = &t.q;
    let un = |r: &Option<ParamRelation>, z: &[Elem]| o_unary(r.as_ref().unwrap(), z);
    let every = |f: &dyn Fn(&[Elem]) -> bool| zs.iter().all(|z| f(z));
    let some = |f: &dyn Fn(&[Elem]) -> bool| zs.iter().any(|z| f(z));
    let alphas: Vec<Vec<Elem>> = all_tuples(n, q.sig().alpha).collect();
    match t.kind {
        MightyKind::II => vec![
            every(&|z| !un(&t.b, z).is_empty() && !un(&t.c, z).is_empty()),
            every(&|z| alphas.iter().all(|a| o_equiv_on(&o_binary(q, z, a), &un(&t.d, z)))),
            every(&|z| {
                let aa = o_allall(q, z, n);
                o_img(&un(&t.b, z), &aa) == un(&t.b, z) && o_img(&un(&t.c, z), &aa) == un(&t.c, z)
            }),
            every(&|z| {
                let a = o_all(q, z, n);
                o_img(&un(&t.b, z), &a) == un(&t.d, z) && o_img(&un(&t.c, z), &a) == un(&t.d, z)
            }),
            some(&|z| un(&t.b, z).is_disjoint(&un(&t.c, z))),
        ],
        MightyKind::III => vec![
            every(&|z| !un(&t.b, z).is_empty() && !un(&t.c, z).is_empty()),
            every(&|z| o_img(&un(&t.b, z), &o_allall(q, z, n)) == un(&t.b, z)),
            every(&|z| o_pre(&o_allall(q, z, n), &un(&t.c, z)) == un(&t.c, z)),
            every(&|z| {
                let (b, c) = (un(&t.b, z), un(&t.c, z));
                o_all(q, z, n).iter().any(|(x, y)| b.contains(x) && c.contains(y))
            }),
            some(&|z| un(&t.b, z).is_disjoint(&un(&t.c, z))),
        ],
        MightyKind::IV => vec![
            every(&|z| {
                let (b, c, d) = (un(&t.b, z), un(&t.c, z), un(&t.d, z));
                !b.is_empty() && !c.is_empty() && b.is_subset(&d) && c.is_subset(&d)
            }),
            every(&|z| o_img(&un(&t.b, z), &o_allall(q, z, n)) == un(&t.b, z)),
            every(&|z| o_img(&un(&t.b, z), &o_all(q, z, n)) == un(&t.d, z)),
            every(&|z| o_img(&un(&t.d, z), &o_allall(q, z, n)) == un(&t.d, z)),
            some(&|z| un(&t.b, z).is_disjoint(&un(&t.c, z))),
        ],
        MightyKind::V => vec![
            every(&|z| {
                let a = o_all(q, z, n);
                un(&t.d, z).iter().all(|&x| a.contains(&(x, x)))
            }),
            every(&|z| {
                let aa = o_allall(q, z, n);
                let p1: Set1 = aa.iter().map(|p| p.0).collect();
                let p2: Set1 = aa.iter().map(|p| p.1).collect();
                p1 == un(&t.d, z) && p2 == un(&t.d, z)
            }),
            some(&|z| !o_allall(q, z, n).iter().any(|(a, b)| a == b)),
        ],
        _ => unreachable!(),
    }
}

fn random_param(rng: &mut Xoshiro256PlusPlus, d: &Domain, sig: Signature, density: f64) -> ParamRelation {
    ParamRelation::from_fn(d, sig, |_, _, _, _| rng.gen_bool(density)).unwrap()
}

fn random_tuple(rng: &mut Xoshiro256PlusPlus, kind: MightyKind, n: usize) -> MightyTuple {
    let d = dom(n);
    let zq = if rng.gen_bool(0.5) { n } else { 0 };
    let m = rng.gen_range(1..=2);
    let dens = rng.gen_range(0.5..0.95);
    let q = random_param(rng, &d, Signature::new(zq, 0, m, 2), dens);
    let un = |rng: &mut Xoshiro256PlusPlus| {
        let z = if rng.gen_bool(0.5) { n } else { 0 };
        let dens = rng.gen_range(0.3..0.9);
        random_param(rng, &d, Signature::new(z, 0, 0, 1), dens)
    };
    match kind {
        MightyKind::II => MightyTuple::kind_ii(q, un(rng), un(rng), un(rng)).unwrap(),
        MightyKind::III => MightyTuple::kind_iii(q, un(rng), un(rng)).unwrap(),
        MightyKind::IV => MightyTuple::kind_iv(q, un(rng), un(rng), un(rng)).unwrap(),
        _ => {
            let mut dd = un(rng);
            while dd.base().is_empty() {
                dd = un(rng);
            }
            MightyTuple::kind_v(q, dd).unwrap()
        }
    }
}

#[test]
fn checker_matches_set_oracle() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(41);
    for kind in [MightyKind::II, MightyKind::III, MightyKind::IV, MightyKind::V] {
        let mut passes = 0;
        for _ in 0..150 {
            let t = random_tuple(&mut rng, kind, 2);
            let rep = check_mighty(&t).unwrap();
            let got: Vec<bool> = rep.conditions.iter().map(|c| c.pass).collect();
            assert_eq!(got, oracle(&t), "kind {kind}");
            assert_eq!(rep.conditions.len(), kind.condition_count());
            passes += rep.passed() as usize;
        }
        let _ = passes;
    }
}

fn classification_2() -> MightyTuple {
    let d = dom(2);
    let eq = Relation::from_fn(&d, 2, |t| t[0] == t[1]).unwrap();
    tuple_ii_from_classification(&eq, &Relation::full(&d, 1).unwrap(), &unary(&d, &[0]), &unary(&d, &[1])).unwrap()
}

fn gamma4_data() -> (Domain, Relation, Relation, Relation, Relation) {
    let d = Domain::with_labels(&["+", "-", "0", "1"]).unwrap();
    let (p, m, o, i) = (d.elem("+"), d.elem("-"), d.elem("0"), d.elem("1"));
    let dd = unary(&d, &[p, m]);
    let sigma = Relation::from_fn(&d, 2, |t| t[0] == t[1] && dd.contains(&[t[0]])).unwrap();
    let b = unary(&d, &[p, m, i]);
    let c = unary(&d, &[p, m, o]);
    (d, sigma, dd, b, c)
}

#[test]
fn classification_two_elements() {
    let t = classification_2();
    let rep = check_mighty(&t).unwrap();
    assert!(rep.passed(), "{:?}", rep.lines());
    assert_eq!(rep.conditions.len(), 5);
    let d = dom(2);
    let eq = Relation::from_fn(&d, 2, |t| t[0] == t[1]).unwrap();
    assert_eq!(t.q.q_forallforall().unwrap().into_base(), eq);
    assert!(t.q.q_forall().unwrap().into_base().is_full());
    // B′ and C′ are the classes of b = 1 and c = 2.
    assert_eq!(t.b.as_ref().unwrap().base(), &unary(&d, &[0]));
    assert_eq!(t.c.as_ref().unwrap().base(), &unary(&d, &[1]));
    // Q^{x1,x2}: full when x1 ∈ B and x2 ∈ C, equality otherwise... except
    // both gates open at once compose to D×D as well.
    for x1 in 0..2u8 {
        for x2 in 0..2u8 {
            let s = t.q.slice(&[], &[], &[x1, x2]);
            let open = x1 == 0 || x2 == 1;
            assert_eq!(s.is_full(), open, "x = ({x1},{x2})");
        }
    }
}

#[test]
fn classification_gamma4() {
    let (_, sigma, dd, b, c) = gamma4_data();
    let t = tuple_ii_from_classification(&sigma, &dd, &b, &c).unwrap();
    let rep = check_mighty(&t).unwrap();
    assert!(rep.passed(), "{:?}", rep.lines());
    assert_eq!(t.q.q_forallforall().unwrap().into_base(), sigma);
    assert_eq!(t.q.q_forall().unwrap().into_base(), Relation::product(&dd, &dd));
}

#[test]
fn classification_preconditions() {
    let d = dom(3);
    let eq = Relation::from_fn(&d, 2, |t| t[0] == t[1]).unwrap();
    let full = Relation::full(&d, 1).unwrap();
    let pre = |r: Result<MightyTuple, Error>, what: &str| match r {
        Err(Error::Precondition(m)) => assert!(m.contains(what), "{m}"),
        other => panic!("expected precondition error about {what}, got {other:?}"),
    };
    pre(tuple_ii_from_classification(&eq, &full, &unary(&d, &[0]), &unary(&d, &[1])), "B ∪ C");
    pre(tuple_ii_from_classification(&eq, &full, &full, &unary(&d, &[1])), "B must be a proper");
    pre(tuple_ii_from_classification(&eq, &full, &unary(&d, &[0, 1]), &full), "C must be a proper");
    let not_equiv = Relation::from_tuples(&d, 2, [[0u8, 1u8]]).unwrap();
    pre(tuple_ii_from_classification(&not_equiv, &full, &unary(&d, &[0]), &unary(&d, &[1, 2])), "equivalence");
    let one = unary(&d, &[2]);
    let eq1 = Relation::from_tuples(&d, 2, [[2u8, 2u8]]).unwrap();
    pre(tuple_ii_from_classification(&eq1, &one, &unary(&d, &[0]), &unary(&d, &[1, 2])), "inequivalent");
}

#[test]
fn kind_ii_fails_on_equal_b_c() {
    let d = dom(2);
    let q = ParamRelation::new(Relation::full(&d, 3).unwrap(), Signature::new(0, 0, 1, 2)).unwrap();
    let all = plain(Relation::full(&d, 1).unwrap());
    let b = plain(unary(&d, &[0, 1]));
    let t = MightyTuple::kind_ii(q, all, b.clone(), b).unwrap();
    let rep = check_mighty(&t).unwrap();
    assert_eq!(rep.failed(), vec![5]);
    assert!(rep.condition(5).witness.contains("no z"));
    assert_eq!(rep.lines()[4], format!("cond5 FAIL {}", rep.condition(5).witness));
}

fn swap_v() -> MightyTuple {
    let d = dom(2);
    let q = ParamRelation::from_fn(&d, Signature::new(0, 0, 2, 2), |_, _, a, v| a[0] == a[1] || v[0] != v[1]).unwrap();
    MightyTuple::kind_v(q, plain(Relation::full(&d, 1).unwrap())).unwrap()
}

#[test]
fn kind_v_examples() {
    let t = swap_v();
    assert!(check_mighty(&t).unwrap().passed());
    // Q^∀∀ with a loop at every z.
    let d = dom(2);
    let q = ParamRelation::from_fn(&d, Signature::new(2, 0, 2, 2), |z, _, a, v| {
        a[0] == a[1] || v[0] != v[1] || v[0] == z[0]
    })
    .unwrap();
    let t = MightyTuple::kind_v(q, plain(Relation::full(&d, 1).unwrap())).unwrap();
    let rep = check_mighty(&t).unwrap();
    assert!(!rep.condition(3).pass);
    assert!(rep.condition(1).pass);
}

#[test]
fn signature_mismatch_is_an_error() {
    let d = dom(2);
    let q = ParamRelation::new(Relation::full(&d, 3).unwrap(), Signature::new(0, 0, 1, 2)).unwrap();
    let bin = plain(Relation::full(&d, 2).unwrap());
    assert!(MightyTuple::kind_ii(q.clone(), bin.clone(), bin.clone(), bin).is_err());
    // V′ needs α-width |A|.
    let un = plain(Relation::full(&d, 1).unwrap());
    assert!(MightyTuple::kind_v_prime(q, un, plain(Relation::nullary(&d, true))).is_err());
}

#[test]
fn v_to_prime() {
    let t = swap_v();
    let p = tuple_to_prime(&t).unwrap();
    assert_eq!(p.kind, MightyKind::VPrime);
    assert!(check_mighty(&p).unwrap().passed());
    let d = dom(2);
    let rk = p.q.slice(&[], &[], &d.kappa());
    assert_eq!(rk, t.q.q_forallforall().unwrap().into_base());
    assert_eq!(rk, p.q.q_forallforall().unwrap().into_base());
    assert_eq!(p.q.q_forall().unwrap(), t.q.q_forall().unwrap());
}

#[test]
fn prime_rejects_failing_input() {
    let d = dom(2);
    let q = ParamRelation::new(Relation::full(&d, 4).unwrap(), Signature::new(0, 0, 2, 2)).unwrap();
    let t = MightyTuple::kind_v(q, plain(Relation::full(&d, 1).unwrap())).unwrap();
    assert!(matches!(tuple_to_prime(&t), Err(Error::Precondition(_))));
    assert!(tuple_to_prime(&classification_2()).is_err());
}

fn random_quadruple(rng: &mut Xoshiro256PlusPlus, n: usize) -> Quadruple {
    let d = dom(n);
    let zr = if rng.gen_bool(0.5) { n } else { 0 };
    let k = rng.gen_range(1..=2);
    let dens = rng.gen_range(0.4..0.95);
    let r = random_param(rng, &d, Signature::new(zr, 0, k, 2), dens);
    let un = |rng: &mut Xoshiro256PlusPlus| {
        let z = if rng.gen_bool(0.5) { n } else { 0 };
        let dens = rng.gen_range(0.3..0.9);
        random_param(rng, &d, Signature::new(z, 0, 0, 1), dens)
    };
    let dd = un(rng);
    Quadruple::new(r, dd, un(rng), un(rng)).unwrap()
}

fn iii_samples(seed: u64, count: usize) -> Vec<Quadruple> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let q = random_quadruple(&mut rng, 2);
        let q = Quadruple::from_iii(q.r, q.b, q.c).unwrap();
        if satisfies_all(&q, &PROPS_III).unwrap() {
            out.push(q);
        }
    }
    out
}

#[test]
fn property_examples() {
    let d = dom(2);
    let full_r = ParamRelation::new(Relation::full(&d, 3).unwrap(), Signature::new(0, 0, 1, 2)).unwrap();
    let b = plain(unary(&d, &[0]));
    let q = Quadruple::from_iii(full_r, b.clone(), b).unwrap();
    assert!(check_quadruple_property(&q, Property::T).unwrap().holds);
    assert!(check_quadruple_property(&q, Property::R).unwrap().holds);
    let e = check_quadruple_property(&q, Property::Empty).unwrap();
    assert!(!e.holds);
    assert!(e.witness.contains("no z"));
    let k = check_quadruple_property(&q, Property::Kappa).unwrap();
    assert!(!k.holds && k.witness.contains("α-width"));

    let (_, sigma, dd, bb, cc) = gamma4_data();
    let t = tuple_ii_from_classification(&sigma, &dd, &bb, &cc).unwrap();
    let g = Quadruple::new(t.q.clone(), t.d.clone().unwrap(), t.b.clone().unwrap(), t.c.clone().unwrap()).unwrap();
    assert!(check_quadruple_property(&g, Property::Un).unwrap().holds);
    assert!(check_quadruple_property(&g, Property::Empty).unwrap().holds);
    assert_eq!(holding_properties(&g, &PROPS_II).unwrap(), PROPS_II.to_vec());
}

#[test]
fn property_names_round_trip() {
    for p in Property::ALL {
        assert_eq!(p.name().parse::<Property>().unwrap(), p);
    }
    assert_eq!("kappa".parse::<Property>().unwrap(), Property::Kappa);
    for c in Claim::ALL {
        assert_eq!(c.name().parse::<Claim>().unwrap(), c);
    }
    for k in MightyKind::ALL {
        assert_eq!(k.name().parse::<MightyKind>().unwrap(), k);
    }
    assert_eq!("Vprime".parse::<MightyKind>().unwrap(), MightyKind::VPrime);
    assert!("VI".parse::<MightyKind>().is_err());
}

#[test]
fn add_kappa_examples() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    for _ in 0..40 {
        let q = random_quadruple(&mut rng, 2);
        let out = apply_claim(&q, Claim::AddKappa).unwrap();
        assert_eq!(out.k(), 2);
        assert!(check_quadruple_property(&out, Property::Kappa).unwrap().holds);
        for (a, b) in q.frames().iter().zip(out.frames()) {
            assert_eq!(b.kappa().unwrap(), a.forallforall());
            assert_eq!(b.forallforall(), a.forallforall());
            assert_eq!(b.forall(), a.forall());
        }
    }
    // α-independent R stays α-independent.
    let d = dom(3);
    let s = Relation::from_tuples(&d, 2, [[0u8, 1u8], [1, 1]]).unwrap();
    let r = ParamRelation::from_fn(&d, Signature::new(0, 0, 1, 2), |_, _, _, v| s.contains(v)).unwrap();
    let un = plain(unary(&d, &[0]));
    let out = apply_claim(&Quadruple::new(r, un.clone(), un.clone(), un).unwrap(), Claim::AddKappa).unwrap();
    assert!(out.frames()[0].alphas.iter().all(|a| *a == s));
    assert!(check_quadruple_property(&out, Property::Kappa).unwrap().holds);
}

/// Composes until the sequence of powers repeats and checks idempotence of
/// the returned power.
fn oracle_idempotent(s: &Relation) -> bool {
    compose(s, s).unwrap() == *s
}

#[test]
fn transitive_claim_yields_t() {
    for q in iii_samples(9, 25) {
        let q = apply_claim(&q, Claim::AddKappa).unwrap();
        let out = apply_claim(&q, Claim::TransitiveIII).unwrap();
        for fr in out.frames() {
            assert!(fr.alphas.iter().all(oracle_idempotent));
        }
    }
}

#[test]
fn claim_preconditions_name_the_missing_property() {
    let d = dom(2);
    let full_r = ParamRelation::new(Relation::full(&d, 3).unwrap(), Signature::new(0, 0, 1, 2)).unwrap();
    let b = plain(unary(&d, &[0]));
    let q = Quadruple::from_iii(full_r, b.clone(), b).unwrap();
    match apply_claim(&q, Claim::TransitiveIII) {
        Err(Error::Precondition(m)) => assert!(m.contains("(∅)") || m.contains("(κ)"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn symmetrization_is_symmetric() {
    // Reach a J-quadruple and apply the symmetrizing claims whose
    // hypotheses hold.
    let mut seen = 0;
    for q in iii_samples(13, 30) {
        let mut cur = q;
        for c in [Claim::AddKappa, Claim::TransitiveIII, Claim::AddSdr] {
            cur = apply_claim(&cur, c).unwrap();
        }
        for c in [Claim::MakeSymmetricOne, Claim::MakeSymmetricTwo] {
            if c.hypothesis().iter().all(|&r| check_requirement(&cur, r).unwrap().0) {
                let out = apply_claim(&cur, c).unwrap();
                assert!(check_quadruple_property(&out, Property::S).unwrap().holds);
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn symmetrize_two_needs_c_plus_and_disjointness_together() {
    // (c+) holds away from z = (0 0) and B ∩ C = ∅ only at z = (0 0).
    let d = dom(2);
    let r = ParamRelation::from_fn(&d, Signature::new(0, 0, 2, 2), |_, _, a, v| a[0] == a[1] || v[0] >= v[1]).unwrap();
    let c = ParamRelation::from_fn(&d, Signature::new(2, 0, 0, 1), |z, _, _, v| v[0] == 1 || z != [0, 0]).unwrap();
    let q = Quadruple::new(r, plain(Relation::full(&d, 1).unwrap()), plain(unary(&d, &[0])), c).unwrap();
    assert!(satisfies_all(&q, &with_bd_cd_cplus()).unwrap());
    assert!(!check_requirement(&q, Requirement::CPlusDisjoint).unwrap().0);
    match apply_claim(&q, Claim::MakeSymmetricTwo) {
        Err(Error::Precondition(m)) => assert!(m.contains("B∩C=∅"), "{m}"),
        other => panic!("{other:?}"),
    }
}

fn with_bd_cd_cplus() -> Vec<Property> {
    let mut v = PROPS_J.to_vec();
    v.extend([Property::Bd, Property::Cd, Property::CPlus]);
    v
}

#[test]
fn derive_from_classification() {
    for t in [classification_2(), {
        let (_, s, dd, b, c) = gamma4_data();
        tuple_ii_from_classification(&s, &dd, &b, &c).unwrap()
    }] {
        let q = Quadruple::from_iii(t.q.clone(), t.b.clone().unwrap(), t.c.clone().unwrap()).unwrap();
        let der = derive_ii_from_iii(&q).unwrap();
        assert!(satisfies_all(&der.quadruple, &props_ii_kappa()).unwrap());
        let one = tuple_i_from_quadruple(&der.quadruple).unwrap();
        let rep = check_mighty(&one).unwrap();
        assert!(rep.passed(), "{:?}", rep.lines());
        assert_eq!(rep.conditions.len(), 6);
    }
}

#[test]
fn derive_random_iii() {
    for q in iii_samples(21, 120) {
        let der = derive_ii_from_iii(&q).unwrap();
        assert!(satisfies_all(&der.quadruple, &props_ii_kappa()).unwrap());
        // Σ|D| never grows once the setup claims are done.
        let tail: Vec<usize> = der.steps.iter().skip(3).map(|s| s.sum_d).collect();
        assert!(tail.windows(2).all(|w| w[1] <= w[0]), "{:?}", der.steps);
        let one = tuple_i_from_quadruple(&der.quadruple).unwrap();
        assert!(check_mighty(&one).unwrap().passed());
        let prime = tuple_to_prime(&one).unwrap();
        assert_eq!(check_mighty(&prime).unwrap().conditions.len(), 7);
        assert!(check_mighty(&prime).unwrap().passed());
    }
}

#[test]
fn derive_is_idle_on_finished_input() {
    let q = iii_samples(3, 1).pop().unwrap();
    let done = derive_ii_from_iii(&q).unwrap().quadruple;
    let again = derive_ii_from_iii(&done).unwrap();
    assert!(again.steps.is_empty());
    assert_eq!(again.quadruple, done);
}

#[test]
fn tuple_i_rejects_incomplete_quadruple() {
    let q = iii_samples(4, 1).pop().unwrap();
    if !satisfies_all(&q, &props_ii_kappa()).unwrap() {
        assert!(matches!(tuple_i_from_quadruple(&q), Err(Error::Precondition(_))));
    }
}

#[test]
fn tuple_i_classes_and_delta() {
    let t = classification_2();
    let q = Quadruple::from_iii(t.q.clone(), t.b.clone().unwrap(), t.c.clone().unwrap()).unwrap();
    let der = derive_ii_from_iii(&q).unwrap().quadruple;
    let one = tuple_i_from_quadruple(&der).unwrap();
    let d = dom(2);
    let delta = one.delta.as_ref().unwrap();
    for z in all_tuples(2, delta.sig().z) {
        assert!(!delta.slice(&z, &[], &[]).is_empty());
    }
    let qaa = one.q.q_forallforall().unwrap();
    for z in all_tuples(2, one.q.sig().z) {
        for uv in delta.slice(&z, &[], &[]).iter() {
            let e = qaa.slice(&z, &uv, &[]);
            let b = one.b.as_ref().unwrap().slice(&z, &uv, &[]);
            let c = one.c.as_ref().unwrap().slice(&z, &uv, &[]);
            assert!(b.contains(&[uv[0]]) && c.contains(&[uv[1]]));
            assert_eq!(e.class_of(uv[0]), b);
            assert_eq!(e.class_of(uv[1]), c);
        }
    }
    let _ = d;
}

fn triangle_v_prime() -> MightyTuple {
    let d = dom(3);
    let q = ParamRelation::from_fn(&d, Signature::new(0, 0, 3, 2), |_, _, a, v| {
        v[0] != v[1] || (a[0] == a[1] && a[1] == a[2])
    })
    .unwrap();
    MightyTuple::kind_v_prime(q, plain(Relation::full(&d, 1).unwrap()), plain(Relation::nullary(&d, true))).unwrap()
}

#[test]
fn odd_girth_examples() {
    let d = dom(3);
    let tri = Relation::from_fn(&d, 2, |t| t[0] != t[1]).unwrap();
    assert_eq!(odd_girth(&tri), Some(3));
    let path = Relation::from_tuples(&d, 2, [[0u8, 1u8], [1, 0], [1, 2], [2, 1]]).unwrap();
    assert_eq!(odd_girth(&path), None);
    let lp = Relation::from_tuples(&d, 2, [[1u8, 1u8]]).unwrap();
    assert_eq!(odd_girth(&lp), Some(1));
}

#[test]
fn symmetric_cases() {
    let t = triangle_v_prime();
    assert!(check_mighty(&t).unwrap().passed());
    assert_eq!(phi(&t).unwrap(), (Some(3), 3));
    assert!(matches!(symmetric_even_case(&t), Err(Error::Precondition(_))));
    let step = symmetric_odd_step(&t).unwrap();
    assert!(check_mighty(&step).unwrap().passed());
    assert_eq!(phi(&step).unwrap().0, None);
    assert!(matches!(symmetric_odd_step(&step), Err(Error::Precondition(_))));
    let one = symmetric_even_case(&step).unwrap();
    let rep = check_mighty(&one).unwrap();
    assert!(rep.passed(), "{:?}", rep.lines());

    let two = tuple_to_prime(&swap_v()).unwrap();
    assert_eq!(phi(&two).unwrap().0, None);
    let one = symmetric_even_case(&two).unwrap();
    assert!(check_mighty(&one).unwrap().passed());
}

fn arb_v() -> impl Strategy<Value = MightyTuple> {
    (any::<u64>(), any::<bool>()).prop_map(|(bits, with_z)| {
        let d = dom(2);
        let zl = if with_z { 2 } else { 0 };
        let sig = Signature::new(zl, 0, 2, 2);
        let mut i = 0;
        let q = ParamRelation::from_fn(&d, sig, |_, _, _, _| {
            i += 1;
            bits >> (i % 64) & 1 == 1
        })
        .unwrap();
        MightyTuple::kind_v(q, plain(Relation::full(&d, 1).unwrap())).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prime_of_passing_v_passes(t in arb_v()) {
        if check_mighty(&t).unwrap().passed() {
            let p = tuple_to_prime(&t).unwrap();
            prop_assert!(check_mighty(&p).unwrap().passed());
        } else {
            prop_assert!(tuple_to_prime(&t).is_err());
        }
    }

    #[test]
    fn claims_meet_their_conclusions(seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut q = random_quadruple(&mut rng, 2);
        q = apply_claim(&q, Claim::AddKappa).unwrap();
        for c in Claim::ALL {
            match apply_claim(&q, c) {
                Ok(out) => {
                    for p in c.conclusion(&[]) {
                        prop_assert!(check_quadruple_property(&out, p).unwrap().holds, "{} lost {}", c, p);
                    }
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => prop_assert!(false, "{}: {}", c, e),
            }
        }
    }

    #[test]
    fn checker_guard_and_oracle(seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let kind = [MightyKind::II, MightyKind::III, MightyKind::IV, MightyKind::V][(seed % 4) as usize];
        let t = random_tuple(&mut rng, kind, 2);
        let got: Vec<bool> = check_mighty(&t).unwrap().conditions.iter().map(|c| c.pass).collect();
        prop_assert_eq!(got, oracle(&t));
    }
}
