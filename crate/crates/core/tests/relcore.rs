use proptest::prelude::*;
use qcsp_core::relcore::text::{parse_rel, write_rel};
use qcsp_core::relcore::*;

fn dom(n: usize) -> Domain {
    Domain::new(n).unwrap()
}

/// Builds a relation from 1-based tuples, as they are written in the text format.
fn rel(n: usize, arity: usize, tuples: &[&[u8]]) -> Relation {
    Relation::from_tuples(&dom(n), arity, tuples.iter().map(|t| t.iter().map(|e| e - 1).collect::<Vec<_>>())).unwrap()
}

fn binary_from_bits(n: usize, bits: u64) -> Relation {
    Relation::from_fn(&dom(n), 2, |t| bits >> (t[0] as usize * n + t[1] as usize) & 1 == 1).unwrap()
}

fn naive_compose(a: &Relation, b: &Relation) -> Relation {
    let n = a.size();
    Relation::from_fn(a.domain(), 2, |t| {
        (0..n as u8).any(|z| a.contains(&[t[0], z]) && b.contains(&[z, t[1]]))
    })
    .unwrap()
}

/// Fixpoint oracle: add converse and composites one pair at a time.
fn naive_sym_trans(r: &Relation) -> Relation {
    let mut pairs: Vec<(u8, u8)> = r.iter().map(|t| (t[0], t[1])).collect();
    loop {
        let mut added = false;
        let snapshot = pairs.clone();
        for &(a, b) in &snapshot {
            if !pairs.contains(&(b, a)) {
                pairs.push((b, a));
                added = true;
            }
            for &(c, d) in &snapshot {
                if b == c && !pairs.contains(&(a, d)) {
                    pairs.push((a, d));
                    added = true;
                }
            }
        }
        if !added {
            return Relation::from_tuples(r.domain(), 2, pairs.iter().map(|&(a, b)| [a, b])).unwrap();
        }
    }
}

/// Every set partition of `0..n`, as a block index per element.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let blocks = cur.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=blocks {
            cur.push(b);
            go(i + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

fn equiv_of(n: usize, p: &[usize]) -> Relation {
    Relation::from_fn(&dom(n), 2, |t| p[t[0] as usize] == p[t[1] as usize]).unwrap()
}

#[test]
fn compose_examples() {
    let a = rel(3, 2, &[&[1, 2], &[2, 3]]);
    let b = rel(3, 2, &[&[2, 1]]);
    assert_eq!(compose(&a, &b).unwrap(), rel(3, 2, &[&[1, 1]]));
    let e = Relation::empty(&dom(3), 2).unwrap();
    assert!(compose(&a, &e).unwrap().is_empty());
    let swap = rel(2, 2, &[&[1, 2], &[2, 1]]);
    assert_eq!(compose(&swap, &swap).unwrap(), rel(2, 2, &[&[1, 1], &[2, 2]]));
}

#[test]
fn compose_rejects_bad_input() {
    let u = rel(2, 1, &[&[1]]);
    let b = rel(2, 2, &[&[1, 1]]);
    assert!(compose(&u, &b).is_err());
    assert!(compose(&b, &rel(3, 2, &[&[1, 1]])).is_err());
}

#[test]
fn compose_inv_examples() {
    assert_eq!(compose_inv(&rel(3, 2, &[&[1, 2]]), &rel(3, 2, &[&[3, 2]])).unwrap(), rel(3, 2, &[&[1, 3]]));
    assert_eq!(compose_inv(&rel(3, 2, &[&[1, 2]]), &rel(3, 2, &[&[1, 2]])).unwrap(), rel(3, 2, &[&[1, 1]]));
    let s = rel(3, 2, &[&[1, 2], &[3, 3], &[1, 3]]);
    let ss = compose_inv(&s, &s).unwrap();
    for x in project(&s, &[0]).unwrap().elems() {
        assert!(ss.contains(&[x, x]));
    }
}

#[test]
fn repeat_examples() {
    let swap = rel(2, 2, &[&[1, 2], &[2, 1]]);
    assert_eq!(factorial_exponent(2), 8);
    let s = repeat(&swap, 8).unwrap();
    assert_eq!(s, rel(2, 2, &[&[1, 1], &[2, 2]]));
    assert_eq!(compose(&s, &s).unwrap(), s);
    let full = Relation::full(&dom(3), 2).unwrap();
    assert_eq!(repeat(&full, 5).unwrap(), full);
    assert!(repeat(&rel(3, 2, &[&[1, 2]]), 3).unwrap().is_empty());
    assert_eq!(repeat(&swap, 1).unwrap(), swap);
    assert!(repeat(&swap, 0).is_err());
}

#[test]
fn factorial_repetition_is_idempotent_exhaustively() {
    for n in 2..=3usize {
        let count = 1u64 << (n * n);
        let big_n = factorial_exponent(n);
        for bits in 0..count {
            let r = binary_from_bits(n, bits);
            let s = repeat(&r, big_n).unwrap();
            assert_eq!(compose(&s, &s).unwrap(), s, "n={n} bits={bits:b}");
        }
    }
}

#[test]
fn compose_is_associative_exhaustively_on_two_points() {
    for a in 0..16 {
        for b in 0..16 {
            for c in 0..16 {
                let (a, b, c) = (binary_from_bits(2, a), binary_from_bits(2, b), binary_from_bits(2, c));
                let l = compose(&compose(&a, &b).unwrap(), &c).unwrap();
                let r = compose(&a, &compose(&b, &c).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
    }
}

#[test]
fn join_equiv_examples() {
    let d = Relation::full(&dom(3), 1).unwrap();
    let p = equiv_of(3, &[0, 0, 1]);
    let q = equiv_of(3, &[0, 1, 1]);
    assert_eq!(join_equiv(&p, &q, &d).unwrap(), Relation::full(&dom(3), 2).unwrap());
    assert_eq!(join_equiv(&p, &p, &d).unwrap(), p);
    assert_eq!(join_equiv(&p, &Relation::diagonal_on(&d), &d).unwrap(), p);
    assert!(join_equiv(&rel(3, 2, &[&[1, 2]]), &p, &d).is_err());
}

#[test]
fn join_equiv_is_least_upper_bound_on_four_points() {
    let n = 4;
    let d = Relation::full(&dom(n), 1).unwrap();
    let eqs: Vec<Relation> = partitions(n).iter().map(|p| equiv_of(n, p)).collect();
    assert_eq!(eqs.len(), 15);
    for a in &eqs {
        for b in &eqs {
            let j = join_equiv(a, b, &d).unwrap();
            assert!(j.is_equivalence_on(&d));
            assert!(a.is_subset(&j) && b.is_subset(&j));
            for e in &eqs {
                if a.is_subset(e) && b.is_subset(e) {
                    assert!(j.is_subset(e));
                }
            }
        }
    }
}

#[test]
fn join_equiv_on_a_subdomain() {
    let d = rel(4, 1, &[&[1], &[2], &[3]]);
    let p = Relation::from_fn(&dom(4), 2, |t| t[0] < 3 && t[1] < 3 && (t[0] == t[1] || t[0] + t[1] == 1)).unwrap();
    let q = Relation::diagonal_on(&d);
    let j = join_equiv(&p, &q, &d).unwrap();
    assert_eq!(j, p);
}

#[test]
fn trans_sym_closure_examples() {
    let d = Relation::full(&dom(3), 1).unwrap();
    let r = rel(3, 2, &[&[1, 1], &[2, 2], &[3, 3], &[1, 2]]);
    assert_eq!(
        trans_sym_closure(&r, &d).unwrap(),
        rel(3, 2, &[&[1, 1], &[1, 2], &[2, 1], &[2, 2], &[3, 3]])
    );
    let e = equiv_of(3, &[0, 0, 1]);
    assert_eq!(trans_sym_closure(&e, &d).unwrap(), e);
    let chain = rel(3, 2, &[&[1, 1], &[2, 2], &[3, 3], &[1, 2], &[2, 3]]);
    assert_eq!(trans_sym_closure(&chain, &d).unwrap(), Relation::full(&dom(3), 2).unwrap());
}

#[test]
fn trans_sym_closure_matches_alternating_formula_for_reflexive_inputs() {
    let d = Relation::full(&dom(3), 1).unwrap();
    let diag = Relation::diagonal_on(&d);
    for bits in 0..512u64 {
        let r = binary_from_bits(3, bits).union(&diag);
        let mut cur = r.clone();
        loop {
            let next = compose(&compose_inv(&cur, &r).unwrap(), &r).unwrap();
            if next == cur {
                break;
            }
            cur = next;
        }
        // R−R+R−⋯ alternates; after symmetrising once it is the same chain.
        let alt = trans_sym_closure(&r, &d).unwrap();
        assert!(cur.is_subset(&alt));
        assert_eq!(trans_sym_closure(&cur, &d).unwrap(), alt);
    }
}

#[test]
fn trans_sym_closure_matches_naive_oracle() {
    let d = Relation::full(&dom(3), 1).unwrap();
    for bits in 0..512u64 {
        let r = binary_from_bits(3, bits);
        let c = trans_sym_closure(&r, &d).unwrap();
        assert_eq!(c, naive_sym_trans(&r), "bits={bits:b}");
        assert!(c.is_symmetric() && c.is_transitive() && r.is_subset(&c));
    }
}

#[test]
fn project_examples() {
    assert_eq!(project(&rel(3, 2, &[&[1, 2], &[1, 3]]), &[0]).unwrap(), rel(3, 1, &[&[1]]));
    let lambda = Relation::nullary(&dom(2), true);
    assert_eq!(project(&lambda, &[]).unwrap(), lambda);
    let r = rel(2, 2, &[&[1, 2]]);
    assert_eq!(project(&r, &[]).unwrap(), lambda);
    assert_eq!(project(&r, &[1, 0]).unwrap(), rel(2, 2, &[&[2, 1]]));
    assert!(project(&r, &[2]).is_err());
    assert!(project(&Relation::empty(&dom(2), 2).unwrap(), &[]).unwrap().is_empty());
}

#[test]
fn arity_zero_relations() {
    let d = dom(3);
    let yes = Relation::nullary(&d, true);
    let no = Relation::nullary(&d, false);
    assert_eq!(yes.len(), 1);
    assert!(yes.contains(&[]));
    assert!(no.is_empty());
    assert_eq!(yes.tuples(), vec![Vec::<u8>::new()]);
}

#[test]
fn instantiate_matches_table_lookup() {
    // t=2, k=0, |A|=2, m=1, with a z-group of length 2.
    let d = dom(2);
    let sig = Signature::new(2, 0, 1, 2);
    let table = |z: &[u8], a: &[u8], v: &[u8]| (z[0] + 2 * z[1] + 3 * a[0] + v[0] * v[1] + v[0]).is_multiple_of(3);
    let q = ParamRelation::from_fn(&d, sig, |z, _, a, v| table(z, a, v)).unwrap();
    let inst = q.instantiate(Some(&[0, 1]), None, Some(&[0])).unwrap();
    assert!(inst.sig().is_plain());
    let expected = Relation::from_fn(&d, 2, |v| table(&[0, 1], &[0], v)).unwrap();
    assert_eq!(inst.base(), &expected);
    assert_eq!(q.slice(&[0, 1], &[], &[0]), expected);

    assert_eq!(q.instantiate(None, None, None).unwrap(), q);
    let partial = q.instantiate(None, None, Some(&[1])).unwrap();
    assert_eq!(partial.sig(), Signature::new(2, 0, 0, 2));
    for z in q.z_values() {
        assert_eq!(partial.slice(&z, &[], &[]), q.slice(&z, &[], &[1]));
    }
    assert!(q.instantiate(Some(&[0]), None, None).is_err());
}

#[test]
fn q_forall_examples() {
    let d = dom(2);
    let sig = Signature::new(0, 0, 1, 2);
    let q = ParamRelation::from_fn(&d, sig, |_, _, a, v| v[0] == v[1] && (a[0] == 1 || v[0] == 0)).unwrap();
    let qa = q.q_forall().unwrap();
    assert_eq!(qa.base(), &rel(2, 2, &[&[1, 1]]));
    assert_eq!(q.q_forallforall().unwrap(), qa);

    let indep = ParamRelation::from_fn(&d, sig, |_, _, _, v| v[0] <= v[1]).unwrap();
    assert_eq!(indep.q_forall().unwrap().base(), &indep.slice(&[], &[], &[0]));

    let m2 = ParamRelation::from_fn(&d, Signature::new(0, 0, 2, 2), |_, _, a, _| a != [0, 1]).unwrap();
    assert!(m2.q_forallforall().unwrap().base().is_empty());
    assert!(m2.q_forall().unwrap().base().is_full());

    let plain = ParamRelation::plain(rel(2, 2, &[&[1, 1]]));
    assert!(plain.q_forall().is_err());
    assert!(plain.q_forallforall().is_err());
}

#[test]
fn rel_text_round_trip() {
    let text = "# sample\ndomain 4 + - 0 1\nrelation R 2\n+ -\n- +\nend\nrelation Z 0\n()\nend\nrelation P 3\nparam z 0 delta 0 alpha 1 value 2\n0 + +\nend\n";
    let f = parse_rel(text).unwrap();
    assert_eq!(f.entries.len(), 3);
    assert_eq!(f.get("R").unwrap().base().len(), 2);
    assert_eq!(f.get("Z").unwrap().base().len(), 1);
    assert_eq!(f.get("P").unwrap().sig(), Signature::new(0, 0, 1, 2));
    let again = parse_rel(&write_rel(&f)).unwrap();
    assert_eq!(again, f);
}

#[test]
fn rel_text_errors_carry_line_numbers() {
    let err = parse_rel("domain 2\nrelation R 2\n1 3\nend\n").unwrap_err();
    assert!(matches!(err, qcsp_core::Error::Parse { line: 3, .. }), "{err}");
    let err = parse_rel("domain 2\nrelation R 2\n1 2\n").unwrap_err();
    assert!(matches!(err, qcsp_core::Error::Parse { line: 2, .. }), "{err}");
    assert!(parse_rel("relation R 1\n").is_err());
    assert!(parse_rel("domain 2\nrelation R 2\nparam z 2 delta 0 alpha 0 value 1\nend\n").is_err());
}

#[test]
fn capacity_error_is_loud() {
    let d = dom(4);
    let err = Relation::empty(&d, 40).unwrap_err();
    assert!(matches!(err, qcsp_core::Error::Capacity { .. }));
}

fn arb_binary(n: usize) -> impl Strategy<Value = Relation> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        Relation::from_fn(&dom(n), 2, |t| bits[t[0] as usize * n + t[1] as usize]).unwrap()
    })
}

fn arb_param(n: usize, sig: Signature) -> impl Strategy<Value = ParamRelation> {
    let slots = n.pow(sig.arity() as u32);
    proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
        let base = Relation::from_fn(&dom(n), sig.arity(), |t| {
            bits[t.iter().fold(0usize, |a, &e| a * n + e as usize)]
        })
        .unwrap();
        ParamRelation::new(base, sig).unwrap()
    })
}

proptest! {
    #[test]
    fn compose_matches_naive((a, b, c) in (arb_binary(3), arb_binary(3), arb_binary(3))) {
        prop_assert_eq!(compose(&a, &b).unwrap(), naive_compose(&a, &b));
        let l = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let r = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn forallforall_is_below_forall(p in arb_param(2, Signature::new(2, 1, 2, 2))) {
        let fa = p.q_forall().unwrap();
        let ffa = p.q_forallforall().unwrap();
        prop_assert!(ffa.base().is_subset(fa.base()));
    }

    #[test]
    fn forall_is_intersection_of_diagonal_slices(p in arb_param(3, Signature::new(0, 0, 2, 1))) {
        let fa = p.q_forall().unwrap();
        for v in 0..3u8 {
            let expect = (0..3u8).all(|a| p.base().contains(&[a, a, v]));
            prop_assert_eq!(fa.base().contains(&[v]), expect);
        }
    }

    #[test]
    fn closure_is_least(r in arb_binary(4)) {
        let d = Relation::full(&dom(4), 1).unwrap();
        prop_assert_eq!(trans_sym_closure(&r, &d).unwrap(), naive_sym_trans(&r));
    }
}
