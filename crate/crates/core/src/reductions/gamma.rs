use crate::qcspmodel::{eval_qc_formula, Library, QcFormula};
use crate::error::{invalid, Result};
use crate::relcore::{project, Domain, ParamRelation, Relation, Signature};

/// A domain together with its named relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    pub domain: Domain,
    pub library: Library,
}

/// `{+,−,0,1}` in that order.
pub fn four_domain() -> Domain {
    Domain::with_labels(&["+", "-", "0", "1"]).expect("valid labels")
}

/// `{0,1,2,0′,1′,2′}` in that order, primes written `'`.
pub fn six_domain() -> Domain {
    Domain::with_labels(&["0", "1", "2", "0'", "1'", "2'"]).expect("valid labels")
}

/// `R_c(y₁,y₂,x) = y₁,y₂ ∈ {+,−} ∧ (x = c → y₁ = y₂)`.
fn r_gadget(d: &Domain, c: &str) -> Relation {
    let pm = [d.elem("+"), d.elem("-")];
    let c = d.elem(c);
    Relation::from_fn(d, 3, |t| {
        pm.contains(&t[0]) && pm.contains(&t[1]) && (t[2] != c || t[0] == t[1])
    })
    .expect("fits")
}

/// R₀, R₁ and the constants `{+}`, `{−}` over `{+,−,0,1}`.
pub fn gamma4() -> Language {
    let d = four_domain();
    let mut library = Library::new();
    library.insert("R0".into(), r_gadget(&d, "0"));
    library.insert("R1".into(), r_gadget(&d, "1"));
    library.insert("plus".into(), Relation::singleton(&d, d.elem("+")).expect("fits"));
    library.insert("minus".into(), Relation::singleton(&d, d.elem("-")).expect("fits"));
    Language { domain: d, library }
}

/// `V₀^x` and `V₁^x` as α-parameterized binary relations with coordinates `(x, y₁, y₂)`.
pub fn canonical_v_relations() -> (ParamRelation, ParamRelation) {
    let d = four_domain();
    let sig = Signature::new(0, 0, 1, 2);
    let lift = |c: &str| {
        let moved = project(&r_gadget(&d, c), &[2, 0, 1]).expect("valid coordinates");
        ParamRelation::new(moved, sig).expect("signature fits")
    };
    (lift("0"), lift("1"))
}

/// AND₂, OR₂, 1in3′, δ₀, δ₁ and ε over `{0,1,2,0′,1′,2′}`.
pub fn gamma6() -> Language {
    let d = six_domain();
    let e = |l: &str| d.elem(l);
    let bool01 = |x: u8| x == e("0") || x == e("1");
    let primes = [e("0'"), e("1'"), e("2'")];
    let boolean = |x: u8| if x == e("1") { 1u8 } else { 0u8 };
    let elem_of = |b: u8| if b == 1 { e("1") } else { e("0") };

    let gate = |f: fn(u8, u8) -> u8| {
        Relation::from_fn(&d, 3, |t| {
            if bool01(t[0]) && bool01(t[1]) {
                t[2] == elem_of(f(boolean(t[0]), boolean(t[1])))
            } else {
                true
            }
        })
        .expect("fits")
    };
    let and2 = gate(|a, b| a & b);
    let or2 = gate(|a, b| a | b);

    let (p0, p1, p2) = (e("0'"), e("1'"), e("2'"));
    let one_in_three =
        Relation::from_tuples(&d, 3, [[p2, p2, p2], [p1, p0, p0], [p0, p1, p0], [p0, p0, p1]]).expect("fits");

    let guarded = |guard: u8, banned: u8| {
        Relation::from_fn(&d, 2, |t| primes.contains(&t[1]) && !(t[0] == guard && t[1] == banned)).expect("fits")
    };
    let mut library = Library::new();
    library.insert("AND2".into(), and2);
    library.insert("OR2".into(), or2);
    library.insert("ONE_IN_THREE".into(), one_in_three);
    library.insert("DELTA0".into(), guarded(e("1"), p1));
    library.insert("DELTA1".into(), guarded(e("1"), p0));
    library.insert("EPS".into(), guarded(e("0"), p2));
    Language { domain: d, library }
}

/// The six singleton relations over `{0,1,2,0′,1′,2′}`, named `const_<label>`.
pub fn gamma6_constants() -> Library {
    let d = six_domain();
    d.elements()
        .map(|a| (format!("const_{}", d.label(a)), Relation::singleton(&d, a).expect("fits")))
        .collect()
}

/// The formula deriving δ₁ from δ₀ and 1in3′.
pub fn delta1_formula() -> QcFormula {
    QcFormula::new(["x", "y"])
        .exists(["u1", "u2", "u3"])
        .atom("DELTA0", ["x", "u1"])
        .atom("ONE_IN_THREE", ["y", "u1", "u2"])
        .atom("ONE_IN_THREE", ["u2", "u2", "u3"])
}

/// `OR_n` of arity `n+1`, chained from OR₂ by
/// `OR_{k+1}(x₁…x_{k+1},y) = ∃y′ OR_k(x₁…x_k,y′) ∧ OR₂(y′,x_{k+1},y)`.
pub fn or_n(n: usize) -> Result<Relation> {
    if n < 2 {
        return invalid("or_n needs n ≥ 2");
    }
    let g = gamma6();
    let mut lib = Library::new();
    lib.insert("OR2".into(), g.library["OR2"].clone());
    let mut cur = g.library["OR2"].clone();
    for k in 2..n {
        lib.insert("PREV".into(), cur);
        let xs: Vec<String> = (1..=k + 1).map(|i| format!("x{i}")).collect();
        let mut free = xs.clone();
        free.push("y".into());
        let mut prev_args: Vec<String> = xs[..k].to_vec();
        prev_args.push("yp".into());
        let f = QcFormula::new(free)
            .exists(["yp"])
            .atom("PREV", prev_args)
            .atom("OR2", ["yp".to_string(), xs[k].clone(), "y".to_string()]);
        cur = eval_qc_formula(&f, &lib, &g.domain)?;
    }
    Ok(cur)
}
