//! Batch verification suites.
//!
//! Each suite returns one [`Check`] per case. Reports depend only on the
//! suite options, so equal options give byte-identical output.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::corpus;
use crate::error::{Error, Result};
use crate::gamesolver::{arc_consistency, eval_qcsp, eval_restricted, solve_csp, solve_pi2_style};
use crate::inducedcsp::check_equivalence_lemma;
use crate::mightytuples::{
    check_mighty, check_quadruple_property, derive_ii_from_iii, props_ii_kappa, satisfies_all, tuple_i_from_quadruple,
    tuple_ii_from_classification, tuple_to_prime, Claim, MightyReport, MightyTuple, Quadruple,
};
use crate::qcspmodel::{check_polymorphism, eval_qc_formula, g_operation, Quantifier};
use crate::reductions::{
    canonical_v_relations, delta1_formula, encode_pi2_1in3, encode_q3cnf_complement, four_domain, gamma6,
    gamma6_constants, q_phi_operator, MatrixKind, OneInThree, QBoolFormula,
};
use crate::relcore::{all_tuples, compose, factorial_exponent, repeat, Domain, Elem, Relation};

/// Outcome of one verification case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, witness: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            witness: if pass { String::new() } else { witness.into() },
        }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((pass, w)) => Check::new(name, pass, w),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "{} PASS", self.name)
        } else if self.witness.is_empty() {
            write!(f, "{} FAIL", self.name)
        } else {
            write!(f, "{} FAIL {}", self.name, self.witness)
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Polymorphism,
    Delta1,
    Equivalence,
    Tphi,
    Q3cnf,
    Pi2Encoder,
    Pi2Solver,
    Factorial,
    Mighty,
    Claims,
    Restricted,
    ArcConsistency,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Polymorphism,
        Suite::Delta1,
        Suite::Equivalence,
        Suite::Tphi,
        Suite::Q3cnf,
        Suite::Pi2Encoder,
        Suite::Pi2Solver,
        Suite::Factorial,
        Suite::Mighty,
        Suite::Claims,
        Suite::Restricted,
        Suite::ArcConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Polymorphism => "polymorphism",
            Suite::Delta1 => "delta1",
            Suite::Equivalence => "equivalence",
            Suite::Tphi => "tphi",
            Suite::Q3cnf => "q3cnf",
            Suite::Pi2Encoder => "pi2-encoder",
            Suite::Pi2Solver => "pi2-solver",
            Suite::Factorial => "factorial",
            Suite::Mighty => "mighty",
            Suite::Claims => "claims",
            Suite::Restricted => "restricted",
            Suite::ArcConsistency => "arc-consistency",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Knobs shared by the suites. `None` picks the suite's default.
#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    /// Domain size for the equivalence suite (2 or 3).
    pub size: Option<usize>,
    /// Variable bound for the exhaustive suites.
    pub max_vars: Option<usize>,
}


pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<Check>> {
    let samples = |d: usize| opts.samples.unwrap_or(d);
    match suite {
        Suite::Polymorphism => polymorphism_suite(),
        Suite::Delta1 => delta1_suite(),
        Suite::Equivalence => {
            let size = opts.size.unwrap_or(2);
            let n = match size {
                2 => 2,
                3 => 1,
                _ => return Err(Error::InvalidArgument(format!("equivalence suite takes size 2 or 3, got {size}"))),
            };
            equivalence_suite(opts.seed, samples(if size == 2 { 100 } else { 50 }), size, n)
        }
        Suite::Tphi => tphi_suite(opts.max_vars.unwrap_or(2), 2),
        Suite::Q3cnf => q3cnf_suite(opts.max_vars.unwrap_or(3), 2),
        Suite::Pi2Encoder => pi2_encoder_suite(opts.max_vars.unwrap_or(3), 2),
        Suite::Pi2Solver => pi2_solver_suite(opts.seed, samples(200)),
        Suite::Factorial => factorial_suite(opts.max_vars.unwrap_or(3)),
        Suite::Mighty => mighty_suite(),
        Suite::Claims => claims_suite(opts.seed, samples(50)),
        Suite::Restricted => restricted_suite(opts.seed, samples(200)),
        Suite::ArcConsistency => arc_consistency_suite(opts.seed, samples(500)),
    }
}

// ---- enumerators ----

/// Every prefix over `n` variables in index order.
pub fn prefixes(n: usize) -> Vec<Vec<Quantifier>> {
    all_tuples(2, n)
        .map(|t| {
            t.iter()
                .map(|&b| if b == 0 { Quantifier::Exists } else { Quantifier::Forall })
                .collect()
        })
        .collect()
}

/// Multisets of three items from `pool`, in order of first index.
pub fn triples<T: Copy>(pool: &[T]) -> Vec<[T; 3]> {
    let mut out = Vec::new();
    for a in 0..pool.len() {
        for b in a..pool.len() {
            for c in b..pool.len() {
                out.push([pool[a], pool[b], pool[c]]);
            }
        }
    }
    out
}

/// Ordered sequences of `min..=max` items (max ≤ 2).
pub fn item_lists<T: Copy>(items: &[T], min: usize, max: usize) -> Vec<Vec<T>> {
    assert!(max <= 2, "sequences longer than two are not enumerated");
    let mut out = Vec::new();
    if min == 0 {
        out.push(Vec::new());
    }
    for a in items {
        if min <= 1 && max >= 1 {
            out.push(vec![*a]);
        }
        if max >= 2 {
            for b in items {
                out.push(vec![*a, *b]);
            }
        }
    }
    out
}

/// Literal triples over `n` variables.
pub fn literal_triples(n: usize) -> Vec<[i32; 3]> {
    let lits: Vec<i32> = (1..=n as i32).flat_map(|v| [v, -v]).collect();
    triples(&lits)
}

/// Every formula with `1..=max_vars` variables, any prefix, and a matrix of
/// `min_items..=max_items` triples.
pub fn small_formulas(kind: MatrixKind, max_vars: usize, min_items: usize, max_items: usize) -> Vec<QBoolFormula> {
    let mut out = Vec::new();
    for n in 1..=max_vars {
        let lists = item_lists(&literal_triples(n), min_items, max_items);
        for q in prefixes(n) {
            for items in &lists {
                out.push(QBoolFormula::ordered(&q, kind, items.clone()).expect("well-formed"));
            }
        }
    }
    out
}

fn short(f: &QBoolFormula) -> String {
    let pre: String = f
        .prefix
        .iter()
        .map(|(q, v)| format!("{}{v}", if *q == Quantifier::Forall { 'A' } else { 'E' }))
        .collect();
    let items: Vec<String> = f
        .items
        .iter()
        .map(|t| t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("{pre}:[{}]", items.join(";"))
}

// ---- suites ----

/// g against every Γ₆ relation and every constant relation.
pub fn polymorphism_suite() -> Result<Vec<Check>> {
    let g = g_operation();
    let lang = gamma6();
    let consts = gamma6_constants();
    let mut out = Vec::new();
    for (name, r) in lang.library.iter().chain(consts.iter()) {
        let res = check_polymorphism(&g, r)?;
        let w = format!(
            "rows ({}) map to ({})",
            res.rows.iter().map(|t| lang.domain.format_tuple(t)).collect::<Vec<_>>().join("; "),
            lang.domain.format_tuple(&res.image)
        );
        out.push(Check::new(format!("polymorphism/{name}"), res.holds, w));
    }
    Ok(out)
}

pub fn delta1_suite() -> Result<Vec<Check>> {
    let g = gamma6();
    let derived = eval_qc_formula(&delta1_formula(), &g.library, &g.domain)?;
    let want = &g.library["DELTA1"];
    let w = format!("derived {} tuples, table has {}", derived.len(), want.len());
    Ok(vec![Check::new("delta1/derivation", derived == *want, w)])
}

/// The four statements of the equivalence lemma on random relations of
/// arity `2n+1`.
pub fn equivalence_suite(seed: u64, samples: usize, size: usize, n: usize) -> Result<Vec<Check>> {
    let mut rng = corpus::rng(seed);
    let d = Domain::new(size)?;
    (0..samples)
        .map(|i| {
            let r = corpus::random_game_relation(&mut rng, &d, n);
            let rep = check_equivalence_lemma(&r, n)?;
            let w = format!(
                "game={} plain={} parameterized={} strengthened={}",
                rep.game, rep.plain, rep.parameterized, rep.strengthened
            );
            Ok(Check::new(format!("equivalence/size{size}/n{n}/{i}"), rep.agree(), w))
        })
        .collect()
}

/// `𝒯^Φ(V₀,V₁)` is the ± diagonal exactly when Φ is false.
pub fn tphi_suite(max_vars: usize, max_terms: usize) -> Result<Vec<Check>> {
    let (v0, v1) = canonical_v_relations();
    let d = four_domain();
    let (p, m) = (d.elem("+"), d.elem("-"));
    let diag = Relation::from_tuples(&d, 2, [[p, p], [m, m]])?;
    small_formulas(MatrixKind::Dnf, max_vars, 1, max_terms)
        .iter()
        .map(|f| {
            let out = q_phi_operator(f, &v0, &v1)?;
            let truth = f.truth();
            let w = format!("truth={truth} closure={}", out.display());
            Ok(Check::new(format!("tphi/{}", short(f)), (out == diag) == !truth, w))
        })
        .collect()
}

/// The encoding of the complement is true exactly when the CNF is false.
/// Includes the worked example, whose encoding must be false.
pub fn q3cnf_suite(max_vars: usize, max_clauses: usize) -> Result<Vec<Check>> {
    use Quantifier::{Exists as E, Forall as A};
    let worked = QBoolFormula::ordered(&[E, A, E], MatrixKind::Cnf, vec![[1, -2, 3], [-1, 2, -3], [1, -2, -3]])?;
    let mut out = Vec::new();
    let enc = eval_qcsp(&encode_q3cnf_complement(&worked)?, false)?.truth;
    out.push(Check::new(
        "q3cnf/worked-example",
        worked.truth() && !enc,
        format!("formula={} encoding={enc}", worked.truth()),
    ));
    for f in small_formulas(MatrixKind::Cnf, max_vars, 0, max_clauses) {
        let truth = f.truth();
        let enc = eval_qcsp(&encode_q3cnf_complement(&f)?, false)?.truth;
        out.push(Check::new(
            format!("q3cnf/{}", short(&f)),
            enc == !truth,
            format!("formula={truth} encoding={enc}"),
        ));
    }
    Ok(out)
}

/// Every 1-in-3 instance with two universal variables, `2..=max_vars`
/// variables and at most `max_clauses` clauses.
pub fn one_in_three_instances(max_vars: usize, max_clauses: usize) -> Vec<OneInThree> {
    let mut out = Vec::new();
    for n in 2..=max_vars {
        let vars: Vec<usize> = (1..=n).collect();
        for clauses in item_lists(&triples(&vars), 0, max_clauses) {
            out.push(OneInThree::new(n, 2, clauses).expect("well-formed"));
        }
    }
    out
}

pub fn pi2_encoder_suite(max_vars: usize, max_clauses: usize) -> Result<Vec<Check>> {
    one_in_three_instances(max_vars, max_clauses)
        .iter()
        .map(|f| {
            let truth = f.truth();
            let psi = eval_qcsp(&encode_pi2_1in3(f)?, false)?.truth;
            let cl: Vec<String> = f.clauses.iter().map(|c| format!("{},{},{}", c[0], c[1], c[2])).collect();
            Ok(Check::new(
                format!("pi2-encoder/n{}/[{}]", f.n, cl.join(";")),
                psi == truth,
                format!("formula={truth} encoding={psi}"),
            ))
        })
        .collect()
}

pub fn pi2_solver_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = corpus::rng(seed);
    (0..samples)
        .map(|i| {
            let inst = corpus::random_gamma6_instance(&mut rng);
            let game = eval_qcsp(&inst, false)?.truth;
            let r = solve_pi2_style(&inst).map(|pi2| (pi2 == game, format!("pi2={pi2} game={game}")));
            Ok(Check::from_result(format!("pi2-solver/{i}"), r))
        })
        .collect()
}

/// `S = (|A|!·|A|²)·R` satisfies `S+S = S` for every binary relation on
/// domains of size `2..=max_size`.
pub fn factorial_suite(max_size: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for size in 2..=max_size {
        let d = Domain::new(size)?;
        let cells = size * size;
        if cells > 20 {
            return Err(Error::Capacity {
                what: format!("binary relations on {size} elements"),
                size: format!("2^{cells}"),
                limit: "2^20".into(),
            });
        }
        let nn = factorial_exponent(size);
        for bits in 0u64..(1 << cells) {
            let r = Relation::from_fn(&d, 2, |t| bits >> (t[0] as usize * size + t[1] as usize) & 1 == 1)?;
            let s = repeat(&r, nn)?;
            let ok = compose(&s, &s)? == s;
            out.push(Check::new(format!("factorial/size{size}/{bits}"), ok, format!("S = {}", s.display())));
        }
    }
    Ok(out)
}

fn report_check(name: &str, rep: &MightyReport) -> Check {
    let n = rep.conditions.len();
    let ok = rep.conditions.iter().filter(|c| c.pass).count();
    let failed: Vec<String> = rep
        .conditions
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("cond{} {}", c.index, c.witness))
        .collect();
    Check::new(format!("mighty/{name} {ok}/{n}"), rep.passed(), failed.join("; "))
}

fn two_element_classification() -> Result<MightyTuple> {
    let d = Domain::new(2)?;
    let eq = Relation::from_fn(&d, 2, |t| t[0] == t[1])?;
    tuple_ii_from_classification(&eq, &Relation::full(&d, 1)?, &Relation::unary(&d, [0])?, &Relation::unary(&d, [1])?)
}

fn gamma4_classification() -> Result<MightyTuple> {
    let d = four_domain();
    let e = |s: &str| d.elem(s);
    let dd = Relation::unary(&d, [e("+"), e("-")])?;
    let sigma = Relation::from_fn(&d, 2, |t| t[0] == t[1] && dd.contains(&[t[0]]))?;
    let b = Relation::unary(&d, [e("+"), e("-"), e("1")])?;
    let c = Relation::unary(&d, [e("+"), e("-"), e("0")])?;
    tuple_ii_from_classification(&sigma, &dd, &b, &c)
}

/// The classification examples, and the chain III → II∪{κ} → I → I′ on the
/// two-element one.
pub fn mighty_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let two = two_element_classification()?;
    out.push(report_check("ii/two-element", &check_mighty(&two)?));
    let g4 = gamma4_classification()?;
    out.push(report_check("ii/gamma4", &check_mighty(&g4)?));
    let q = Quadruple::from_iii(two.q.clone(), two.b.clone().expect("B"), two.c.clone().expect("C"))?;
    let der = derive_ii_from_iii(&q)?;
    let one = tuple_i_from_quadruple(&der.quadruple)?;
    out.push(report_check("i/two-element", &check_mighty(&one)?));
    let prime = tuple_to_prime(&one)?;
    out.push(report_check("i-prime/two-element", &check_mighty(&prime)?));
    Ok(out)
}

/// Random III quadruples at |A| = 2: every applicable claim meets its
/// conclusion, and the derivation reaches II∪{κ} and a passing tuple I.
pub fn claims_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = corpus::rng(seed);
    let mut out = Vec::new();
    for i in 0..samples {
        let q = corpus::random_iii_quadruple(&mut rng, 2);
        out.push(Check::from_result(format!("claims/{i}/each"), each_claim(&q)));
        let r = derive_ii_from_iii(&q).and_then(|der| {
            if !satisfies_all(&der.quadruple, &props_ii_kappa())? {
                return Ok((false, "derivation output misses II∪{κ}".to_string()));
            }
            let rep = check_mighty(&tuple_i_from_quadruple(&der.quadruple)?)?;
            Ok((rep.passed(), format!("{} steps; tuple I fails {:?}", der.steps.len(), rep.failed())))
        });
        out.push(Check::from_result(format!("claims/{i}/derive"), r));
    }
    Ok(out)
}

fn each_claim(q: &Quadruple) -> Result<(bool, String)> {
    let base = crate::mightytuples::apply_claim(q, Claim::AddKappa)?;
    for c in Claim::ALL {
        match crate::mightytuples::apply_claim(&base, c) {
            Ok(out) => {
                for p in c.conclusion(&[]) {
                    if !check_quadruple_property(&out, p)?.holds {
                        return Ok((false, format!("{c} lost ({p})")));
                    }
                }
            }
            Err(Error::Precondition(_)) => {}
            Err(e) => return Ok((false, format!("{c}: {e}"))),
        }
    }
    Ok((true, String::new()))
}

/// Anti-monotonicity in S and agreement with the plain game at `S = A^n`.
pub fn restricted_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = corpus::rng(seed);
    let mut out = Vec::new();
    for i in 0..samples {
        let inst = corpus::random_qcsp(&mut rng, 2, 3, 3, 4);
        let n = inst.universals().len();
        let all: Vec<Vec<Elem>> = all_tuples(2, n).collect();
        let s1: Vec<Vec<Elem>> = all.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let s2: Vec<Vec<Elem>> = all.iter().filter(|t| s1.contains(t) || rng.gen_bool(0.5)).cloned().collect();
        let truth = eval_qcsp(&inst, false)?.truth;
        let full = eval_restricted(&inst, &all)?;
        let r1 = eval_restricted(&inst, &s1)?;
        let r2 = eval_restricted(&inst, &s2)?;
        out.push(Check::new(
            format!("restricted/{i}/monotone"),
            r1 || !r2,
            format!("|S1|={} false but |S2|={} true", s1.len(), s2.len()),
        ));
        out.push(Check::new(
            format!("restricted/{i}/full"),
            full == truth,
            format!("restricted={full} game={truth}"),
        ));
    }
    Ok(out)
}

/// Arc-consistency failure implies unsatisfiability.
pub fn arc_consistency_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = corpus::rng(seed);
    Ok((0..samples)
        .map(|i| {
            let csp = corpus::random_csp(&mut rng);
            let ac_failed = arc_consistency(&csp).is_none();
            let sol = solve_csp(&csp);
            Check::new(
                format!("arc-consistency/{i}"),
                !(ac_failed && sol.is_some()),
                format!("propagation failed but {:?} solves it", sol),
            )
        })
        .collect())
}
