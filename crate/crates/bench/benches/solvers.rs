use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qcsp_core::corpus;
use qcsp_core::gamesolver::{eval_qcsp, solve_csp, solve_pi2_style};
use qcsp_core::inducedcsp::{build_induced, param_arc_consistency};
use qcsp_core::mightytuples::{derive_ii_from_iii, Quadruple};
use qcsp_core::reductions::{encode_q3cnf_complement, MatrixKind, QBoolFormula};
use qcsp_core::relcore::{factorial_exponent, repeat, Domain};
use qcsp_core::verify;

fn game_search(c: &mut Criterion) {
    let mut rng = corpus::rng(1);
    let gamma: Vec<_> = (0..50).map(|_| corpus::random_gamma6_instance(&mut rng)).collect();
    let mut g = c.benchmark_group("six-element");
    g.bench_function("game search", |b| {
        b.iter(|| gamma.iter().filter(|i| eval_qcsp(i, false).unwrap().truth).count())
    });
    g.bench_function("pi2 solver", |b| b.iter(|| gamma.iter().filter(|i| solve_pi2_style(i).unwrap()).count()));
    g.finish();

    let mut g = c.benchmark_group("random qcsp");
    for size in [2usize, 3] {
        let insts: Vec<_> = (0..50).map(|_| corpus::random_qcsp(&mut rng, size, 3, 3, 4)).collect();
        g.bench_with_input(BenchmarkId::new("game search", size), &insts, |b, insts| {
            b.iter(|| insts.iter().filter(|i| eval_qcsp(i, false).unwrap().truth).count())
        });
    }
    g.finish();
}

fn csp(c: &mut Criterion) {
    let mut rng = corpus::rng(2);
    let csps: Vec<_> = (0..200).map(|_| corpus::random_csp(&mut rng)).collect();
    c.bench_function("csp backtracking", |b| b.iter(|| csps.iter().filter(|x| solve_csp(x).is_some()).count()));
}

fn encoders(c: &mut Criterion) {
    use qcsp_core::qcspmodel::Quantifier::{Exists as E, Forall as A};
    let f = QBoolFormula::ordered(&[E, A, E], MatrixKind::Cnf, vec![[1, -2, 3], [-1, 2, -3], [1, -2, -3]]).unwrap();
    let inst = encode_q3cnf_complement(&f).unwrap();
    c.bench_function("q3cnf worked example", |b| b.iter(|| eval_qcsp(black_box(&inst), false).unwrap().truth));
}

fn induced(c: &mut Criterion) {
    let mut rng = corpus::rng(3);
    let d = Domain::new(2).unwrap();
    let r = corpus::random_game_relation(&mut rng, &d, 3);
    c.bench_function("induced n=3 arc consistency", |b| {
        b.iter(|| {
            let inst = build_induced(black_box(&r), 3).unwrap();
            param_arc_consistency(&inst).unwrap().is_nonempty()
        })
    });
}

fn algebra(c: &mut Criterion) {
    let mut rng = corpus::rng(4);
    let d = Domain::new(4).unwrap();
    let r = corpus::random_relation(&mut rng, &d, 2, 0.3);
    let n = factorial_exponent(4);
    c.bench_function("factorial repetition |A|=4", |b| b.iter(|| repeat(black_box(&r), n).unwrap()));
}

fn mighty(c: &mut Criterion) {
    let mut rng = corpus::rng(5);
    let qs: Vec<Quadruple> = (0..10).map(|_| corpus::random_iii_quadruple(&mut rng, 2)).collect();
    c.bench_function("derive II from III", |b| {
        b.iter(|| qs.iter().map(|q| derive_ii_from_iii(q).unwrap().steps.len()).sum::<usize>())
    });
    c.bench_function("mighty suite", |b| b.iter(|| verify::mighty_suite().unwrap().len()));
}

criterion_group!(benches, game_search, csp, encoders, induced, algebra, mighty);
criterion_main!(benches);
