//! Benchmarks for the saturation pipeline and the automata operations it
//! feeds: fixed-point saturation of a known-satisfiable set, model
//! extraction, and tree-automata Boolean combinations.

use criterion::{criterion_group, criterion_main, Criterion};

use mslh_core::modelbuild::build_finite_model;
use mslh_core::saturate::{saturate, Limits, SaturationResult};
use mslh_core::text::{parse_atom, parse_clauses, register_clause};
use mslh_core::transform::{approximate, rrs};
use mslh_core::treeauto::from_linear_atom;
use mslh_core::{Clause, Signature};

const TWO_COPIES: &str = "
    p(a).
    q(b).
    p(f(U, V)) | ~p(U) | ~p(V).
    q(f(U, V)) | ~q(U) | ~q(V).
    r(f(X, Y)) | ~p(X).
    r(f(X, Y)) | ~p(Y).
    r(f(X, Y)) | ~q(X).
    r(f(X, Y)) | ~q(Y).
    ~p(Z) | ~q(Z) | ~r(Z).
";

const REFLEXIVE: &str = "
    r(X, X).
    r(X, Y) | ~r(g(X), g(Y)).
    ~r(g(X), c).
";

fn load(src: &str) -> (Vec<Clause>, Signature) {
    let clauses = parse_clauses(src).unwrap();
    let mut sig = Signature::new();
    for c in &clauses {
        register_clause(c, &mut sig).unwrap();
    }
    (clauses, sig)
}

fn bench_saturation(c: &mut Criterion) {
    let (clauses, sig) = load(TWO_COPIES);
    c.bench_function("saturate two-copies set", |b| {
        b.iter(|| saturate(&sig, &clauses, Limits::default()))
    });

    let (clauses, sig) = load(REFLEXIVE);
    c.bench_function("split + approximate + saturate reflexive set", |b| {
        b.iter(|| {
            let mut sig = sig.clone();
            let (split, _) = rrs(&clauses, &["r".to_string()], &mut sig).unwrap();
            let (approx, _) = approximate(&split, &mut sig).unwrap();
            saturate(&sig, &approx, Limits::default())
        })
    });
}

fn bench_model_extraction(c: &mut Criterion) {
    let (clauses, sig) = load(TWO_COPIES);
    let out = match saturate(&sig, &clauses, Limits::default()) {
        SaturationResult::Saturated(out, _) => out,
        _ => unreachable!("the set is satisfiable"),
    };
    c.bench_function("extract finite model", |b| {
        b.iter(|| build_finite_model(&sig, &out).unwrap())
    });
}

fn bench_automata(c: &mut Criterion) {
    let mut sig = Signature::new();
    sig.declare_function("g", 2).unwrap();
    sig.declare_function("a", 0).unwrap();
    sig.declare_function("b", 0).unwrap();
    sig.declare_predicate("r", 2).unwrap();
    let left = from_linear_atom(&parse_atom("r(X,g(a,Y))").unwrap(), &sig).unwrap();
    let right = from_linear_atom(&parse_atom("r(g(X,Y),Z)").unwrap(), &sig).unwrap();
    c.bench_function("automaton intersection", |b| {
        b.iter(|| left.intersect(&right).unwrap())
    });
    c.bench_function("automaton complement", |b| b.iter(|| left.complement()));
    let term = parse_atom("r(b,g(a,g(b,g(a,b))))").unwrap();
    c.bench_function("automaton membership", |b| {
        b.iter(|| left.accepts_atom(&term).unwrap())
    });
}

criterion_group!(benches, bench_saturation, bench_model_extraction, bench_automata);
criterion_main!(benches);
