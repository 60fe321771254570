//! Benchmarks for the compressed solvers: the doubling family, free
//! reduction, exponent recovery, and the gap to the explicit backend.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use britton_core::instances::{random_hnn_instance, random_slp};
use britton_core::{
    compressed_free_reduce, compressed_power, reference, semi_compressed_word_problem,
    BrittonSequence, FingerprintParams, GeneratorAlphabet, GrammarBuilder, HnnPresentation,
    SolverConfig, WordParser,
};

fn doubling_family(c: &mut Criterion) {
    let params = FingerprintParams::from_seed(9);
    let pres = HnnPresentation::bs12(params);
    let parser = WordParser::with_special(pres.alphabet(), pres.stable());
    let cfg = SolverConfig::default();

    let mut g = c.benchmark_group("doubling_family");
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    for n in [8usize, 16, 32, 64] {
        let text = format!("t^-{n} a t^{n} ((a)^(2^{n}))^-1");
        let items = parser.parse_mixed(&text).unwrap();
        let seq = BrittonSequence::from_items(pres.alphabet(), &items);
        g.bench_with_input(BenchmarkId::from_parameter(n), &seq, |b, seq| {
            b.iter(|| {
                assert!(semi_compressed_word_problem(&pres, seq, &cfg));
            })
        });
    }
    g.finish();
}

fn free_reduction(c: &mut Criterion) {
    let params = FingerprintParams::from_seed(9);
    let alphabet = GeneratorAlphabet::new(["a", "b"], params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF5EE);

    let mut g = c.benchmark_group("free_reduction");
    for rules in [64usize, 256, 1024] {
        let sys = random_slp(&mut rng, &alphabet, rules, 1 << 40);
        g.bench_with_input(BenchmarkId::from_parameter(rules), &sys, |b, sys| {
            b.iter(|| compressed_free_reduce(sys))
        });
    }
    g.finish();
}

fn exponent_recovery(c: &mut Criterion) {
    let params = FingerprintParams::from_seed(9);
    let alphabet = GeneratorAlphabet::new(["a", "b"], params).unwrap();
    let parser = WordParser::new(&alphabet);
    let w = parser.parse_segment("a b").unwrap().expand(16).unwrap();
    let cfg = SolverConfig::default();

    let mut g = c.benchmark_group("exponent_recovery");
    for n in [20usize, 40] {
        let mut b = GrammarBuilder::new(&alphabet);
        let mut v = b.fresh(vec![
            britton_core::Atom::Letter(alphabet.parse_letter("a").unwrap()),
            britton_core::Atom::Letter(alphabet.parse_letter("b").unwrap()),
        ]);
        for _ in 0..n {
            v = b.fresh(vec![britton_core::Atom::Var(v), britton_core::Atom::Var(v)]);
        }
        let target = b.build(v);
        g.bench_with_input(BenchmarkId::from_parameter(n), &target, |b, target| {
            b.iter(|| {
                let answer = compressed_power(&w, target, &cfg).unwrap();
                assert!(answer.exponent().is_some());
            })
        });
    }
    g.finish();
}

/// The compressed solver and the explicit backend on the same random
/// instances the `bench` subcommand uses, at a size the explicit backend
/// can still expand.
fn compressed_vs_explicit(c: &mut Criterion) {
    let params = FingerprintParams::from_seed(9);
    let alphabet = GeneratorAlphabet::new(["a", "b"], params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    let cfg = SolverConfig::default();

    let instances: Vec<_> = (0..32)
        .map(|_| {
            let inst = random_hnn_instance(&mut rng, &alphabet, 8);
            let seq = BrittonSequence::from_items(&alphabet, &inst.items);
            (inst.pres, seq)
        })
        .collect();

    let mut g = c.benchmark_group("compressed_vs_explicit");
    g.bench_function("compressed", |b| {
        b.iter(|| {
            for (pres, seq) in &instances {
                semi_compressed_word_problem(pres, seq, &cfg);
            }
        })
    });
    g.bench_function("explicit", |b| {
        b.iter(|| {
            for (pres, seq) in &instances {
                reference::britton_identity_for(pres, seq, 1 << 20).unwrap();
            }
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    doubling_family,
    free_reduction,
    exponent_recovery,
    compressed_vs_explicit
);
criterion_main!(benches);
