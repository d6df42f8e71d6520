//! Benchmarks the oracle word sweep: the brute-force path counter compared
//! against the matrix evaluator across all words up to a length, sequential
//! versus rayon fan-out. Run with `cargo bench -p fa`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fa::audit::{audit, audit_seq};
use fa::builders;
use fa::closures;
use fa::Limits;

fn sweep_benchmarks(c: &mut Criterion) {
    let limits = Limits::default();
    // A 4-state automaton with nontrivial weights: the letter counter
    // multiplied with the binary evaluator.
    let counter = builders::letter_counter(&['0', '1'], '1').unwrap();
    let binary = builders::binary_value(&['0', '1']).unwrap();
    let subject = closures::hadamard(&counter, &binary, &limits).unwrap();

    let mut group = c.benchmark_group("oracle_sweep");
    for max_len in [6usize, 8] {
        group.bench_with_input(
            BenchmarkId::new("sequential", max_len),
            &max_len,
            |b, &len| {
                b.iter(|| {
                    let report = audit_seq(&subject, len, &limits).unwrap();
                    assert!(report.passed());
                    black_box(report.words_checked)
                })
            },
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(
            BenchmarkId::new("parallel", max_len),
            &max_len,
            |b, &len| {
                b.iter(|| {
                    let report = audit(&subject, len, &limits).unwrap();
                    assert!(report.passed());
                    black_box(report.words_checked)
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, sweep_benchmarks);
criterion_main!(benches);
