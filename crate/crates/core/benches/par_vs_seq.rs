//! Parallel vs sequential throughput of the data-parallel batch verifiers.
//! Run as `cargo bench -p freebialg` (needs the default `parallel` feature
//! for the rayon side of each comparison).

use criterion::{criterion_group, criterion_main, Criterion};

use freebialg::analysis::{quotient_word_rank, DeltaTable};
use freebialg::exec::ExecMode;
use freebialg::quotient::{check_overlap_ambiguities, verify_bialgebra_axioms, AlgebraSpec};

fn modes() -> Vec<(&'static str, ExecMode)> {
    let mut v = vec![("sequential", ExecMode::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", ExecMode::Parallel));
    v
}

fn bench_axiom_batch(c: &mut Criterion) {
    let spec = AlgebraSpec::tbar_np(3, 3).unwrap();
    let mut group = c.benchmark_group("axioms tbar-np(3,3) degree<=5");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let r = verify_bialgebra_axioms(&spec, 5, 1, mode).unwrap();
                assert!(r.passed());
            })
        });
    }
    group.finish();
}

fn bench_word_rank(c: &mut Criterion) {
    let spec = AlgebraSpec::tbar(0).unwrap();
    let mut group = c.benchmark_group("word rank tbar length<=8");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let r = quotient_word_rank(&spec, 8, mode).unwrap();
                assert_eq!(r, 187);
            })
        });
    }
    group.finish();
}

fn bench_delta_table(c: &mut Criterion) {
    let spec = AlgebraSpec::tbar_npd(3, 3, vec![1]).unwrap().with_cop(true);
    let mut group = c.benchmark_group("coproduct table tbar-npd(3,3;1)");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let dt = DeltaTable::build(&spec, 6, 0..=2, mode).unwrap();
                assert_eq!(dt.basis.len(), 27);
            })
        });
    }
    group.finish();
}

fn bench_overlaps(c: &mut Criterion) {
    let spec = AlgebraSpec::tbar(0).unwrap();
    let mut group = c.benchmark_group("diamond overlaps tbar K=8");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let r = check_overlap_ambiguities(&spec, 8, mode).unwrap();
                assert!(r.passed());
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_axiom_batch,
    bench_word_rank,
    bench_delta_table,
    bench_overlaps
);
criterion_main!(benches);
