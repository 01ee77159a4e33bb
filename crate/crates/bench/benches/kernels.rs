use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use torsionlab::corpus::bundled_ring;
use torsionlab::derivext::{extend_on, Strategy};
use torsionlab::gabriel::{enumerate_gabriel_filters, lambek_filter};
use torsionlab::quotient::{module_of_quotients, ring_of_quotients};
use torsionlab::suites::{run_all, Lab};
use torsionlab::symmetric::{enumerate_symmetric_filters, SymmetricContext};
use torsionlab::{enumerate_derivations, enumerate_ideals, FiniteModule, Side};

fn kernels(c: &mut Criterion) {
    let t2 = bundled_ring("t2f2").unwrap();
    c.bench_function("ideals/t2f2", |b| b.iter(|| enumerate_ideals(black_box(&t2), Side::Right)));
    c.bench_function("derivations/t2f2", |b| b.iter(|| enumerate_derivations(black_box(&t2))));
    c.bench_function("filters/t2f2", |b| b.iter(|| enumerate_gabriel_filters(black_box(&t2), Side::Right).unwrap()));

    let lambek = lambek_filter(&t2, Side::Right).unwrap();
    c.bench_function("qmax/t2f2", |b| b.iter(|| ring_of_quotients(black_box(&lambek)).unwrap()));

    let qm = module_of_quotients(&lambek, &FiniteModule::regular_right(&t2)).unwrap();
    let delta = enumerate_derivations(&t2).pop().unwrap();
    let mut g = c.benchmark_group("extend/t2f2");
    for s in [Strategy::Formula, Strategy::Search] {
        g.bench_function(format!("{s:?}"), |b| b.iter(|| extend_on(&qm, &delta.table, &delta.table, s).unwrap()));
    }
    g.finish();

    let dual = bundled_ring("dual").unwrap();
    c.bench_function("symmetric-filters/dual", |b| {
        b.iter(|| enumerate_symmetric_filters(&std::sync::Arc::new(SymmetricContext::new(black_box(&dual)).unwrap())).unwrap())
    });

    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("all/z6", |b| b.iter(|| run_all(&Lab::bundled("z6").unwrap(), false)));
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
