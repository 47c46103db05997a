use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcurv_core::curvature::{bianchi_check, dk_expansion_check, omega_tower, Connection, VectorField};
use qcurv_core::propagator::{invertibility_scan, Metric, NumericQMatrix};
use qcurv_core::sample::rng;
use qcurv_core::symmetrize::{qsymmetrize, ComponentTensor, QMatrix};
use qcurv_core::{generate_sm, Coefficient, Modes};
use std::hint::black_box;

fn tower(c: &mut Criterion) {
    let mut g = c.benchmark_group("omega_tower");
    for (k, n) in [(3, 2), (4, 2), (3, 3)] {
        let conn = Connection::generic(n);
        g.bench_with_input(BenchmarkId::from_parameter(format!("k{k}_n{n}")), &conn, |b, conn| {
            b.iter(|| omega_tower(conn, k, Modes::free()).unwrap())
        });
    }
    g.finish();
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("identities");
    for (k, n) in [(2, 2), (3, 3)] {
        g.bench_function(format!("bianchi_k{k}_n{n}"), |b| b.iter(|| bianchi_check(k, n, Modes::paired(k)).unwrap()));
    }
    let v = VectorField::generic(2);
    g.bench_function("dk_expansion_k5", |b| b.iter(|| dk_expansion_check(5, &v).unwrap()));
    g.finish();
}

fn symmetrizer(c: &mut Criterion) {
    let mut g = c.benchmark_group("qsymmetrize");
    for (m, n) in [(2, 4), (3, 3), (4, 3)] {
        let q = QMatrix::symbolic_uniform(n, Coefficient::from_integer(-1)).unwrap();
        let t = ComponentTensor::generic(m, n, false).unwrap();
        g.bench_function(format!("m{m}_n{n}"), |b| b.iter(|| qsymmetrize(&t, &q).unwrap()));
    }
    g.bench_function("generate_s7", |b| b.iter(|| generate_sm(black_box(7)).unwrap()));
    g.finish();
}

fn propagator(c: &mut Criterion) {
    let d = 4;
    let q = NumericQMatrix::random(d, &mut rng(1));
    let metric = Metric::mostly_minus(d);
    c.bench_function("propagator_scan_1000", |b| {
        b.iter(|| invertibility_scan(&q, 1000, black_box(7), &metric, 1e-10).unwrap())
    });
}

criterion_group!(benches, tower, identities, symmetrizer, propagator);
criterion_main!(benches);
