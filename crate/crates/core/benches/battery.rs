use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qlevy::algebra::{AlgElt, Ctx, QPoint};
use qlevy::hopf::{k1_battery, BatterySpec, Functional};
use qlevy::repkit::{MatRep, Vector, C};
use qlevy::schurmann::{coboundary, PsiExact};
use std::hint::black_box;
use std::sync::Arc;

fn setup(m: usize) -> (Functional, Vec<AlgElt>) {
    let pi = Arc::new(MatRep::suq2_irrep(m, QPoint::half()).unwrap());
    let mut f = Vector::from_element(m, C::new(0.0, 0.0));
    f[0] = C::new(1.0, 0.0);
    f[2] = C::new(0.0, 0.5);
    let eta = Arc::new(coboundary(pi, &f).unwrap());
    let psi = PsiExact::new(eta).functional("psi");
    let b = k1_battery(Ctx::suq(2), &BatterySpec { max_degree: 3, generators: vec![], count: 64, seed: 3 }).unwrap();
    (psi, b)
}

fn battery_eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("battery_eval");
    g.sample_size(10);
    for m in [256, 2048] {
        let (psi, b) = setup(m);
        // warm the word cache so both variants measure evaluation only
        qlevy::par::map_seq(&b, |a| psi.eval(a));
        g.bench_with_input(BenchmarkId::new("seq", m), &m, |bn, _| bn.iter(|| black_box(qlevy::par::map_seq(&b, |a| psi.eval(a)))));
        g.bench_with_input(BenchmarkId::new("par", m), &m, |bn, _| bn.iter(|| black_box(qlevy::par::map(&b, |a| psi.eval(a)))));
    }
    g.finish();
}

fn residuals(c: &mut Criterion) {
    let mut g = c.benchmark_group("relation_residuals");
    g.sample_size(10);
    let rho = MatRep::suq2_irrep(32, QPoint::half()).unwrap();
    let b1 = MatRep::block_embed(&rho, 3, 0).unwrap();
    let b2 = MatRep::block_embed(&rho, 3, 1).unwrap();
    let p = MatRep::conv_product(&b1, &b2).unwrap();
    let cat = qlevy::algebra::relation_catalog(p.ctx);
    g.bench_function("seq", |bn| bn.iter(|| black_box(qlevy::par::map_seq(&cat, |r| p.residual(&r.name, &r.elt).unwrap()))));
    g.bench_function("par", |bn| bn.iter(|| black_box(qlevy::par::map(&cat, |r| p.residual(&r.name, &r.elt).unwrap()))));
    g.finish();
}

criterion_group!(benches, battery_eval, residuals);
criterion_main!(benches);
