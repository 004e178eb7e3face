use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ergodyn_core::symbolic::PeriodicTable;
use ergodyn_core::thermo::{equilibrium_periodic_with, pressure_periodic_with, Potential, UtilitySpec};
use ergodyn_core::Exec;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn periodic_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("periodic_table");
    g.sample_size(10);
    for n in [12, 16] {
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| b.iter(|| PeriodicTable::build_with(5.0, n, exec)));
        }
    }
    g.finish();
}

fn pressure(c: &mut Criterion) {
    let phi = Potential::w(UtilitySpec::new(0.5, 0.5, 0.5).unwrap());
    let mut g = c.benchmark_group("pressure_w");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| pressure_periodic_with(&phi, 5.0, &[14], exec)));
    }
    g.finish();
}

fn ensemble(c: &mut Criterion) {
    let phi = Potential::u(UtilitySpec::new(0.5, 0.5, 0.5).unwrap());
    let mut g = c.benchmark_group("equilibrium_u");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| equilibrium_periodic_with(&phi, 5.0, 14, exec)));
    }
    g.finish();
}

criterion_group!(benches, periodic_table, pressure, ensemble);
criterion_main!(benches);
