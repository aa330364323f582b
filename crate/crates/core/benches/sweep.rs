use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbplan::scenario::NetworkScenario;
use mbplan::spectrum::SpectrumPlan;
use mbplan::sweep::{run_sweep, SweepOptions, SweepSpec};
use mbplan::Execution;

fn bench_sweep(c: &mut Criterion) {
    let base = NetworkScenario::reference_man();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);

    // counts and costs only
    let eta: SweepSpec = "eta=0:1:0.01".parse().unwrap();
    // every point also runs first-fit spectrum assignment
    let h4: SweepSpec = "h4=40:400:20".parse().unwrap();

    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let counts = SweepOptions { execution: exec, ..SweepOptions::default() };
        group.bench_with_input(BenchmarkId::new("eta_counts", label), &counts, |b, o| {
            b.iter(|| run_sweep(&base, &eta, o).unwrap());
        });
        let feasibility = SweepOptions { execution: exec, plan: Some(SpectrumPlan::default()), ..SweepOptions::default() };
        group.bench_with_input(BenchmarkId::new("h4_feasibility", label), &feasibility, |b, o| {
            b.iter(|| run_sweep(&base, &h4, o).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
