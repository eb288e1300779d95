use bnaggsa_core::{benchmarks, Algorithm, Engine, RngStream, SwarmState};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine_step");
    for id in ["f1", "f9", "f21"] {
        let problem = benchmarks::problem(id.parse().unwrap());
        for algo in [Algorithm::Bgsa, Algorithm::Bnaggsa] {
            let engine = Engine::new(algo.config(50, 500)).unwrap();
            let mut rng = RngStream::new(7);
            let mut eval_rng = rng.fork(1);
            let mut swarm = SwarmState::initialize(&problem, engine.config(), &mut rng);
            group.bench_function(BenchmarkId::new(algo.name(), id), |b| {
                b.iter(|| {
                    if swarm.iteration >= swarm.max_iterations {
                        swarm.iteration = 0;
                    }
                    engine.step(&mut swarm, &problem, &mut rng, &mut eval_rng).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn full_run(c: &mut Criterion) {
    let problem = benchmarks::problem("f5".parse().unwrap());
    let engine = Engine::new(Algorithm::Bnaggsa.config(50, 100)).unwrap();
    c.bench_function("bnaggsa_f5_run_50x100", |b| b.iter(|| engine.run(&problem, 11).unwrap()));
}

criterion_group!(benches, step, full_run);
criterion_main!(benches);
