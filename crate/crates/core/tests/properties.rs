use bnaggsa_core::engine::compute_masses;
use bnaggsa_core::windfarm::{evaluate_layout, random_layout};
use bnaggsa_core::{
    benchmarks, Algorithm, Engine, FarmGrid, FarmModel, LayoutEvaluator, ProblemId, RngStream, Sense, SwarmState,
    TurbineSpec, WakeExponent, WindRose,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn steps_keep_engine_invariants(
        seed in any::<u64>(),
        n in 3usize..20,
        t in 2usize..30,
        bnaggsa in any::<bool>(),
        pid in prop::sample::select(vec![1u8, 4, 8, 12, 16, 19]),
    ) {
        let problem = benchmarks::problem(ProblemId::new(pid).unwrap());
        let algo = if bnaggsa { Algorithm::Bnaggsa } else { Algorithm::Bgsa };
        let config = algo.config(n, t);
        let engine = Engine::new(config.clone()).unwrap();
        let mut rng = RngStream::new(seed);
        let mut eval_rng = rng.fork(1);
        let mut swarm = SwarmState::initialize(&problem, &config, &mut rng);
        let mut last = f64::INFINITY;
        for _ in 0..t {
            engine.step(&mut swarm, &problem, &mut rng, &mut eval_rng).unwrap();
            for p in &swarm.particles {
                prop_assert!(p.velocity.iter().all(|v| v.abs() <= 6.0));
                prop_assert_eq!(p.position.len(), problem.total_bits());
            }
            let total: f64 = swarm.particles.iter().map(|p| p.mass).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            let best = swarm.best_fitness().unwrap();
            prop_assert!(best <= last);
            last = best;
        }
    }

    #[test]
    fn masses_favour_better_fitness(f in prop::collection::vec(-1e6f64..1e6, 2..40)) {
        let m = compute_masses(&f, Sense::Minimize);
        for i in 0..f.len() {
            for j in 0..f.len() {
                if f[i] < f[j] {
                    prop_assert!(m[i] >= m[j]);
                }
            }
        }
    }

    #[test]
    fn cached_and_direct_evaluation_agree(seed in any::<u64>(), nt in 1usize..12, dir in 0usize..16, linear in any::<bool>()) {
        let exponent = if linear { WakeExponent::Linear } else { WakeExponent::Squared };
        let model = FarmModel::new(
            FarmGrid::with_cells(6, 4),
            TurbineSpec::default(),
            WindRose::single(22.5 * dir as f64, 10.8).unwrap(),
            exponent,
        ).unwrap();
        let x = random_layout(24, nt, &mut RngStream::new(seed));
        let direct = evaluate_layout(&x, &model).unwrap();
        let cached = LayoutEvaluator::new(model).unwrap().evaluate(&x).unwrap();
        prop_assert!((direct.f2_kw - cached.f2_kw).abs() <= 1e-9 * direct.f2_kw.max(1.0));
        prop_assert!(direct.f1 <= 1.0 && direct.f1 > 0.0);
    }
}
