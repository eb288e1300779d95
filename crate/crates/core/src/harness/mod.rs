//! Multi-run experiments: seeded independent runs, summary statistics and
//! the N_T sweep over windfarm layouts.
//!
//! Run `r` of a plan uses [`RngStream::derive_seed`]`(master_seed, r)`, so
//! adding runs never changes earlier ones and runs can execute in any order
//! or in parallel. Aggregation is always by run index.

mod export;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use export::{
    export, read_summary_finals, write_sweep_csv, ExportPaths, FINALS_FILE, LAYOUT_CSV_FILE,
    LAYOUT_REPORT_FILE, LAYOUT_SVG_FILE, PROBE_FILE, REPORT_FILE, SUMMARY_FILE, SWEEP_FILE, TRACE_FILE,
};

use crate::benchmarks::{self, BenchmarkOptions, ProblemId};
use crate::bits::{BitString, RngStream};
use crate::engine::{Algorithm, Engine, EngineConfig, Objective, ProbeRecord, Sense};
use crate::error::{Error, Result};
use crate::windfarm::{AggregateWeights, FarmModel, LayoutReport, WindfarmProblem};

/// What to optimise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemRef {
    Benchmark {
        id: ProblemId,
        #[serde(default)]
        options: BenchmarkOptions,
    },
    Windfarm {
        model: FarmModel,
        turbines: usize,
        #[serde(default)]
        weights: AggregateWeights,
    },
}

impl ProblemRef {
    pub fn benchmark(id: ProblemId) -> Self {
        ProblemRef::Benchmark {
            id,
            options: BenchmarkOptions::default(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ProblemRef::Benchmark { id, .. } => id.to_string(),
            ProblemRef::Windfarm { turbines, .. } => format!("windfarm_nt{turbines}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub problem: ProblemRef,
    pub algorithm: Algorithm,
    pub swarm_size: usize,
    pub iterations: usize,
    pub runs: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global pool.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentPlan {
    /// Benchmark protocol defaults: 50 particles, 500 iterations, 30 runs.
    pub fn benchmark(id: ProblemId, algorithm: Algorithm, master_seed: u64) -> Self {
        Self {
            problem: ProblemRef::benchmark(id),
            algorithm,
            swarm_size: 50,
            iterations: 500,
            runs: 30,
            master_seed,
            workers: None,
        }
    }

    /// Windfarm protocol defaults: 500 particles, 500 iterations, 10 runs.
    pub fn windfarm(model: FarmModel, turbines: usize, algorithm: Algorithm, master_seed: u64) -> Self {
        Self {
            problem: ProblemRef::Windfarm {
                model,
                turbines,
                weights: AggregateWeights::default(),
            },
            algorithm,
            swarm_size: 500,
            iterations: 500,
            runs: 10,
            master_seed,
            workers: None,
        }
    }

    pub fn engine_config(&self) -> EngineConfig {
        self.algorithm.config(self.swarm_size, self.iterations)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter("workers must be at least 1".into()));
        }
        self.engine_config().validate()
    }
}

/// One seeded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub final_best: f64,
    pub best: BitString,
    pub trace: Vec<f64>,
    pub probe: Vec<ProbeRecord>,
}

/// Statistics over the final best-so-far values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Mean of finals.
    pub absf: f64,
    /// Standard deviation of finals with divisor `n`.
    pub stdv: f64,
    /// Best final in the optimisation sense.
    pub best: f64,
    pub worst: f64,
    pub median: f64,
    pub stdv_divisor: String,
}

impl Summary {
    pub fn from_finals(finals: &[f64], sense: Sense) -> Self {
        let n = finals.len() as f64;
        let absf = finals.iter().sum::<f64>() / n;
        let var = finals.iter().map(|f| (f - absf).powi(2)).sum::<f64>() / n;
        let lo = finals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (best, worst) = match sense {
            Sense::Minimize => (lo, hi),
            Sense::Maximize => (hi, lo),
        };
        Self {
            absf,
            stdv: var.sqrt(),
            best,
            worst,
            median: median(finals),
            stdv_divisor: "n".into(),
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Best feasible layout of a windfarm experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindfarmOutcome {
    pub turbines: usize,
    pub feasible_runs: usize,
    /// `None` when every run ended infeasible.
    pub best_run: Option<usize>,
    pub layout: Option<BitString>,
    pub report: Option<LayoutReport>,
}

impl WindfarmOutcome {
    pub fn all_infeasible(&self) -> bool {
        self.best_run.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub problem: String,
    pub algorithm: Algorithm,
    pub sense: Sense,
    pub swarm_size: usize,
    pub iterations: usize,
    pub master_seed: u64,
    pub runs: Vec<RunRecord>,
    pub summary: Summary,
    pub windfarm: Option<WindfarmOutcome>,
}

impl ExperimentReport {
    pub fn finals(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.final_best).collect()
    }
}

enum Built {
    Benchmark(benchmarks::BenchmarkProblem),
    Windfarm(WindfarmProblem),
}

impl Built {
    fn objective(&self) -> &dyn Objective {
        match self {
            Built::Benchmark(p) => p,
            Built::Windfarm(p) => p,
        }
    }
}

fn build(problem: &ProblemRef) -> Result<Built> {
    Ok(match problem {
        ProblemRef::Benchmark { id, options } => Built::Benchmark(benchmarks::problem_with(*id, *options)),
        ProblemRef::Windfarm {
            model,
            turbines,
            weights,
        } => Built::Windfarm(WindfarmProblem::new(model.clone(), *turbines, *weights)?),
    })
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Executes every run of `plan` and summarises the finals.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let built = build(&plan.problem)?;
    let engine = Engine::new(plan.engine_config())?;
    let objective = built.objective();

    let runs: Vec<RunRecord> = in_pool(plan.workers, || {
        (0..plan.runs)
            .into_par_iter()
            .map(|run| {
                let seed = RngStream::derive_seed(plan.master_seed, run as u64);
                let out = engine.run(objective, seed)?;
                Ok(RunRecord {
                    run,
                    seed,
                    final_best: out.best_fitness,
                    best: out.best,
                    trace: out.trace,
                    probe: out.probe,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let sense = objective.sense();
    let finals: Vec<f64> = runs.iter().map(|r| r.final_best).collect();
    let summary = Summary::from_finals(&finals, sense);

    let windfarm = match &built {
        Built::Windfarm(p) => Some(windfarm_outcome(p, &runs)?),
        Built::Benchmark(_) => None,
    };

    Ok(ExperimentReport {
        problem: plan.problem.label(),
        algorithm: plan.algorithm,
        sense,
        swarm_size: plan.swarm_size,
        iterations: plan.iterations,
        master_seed: plan.master_seed,
        runs,
        summary,
        windfarm,
    })
}

fn windfarm_outcome(problem: &WindfarmProblem, runs: &[RunRecord]) -> Result<WindfarmOutcome> {
    let feasible: Vec<&RunRecord> = runs
        .iter()
        .filter(|r| r.best.count_ones() == problem.turbines)
        .collect();
    let best = feasible
        .iter()
        .copied()
        .reduce(|a, b| if b.final_best > a.final_best { b } else { a });
    let (best_run, layout, report) = match best {
        Some(r) => (Some(r.run), Some(r.best.clone()), Some(problem.report(&r.best)?)),
        None => (None, None, None),
    };
    Ok(WindfarmOutcome {
        turbines: problem.turbines,
        feasible_runs: feasible.len(),
        best_run,
        layout,
        report,
    })
}

/// Turbine counts of the standard sweep.
pub const NT_SWEEP: [usize; 6] = [10, 20, 30, 40, 50, 60];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub turbines: usize,
    pub power_mw: f64,
    pub efficiency_pct: f64,
    pub capacity_factor_pct: f64,
    pub feasible_runs: usize,
    pub runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub algorithm: Algorithm,
    pub rows: Vec<SweepRow>,
    pub reports: Vec<ExperimentReport>,
}

/// One experiment per turbine count; each row reports the best feasible
/// layout found.
pub fn nt_sweep(template: &ExperimentPlan, counts: &[usize]) -> Result<SweepResult> {
    let ProblemRef::Windfarm { model, weights, .. } = &template.problem else {
        return Err(Error::InvalidParameter("N_T sweep needs a windfarm plan".into()));
    };
    let mut rows = Vec::with_capacity(counts.len());
    let mut reports = Vec::with_capacity(counts.len());
    for &turbines in counts {
        let plan = ExperimentPlan {
            problem: ProblemRef::Windfarm {
                model: model.clone(),
                turbines,
                weights: *weights,
            },
            ..template.clone()
        };
        let report = run_experiment(&plan)?;
        let wf = report.windfarm.as_ref().expect("windfarm plan");
        let (power_mw, eff, cf) = match &wf.report {
            Some(r) => (r.power_mw(), 100.0 * r.f1, 100.0 * r.capacity_factor),
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        rows.push(SweepRow {
            turbines,
            power_mw,
            efficiency_pct: eff,
            capacity_factor_pct: cf,
            feasible_runs: wf.feasible_runs,
            runs: plan.runs,
        });
        reports.push(report);
    }
    Ok(SweepResult {
        algorithm: template.algorithm,
        rows,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windfarm::WindRose;

    fn small_plan(algorithm: Algorithm) -> ExperimentPlan {
        ExperimentPlan {
            swarm_size: 10,
            iterations: 20,
            runs: 4,
            ..ExperimentPlan::benchmark("f1".parse().unwrap(), algorithm, 77)
        }
    }

    #[test]
    fn summary_statistics() {
        let s = Summary::from_finals(&[1.0, 2.0, 3.0, 6.0], Sense::Minimize);
        assert_eq!(s.absf, 3.0);
        assert_eq!(s.stdv, (14.0f64 / 4.0).sqrt());
        assert_eq!(s.best, 1.0);
        assert_eq!(s.worst, 6.0);
        assert_eq!(s.median, 2.5);
        let s = Summary::from_finals(&[4.0], Sense::Maximize);
        assert_eq!((s.absf, s.stdv, s.best), (4.0, 0.0, 4.0));
        let s = Summary::from_finals(&[1.0, 9.0, 5.0], Sense::Maximize);
        assert_eq!((s.best, s.median), (9.0, 5.0));
    }

    #[test]
    fn single_run_report() {
        let plan = ExperimentPlan { runs: 1, ..small_plan(Algorithm::Bgsa) };
        let r = run_experiment(&plan).unwrap();
        assert_eq!(r.runs.len(), 1);
        assert_eq!(r.summary.absf, r.runs[0].final_best);
        assert_eq!(r.summary.best, r.runs[0].final_best);
        assert_eq!(r.summary.stdv, 0.0);
    }

    #[test]
    fn reports_are_reproducible_across_worker_counts() {
        let plan = small_plan(Algorithm::Bnaggsa);
        let a = run_experiment(&plan).unwrap();
        let b = run_experiment(&ExperimentPlan { workers: Some(1), ..plan.clone() }).unwrap();
        let c = run_experiment(&ExperimentPlan { workers: Some(3), ..plan.clone() }).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a, c);
        assert!(a.summary.absf >= a.summary.best && a.summary.absf <= a.summary.worst);
    }

    #[test]
    fn extra_runs_leave_earlier_runs_untouched() {
        let plan = small_plan(Algorithm::Bgsa);
        let a = run_experiment(&plan).unwrap();
        let b = run_experiment(&ExperimentPlan { runs: 6, ..plan }).unwrap();
        assert_eq!(a.runs[..], b.runs[..4]);
    }

    #[test]
    fn invalid_plans_rejected() {
        assert!(run_experiment(&ExperimentPlan { runs: 0, ..small_plan(Algorithm::Bgsa) }).is_err());
        assert!(run_experiment(&ExperimentPlan { workers: Some(0), ..small_plan(Algorithm::Bgsa) }).is_err());
        assert!(run_experiment(&ExperimentPlan { swarm_size: 1, ..small_plan(Algorithm::Bgsa) }).is_err());
    }

    #[test]
    fn windfarm_runs_report_feasible_layouts() {
        let model = FarmModel::standard(WindRose::single(270.0, 10.8).unwrap());
        let plan = ExperimentPlan {
            swarm_size: 20,
            iterations: 15,
            runs: 2,
            ..ExperimentPlan::windfarm(model, 5, Algorithm::Bnaggsa, 3)
        };
        let r = run_experiment(&plan).unwrap();
        let wf = r.windfarm.unwrap();
        assert!(!wf.all_infeasible());
        assert_eq!(wf.layout.unwrap().count_ones(), 5);
        let rep = wf.report.unwrap();
        assert_eq!(rep.capacity_factor, rep.f2_kw / (5.0 * 2000.0));
    }

    #[test]
    fn sweep_requires_windfarm_plan() {
        assert!(nt_sweep(&small_plan(Algorithm::Bgsa), &NT_SWEEP).is_err());
    }
}
