//! `bnaggsa`: benchmark runs, windfarm layout optimisation and the oracle
//! suite.
//!
//! Exit status: 0 on success, 1 on runtime failure or a failing check, 2 on
//! invalid input (flags, config, problem id, rose file).

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use bnaggsa_core::harness::{
    export, nt_sweep, run_experiment, write_sweep_csv, ExperimentPlan, ExperimentReport, ProblemRef, SweepResult,
    NT_SWEEP, SWEEP_FILE,
};
use bnaggsa_core::validate::{corrupted_hartmann_catalog, run_checks, run_checks_with};
use bnaggsa_core::{
    benchmarks, AggregateWeights, Algorithm, BenchmarkOptions, FarmGrid, FarmModel, PowerUnit, ProblemId,
    TurbineSpec, WakeExponent, WindRose,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "bnaggsa", version, about = "Binary gravitational search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a benchmark problem (f1..f23) over seeded independent runs.
    Bench(BenchArgs),
    /// Optimise a windfarm layout for one turbine count or the N_T sweep.
    Windfarm(WindfarmArgs),
    /// Run the built-in oracle suite.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// bgsa or bnaggsa
    #[arg(long)]
    algo: Option<Algorithm>,
    /// Swarm size N
    #[arg(long)]
    swarm: Option<usize>,
    /// Iterations T
    #[arg(long)]
    iters: Option<usize>,
    /// Independent runs
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed; a logged entropy seed is used when absent
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for concurrent runs
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML configuration file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Problem id, f1..f23
    problem: String,
    #[command(flatten)]
    common: Common,
    /// Use Σ|x| + Π|x| for f2
    #[arg(long)]
    f2_classical: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnitArg {
    Kw,
    Mw,
}

#[derive(Args, Debug)]
struct WindfarmArgs {
    /// Wind rose file
    #[arg(long)]
    rose: Option<PathBuf>,
    /// Number of turbines
    #[arg(long, conflicts_with = "nt_sweep")]
    nt: Option<usize>,
    /// Run N_T = 10, 20, ..., 60
    #[arg(long)]
    nt_sweep: bool,
    /// Wake deficit exponent
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    wake_exponent: Option<u8>,
    /// Unit of total power inside the aggregate objective
    #[arg(long, value_enum)]
    power_unit: Option<UnitArg>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Print results as JSON
    #[arg(long)]
    json: bool,
    /// Negative control: run against a deliberately wrong Hartmann objective
    #[arg(long, hide = true)]
    corrupt_hartmann: bool,
}

/// Failure with its exit status.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
    ChecksFailed,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => cmd_bench(args),
        Command::Windfarm(args) => cmd_windfarm(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::ChecksFailed) => ExitCode::from(1),
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, Failure> {
    match path {
        Some(p) => ConfigFile::load(p).map_err(usage),
        None => Ok(ConfigFile::default()),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s} (from entropy; pass --seed {s} to replay)");
        s
    })
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let cfg = load_config(args.common.config.as_deref())?.bench;
    let id: ProblemId = args.problem.parse().map_err(usage)?;
    let c = &args.common;
    let algorithm = c.algo.or(cfg.algo).unwrap_or(Algorithm::Bnaggsa);
    let options = BenchmarkOptions {
        f2_classical: args.f2_classical || cfg.f2_classical.unwrap_or(false),
    };
    let mut plan = ExperimentPlan {
        problem: ProblemRef::Benchmark { id, options },
        swarm_size: c.swarm.or(cfg.swarm).unwrap_or(50),
        iterations: c.iters.or(cfg.iters).unwrap_or(500),
        runs: c.runs.or(cfg.runs).unwrap_or(30),
        workers: c.workers.or(cfg.workers),
        ..ExperimentPlan::benchmark(id, algorithm, 0)
    };
    plan.validate().map_err(usage)?;
    plan.master_seed = resolve_seed(c.seed.or(cfg.seed));
    let out = c
        .out
        .clone()
        .or(cfg.out)
        .unwrap_or_else(|| PathBuf::from(format!("results/bench_{id}_{algorithm}")));

    let report = run_experiment(&plan).context("running experiment")?;
    let problem = benchmarks::problem_with(id, options);
    println!(
        "{id} ({}) {algorithm}: N = {}, T = {}, runs = {}, seed = {}",
        problem.name, plan.swarm_size, plan.iterations, plan.runs, plan.master_seed
    );
    println!(
        "ABSF {:e}  STDV {:e}  best {:e}  (tabulated minimum {})",
        report.summary.absf, report.summary.stdv, report.summary.best, problem.f_min
    );
    let paths = export(&report, &out, None).context("writing outputs")?;
    print_paths(&paths.files);
    Ok(())
}

struct WindfarmSettings {
    model: FarmModel,
    turbines: Option<usize>,
    plan: ExperimentPlan,
    out: PathBuf,
    seed: Option<u64>,
}

fn windfarm_settings(args: &WindfarmArgs) -> Result<WindfarmSettings, Failure> {
    let cfg = load_config(args.common.config.as_deref())?.windfarm;
    let c = &args.common;
    let rose_path = args
        .rose
        .clone()
        .or(cfg.rose)
        .ok_or_else(|| usage(anyhow!("--rose is required (or `rose` in the config file)")))?;
    let rose = WindRose::from_path(&rose_path).map_err(usage)?;
    let exponent = WakeExponent::try_from(args.wake_exponent.or(cfg.wake_exponent).unwrap_or(2)).map_err(usage)?;
    let power_unit = match (args.power_unit, cfg.power_unit.as_deref()) {
        (Some(UnitArg::Kw), _) => PowerUnit::Kw,
        (Some(UnitArg::Mw), _) => PowerUnit::Mw,
        (None, None) => PowerUnit::Kw,
        (None, Some(s)) => match s.to_ascii_lowercase().as_str() {
            "kw" => PowerUnit::Kw,
            "mw" => PowerUnit::Mw,
            other => return Err(usage(anyhow!("power_unit must be kw or mw, got `{other}`"))),
        },
    };
    let turbine = cfg.turbine.unwrap_or_else(TurbineSpec::default);
    let model = FarmModel::new(FarmGrid::default(), turbine, rose, exponent).map_err(usage)?;

    let sweep = args.nt_sweep || (args.nt.is_none() && cfg.nt_sweep.unwrap_or(false));
    let turbines = if sweep {
        None
    } else {
        Some(
            args.nt
                .or(cfg.nt)
                .ok_or_else(|| usage(anyhow!("give --nt N or --nt-sweep")))?,
        )
    };
    let cells = model.grid.cells();
    for nt in turbines.map_or(NT_SWEEP.to_vec(), |n| vec![n]) {
        if nt == 0 || nt > cells {
            return Err(usage(anyhow!("turbine count must be in 1..={cells}, got {nt}")));
        }
    }

    let algorithm = c.algo.or(cfg.algo).unwrap_or(Algorithm::Bnaggsa);
    let plan = ExperimentPlan {
        problem: ProblemRef::Windfarm {
            model: model.clone(),
            turbines: turbines.unwrap_or(NT_SWEEP[0]),
            weights: AggregateWeights {
                power_unit,
                ..AggregateWeights::default()
            },
        },
        algorithm,
        swarm_size: c.swarm.or(cfg.swarm).unwrap_or(500),
        iterations: c.iters.or(cfg.iters).unwrap_or(500),
        runs: c.runs.or(cfg.runs).unwrap_or(10),
        master_seed: 0,
        workers: c.workers.or(cfg.workers),
    };
    plan.validate().map_err(usage)?;
    let out = c.out.clone().or(cfg.out).unwrap_or_else(|| {
        PathBuf::from(match turbines {
            Some(n) => format!("results/windfarm_nt{n}_{algorithm}"),
            None => format!("results/windfarm_sweep_{algorithm}"),
        })
    });
    Ok(WindfarmSettings {
        model,
        turbines,
        plan,
        out,
        seed: c.seed.or(cfg.seed),
    })
}

fn print_table_header() {
    println!(
        "{:>4}  {:>10}  {:>14}  {:>19}  {:>8}",
        "N_T", "power (MW)", "efficiency (%)", "capacity factor (%)", "feasible"
    );
}

fn print_row(turbines: usize, report: &ExperimentReport) {
    let wf = report.windfarm.as_ref().expect("windfarm report");
    match &wf.report {
        Some(r) => println!(
            "{:>4}  {:>10.6}  {:>14.4}  {:>19.4}  {:>5}/{}",
            turbines,
            r.power_mw(),
            100.0 * r.f1,
            100.0 * r.capacity_factor,
            wf.feasible_runs,
            report.runs.len()
        ),
        None => println!(
            "{turbines:>4}  every run ended infeasible (0/{} feasible)",
            report.runs.len()
        ),
    }
}

fn cmd_windfarm(args: WindfarmArgs) -> Result<(), Failure> {
    let mut s = windfarm_settings(&args)?;
    s.plan.master_seed = resolve_seed(s.seed);
    let grid = s.model.grid;
    println!(
        "{} on a {}x{} grid: N = {}, T = {}, runs = {}, seed = {}, wake exponent {}",
        s.plan.algorithm,
        grid.columns,
        grid.rows,
        s.plan.swarm_size,
        s.plan.iterations,
        s.plan.runs,
        s.plan.master_seed,
        s.model.exponent.power()
    );
    let mut written = Vec::new();
    let infeasible;
    match s.turbines {
        Some(nt) => {
            let report = run_experiment(&s.plan).context("running experiment")?;
            print_table_header();
            print_row(nt, &report);
            infeasible = report.windfarm.as_ref().is_some_and(|w| w.all_infeasible());
            written.extend(export(&report, &s.out, Some(&grid)).context("writing outputs")?.files);
        }
        None => {
            let sweep: SweepResult = nt_sweep(&s.plan, &NT_SWEEP).context("running N_T sweep")?;
            print_table_header();
            for (nt, report) in NT_SWEEP.iter().zip(&sweep.reports) {
                print_row(*nt, report);
                let dir = s.out.join(format!("nt{nt}"));
                written.extend(export(report, &dir, Some(&grid)).context("writing outputs")?.files);
            }
            infeasible = sweep.reports.iter().any(|r| r.windfarm.as_ref().is_some_and(|w| w.all_infeasible()));
            let path = s.out.join(SWEEP_FILE);
            write_sweep_csv(&path, &sweep).context("writing sweep table")?;
            written.push(path);
        }
    }
    print_paths(&written);
    if infeasible {
        return Err(Failure::Runtime(anyhow!(
            "no feasible layout found in any run for at least one turbine count"
        )));
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), Failure> {
    let report = if args.corrupt_hartmann {
        run_checks_with(&corrupted_hartmann_catalog())
    } else {
        run_checks()
    };
    if args.json {
        let json = serde_json::json!({
            "passed": report.passed(),
            "checks": report.checks,
        });
        println!("{}", serde_json::to_string_pretty(&json).context("encoding JSON")?);
    } else {
        for c in &report.checks {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let failed = report.failures().count();
        println!("{} checks, {failed} failed", report.checks.len());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
