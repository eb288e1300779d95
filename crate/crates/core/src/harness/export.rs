//! CSV and JSON artifacts of an experiment.
//!
//! | file                | content                                              |
//! |---------------------|------------------------------------------------------|
//! | `summary.csv`       | `run,seed,final_best` rows, then ABSF/STDV/BEST rows |
//! | `trace.csv`         | best-so-far per iteration, one column per run        |
//! | `finals.csv`        | `algorithm,problem,run,final_best` for box plots     |
//! | `probe.csv`         | first-particle diagnostics per run and iteration     |
//! | `report.json`       | the full report                                      |
//! | `layout.csv`/`.svg` | best feasible layout (windfarm plans)                |
//! | `layout_report.csv` | per-turbine expected power of that layout            |

use std::fs;
use std::path::{Path, PathBuf};

use super::{ExperimentReport, SweepResult};
use crate::error::{Error, Result};
use crate::windfarm::{write_layout_csv, write_layout_svg, FarmGrid};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRACE_FILE: &str = "trace.csv";
pub const FINALS_FILE: &str = "finals.csv";
pub const PROBE_FILE: &str = "probe.csv";
pub const REPORT_FILE: &str = "report.json";
pub const LAYOUT_CSV_FILE: &str = "layout.csv";
pub const LAYOUT_SVG_FILE: &str = "layout.svg";
pub const LAYOUT_REPORT_FILE: &str = "layout_report.csv";
pub const SWEEP_FILE: &str = "nt_sweep.csv";

/// Paths written by [`export`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExportPaths {
    pub files: Vec<PathBuf>,
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))
}

fn finish(path: &Path, mut w: csv::Writer<fs::File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes every artifact of `report` into `dir`, creating it if needed.
/// `grid` is required to draw windfarm layouts.
pub fn export(report: &ExperimentReport, dir: &Path, grid: Option<&FarmGrid>) -> Result<ExportPaths> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();

    let path = dir.join(SUMMARY_FILE);
    let mut w = writer(&path)?;
    let rec = |w: &mut csv::Writer<fs::File>, fields: &[String]| {
        w.write_record(fields).map_err(|e| Error::csv(&path, e))
    };
    rec(&mut w, &["run".into(), "seed".into(), "final_best".into()])?;
    for r in &report.runs {
        rec(&mut w, &[r.run.to_string(), r.seed.to_string(), r.final_best.to_string()])?;
    }
    let s = &report.summary;
    for (name, v) in [("ABSF", s.absf), ("STDV", s.stdv), ("BEST", s.best), ("MEDIAN", s.median)] {
        rec(&mut w, &[name.into(), String::new(), v.to_string()])?;
    }
    finish(&path, w)?;
    files.push(path);

    let path = dir.join(TRACE_FILE);
    let mut w = writer(&path)?;
    let mut header = vec!["iteration".to_string()];
    header.extend(report.runs.iter().map(|r| format!("run_{}", r.run)));
    w.write_record(&header).map_err(|e| Error::csv(&path, e))?;
    for it in 0..report.iterations {
        let mut row = vec![(it + 1).to_string()];
        row.extend(
            report
                .runs
                .iter()
                .map(|r| r.trace.get(it).map(f64::to_string).unwrap_or_default()),
        );
        w.write_record(&row).map_err(|e| Error::csv(&path, e))?;
    }
    finish(&path, w)?;
    files.push(path);

    let path = dir.join(FINALS_FILE);
    let mut w = writer(&path)?;
    w.write_record(["algorithm", "problem", "run", "final_best"])
        .map_err(|e| Error::csv(&path, e))?;
    for r in &report.runs {
        w.write_record([
            report.algorithm.name().to_string(),
            report.problem.clone(),
            r.run.to_string(),
            r.final_best.to_string(),
        ])
        .map_err(|e| Error::csv(&path, e))?;
    }
    finish(&path, w)?;
    files.push(path);

    let path = dir.join(PROBE_FILE);
    let mut w = writer(&path)?;
    w.write_record(["run", "iteration", "kbest_size", "neighbours", "mean_distance", "mean_gravity"])
        .map_err(|e| Error::csv(&path, e))?;
    for r in &report.runs {
        for p in &r.probe {
            w.write_record([
                r.run.to_string(),
                p.iteration.to_string(),
                p.kbest_size.to_string(),
                p.neighbours.to_string(),
                p.mean_distance.to_string(),
                p.mean_gravity.to_string(),
            ])
            .map_err(|e| Error::csv(&path, e))?;
        }
    }
    finish(&path, w)?;
    files.push(path);

    let path = dir.join(REPORT_FILE);
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Json {
        path: path.clone(),
        source: e,
    })?;
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    files.push(path);

    if let (Some(wf), Some(grid)) = (&report.windfarm, grid) {
        if let (Some(layout), Some(rep)) = (&wf.layout, &wf.report) {
            let path = dir.join(LAYOUT_CSV_FILE);
            write_layout_csv(&path, layout, grid)?;
            files.push(path);

            let path = dir.join(LAYOUT_SVG_FILE);
            let title = format!(
                "{} N_T = {}: {:.3} MW, efficiency {:.2} %",
                report.algorithm.name(),
                wf.turbines,
                rep.power_mw(),
                100.0 * rep.f1
            );
            write_layout_svg(&path, layout, grid, &title)?;
            files.push(path);

            let path = dir.join(LAYOUT_REPORT_FILE);
            let mut w = writer(&path)?;
            w.write_record(["cell_index", "x_m", "y_m", "expected_kw"])
                .map_err(|e| Error::csv(&path, e))?;
            for &(cell, kw) in &rep.per_turbine_kw {
                let (x, y) = grid.cell_center(cell);
                w.write_record([cell.to_string(), x.to_string(), y.to_string(), kw.to_string()])
                    .map_err(|e| Error::csv(&path, e))?;
            }
            finish(&path, w)?;
            files.push(path);
        }
    }

    Ok(ExportPaths { files })
}

/// Finals listed in a `summary.csv`, by run index.
pub fn read_summary_finals(path: &Path) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        if rec.get(0).is_some_and(|run| run.parse::<usize>().is_ok()) {
            let v = rec
                .get(2)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("{}: bad final_best", path.display())))?;
            out.push(v);
        }
    }
    Ok(out)
}

/// `n_t,power_mw,efficiency_pct,capacity_factor_pct,feasible_runs,runs`.
pub fn write_sweep_csv(path: &Path, sweep: &SweepResult) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["n_t", "power_mw", "efficiency_pct", "capacity_factor_pct", "feasible_runs", "runs"])
        .map_err(|e| Error::csv(path, e))?;
    for r in &sweep.rows {
        w.write_record([
            r.turbines.to_string(),
            r.power_mw.to_string(),
            r.efficiency_pct.to_string(),
            r.capacity_factor_pct.to_string(),
            r.feasible_runs.to_string(),
            r.runs.to_string(),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    finish(path, w)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn summary_round_trips_finals() {
        let plan = ExperimentPlan {
            swarm_size: 8,
            iterations: 12,
            runs: 3,
            ..ExperimentPlan::benchmark("f9".parse().unwrap(), crate::engine::Algorithm::Bgsa, 5)
        };
        let report = run_experiment(&plan).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = export(&report, dir.path(), None).unwrap();
        assert_eq!(paths.files.len(), 5);
        let finals = read_summary_finals(&dir.path().join(SUMMARY_FILE)).unwrap();
        assert_eq!(finals, report.finals());

        let trace = fs::read_to_string(dir.path().join(TRACE_FILE)).unwrap();
        assert_eq!(trace.lines().count(), 13);
        assert!(trace.starts_with("iteration,run_0,run_1,run_2"));

        let json = fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap();
        let back: ExperimentReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
