use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bnaggsa"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn rose(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/roses").join(name)
}

fn run_rows(summary: &Path) -> usize {
    let mut r = csv::Reader::from_path(summary).unwrap();
    r.records()
        .filter(|rec| rec.as_ref().unwrap()[0].parse::<usize>().is_ok())
        .count()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bench_defaults_to_thirty_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f1");
    let o = run(&["bench", "f1", "--algo", "bgsa", "--seed", "42", "--iters", "20", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(run_rows(&out.join("summary.csv")), 30);
    for f in ["summary.csv", "trace.csv", "finals.csv", "report.json"] {
        assert!(stdout(&o).contains(&out.join(f).display().to_string()), "{f} not reported");
    }
}

#[test]
fn bench_run_count_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f20");
    let o = run(&["bench", "f20", "--runs", "5", "--swarm", "10", "--iters", "10", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(run_rows(&out.join("summary.csv")), 5);
}

#[test]
fn unknown_problem_or_flag_is_a_usage_error() {
    assert_eq!(run(&["bench", "f99"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "f1", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "f1", "--algo", "pso"]).status.code(), Some(2));
}

#[test]
fn missing_seed_is_logged() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bench", "f2", "--runs", "1", "--swarm", "5", "--iters", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("seed: "), "{}", stderr(&o));
}

#[test]
fn seeded_bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut finals = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let o = run(&["bench", "f5", "--runs", "3", "--swarm", "8", "--iters", "15", "--seed", "9", "--workers", "2", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        finals.push(std::fs::read_to_string(out.join("finals.csv")).unwrap());
    }
    assert_eq!(finals[0], finals[1]);
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[bench]\nruns = 4\nswarm = 6\niters = 5\nseed = 3\nout = \"from_config\"\n").unwrap();
    let o = run(&["bench", "f3", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(run_rows(&dir.path().join("from_config/summary.csv")), 4);
    let out = dir.path().join("flags");
    let o = run(&["bench", "f3", "--config", cfg.to_str().unwrap(), "--runs", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(run_rows(&out.join("summary.csv")), 2);

    std::fs::write(&cfg, "[bench]\nrunz = 4\n").unwrap();
    assert_eq!(run(&["bench", "f3", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn windfarm_layout_has_requested_turbines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wf");
    let o = run(&[
        "windfarm", "--rose", rose("synthetic_site_a.rose").to_str().unwrap(), "--nt", "10", "--seed", "7",
        "--swarm", "30", "--iters", "15", "--runs", "2", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = std::fs::read_to_string(out.join("layout.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="turbine""#).count(), 10);
    assert!(stdout(&o).contains("layout.svg"));
}

#[test]
fn windfarm_sweep_has_six_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = run(&[
        "windfarm", "--rose", rose("synthetic_site_b.rose").to_str().unwrap(), "--nt-sweep", "--seed", "1",
        "--swarm", "10", "--iters", "5", "--runs", "1", "--wake-exponent", "1", "--power-unit", "mw",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = std::fs::read_to_string(out.join("nt_sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 7);
    assert!(table.starts_with("n_t,power_mw,efficiency_pct,capacity_factor_pct"));
}

#[test]
fn invalid_rose_names_the_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.rose");
    std::fs::write(&path, "direction_deg,speed_mps,probability\n0,8.2,0.6\n180,8.2,0.3\n").unwrap();
    let o = run(&["windfarm", "--rose", path.to_str().unwrap(), "--nt", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("deficit"), "{}", stderr(&o));
}

#[test]
fn windfarm_rejects_bad_settings_before_running() {
    let r = rose("synthetic_site_a.rose");
    let r = r.to_str().unwrap();
    assert_eq!(run(&["windfarm", "--rose", r]).status.code(), Some(2));
    assert_eq!(run(&["windfarm", "--rose", r, "--nt", "101"]).status.code(), Some(2));
    assert_eq!(run(&["windfarm", "--rose", r, "--nt", "5", "--wake-exponent", "3"]).status.code(), Some(2));
    assert_eq!(run(&["windfarm", "--nt", "5"]).status.code(), Some(2));
}

#[test]
fn validate_passes_and_catches_corruption() {
    let o = run(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = run(&["validate", "--corrupt-hartmann"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL benchmark_optimum_f19"));

    let o = run(&["validate", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() > 30);
}
