//! Built-in oracle suite: hand-computed values that the library must
//! reproduce. Each check is independent and reports a detail string.

use serde::{Deserialize, Serialize};

use crate::benchmarks::{self, BenchmarkOptions, BenchmarkProblem, ProblemId};
use crate::bits::{BitString, DecodingSpec, RngStream};
use crate::windfarm::{
    axial_induction, downstream_rotor_radius, entrainment_constant, evaluate_layout, overlap_area, power,
    FarmGrid, FarmModel, TurbineSpec, WakeExponent, WindRose,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }

    fn close(name: impl Into<String>, got: f64, want: f64, tol: f64) -> Self {
        let passed = (got - want).abs() <= tol * want.abs().max(1.0);
        Self::new(name, passed, format!("got {got}, expected {want} (tolerance {tol:e})"))
    }
}

/// Outcome of [`run_checks`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every check against the standard benchmark catalog.
pub fn run_checks() -> ValidationReport {
    run_checks_with(&benchmarks::catalog())
}

/// Runs every check, taking the benchmark optima from `catalog`.
pub fn run_checks_with(catalog: &[BenchmarkProblem]) -> ValidationReport {
    let mut checks = Vec::new();
    checks.extend(benchmark_optima(catalog));
    checks.extend(decoder_checks());
    checks.extend(wake_checks());
    checks.extend(power_checks());
    checks.extend(overlap_checks());
    ValidationReport { checks }
}

/// Standard catalog with the 3-D Hartmann objective deliberately wrong, as
/// a negative control for the suite.
pub fn corrupted_hartmann_catalog() -> Vec<BenchmarkProblem> {
    benchmarks::catalog_with(BenchmarkOptions::default())
        .into_iter()
        .map(|p| {
            if p.id == ProblemId::new(19).expect("f19 exists") {
                let mut bad_p = benchmarks::HARTMANN3_P;
                bad_p[3][2] += 0.2;
                p.with_objective(std::sync::Arc::new(move |x: &[f64], _: &mut RngStream| {
                    benchmarks::hartmann::<3>(x, &benchmarks::HARTMANN3_A, &benchmarks::HARTMANN_C, &bad_p)
                }))
            } else {
                p
            }
        })
        .collect()
}

fn benchmark_optima(catalog: &[BenchmarkProblem]) -> Vec<CheckResult> {
    let mut rng = RngStream::new(0);
    catalog
        .iter()
        .map(|p| {
            let name = format!("benchmark_optimum_{}", p.id);
            let v = p.objective_at(&p.optimizer, &mut rng);
            if p.noisy {
                // noise is U[0, 1) on top of the minimum
                let passed = v >= p.f_min && v < p.f_min + 1.0;
                CheckResult::new(name, passed, format!("noisy value {v} in [{}, {})", p.f_min, p.f_min + 1.0))
            } else {
                let passed = (v - p.f_min).abs() <= p.f_min_tolerance;
                CheckResult::new(
                    name,
                    passed,
                    format!(
                        "{}: f(x*) = {v}, tabulated {} (tolerance {:e})",
                        p.name, p.f_min, p.f_min_tolerance
                    ),
                )
            }
        })
        .collect()
}

fn decoder_checks() -> Vec<CheckResult> {
    let dec = DecodingSpec::new(15, -100.0, 100.0, 1).expect("valid decoding");
    let zeros = dec.decode_real(BitString::zeros(15).as_slice()).unwrap_or(f64::NAN);
    let ones = dec.decode_real(BitString::ones(15).as_slice()).unwrap_or(f64::NAN);
    let small = DecodingSpec::new(4, 0.0, 16.0, 1).expect("valid decoding");
    let mut enumerated = true;
    for k in 0..16u32 {
        let x = BitString::from_bools((0..4).map(|b| k >> b & 1 == 1));
        enumerated &= small.decode_real(x.as_slice()).ok() == Some(f64::from(k));
    }
    vec![
        CheckResult::close("decode_all_zeros", zeros, -100.0, 0.0),
        CheckResult::close("decode_all_ones", ones, 99.993896484375, 1e-15),
        CheckResult::new(
            "decode_lsb_first_enumeration",
            enumerated,
            "4-bit strings decode to their LSB-first integers on [0, 16)".into(),
        ),
    ]
}

fn wake_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    match (
        axial_induction(0.8),
        entrainment_constant(60.0, 0.3),
    ) {
        (Ok(a), Ok(alpha)) => {
            out.push(CheckResult::close("axial_induction", a, 0.27639320225002106, 1e-12));
            out.push(CheckResult::close("entrainment_constant", alpha, 0.09436958290887743, 1e-12));
            match downstream_rotor_radius(40.0, a) {
                Ok(r1) => out.push(CheckResult::close("downstream_rotor_radius", r1, 50.88078598056276, 1e-12)),
                Err(e) => out.push(CheckResult::new("downstream_rotor_radius", false, e.to_string())),
            }
        }
        (a, alpha) => out.push(CheckResult::new(
            "wake_constants",
            false,
            format!("{a:?} / {alpha:?}"),
        )),
    }

    // two turbines 400 m apart in line with a northerly 8.2 m/s wind
    let mut layout = BitString::zeros(100);
    layout.set(0, true);
    layout.set(20, true);
    for (exponent, want) in [
        (WakeExponent::Squared, 1226.5169718714183),
        (WakeExponent::Linear, 949.4344786764186),
    ] {
        let name = format!("two_turbine_power_exponent_{}", exponent.power());
        let result = WindRose::single(0.0, 8.2)
            .and_then(|rose| FarmModel::new(FarmGrid::default(), TurbineSpec::default(), rose, exponent))
            .and_then(|model| evaluate_layout(&layout, &model));
        out.push(match result {
            Ok(r) => CheckResult::close(name, r.f2_kw, want, 1e-12),
            Err(e) => CheckResult::new(name, false, e.to_string()),
        });
    }
    out
}

fn power_checks() -> Vec<CheckResult> {
    let knee = 4.0 + 25.0 / 19.0;
    let below = power(knee);
    let above = power(knee + 1e-9);
    let mut max_jump: f64 = 0.0;
    let mut prev = power(0.0);
    for k in 1..=250_000 {
        let p = power(k as f64 * 1e-4);
        max_jump = max_jump.max((p - prev).abs());
        prev = p;
    }
    vec![
        CheckResult::close("power_curve_knee", below, 78.94736842105263, 1e-12),
        CheckResult::new(
            "power_curve_continuity",
            (above - below).abs() < 1e-6 && max_jump <= 0.025 + 1e-9,
            format!("knee gap {:e}, largest jump on a 1e-4 m/s grid {max_jump}", (above - below).abs()),
        ),
        CheckResult::close("power_at_8.2", power(8.2), 800.0, 1e-12),
        CheckResult::new(
            "power_cut_out",
            power(25.0) == 2000.0 && power(25.01) == 0.0 && power(3.99) == 0.0,
            "2000 kW at 25 m/s, 0 above cut-out and below cut-in".into(),
        ),
    ]
}

fn overlap_checks() -> Vec<CheckResult> {
    let r = 40.0;
    let area = std::f64::consts::PI * r * r;
    let mut out = Vec::new();
    let cases = [
        ("overlap_contained", 10.0, 88.0, area, 1e-12),
        ("overlap_disjoint", 200.0, 88.0, 0.0, 0.0),
        ("overlap_lens_equal_radii", 40.0, 40.0, 1965.3915177740107, 1e-12),
    ];
    for (name, d, rw, want, tol) in cases {
        out.push(match overlap_area(d, r, rw) {
            Ok(v) => CheckResult::close(name, v, want, tol),
            Err(e) => CheckResult::new(name, false, e.to_string()),
        });
    }

    // Monte Carlo estimate over the bounding box of the lens
    let (d, rw) = (70.0, 60.0);
    let (x0, x1, y1) = ((-r).max(d - rw), r.min(d + rw), r.min(rw));
    let mut rng = RngStream::new(0x5eed);
    let n = 200_000;
    let mut hits = 0usize;
    for _ in 0..n {
        let x = x0 + (x1 - x0) * rng.uniform();
        let y = y1 * (2.0 * rng.uniform() - 1.0);
        if x * x + y * y <= r * r && (x - d).powi(2) + y * y <= rw * rw {
            hits += 1;
        }
    }
    let estimate = (x1 - x0) * 2.0 * y1 * hits as f64 / n as f64;
    out.push(match overlap_area(d, r, rw) {
        Ok(v) => CheckResult::new(
            "overlap_monte_carlo",
            (v - estimate).abs() <= 0.01 * v,
            format!("closed form {v}, estimate {estimate} from {n} samples"),
        ),
        Err(e) => CheckResult::new("overlap_monte_carlo", false, e.to_string()),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let report = run_checks();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.checks.len() >= 23 + 10);
    }

    #[test]
    fn corrupted_hartmann_is_caught() {
        let report = run_checks_with(&corrupted_hartmann_catalog());
        let failures: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failures, ["benchmark_optimum_f19"]);
    }
}
