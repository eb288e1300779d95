//! The 23 classical test problems (f1–f23), decoded from 15-bit segments.
//!
//! f1–f13 use five variables; f14–f23 keep their fixed dimensions. Constant
//! tables for Shekel's foxholes, Kowalik, Hartmann and Shekel are the usual
//! Dixon–Szegő / De Jong values.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, DecodingSpec, RngStream};
use crate::engine::{Objective, Sense};
use crate::error::{Error, Result};

/// Bits per decoded variable.
pub const BITS_PER_VARIABLE: usize = 15;
/// Variable count of the scalable problems f1–f13.
pub const SCALABLE_DIMENSION: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    /// Unimodal.
    U,
    /// Multimodal.
    M,
    /// Multimodal with fixed dimension.
    MFD,
}

/// Problem identifier `f1`..`f23`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ProblemId(u8);

impl ProblemId {
    pub fn new(n: u8) -> Result<Self> {
        if (1..=23).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::UnknownProblem(format!("f{n}")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = ProblemId> {
        (1..=23).map(ProblemId)
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix('f')
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))?;
        let n: u8 = digits.parse().map_err(|_| Error::UnknownProblem(s.to_string()))?;
        Self::new(n).map_err(|_| Error::UnknownProblem(s.to_string()))
    }
}

impl TryFrom<String> for ProblemId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProblemId> for String {
    fn from(id: ProblemId) -> String {
        id.to_string()
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// Real-valued objective. `rng` is only consumed by noisy problems.
pub type ObjectiveFn = Arc<dyn Fn(&[f64], &mut RngStream) -> f64 + Send + Sync>;

/// Catalog switches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkOptions {
    /// Use `Σ|x_i| + Π|x_i|` for f2 instead of the printed `Σ|x_i²| + Π|x_i|`.
    pub f2_classical: bool,
}

#[derive(Clone)]
pub struct BenchmarkProblem {
    pub id: ProblemId,
    pub name: &'static str,
    pub category: Category,
    pub decoding: DecodingSpec,
    pub f_min: f64,
    /// Agreement expected between `f_min` and the objective at `optimizer`;
    /// wider where the tabulated optimum is rounded.
    pub f_min_tolerance: f64,
    /// A known global minimiser from the literature.
    pub optimizer: Vec<f64>,
    /// Adds `U[0, 1)` noise on every evaluation.
    pub noisy: bool,
    objective: ObjectiveFn,
}

impl fmt::Debug for BenchmarkProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkProblem")
            .field("id", &self.id)
            .field("name", &self.name)
            .field("category", &self.category)
            .field("decoding", &self.decoding)
            .field("f_min", &self.f_min)
            .finish_non_exhaustive()
    }
}

impl BenchmarkProblem {
    pub fn bounds(&self) -> (f64, f64) {
        (self.decoding.lower, self.decoding.upper)
    }

    pub fn dimension(&self) -> usize {
        self.decoding.variables
    }

    pub fn total_bits(&self) -> usize {
        self.decoding.total_bits()
    }

    /// Objective at a real point.
    pub fn objective_at(&self, x: &[f64], rng: &mut RngStream) -> f64 {
        (self.objective)(x, rng)
    }

    /// Decodes `x` and applies the objective.
    pub fn evaluate_bits(&self, x: &BitString, rng: &mut RngStream) -> Result<f64> {
        let real = self.decoding.decode_vector(x)?;
        Ok(self.objective_at(&real, rng))
    }

    /// Same problem with a different objective, e.g. for negative controls.
    pub fn with_objective(mut self, objective: ObjectiveFn) -> Self {
        self.objective = objective;
        self
    }
}

impl Objective for BenchmarkProblem {
    fn bit_len(&self) -> usize {
        self.total_bits()
    }

    fn sense(&self) -> Sense {
        Sense::Minimize
    }

    fn evaluate(&self, x: &BitString, rng: &mut RngStream) -> Result<f64> {
        self.evaluate_bits(x, rng)
    }
}

/// Decodes and evaluates `x` on `problem`.
pub fn evaluate(problem: &BenchmarkProblem, x: &BitString, rng: &mut RngStream) -> Result<f64> {
    problem.evaluate_bits(x, rng)
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `Σ|x_i²| + Π|x_i|` as printed, or Schwefel 2.22 when `classical`.
pub fn schwefel_2_22(x: &[f64], classical: bool) -> f64 {
    let sum: f64 = if classical {
        x.iter().map(|v| v.abs()).sum()
    } else {
        x.iter().map(|v| (v * v).abs()).sum()
    };
    sum + x.iter().map(|v| v.abs()).product::<f64>()
}

pub fn schwefel_1_2(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    x.iter()
        .map(|v| {
            prefix += v;
            prefix * prefix
        })
        .sum()
}

pub fn schwefel_2_21(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

pub fn step(x: &[f64]) -> f64 {
    x.iter().map(|v| (v + 0.5).floor().powi(2)).sum()
}

/// Deterministic part of the noisy quartic.
pub fn quartic(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v.powi(4))
        .sum()
}

pub fn schwefel_2_26(x: &[f64]) -> f64 {
    x.iter().map(|v| -v * v.abs().sqrt().sin()).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

/// Boundary penalty `u(x, a, k, m)`; zero on `[−a, a]`.
pub fn penalty_u(x: f64, a: f64, k: f64, m: i32) -> f64 {
    if x > a {
        k * (x - a).powi(m)
    } else if x < -a {
        k * (-x - a).powi(m)
    } else {
        0.0
    }
}

pub fn penalized_1(x: &[f64]) -> f64 {
    let n = x.len();
    let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
    let mut s = 10.0 * (PI * y[0]).sin().powi(2);
    for i in 0..n - 1 {
        s += (y[i] - 1.0).powi(2) * (1.0 + 10.0 * (PI * y[i + 1]).sin().powi(2));
    }
    s += (y[n - 1] - 1.0).powi(2);
    PI / n as f64 * s + x.iter().map(|&v| penalty_u(v, 10.0, 100.0, 4)).sum::<f64>()
}

pub fn penalized_2(x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = (3.0 * PI * x[0]).sin().powi(2);
    for &v in x {
        s += (v - 1.0).powi(2) * (1.0 + (3.0 * PI * v + 1.0).sin().powi(2));
    }
    s += (x[n - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * x[n - 1]).sin().powi(2));
    0.1 * s + x.iter().map(|&v| penalty_u(v, 5.0, 100.0, 4)).sum::<f64>()
}

const FOXHOLE_GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

pub fn shekel_foxholes(x: &[f64]) -> f64 {
    let mut s = 1.0 / 500.0;
    for j in 0..25 {
        let a0 = FOXHOLE_GRID[j % 5];
        let a1 = FOXHOLE_GRID[j / 5];
        s += 1.0 / ((j + 1) as f64 + (x[0] - a0).powi(6) + (x[1] - a1).powi(6));
    }
    1.0 / s
}

pub const KOWALIK_A: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
pub const KOWALIK_B_INV: [f64; 11] = [0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];

pub fn kowalik(x: &[f64]) -> f64 {
    KOWALIK_A
        .iter()
        .zip(KOWALIK_B_INV)
        .map(|(&a, binv)| {
            let b = 1.0 / binv;
            let model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]);
            (a - model).powi(2)
        })
        .sum()
}

pub fn six_hump_camel(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b + 4.0 * b.powi(4)
}

pub fn branin(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0).powi(2)
        + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos()
        + 10.0
}

pub fn goldstein_price(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let p = 1.0
        + (a + b + 1.0).powi(2)
            * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let q = 30.0
        + (2.0 * a - 3.0 * b).powi(2)
            * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    p * q
}

pub const HARTMANN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

pub const HARTMANN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];

pub const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.038150, 0.5743, 0.8828],
];

pub const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];

pub const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

/// `−Σ_i c_i exp(−Σ_j a_ij (x_j − p_ij)²)`.
pub fn hartmann<const D: usize>(x: &[f64], a: &[[f64; D]; 4], c: &[f64; 4], p: &[[f64; D]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..D).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            c[i] * (-inner).exp()
        })
        .sum::<f64>()
}

pub const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];

pub const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

/// Shekel with the first `terms` foxholes (5, 7 or 10).
pub fn shekel(x: &[f64], terms: usize) -> f64 {
    -(0..terms)
        .map(|i| {
            let d: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
            1.0 / (d + SHEKEL_C[i])
        })
        .sum::<f64>()
}

struct Row {
    name: &'static str,
    category: Category,
    bounds: (f64, f64),
    dim: usize,
    f_min: f64,
    tol: f64,
    optimizer: Vec<f64>,
    noisy: bool,
    objective: ObjectiveFn,
}

fn det(f: fn(&[f64]) -> f64) -> ObjectiveFn {
    Arc::new(move |x, _| f(x))
}

fn row(id: u8, opts: BenchmarkOptions) -> Row {
    let n = SCALABLE_DIMENSION;
    let splat = |v: f64| vec![v; n];
    let base = |name, category, bounds, dim, f_min, optimizer, objective| Row {
        name,
        category,
        bounds,
        dim,
        f_min,
        tol: 1e-4,
        optimizer,
        noisy: false,
        objective,
    };
    use Category::*;
    match id {
        1 => base("sphere", U, (-100.0, 100.0), n, 0.0, splat(0.0), det(sphere)),
        2 => {
            let classical = opts.f2_classical;
            base(
                "schwefel_2_22",
                U,
                (-10.0, 10.0),
                n,
                0.0,
                splat(0.0),
                Arc::new(move |x, _| schwefel_2_22(x, classical)),
            )
        }
        3 => base("schwefel_1_2", U, (-100.0, 100.0), n, 0.0, splat(0.0), det(schwefel_1_2)),
        4 => base("schwefel_2_21", U, (-100.0, 100.0), n, 0.0, splat(0.0), det(schwefel_2_21)),
        5 => base("rosenbrock", U, (-30.0, 30.0), n, 0.0, splat(1.0), det(rosenbrock)),
        6 => base("step", U, (-100.0, 100.0), n, 0.0, splat(0.0), det(step)),
        7 => Row {
            noisy: true,
            ..base(
                "quartic_noise",
                U,
                (-1.28, 1.28),
                n,
                0.0,
                splat(0.0),
                Arc::new(|x, rng: &mut RngStream| quartic(x) + rng.uniform()),
            )
        },
        8 => base(
            "schwefel_2_26",
            M,
            (-500.0, 500.0),
            n,
            -418.9829 * n as f64,
            splat(420.9687),
            det(schwefel_2_26),
        ),
        9 => base("rastrigin", M, (-5.12, 5.12), n, 0.0, splat(0.0), det(rastrigin)),
        10 => base("ackley", M, (-32.0, 32.0), n, 0.0, splat(0.0), det(ackley)),
        11 => base("griewank", M, (-600.0, 600.0), n, 0.0, splat(0.0), det(griewank)),
        12 => base("penalized_1", M, (-50.0, 50.0), n, 0.0, splat(-1.0), det(penalized_1)),
        13 => base("penalized_2", M, (-50.0, 50.0), n, 0.0, splat(1.0), det(penalized_2)),
        14 => Row {
            tol: 1e-2,
            ..base(
                "shekel_foxholes",
                MFD,
                (-65.0, 65.0),
                2,
                0.998,
                vec![-32.0, -32.0],
                det(shekel_foxholes),
            )
        },
        15 => base(
            "kowalik",
            MFD,
            (-5.0, 5.0),
            4,
            0.00030,
            vec![0.192833, 0.190836, 0.123117, 0.135766],
            det(kowalik),
        ),
        16 => base(
            "six_hump_camel",
            MFD,
            (-5.0, 5.0),
            2,
            -1.0316,
            vec![0.0898, -0.7126],
            det(six_hump_camel),
        ),
        // tabulated as 0.398 against 0.397887: half a unit of the last digit
        17 => Row {
            tol: 5e-4,
            ..base("branin", MFD, (-5.0, 5.0), 2, 0.398, vec![PI, 2.275], det(branin))
        },
        18 => base(
            "goldstein_price",
            MFD,
            (-2.0, 2.0),
            2,
            3.0,
            vec![0.0, -1.0],
            det(goldstein_price),
        ),
        19 => Row {
            tol: 1e-2,
            ..base(
                "hartmann_3",
                MFD,
                (0.0, 1.0),
                3,
                -3.86,
                vec![0.114614, 0.555649, 0.852547],
                Arc::new(|x, _| hartmann(x, &HARTMANN3_A, &HARTMANN_C, &HARTMANN3_P)),
            )
        },
        20 => Row {
            tol: 1e-2,
            ..base(
                "hartmann_6",
                MFD,
                (0.0, 1.0),
                6,
                -3.32,
                vec![0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573],
                Arc::new(|x, _| hartmann(x, &HARTMANN6_A, &HARTMANN_C, &HARTMANN6_P)),
            )
        },
        21..=23 => {
            let (terms, f_min, name) = match id {
                21 => (5, -10.1532, "shekel_5"),
                22 => (7, -10.4028, "shekel_7"),
                _ => (10, -10.5363, "shekel_10"),
            };
            Row {
                tol: 1e-2,
                ..base(
                    name,
                    MFD,
                    (0.0, 10.0),
                    4,
                    f_min,
                    vec![4.0; 4],
                    Arc::new(move |x, _| shekel(x, terms)),
                )
            }
        }
        _ => unreachable!("ProblemId is validated"),
    }
}

/// Problem `id` with default options.
pub fn problem(id: ProblemId) -> BenchmarkProblem {
    problem_with(id, BenchmarkOptions::default())
}

pub fn problem_with(id: ProblemId, opts: BenchmarkOptions) -> BenchmarkProblem {
    let r = row(id.number(), opts);
    BenchmarkProblem {
        id,
        name: r.name,
        category: r.category,
        decoding: DecodingSpec::new(BITS_PER_VARIABLE, r.bounds.0, r.bounds.1, r.dim)
            .expect("catalog bounds are valid"),
        f_min: r.f_min,
        f_min_tolerance: r.tol,
        optimizer: r.optimizer,
        noisy: r.noisy,
        objective: r.objective,
    }
}

/// All 23 problems in id order.
pub fn catalog() -> Vec<BenchmarkProblem> {
    catalog_with(BenchmarkOptions::default())
}

pub fn catalog_with(opts: BenchmarkOptions) -> Vec<BenchmarkProblem> {
    ProblemId::all().map(|id| problem_with(id, opts)).collect()
}
