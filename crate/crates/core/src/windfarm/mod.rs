//! Grid windfarm model: Jensen wakes with partial-overlap superposition,
//! the turbine power curve, wind-rose expectation and the penalised
//! layout objective.
//!
//! Cells are indexed row-major with row 0 on the south edge and column 0 on
//! the west edge; turbines sit at cell centres. A turbine `i` is waked by
//! `j` when it lies strictly downstream of `j` and the wake cone of `j`
//! covers part of its rotor. Wakes are pairwise (no cascading); several
//! wakes combine by root-sum-square of their area-weighted deficits.

mod power;
mod render;
mod rose;
mod wake;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use power::{power, TurbineSpec, RATED_SPEED};
pub use render::{layout_csv, layout_svg, write_layout_csv, write_layout_svg};
pub use rose::{RoseBin, WindRose, HEADER as ROSE_HEADER, PROBABILITY_TOLERANCE, SECTORS, SECTOR_WIDTH_DEG, SPEED_CLASSES};
pub use wake::{
    axial_induction, combined_wake_speed, downstream_rotor_radius, entrainment_constant,
    local_free_speed, overlap_area, single_wake_speed, velocity_deficit, wake_radius, WakeExponent,
    WakeInfluence,
};

use crate::bits::{BitString, RngStream};
use crate::engine::{Objective, Sense};
use crate::error::{Error, Result};

/// Value assigned to layouts with the wrong turbine count.
pub const INFEASIBLE_PENALTY: f64 = 1e-10;

/// Downstream distances at or below this (m) count as side by side.
const DOWNSTREAM_EPS: f64 = 1e-6;

/// Rectangular farm split into equal cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarmGrid {
    pub columns: usize,
    pub rows: usize,
    /// m
    pub cell_width: f64,
    /// m
    pub cell_height: f64,
    /// Surface roughness z0, m.
    pub roughness: f64,
    /// Height of the rose speeds, m.
    pub reference_height: f64,
}

impl Default for FarmGrid {
    /// 6000 m × 2000 m in 300 m × 400 m cells (20 × 5).
    fn default() -> Self {
        Self {
            columns: 20,
            rows: 5,
            cell_width: 300.0,
            cell_height: 400.0,
            roughness: 0.3,
            reference_height: 60.0,
        }
    }
}

impl FarmGrid {
    pub fn with_cells(columns: usize, rows: usize) -> Self {
        Self {
            columns,
            rows,
            ..Self::default()
        }
    }

    pub fn cells(&self) -> usize {
        self.columns * self.rows
    }

    pub fn width(&self) -> f64 {
        self.columns as f64 * self.cell_width
    }

    pub fn height(&self) -> f64 {
        self.rows as f64 * self.cell_height
    }

    /// `(x, y)` of the centre of `cell`, metres east and north of the SW corner.
    pub fn cell_center(&self, cell: usize) -> (f64, f64) {
        let col = cell % self.columns;
        let row = cell / self.columns;
        (
            col as f64 * self.cell_width + self.cell_width / 2.0,
            row as f64 * self.cell_height + self.cell_height / 2.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells() == 0 || !(self.cell_width > 0.0 && self.cell_height > 0.0) {
            return Err(Error::InvalidParameter("farm grid must have positive size".into()));
        }
        if !(self.roughness > 0.0 && self.reference_height > self.roughness) {
            return Err(Error::InvalidParameter(
                "need reference height > roughness > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Unit of F2 inside the aggregate objective.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerUnit {
    #[default]
    Kw,
    Mw,
}

/// Everything needed to score a layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarmModel {
    pub grid: FarmGrid,
    pub turbine: TurbineSpec,
    pub rose: WindRose,
    pub exponent: WakeExponent,
}

impl FarmModel {
    pub fn new(grid: FarmGrid, turbine: TurbineSpec, rose: WindRose, exponent: WakeExponent) -> Result<Self> {
        grid.validate()?;
        turbine.validate()?;
        Ok(Self {
            grid,
            turbine,
            rose,
            exponent,
        })
    }

    /// Default grid and turbine under `rose`.
    pub fn standard(rose: WindRose) -> Self {
        Self::new(FarmGrid::default(), TurbineSpec::default(), rose, WakeExponent::default())
            .expect("defaults are valid")
    }

    fn constants(&self) -> WakeConstants {
        let induction = axial_induction(self.turbine.thrust_coefficient).expect("validated");
        WakeConstants {
            induction,
            r1: downstream_rotor_radius(self.turbine.rotor_radius(), induction).expect("validated"),
            entrainment: entrainment_constant(self.turbine.hub_height, self.grid.roughness)
                .expect("hub height above roughness"),
            free_speed_factor: local_free_speed(
                1.0,
                self.turbine.hub_height,
                self.grid.reference_height,
                self.grid.roughness,
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct WakeConstants {
    induction: f64,
    r1: f64,
    entrainment: f64,
    free_speed_factor: f64,
}

/// Metrics of one layout under a rose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutReport {
    pub turbine_count: usize,
    /// Efficiency: expected power over expected wake-free power. Defined as
    /// 1 when the rose never reaches cut-in.
    pub f1: f64,
    /// Expected power, kW.
    pub f2_kw: f64,
    pub capacity_factor: f64,
    /// `(cell, expected kW)` for each turbine, in cell order.
    pub per_turbine_kw: Vec<(usize, f64)>,
}

impl LayoutReport {
    pub fn power_mw(&self) -> f64 {
        self.f2_kw / 1000.0
    }
}

/// Position of `to` relative to `from` in wind coordinates for wind blowing
/// from `direction_deg`: (downstream distance, crosswind offset).
pub fn wind_frame(from: (f64, f64), to: (f64, f64), direction_deg: f64) -> (f64, f64) {
    let (s, c) = direction_deg.to_radians().sin_cos();
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    // the wind travels along (−sin θ, −cos θ)
    let downstream = -dx * s - dy * c;
    let crosswind = (-dx * c + dy * s).abs();
    (downstream, crosswind)
}

fn check_feasible(layout: &BitString, grid: &FarmGrid, required: Option<usize>) -> Result<Vec<usize>> {
    if layout.len() != grid.cells() {
        return Err(Error::LengthMismatch {
            expected: grid.cells(),
            actual: layout.len(),
        });
    }
    let cells: Vec<usize> = layout.ones_indices().collect();
    if let Some(n) = required {
        if cells.len() != n {
            return Err(Error::InfeasibleLayout {
                placed: cells.len(),
                required: n,
            });
        }
    }
    if cells.is_empty() {
        return Err(Error::InfeasibleLayout { placed: 0, required: required.unwrap_or(1) });
    }
    Ok(cells)
}

/// Scores `layout` directly from the wake geometry, bin by bin.
pub fn evaluate_layout(layout: &BitString, model: &FarmModel) -> Result<LayoutReport> {
    let cells = check_feasible(layout, &model.grid, None)?;
    let k = model.constants();
    let turbine = &model.turbine;
    let rotor = turbine.rotor_radius();
    let pos: Vec<(f64, f64)> = cells.iter().map(|&c| model.grid.cell_center(c)).collect();

    let mut per_turbine = vec![0.0; cells.len()];
    let mut ideal = 0.0;
    for bin in model.rose.bins() {
        let u0 = bin.speed_mps * k.free_speed_factor;
        let mut influences = Vec::new();
        for i in 0..cells.len() {
            influences.clear();
            for j in 0..cells.len() {
                if i == j {
                    continue;
                }
                let (x, offset) = wind_frame(pos[j], pos[i], bin.direction_deg);
                if x <= DOWNSTREAM_EPS {
                    continue;
                }
                let rw = wake_radius(k.entrainment, x, k.r1);
                let area = overlap_area(offset, rotor, rw)?;
                if area <= 0.0 {
                    continue;
                }
                influences.push(WakeInfluence {
                    waked_speed: single_wake_speed(u0, k.induction, k.entrainment, x, k.r1, model.exponent),
                    upstream_free_speed: u0,
                    overlap: area,
                });
            }
            let u = if influences.is_empty() || u0 == 0.0 {
                u0
            } else {
                combined_wake_speed(&influences, u0, rotor)
            };
            per_turbine[i] += bin.probability * turbine.power(u);
        }
        ideal += bin.probability * turbine.power(u0);
    }
    Ok(report(&cells, per_turbine, ideal, turbine))
}

fn report(cells: &[usize], per_turbine: Vec<f64>, ideal_single: f64, turbine: &TurbineSpec) -> LayoutReport {
    let n = cells.len();
    let f2: f64 = per_turbine.iter().sum();
    let ideal = ideal_single * n as f64;
    let f1 = if ideal > 0.0 { (f2 / ideal).min(1.0) } else { 1.0 };
    LayoutReport {
        turbine_count: n,
        f1,
        f2_kw: f2,
        capacity_factor: f2 / (n as f64 * turbine.rated_power),
        per_turbine_kw: cells.iter().copied().zip(per_turbine).collect(),
    }
}

/// Precomputed pairwise wake terms for fast repeated scoring.
///
/// With equal hub heights the normalised term
/// `(A_ij / πr²) · (1 − u_ij/u_0j)²` depends on direction and geometry
/// only, so it is tabulated once per direction for every cell pair.
#[derive(Clone, Debug)]
pub struct LayoutEvaluator {
    model: FarmModel,
    directions: Vec<DirectionTable>,
    /// Σ_k f_k · P(u_0) over all bins.
    ideal_single: f64,
}

#[derive(Clone, Debug)]
struct DirectionTable {
    /// `terms[i * cells + j]`: contribution of upstream cell `j` at cell `i`.
    terms: Vec<f64>,
    /// `(u_0, probability)` of each bin with this direction, in rose order.
    bins: Vec<(f64, f64)>,
}

impl LayoutEvaluator {
    pub fn new(model: FarmModel) -> Result<Self> {
        let k = model.constants();
        let cells = model.grid.cells();
        let rotor = model.turbine.rotor_radius();
        let disc = PI * rotor * rotor;
        let centers: Vec<(f64, f64)> = (0..cells).map(|c| model.grid.cell_center(c)).collect();

        let mut directions = Vec::new();
        for theta in model.rose.directions() {
            let mut terms = vec![0.0; cells * cells];
            for i in 0..cells {
                for j in 0..cells {
                    if i == j {
                        continue;
                    }
                    let (x, offset) = wind_frame(centers[j], centers[i], theta);
                    if x <= DOWNSTREAM_EPS {
                        continue;
                    }
                    let rw = wake_radius(k.entrainment, x, k.r1);
                    let area = overlap_area(offset, rotor, rw)?;
                    if area > 0.0 {
                        let deficit = velocity_deficit(k.induction, k.entrainment, x, k.r1, model.exponent);
                        terms[i * cells + j] = area / disc * deficit * deficit;
                    }
                }
            }
            let bins = model
                .rose
                .bins()
                .iter()
                .filter(|b| b.direction_deg == theta)
                .map(|b| (b.speed_mps * k.free_speed_factor, b.probability))
                .collect();
            directions.push(DirectionTable { terms, bins });
        }
        let ideal_single = model
            .rose
            .bins()
            .iter()
            .map(|b| b.probability * model.turbine.power(b.speed_mps * k.free_speed_factor))
            .sum();
        Ok(Self {
            model,
            directions,
            ideal_single,
        })
    }

    pub fn model(&self) -> &FarmModel {
        &self.model
    }

    pub fn cells(&self) -> usize {
        self.model.grid.cells()
    }

    /// Same result as [`evaluate_layout`], up to summation order.
    pub fn evaluate(&self, layout: &BitString) -> Result<LayoutReport> {
        let cells = check_feasible(layout, &self.model.grid, None)?;
        let n = self.cells();
        let turbine = &self.model.turbine;
        let mut per_turbine = vec![0.0; cells.len()];
        for table in &self.directions {
            for (slot, &i) in cells.iter().enumerate() {
                let row = &table.terms[i * n..(i + 1) * n];
                let s: f64 = cells.iter().map(|&j| row[j]).sum();
                let factor = (1.0 - s.sqrt()).max(0.0);
                for &(u0, p) in &table.bins {
                    per_turbine[slot] += p * turbine.power(u0 * factor);
                }
            }
        }
        Ok(report(&cells, per_turbine, self.ideal_single, turbine))
    }

    /// Metrics of `layout`, requiring exactly `turbines` occupied cells.
    pub fn evaluate_feasible(&self, layout: &BitString, turbines: usize) -> Result<LayoutReport> {
        check_feasible(layout, &self.model.grid, Some(turbines))?;
        self.evaluate(layout)
    }
}

/// Weights of the aggregate objective `F = w1·F1 + w2·F2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateWeights {
    pub efficiency: f64,
    pub power: f64,
    pub power_unit: PowerUnit,
}

impl Default for AggregateWeights {
    fn default() -> Self {
        Self {
            efficiency: 0.5,
            power: 0.5,
            power_unit: PowerUnit::Kw,
        }
    }
}

/// `w1·F1 + w2·F2`, with F2 already in the desired unit.
pub fn aggregate_objective(f1: f64, f2: f64, w1: f64, w2: f64) -> f64 {
    w1 * f1 + w2 * f2
}

impl AggregateWeights {
    pub fn apply(&self, report: &LayoutReport) -> f64 {
        let f2 = match self.power_unit {
            PowerUnit::Kw => report.f2_kw,
            PowerUnit::Mw => report.f2_kw / 1000.0,
        };
        aggregate_objective(report.f1, f2, self.efficiency, self.power)
    }
}

/// Layout problem with a fixed turbine count, maximised.
#[derive(Clone, Debug)]
pub struct WindfarmProblem {
    pub evaluator: LayoutEvaluator,
    pub turbines: usize,
    pub weights: AggregateWeights,
}

impl WindfarmProblem {
    pub fn new(model: FarmModel, turbines: usize, weights: AggregateWeights) -> Result<Self> {
        if turbines == 0 || turbines > model.grid.cells() {
            return Err(Error::InvalidParameter(format!(
                "turbine count must be in 1..={}, got {turbines}",
                model.grid.cells()
            )));
        }
        Ok(Self {
            evaluator: LayoutEvaluator::new(model)?,
            turbines,
            weights,
        })
    }

    /// Aggregate objective when `x` places exactly `turbines` turbines,
    /// [`INFEASIBLE_PENALTY`] otherwise.
    pub fn penalized_objective(&self, x: &BitString) -> Result<f64> {
        if x.len() != self.evaluator.cells() {
            return Err(Error::LengthMismatch {
                expected: self.evaluator.cells(),
                actual: x.len(),
            });
        }
        if x.count_ones() != self.turbines {
            return Ok(INFEASIBLE_PENALTY);
        }
        Ok(self.weights.apply(&self.evaluator.evaluate(x)?))
    }

    pub fn report(&self, x: &BitString) -> Result<LayoutReport> {
        self.evaluator.evaluate_feasible(x, self.turbines)
    }
}

impl Objective for WindfarmProblem {
    fn bit_len(&self) -> usize {
        self.evaluator.cells()
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn evaluate(&self, x: &BitString, _: &mut RngStream) -> Result<f64> {
        self.penalized_objective(x)
    }

    /// Random layout with exactly `turbines` occupied cells.
    fn initial_position(&self, rng: &mut RngStream) -> BitString {
        random_layout(self.evaluator.cells(), self.turbines, rng)
    }
}

/// Uniformly random placement of `turbines` among `cells` (partial Fisher–Yates).
pub fn random_layout(cells: usize, turbines: usize, rng: &mut RngStream) -> BitString {
    let mut idx: Vec<usize> = (0..cells).collect();
    let mut x = BitString::zeros(cells);
    for k in 0..turbines.min(cells) {
        let pick = k + rng.index(cells - k);
        idx.swap(k, pick);
        x.set(idx[k], true);
    }
    x
}
