//! Discrete wind roses and their text file format.
//!
//! A rose file is comma-separated text with `#` comment lines, a column
//! header and one record per bin:
//!
//! ```text
//! # bnaggsa wind rose v1
//! # convention: from, clockwise, north=0
//! # probability sum: 1 (tolerance 1e-9)
//! direction_deg,speed_mps,probability
//! 0,3.9,0.0125
//! 0,8.2,0.0310
//! ...
//! ```
//!
//! Directions give where the wind blows FROM, measured clockwise from north
//! and restricted to the 16 sectors `0, 22.5, …, 337.5`. Speeds are at the
//! reference height. Probabilities must be non-negative and sum to 1 within
//! `1e-9`.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SECTOR_WIDTH_DEG: f64 = 22.5;
pub const SECTORS: usize = 16;
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;
pub const HEADER: &str = "direction_deg,speed_mps,probability";

/// Representative speeds (m/s) of the four speed classes.
pub const SPEED_CLASSES: [f64; 4] = [3.9, 8.2, 10.8, 14.4];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoseBin {
    pub direction_deg: f64,
    pub speed_mps: f64,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindRose {
    bins: Vec<RoseBin>,
}

impl WindRose {
    /// Validates and wraps `bins`.
    pub fn new(bins: Vec<RoseBin>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::InvalidRose("no bins".into()));
        }
        for (i, b) in bins.iter().enumerate() {
            let sector = b.direction_deg / SECTOR_WIDTH_DEG;
            if !(0.0..360.0).contains(&b.direction_deg) || (sector - sector.round()).abs() > 1e-9 {
                return Err(Error::InvalidRose(format!(
                    "bin {i}: direction {} is not one of the 16 sectors 0, 22.5, ..., 337.5",
                    b.direction_deg
                )));
            }
            if !(b.speed_mps >= 0.0 && b.speed_mps.is_finite()) {
                return Err(Error::InvalidRose(format!("bin {i}: invalid speed {}", b.speed_mps)));
            }
            if !(b.probability >= 0.0 && b.probability.is_finite()) {
                return Err(Error::InvalidRose(format!(
                    "bin {i}: invalid probability {}",
                    b.probability
                )));
            }
        }
        let total: f64 = bins.iter().map(|b| b.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            let gap = 1.0 - total;
            let what = if gap > 0.0 { "deficit" } else { "excess" };
            return Err(Error::InvalidRose(format!(
                "probabilities sum to {total} ({what} of {:.3e}); expected 1 within {PROBABILITY_TOLERANCE:e}",
                gap.abs()
            )));
        }
        Ok(Self { bins })
    }

    /// All mass on one direction and speed.
    pub fn single(direction_deg: f64, speed_mps: f64) -> Result<Self> {
        Self::new(vec![RoseBin {
            direction_deg,
            speed_mps,
            probability: 1.0,
        }])
    }

    pub fn bins(&self) -> &[RoseBin] {
        &self.bins
    }

    /// Directions in first-appearance order.
    pub fn directions(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for b in &self.bins {
            if !out.contains(&b.direction_deg) {
                out.push(b.direction_deg);
            }
        }
        out
    }

    /// Rose over the 16 sectors and [`SPEED_CLASSES`] with
    /// `p(θ, s) ∝ Σ_m exp(κ cos(θ − θ_m)) · w_s`, a von Mises mixture over
    /// direction times fixed speed-class weights.
    pub fn synthetic(prevailing_deg: &[f64], concentration: f64, speed_weights: [f64; 4]) -> Result<Self> {
        let mut bins = Vec::with_capacity(SECTORS * SPEED_CLASSES.len());
        let dir_weight = |theta: f64| -> f64 {
            prevailing_deg
                .iter()
                .map(|m| (concentration * (theta - m).to_radians().cos()).exp())
                .sum()
        };
        let dir_total: f64 = (0..SECTORS).map(|k| dir_weight(k as f64 * SECTOR_WIDTH_DEG)).sum();
        let speed_total: f64 = speed_weights.iter().sum();
        for k in 0..SECTORS {
            let theta = k as f64 * SECTOR_WIDTH_DEG;
            let pd = dir_weight(theta) / dir_total;
            for (s, w) in SPEED_CLASSES.iter().zip(speed_weights) {
                bins.push(RoseBin {
                    direction_deg: theta,
                    speed_mps: *s,
                    probability: pd * w / speed_total,
                });
            }
        }
        Self::new(bins)
    }

    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut bins = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::InvalidRose(format!("line {}: {e}", lineno + 1)))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                check_convention(comment, lineno + 1)?;
                continue;
            }
            if !saw_header {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["direction_deg", "speed_mps", "probability"] {
                    return Err(Error::InvalidRose(format!(
                        "line {}: expected header `{HEADER}`",
                        lineno + 1
                    )));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::InvalidRose(format!(
                    "line {}: expected 3 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidRose(format!("line {}: `{s}` is not a number", lineno + 1)))
            };
            bins.push(RoseBin {
                direction_deg: num(fields[0])?,
                speed_mps: num(fields[1])?,
                probability: num(fields[2])?,
            });
        }
        if !saw_header {
            return Err(Error::InvalidRose(format!("missing header `{HEADER}`")));
        }
        Self::new(bins)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(std::io::BufReader::new(file)).map_err(|e| match e {
            Error::InvalidRose(msg) => Error::InvalidRose(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn write<W: Write>(&self, mut w: W, title: &str) -> std::io::Result<()> {
        writeln!(w, "# bnaggsa wind rose v1")?;
        if !title.is_empty() {
            writeln!(w, "# {title}")?;
        }
        writeln!(w, "# convention: from, clockwise, north=0")?;
        writeln!(w, "# probability sum: 1 (tolerance {PROBABILITY_TOLERANCE:e})")?;
        writeln!(w, "{HEADER}")?;
        for b in &self.bins {
            writeln!(w, "{},{},{}", b.direction_deg, b.speed_mps, b.probability)?;
        }
        Ok(())
    }
}

fn check_convention(comment: &str, lineno: usize) -> Result<()> {
    let Some(rest) = comment.trim().strip_prefix("convention:") else {
        return Ok(());
    };
    let parts: Vec<String> = rest.split(',').map(|p| p.trim().to_ascii_lowercase()).collect();
    if parts.first().map(String::as_str) != Some("from")
        || !parts.iter().any(|p| p == "clockwise")
        || !parts.iter().any(|p| p.replace(' ', "") == "north=0")
    {
        return Err(Error::InvalidRose(format!(
            "line {lineno}: unsupported convention `{}`; only `from, clockwise, north=0` is accepted",
            rest.trim()
        )));
    }
    Ok(())
}
