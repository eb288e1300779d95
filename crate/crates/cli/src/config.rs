//! TOML run configuration. Every key is optional; precedence is built-in
//! defaults, then the file, then command-line flags.
//!
//! ```toml
//! [bench]
//! algo = "bnaggsa"      # bgsa | bnaggsa
//! swarm = 50
//! iters = 500
//! runs = 30
//! seed = 42
//! workers = 4
//! out = "results/f1"
//! f2_classical = false
//!
//! [windfarm]
//! rose = "data/roses/synthetic_site_a.rose"
//! nt = 10               # or nt_sweep = true
//! nt_sweep = false
//! wake_exponent = 2     # 1 | 2
//! power_unit = "kw"     # kw | mw
//! algo = "bnaggsa"
//! swarm = 500
//! iters = 500
//! runs = 10
//! seed = 7
//! workers = 4
//! out = "results/windfarm"
//!
//! [windfarm.turbine]    # any subset of the turbine data
//! rated_power = 2000.0
//! rotor_diameter = 80.0
//! thrust_coefficient = 0.8
//! hub_height = 60.0
//! cut_in = 4.0
//! cut_out = 25.0
//! ```
//!
//! Relative `rose` and `out` paths resolve against the config file's
//! directory.

use std::path::{Path, PathBuf};

use anyhow::Context;
use bnaggsa_core::{Algorithm, TurbineSpec};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub bench: BenchSection,
    #[serde(default)]
    pub windfarm: WindfarmSection,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchSection {
    pub algo: Option<Algorithm>,
    pub swarm: Option<usize>,
    pub iters: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub f2_classical: Option<bool>,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WindfarmSection {
    pub rose: Option<PathBuf>,
    pub nt: Option<usize>,
    pub nt_sweep: Option<bool>,
    pub wake_exponent: Option<u8>,
    pub power_unit: Option<String>,
    pub algo: Option<Algorithm>,
    pub swarm: Option<usize>,
    pub iters: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub turbine: Option<TurbineSpec>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: ConfigFile =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(inner) = p {
                if inner.is_relative() {
                    *inner = base.join(&*inner);
                }
            }
        };
        resolve(&mut cfg.bench.out);
        resolve(&mut cfg.windfarm.rose);
        resolve(&mut cfg.windfarm.out);
        Ok(cfg)
    }
}
