//! Binary gravitational search (BGSA) and its neighbourhood-archive variant
//! with fitness-distance gravity (BNAGGSA), a 23-function benchmark catalog,
//! a Jensen-wake windfarm layout model and a seeded multi-run harness.
//!
//! ```
//! use bnaggsa_core::{benchmarks, Algorithm, Engine};
//!
//! let problem = benchmarks::problem("f1".parse().unwrap());
//! let engine = Engine::new(Algorithm::Bnaggsa.config(10, 20)).unwrap();
//! let outcome = engine.run(&problem, 42).unwrap();
//! assert_eq!(outcome.trace.len(), 20);
//! ```

// Negated float comparisons below reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archives;
pub mod benchmarks;
pub mod bits;
pub mod engine;
pub mod error;
pub mod harness;
pub mod validate;
pub mod windfarm;

pub use archives::{ArchivePolicy, FdgParams, FitnessDistanceArchives, NeighbourArchive, PairGravity};
pub use benchmarks::{BenchmarkOptions, BenchmarkProblem, Category, ProblemId};
pub use bits::{hamming_distance, BitString, DecodingSpec, RngStream};
pub use engine::{
    Algorithm, BitParticle, Engine, EngineConfig, GravityStrategy, NeighbourSource, Objective, ProbeRecord,
    RunOutcome, Sense, SwarmState,
};
pub use error::{Error, Result};
pub use harness::{run_experiment, ExperimentPlan, ExperimentReport, ProblemRef, Summary};
pub use windfarm::{
    AggregateWeights, FarmGrid, FarmModel, LayoutEvaluator, LayoutReport, PowerUnit, TurbineSpec, WakeExponent,
    WindRose, WindfarmProblem,
};
