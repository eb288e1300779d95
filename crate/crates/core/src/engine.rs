//! Binary gravitational search.
//!
//! One iteration evaluates every particle, maps fitness to mass, picks the
//! attracting neighbours of each particle (the shrinking Kbest elite, or the
//! per-particle archives of [`crate::archives`]), sums the pulls over Hamming
//! distances, updates the clamped velocity and finally flips each bit with
//! probability `|tanh(v)|`.

use serde::{Deserialize, Serialize};

use crate::archives::{ArchivePolicy, FdgParams, FitnessDistanceArchives, PairGravity};
use crate::bits::{hamming_unchecked, BitString, RngStream};
use crate::error::{Error, Result};

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// `true` when `a` is strictly better than `b`.
    #[inline]
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }

    /// The better of the two values.
    pub fn pick(self, a: f64, b: f64) -> f64 {
        if self.better(b, a) {
            b
        } else {
            a
        }
    }
}

/// A fitness function over fixed-length bit strings.
pub trait Objective: Sync {
    fn bit_len(&self) -> usize;

    fn sense(&self) -> Sense;

    /// Fitness of `x`. Stochastic objectives draw from `rng`.
    fn evaluate(&self, x: &BitString, rng: &mut RngStream) -> Result<f64>;

    /// Starting position of one particle. Uniform bits unless overridden.
    fn initial_position(&self, rng: &mut RngStream) -> BitString {
        BitString::random(self.bit_len(), rng)
    }
}

/// Candidate solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitParticle {
    pub position: BitString,
    pub velocity: Vec<f64>,
    pub fitness: f64,
    pub mass: f64,
}

impl BitParticle {
    pub fn new(position: BitString) -> Self {
        let d = position.len();
        Self {
            position,
            velocity: vec![0.0; d],
            fitness: f64::NAN,
            mass: 0.0,
        }
    }
}

/// Scaling policy for the gravitational pull.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GravityStrategy {
    /// `G0 · exp(−α t / T)`.
    Exponential { g0: f64, alpha: f64 },
    /// `G0 · (1 − t / T)`.
    Linear { g0: f64 },
    /// Per-pair fitness-distance ratio, see [`FdgParams`].
    FitnessDistance(FdgParams),
}

impl GravityStrategy {
    pub const fn exponential() -> Self {
        GravityStrategy::Exponential {
            g0: 100.0,
            alpha: 20.0,
        }
    }

    pub const fn linear() -> Self {
        GravityStrategy::Linear { g0: 100.0 }
    }

    pub fn is_per_pair(&self) -> bool {
        matches!(self, GravityStrategy::FitnessDistance(_))
    }
}

/// Where each particle's attracting neighbours come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighbourSource {
    Kbest,
    NaggsaArchives,
}

pub const DEFAULT_EPSILON: f64 = 1e-12;
pub const DEFAULT_V_MAX: f64 = 6.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub epsilon: f64,
    pub v_max: f64,
    pub strategy: GravityStrategy,
    pub neighbour_source: NeighbourSource,
}

impl EngineConfig {
    /// Linear gravity with Kbest neighbours.
    pub fn bgsa(swarm_size: usize, max_iterations: usize) -> Self {
        Self {
            swarm_size,
            max_iterations,
            epsilon: DEFAULT_EPSILON,
            v_max: DEFAULT_V_MAX,
            strategy: GravityStrategy::linear(),
            neighbour_source: NeighbourSource::Kbest,
        }
    }

    /// Fitness-distance gravity with F/D neighbourhood archives.
    pub fn bnaggsa(swarm_size: usize, max_iterations: usize) -> Self {
        Self {
            strategy: GravityStrategy::FitnessDistance(FdgParams::default()),
            neighbour_source: NeighbourSource::NaggsaArchives,
            ..Self::bgsa(swarm_size, max_iterations)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "swarm size must be at least 2, got {}",
                self.swarm_size
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be positive".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter("epsilon must be positive".into()));
        }
        if !(self.v_max > 0.0) {
            return Err(Error::InvalidParameter("v_max must be positive".into()));
        }
        if let GravityStrategy::FitnessDistance(p) = self.strategy {
            p.validate()?;
        }
        Ok(())
    }
}

/// The two algorithm presets addressable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bgsa,
    Bnaggsa,
}

impl Algorithm {
    pub fn config(self, swarm_size: usize, max_iterations: usize) -> EngineConfig {
        match self {
            Algorithm::Bgsa => EngineConfig::bgsa(swarm_size, max_iterations),
            Algorithm::Bnaggsa => EngineConfig::bnaggsa(swarm_size, max_iterations),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bgsa => "bgsa",
            Algorithm::Bnaggsa => "bnaggsa",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bgsa" => Ok(Algorithm::Bgsa),
            "bnaggsa" => Ok(Algorithm::Bnaggsa),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Normalised masses. The best particle gets the largest mass, the worst
/// gets zero; equal fitnesses give the uniform `1/N`.
pub fn compute_masses(fitnesses: &[f64], sense: Sense) -> Vec<f64> {
    let n = fitnesses.len();
    if n == 0 {
        return Vec::new();
    }
    let (lo, hi) = fitnesses
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| {
            (lo.min(f), hi.max(f))
        });
    let (best, worst) = match sense {
        Sense::Minimize => (lo, hi),
        Sense::Maximize => (hi, lo),
    };
    if best == worst {
        return vec![1.0 / n as f64; n];
    }
    let q: Vec<f64> = fitnesses
        .iter()
        .map(|&f| (f - worst) / (best - worst))
        .collect();
    let total: f64 = q.iter().sum();
    q.into_iter().map(|qi| qi / total).collect()
}

/// Size of the Kbest elite at iteration `t` (0-based): linear from `N` at
/// `t = 0` down to 1 at `t = T − 1`, rounded half up.
pub fn kbest_size(t: usize, max_iterations: usize, swarm_size: usize) -> usize {
    if max_iterations <= 1 || swarm_size <= 1 {
        return swarm_size.max(1);
    }
    let t = t.min(max_iterations - 1) as u128;
    let span = (max_iterations - 1) as u128;
    let n = swarm_size as u128;
    // round(N − (N−1)·t/span) = floor((2·(N·span − (N−1)·t) + span) / (2·span))
    let numer = 2 * (n * span - (n - 1) * t) + span;
    ((numer / (2 * span)) as usize).clamp(1, swarm_size)
}

/// Global gravitational constant at iteration `t` of `T`.
pub fn scalar_gravity(strategy: &GravityStrategy, t: usize, max_iterations: usize) -> Result<f64> {
    let frac = t as f64 / max_iterations as f64;
    match *strategy {
        GravityStrategy::Exponential { g0, alpha } => Ok(g0 * (-alpha * frac).exp()),
        GravityStrategy::Linear { g0 } => Ok(g0 * (1.0 - frac)),
        GravityStrategy::FitnessDistance(_) => Err(Error::PerPairStrategy),
    }
}

/// One attracting neighbour: its index, the pair gravity `G_ij`, and the
/// uniform weight `rand_j` shared by all dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pull {
    pub index: usize,
    pub gravity: f64,
    pub rand: f64,
}

/// `a_i^d = Σ_j rand_j · G_ij · M_j / (R_ij + ε) · (x_j^d − x_i^d)`.
///
/// Writes into `out`, which must have the bit length of the particles.
pub fn acceleration(i: usize, pulls: &[Pull], particles: &[BitParticle], epsilon: f64, out: &mut [f64]) {
    out.fill(0.0);
    let xi = particles[i].position.as_slice();
    for pull in pulls {
        debug_assert_ne!(pull.index, i);
        let pj = &particles[pull.index];
        let xj = pj.position.as_slice();
        let r = hamming_unchecked(xi, xj);
        if r == 0 {
            continue;
        }
        let c = pull.rand * pull.gravity * pj.mass / (r as f64 + epsilon);
        if c == 0.0 {
            continue;
        }
        for ((a, &bj), &bi) in out.iter_mut().zip(xj).zip(xi) {
            *a += c * (f64::from(bj) - f64::from(bi));
        }
    }
}

/// `v ← clamp(rand_i · v + a, −v_max, v_max)`.
pub fn update_velocity(velocity: &mut [f64], accel: &[f64], rand_i: f64, v_max: f64) {
    for (v, &a) in velocity.iter_mut().zip(accel) {
        *v = (rand_i * *v + a).clamp(-v_max, v_max);
    }
}

/// Flip probability for a velocity component.
#[inline]
pub fn transfer(v: f64) -> f64 {
    v.tanh().abs()
}

/// Complements bit `d` when a fresh uniform draw falls below `|tanh(v_d)|`.
pub fn transfer_flip(x: &mut BitString, velocity: &[f64], rng: &mut RngStream) {
    debug_assert_eq!(x.len(), velocity.len());
    for (d, &v) in velocity.iter().enumerate() {
        if rng.uniform() < transfer(v) {
            x.flip(d);
        }
    }
}

/// Mutable state of one swarm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwarmState {
    pub particles: Vec<BitParticle>,
    pub iteration: usize,
    pub max_iterations: usize,
    pub best_so_far: Option<(BitString, f64)>,
    pub sense: Sense,
}

impl SwarmState {
    /// Fresh swarm drawn through [`Objective::initial_position`], zero velocities.
    pub fn initialize<O: Objective + ?Sized>(
        problem: &O,
        config: &EngineConfig,
        rng: &mut RngStream,
    ) -> Self {
        let particles = (0..config.swarm_size)
            .map(|_| BitParticle::new(problem.initial_position(rng)))
            .collect();
        Self {
            particles,
            iteration: 0,
            max_iterations: config.max_iterations,
            best_so_far: None,
            sense: problem.sense(),
        }
    }

    pub fn best_fitness(&self) -> Option<f64> {
        self.best_so_far.as_ref().map(|(_, f)| *f)
    }

    /// Indices ordered best first; ties go to the lower index.
    pub fn ranking(&self) -> Vec<usize> {
        rank_by_fitness(&self.particles, self.sense)
    }
}

pub(crate) fn rank_by_fitness(particles: &[BitParticle], sense: Sense) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..particles.len()).collect();
    idx.sort_by(|&a, &b| {
        let (fa, fb) = (particles[a].fitness, particles[b].fitness);
        let ord = match sense {
            Sense::Minimize => fa.total_cmp(&fb),
            Sense::Maximize => fb.total_cmp(&fa),
        };
        ord.then(a.cmp(&b))
    });
    idx
}

/// What the first particle saw during one step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub iteration: usize,
    pub kbest_size: usize,
    pub neighbours: usize,
    pub mean_distance: f64,
    pub mean_gravity: f64,
}

/// Result of [`Engine::run`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub best: BitString,
    pub best_fitness: f64,
    /// Best-so-far fitness after each iteration.
    pub trace: Vec<f64>,
    pub probe: Vec<ProbeRecord>,
}

/// Binary GSA driver. Archive construction and the per-pair gravity are
/// replaceable policies.
pub struct Engine {
    config: EngineConfig,
    archives: Box<dyn ArchivePolicy>,
    pair_gravity: Box<dyn PairGravity>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine").field("config", &self.config).finish_non_exhaustive()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        let pair_gravity: Box<dyn PairGravity> = match config.strategy {
            GravityStrategy::FitnessDistance(p) => Box::new(p),
            _ => Box::new(FdgParams::default()),
        };
        Ok(Self {
            config,
            archives: Box::new(FitnessDistanceArchives::default()),
            pair_gravity,
        })
    }

    pub fn with_archive_policy(mut self, policy: Box<dyn ArchivePolicy>) -> Self {
        self.archives = policy;
        self
    }

    pub fn with_pair_gravity(mut self, gravity: Box<dyn PairGravity>) -> Self {
        self.pair_gravity = gravity;
        self
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Advances `swarm` by one iteration. `eval_rng` feeds stochastic
    /// objectives; `rng` drives the search.
    pub fn step<O: Objective + ?Sized>(
        &self,
        swarm: &mut SwarmState,
        problem: &O,
        rng: &mut RngStream,
        eval_rng: &mut RngStream,
    ) -> Result<ProbeRecord> {
        let cfg = &self.config;
        let n = swarm.particles.len();
        let t = swarm.iteration;

        for p in swarm.particles.iter_mut() {
            let f = problem.evaluate(&p.position, eval_rng)?;
            if f.is_nan() {
                return Err(Error::Objective(format!("NaN fitness at {}", p.position)));
            }
            p.fitness = f;
        }

        let ranked = swarm.ranking();
        let leader = &swarm.particles[ranked[0]];
        let improves = match &swarm.best_so_far {
            None => true,
            Some((_, f)) => swarm.sense.better(leader.fitness, *f),
        };
        if improves {
            swarm.best_so_far = Some((leader.position.clone(), leader.fitness));
        }

        let fits: Vec<f64> = swarm.particles.iter().map(|p| p.fitness).collect();
        for (p, m) in swarm.particles.iter_mut().zip(compute_masses(&fits, swarm.sense)) {
            p.mass = m;
        }

        let k = kbest_size(t, swarm.max_iterations, n);
        let scalar = if cfg.strategy.is_per_pair() {
            None
        } else {
            Some(scalar_gravity(&cfg.strategy, t, swarm.max_iterations)?)
        };

        let neighbour_sets: Vec<Vec<usize>> = match cfg.neighbour_source {
            NeighbourSource::Kbest => {
                let elite = &ranked[..k];
                (0..n)
                    .map(|i| elite.iter().copied().filter(|&j| j != i).collect())
                    .collect()
            }
            NeighbourSource::NaggsaArchives => self
                .archives
                .build(&swarm.particles, &ranked, k)
                .into_iter()
                .map(|a| a.merged)
                .collect(),
        };

        let particles = &swarm.particles;
        let dims = problem.bit_len();
        let mut accels = vec![vec![0.0; dims]; n];
        let mut probe = ProbeRecord {
            iteration: t,
            kbest_size: k,
            neighbours: 0,
            mean_distance: 0.0,
            mean_gravity: 0.0,
        };
        let mut pulls = Vec::new();
        for (i, neighbours) in neighbour_sets.iter().enumerate() {
            pulls.clear();
            for &j in neighbours {
                let gravity = match scalar {
                    Some(g) => g,
                    None => self.pair_gravity.gravity(particles, i, j),
                };
                pulls.push(Pull {
                    index: j,
                    gravity,
                    rand: rng.uniform(),
                });
            }
            if i == 0 && !pulls.is_empty() {
                let xi = particles[0].position.as_slice();
                let m = pulls.len() as f64;
                probe.neighbours = pulls.len();
                probe.mean_distance = pulls
                    .iter()
                    .map(|p| hamming_unchecked(xi, particles[p.index].position.as_slice()) as f64)
                    .sum::<f64>()
                    / m;
                probe.mean_gravity = pulls.iter().map(|p| p.gravity).sum::<f64>() / m;
            }
            acceleration(i, &pulls, particles, cfg.epsilon, &mut accels[i]);
        }

        for (p, a) in swarm.particles.iter_mut().zip(&accels) {
            let rand_i = rng.uniform();
            update_velocity(&mut p.velocity, a, rand_i, cfg.v_max);
            transfer_flip(&mut p.position, &p.velocity, rng);
        }

        swarm.iteration += 1;
        Ok(probe)
    }

    /// `max_iterations` steps from a fresh swarm seeded by `seed`.
    pub fn run<O: Objective + ?Sized>(&self, problem: &O, seed: u64) -> Result<RunOutcome> {
        let mut rng = RngStream::new(seed);
        let mut eval_rng = rng.fork(1);
        let mut swarm = SwarmState::initialize(problem, &self.config, &mut rng);
        let mut trace = Vec::with_capacity(self.config.max_iterations);
        let mut probe = Vec::with_capacity(self.config.max_iterations);
        while swarm.iteration < self.config.max_iterations {
            probe.push(self.step(&mut swarm, problem, &mut rng, &mut eval_rng)?);
            trace.push(swarm.best_fitness().expect("evaluated at least once"));
        }
        let (best, best_fitness) = swarm.best_so_far.expect("max_iterations is positive");
        Ok(RunOutcome {
            best,
            best_fitness,
            trace,
            probe,
        })
    }
}

/// Convenience wrapper around [`Engine::new`] + [`Engine::run`].
pub fn run<O: Objective + ?Sized>(problem: &O, config: &EngineConfig, seed: u64) -> Result<RunOutcome> {
    Engine::new(config.clone())?.run(problem, seed)
}
