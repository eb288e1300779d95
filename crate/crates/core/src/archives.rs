//! Neighbourhood archives and fitness-distance gravity for BNAGGSA.
//!
//! Each particle gets two archives drawn from the current Kbest elite: an
//! F archive (the fittest members) and a D archive (the members nearest in
//! Hamming distance). Their deduplicated union, between 2 and 5 particles,
//! replaces Kbest as the particle's set of attractors. The pull of each
//! neighbour is scaled by a per-pair ratio of fitness gap to distance
//! instead of a global, time-decaying constant:
//!
//! ```text
//! FDG(i, j) = (|f_i − f_j| + δ) / (R_ij + γ)
//! ```
//!
//! Both pieces sit behind traits ([`ArchivePolicy`], [`PairGravity`]) so
//! alternative membership rules or scaling formulas can be swapped into
//! [`crate::engine::Engine`].

use serde::{Deserialize, Serialize};

use crate::bits::hamming_unchecked;
use crate::engine::BitParticle;
use crate::error::{Error, Result};

/// Neighbours assigned to `owner` for one iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighbourArchive {
    pub owner: usize,
    pub f_members: Vec<usize>,
    pub d_members: Vec<usize>,
    /// Union of `f_members` then `d_members`, first occurrence kept.
    pub merged: Vec<usize>,
}

/// Builds one archive per particle.
pub trait ArchivePolicy: Send + Sync {
    /// `ranked` lists every particle best first; its first `kbest_len`
    /// entries are the current elite.
    fn build(&self, particles: &[BitParticle], ranked: &[usize], kbest_len: usize) -> Vec<NeighbourArchive>;
}

/// Per-pair gravitational scaling `G_ij`.
pub trait PairGravity: Send + Sync {
    fn gravity(&self, particles: &[BitParticle], i: usize, j: usize) -> f64;
}

/// Floors of the fitness-distance ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdgParams {
    pub delta: f64,
    pub gamma: f64,
}

impl Default for FdgParams {
    fn default() -> Self {
        Self {
            delta: 1e-2,
            gamma: 1e-5,
        }
    }
}

impl FdgParams {
    pub fn validate(&self) -> Result<()> {
        if self.delta > 0.0 && self.gamma > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "delta and gamma must be positive, got {} and {}",
                self.delta, self.gamma
            )))
        }
    }

    /// Ratio for a known fitness gap and Hamming distance.
    #[inline]
    pub fn ratio(&self, fitness_gap: f64, distance: usize) -> f64 {
        (fitness_gap.abs() + self.delta) / (distance as f64 + self.gamma)
    }
}

impl PairGravity for FdgParams {
    fn gravity(&self, particles: &[BitParticle], i: usize, j: usize) -> f64 {
        fdg(i, j, particles, self)
    }
}

/// Fitness-distance gravity between particles `i` and `j`.
pub fn fdg(i: usize, j: usize, particles: &[BitParticle], params: &FdgParams) -> f64 {
    let (pi, pj) = (&particles[i], &particles[j]);
    let r = hamming_unchecked(pi.position.as_slice(), pj.position.as_slice());
    params.ratio(pi.fitness - pj.fitness, r)
}

/// Pairs every merged neighbour of `i` with its [`fdg`] value.
pub fn naggsa_neighbour_gravity(
    i: usize,
    archives: &[NeighbourArchive],
    particles: &[BitParticle],
    params: &FdgParams,
) -> Vec<(usize, f64)> {
    archives[i]
        .merged
        .iter()
        .map(|&j| (j, fdg(i, j, particles, params)))
        .collect()
}

/// Default F/D membership rule: the `fitness_members` fittest and the
/// `distance_members` nearest elite particles, merged and clamped to
/// `[min_size, max_size]`. Short archives are padded with the next-best
/// particles of the whole swarm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitnessDistanceArchives {
    pub fitness_members: usize,
    pub distance_members: usize,
    pub min_size: usize,
    pub max_size: usize,
}

impl Default for FitnessDistanceArchives {
    fn default() -> Self {
        Self {
            fitness_members: 2,
            distance_members: 3,
            min_size: 2,
            max_size: 5,
        }
    }
}

impl ArchivePolicy for FitnessDistanceArchives {
    fn build(&self, particles: &[BitParticle], ranked: &[usize], kbest_len: usize) -> Vec<NeighbourArchive> {
        let n = particles.len();
        if n < 3 {
            return (0..n)
                .map(|i| {
                    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                    NeighbourArchive {
                        owner: i,
                        f_members: others.clone(),
                        d_members: Vec::new(),
                        merged: others,
                    }
                })
                .collect();
        }
        let elite = &ranked[..kbest_len.clamp(1, n)];
        (0..n).map(|i| self.build_one(i, particles, ranked, elite)).collect()
    }
}

impl FitnessDistanceArchives {
    fn build_one(&self, i: usize, particles: &[BitParticle], ranked: &[usize], elite: &[usize]) -> NeighbourArchive {
        let f_members: Vec<usize> = elite
            .iter()
            .copied()
            .filter(|&j| j != i)
            .take(self.fitness_members)
            .collect();

        let xi = particles[i].position.as_slice();
        let mut by_distance: Vec<(usize, usize)> = elite
            .iter()
            .copied()
            .filter(|&j| j != i)
            .map(|j| (hamming_unchecked(xi, particles[j].position.as_slice()), j))
            .collect();
        by_distance.sort_unstable();
        let d_members: Vec<usize> = by_distance
            .into_iter()
            .take(self.distance_members)
            .map(|(_, j)| j)
            .collect();

        let mut merged = Vec::with_capacity(self.max_size);
        for &j in f_members.iter().chain(&d_members) {
            if merged.len() == self.max_size {
                break;
            }
            if !merged.contains(&j) {
                merged.push(j);
            }
        }
        for &j in ranked {
            if merged.len() >= self.min_size {
                break;
            }
            if j != i && !merged.contains(&j) {
                merged.push(j);
            }
        }

        NeighbourArchive {
            owner: i,
            f_members,
            d_members,
            merged,
        }
    }
}

/// [`FitnessDistanceArchives::default`] applied to a swarm.
pub fn build_archives(particles: &[BitParticle], ranked: &[usize], kbest_len: usize) -> Vec<NeighbourArchive> {
    FitnessDistanceArchives::default().build(particles, ranked, kbest_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::engine::{rank_by_fitness, Sense};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn swarm(members: &[(&str, f64)]) -> Vec<BitParticle> {
        members.iter()
            .map(|&(bits, fitness)| BitParticle {
                fitness,
                ..BitParticle::new(BitString::parse(bits).unwrap())
            })
            .collect()
    }

    #[test]
    fn three_particles_get_the_other_two() {
        let ps = swarm(&[("000", 1.0), ("011", 2.0), ("111", 3.0)]);
        let ranked = rank_by_fitness(&ps, Sense::Minimize);
        for a in build_archives(&ps, &ranked, 3) {
            assert_eq!(a.merged.len(), 2);
            assert!(!a.merged.contains(&a.owner));
        }
    }

    #[test]
    fn full_overlap_dedups_to_two() {
        // The elite is {1, 2}: both fittest and nearest to particle 0.
        let ps = swarm(&[
            ("00000000", 9.0),
            ("00000001", 1.0),
            ("00000011", 2.0),
            ("11111111", 3.0),
        ]);
        let ranked = rank_by_fitness(&ps, Sense::Minimize);
        let a = &build_archives(&ps, &ranked, 2)[0];
        assert_eq!(a.f_members, vec![1, 2]);
        assert_eq!(a.d_members, vec![1, 2]);
        assert_eq!(a.merged, vec![1, 2]);
    }

    #[test]
    fn disjoint_archives_merge_to_five() {
        // Particle 0 sits next to 3, 4, 5 (distances 1, 2, 3) while the
        // fittest particles 1 and 2 are far away (distances 9 and 10).
        let ps = swarm(&[
            ("0000000000", 10.0),
            ("1111111110", 1.0),
            ("1111111111", 2.0),
            ("1000000000", 3.0),
            ("1100000000", 4.0),
            ("1110000000", 5.0),
        ]);
        let ranked = rank_by_fitness(&ps, Sense::Minimize);
        let archives = build_archives(&ps, &ranked, 6);

        // brute-force the expected sets
        let others: Vec<usize> = (1..6).collect();
        let mut by_fit = others.clone();
        by_fit.sort_by(|&a, &b| ps[a].fitness.total_cmp(&ps[b].fitness).then(a.cmp(&b)));
        let dist = |j: usize| {
            ps[0].position
                .iter()
                .zip(ps[j].position.iter())
                .filter(|(a, b)| a != b)
                .count()
        };
        let mut by_dist = others.clone();
        by_dist.sort_by_key(|&j| (dist(j), j));
        assert_eq!(archives[0].f_members, by_fit[..2].to_vec());
        assert_eq!(archives[0].d_members, by_dist[..3].to_vec());
        assert_eq!(archives[0].merged, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn short_elite_is_padded_from_the_ranking() {
        let ps = swarm(&[("0000", 1.0), ("0011", 2.0), ("1111", 3.0), ("0001", 4.0)]);
        let ranked = rank_by_fitness(&ps, Sense::Minimize);
        let archives = build_archives(&ps, &ranked, 1);
        // owner 0 is the whole elite: everything comes from padding
        assert_eq!(archives[0].merged, vec![1, 2]);
        assert_eq!(archives[3].merged, vec![0, 1]);
    }

    #[test]
    fn tiny_swarm_falls_back_to_all_others() {
        let ps = swarm(&[("01", 1.0), ("10", 2.0)]);
        let archives = build_archives(&ps, &[0, 1], 2);
        assert_eq!(archives[0].merged, vec![1]);
        assert_eq!(archives[1].merged, vec![0]);
    }

    #[test]
    fn fdg_examples() {
        let p = FdgParams::default();
        assert_relative_eq!(p.ratio(0.0, 10), 9.99999000001e-4, max_relative = 1e-12);
        assert_relative_eq!(p.ratio(1.0, 0), 101000.0, max_relative = 1e-12);
        assert_relative_eq!(p.ratio(0.0, 0), 1000.0, max_relative = 1e-12);
        assert_eq!(p.ratio(-3.0, 4), p.ratio(3.0, 4));
    }

    #[test]
    fn neighbour_gravity_pairs_archive_members() {
        let ps = swarm(&[("000", 1.0), ("011", 2.0), ("111", 4.0)]);
        let ranked = rank_by_fitness(&ps, Sense::Minimize);
        let archives = build_archives(&ps, &ranked, 3);
        let params = FdgParams::default();
        let g = naggsa_neighbour_gravity(0, &archives, &ps, &params);
        assert_eq!(g.len(), 2);
        assert_relative_eq!(g[0].1, params.ratio(1.0, 2));
        assert_relative_eq!(g[1].1, params.ratio(3.0, 3));
        let floor = params.delta / (3.0 + params.gamma);
        assert!(g.iter().all(|&(_, v)| v >= floor));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(FdgParams { delta: 0.0, gamma: 1.0 }.validate().is_err());
        assert!(FdgParams { delta: 1.0, gamma: -1.0 }.validate().is_err());
    }

    fn arb_swarm() -> impl Strategy<Value = (Vec<(Vec<bool>, f64)>, usize)> {
        (3usize..25, 1usize..30).prop_flat_map(|(n, d)| {
            (
                proptest::collection::vec(
                    (proptest::collection::vec(any::<bool>(), d), -100.0f64..100.0),
                    n,
                ),
                1usize..=n,
            )
        })
    }

    proptest! {
        #[test]
        fn archive_sizes_stay_in_range((members, k) in arb_swarm()) {
            let ps: Vec<BitParticle> = members
                .into_iter()
                .map(|(b, f)| BitParticle { fitness: f, ..BitParticle::new(BitString::from_bools(b)) })
                .collect();
            let ranked = rank_by_fitness(&ps, Sense::Minimize);
            for a in build_archives(&ps, &ranked, k) {
                prop_assert!((2..=5).contains(&a.merged.len()));
                prop_assert!(!a.merged.contains(&a.owner));
                let mut dedup = a.merged.clone();
                dedup.sort_unstable();
                dedup.dedup();
                prop_assert_eq!(dedup.len(), a.merged.len());
            }
        }

        #[test]
        fn fdg_is_symmetric_and_monotone(gap in 0.0f64..1e4, r in 0usize..200) {
            let p = FdgParams::default();
            prop_assert_eq!(p.ratio(gap, r), p.ratio(-gap, r));
            prop_assert!(p.ratio(gap, r + 1) < p.ratio(gap, r));
            prop_assert!(p.ratio(gap + 1.0, r) > p.ratio(gap, r));
        }
    }
}
