//! Deterministic, seeded instance generation.
//!
//! The pseudo-random generator is pinned to ChaCha8 (`rand_chacha`),
//! seeded through `seed_from_u64`; the draw order below is part of the
//! reproducibility contract, so identical specs produce byte-identical
//! instances on every platform:
//!
//! 1. the planted permutation (Fisher-Yates shuffle),
//! 2. planted edge colors (or the red position shuffle in exact-k mode),
//! 3. one inclusion draw per candidate noise pair in lexicographic
//!    order, followed by its color draw when included,
//! 4. the budget `k` where the mode draws it.

use crate::graph::{Color, ColoredBipartiteGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Instance families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// A random planted perfect matching plus independent noise edges;
    /// `k` is drawn uniformly from `0..=n`.
    RandomPlantedPm,
    /// A planted perfect matching with exactly the given number of red
    /// edges, plus noise; the emitted `k` equals the planted count, so a
    /// perfect matching with exactly `k` red edges exists by
    /// construction.
    PlantedExactK(usize),
    /// A single alternating cycle through all vertices: blue matched
    /// edges, red unmatched edges. The only improving cycle uses `n`
    /// positive edges, which defeats any budget below `n` and exercises
    /// the forced-edge branch; `k` is drawn uniformly from `0..=n`.
    LongCycleAdversarial,
}

impl GenMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GenMode::RandomPlantedPm => "random-planted",
            GenMode::PlantedExactK(_) => "planted-exact-k",
            GenMode::LongCycleAdversarial => "long-cycle-adversarial",
        }
    }
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    /// Vertices per side.
    pub n: usize,
    /// Probability of each non-planted pair becoming an edge.
    pub density: f64,
    /// Probability of a noise or planted edge being red.
    pub red_prob: f64,
    pub seed: u64,
    pub mode: GenMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

impl GenSpec {
    fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::InvalidSpec("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(GenError::InvalidSpec(format!(
                "density {} outside [0, 1]",
                self.density
            )));
        }
        if !(0.0..=1.0).contains(&self.red_prob) {
            return Err(GenError::InvalidSpec(format!(
                "red probability {} outside [0, 1]",
                self.red_prob
            )));
        }
        match self.mode {
            GenMode::PlantedExactK(k) if k > self.n => Err(GenError::InvalidSpec(format!(
                "planted k = {k} exceeds n = {}",
                self.n
            ))),
            GenMode::LongCycleAdversarial if self.n < 2 => Err(GenError::InvalidSpec(
                "the adversarial cycle needs n >= 2".into(),
            )),
            _ => Ok(()),
        }
    }
}

fn color(rng: &mut ChaCha8Rng, red_prob: f64) -> Color {
    if rng.gen_bool(red_prob) {
        Color::Red
    } else {
        Color::Blue
    }
}

/// Generates the instance and its budget `k`. Every generated graph
/// admits a perfect matching: the planted one. Noise only adds edges.
pub fn generate(spec: &GenSpec) -> Result<(ColoredBipartiteGraph, usize), GenError> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    if let GenMode::LongCycleAdversarial = spec.mode {
        let mut edges = Vec::with_capacity(2 * n);
        for i in 0..n {
            edges.push((i, i, Color::Blue));
        }
        for i in 0..n {
            edges.push(((i + 1) % n, i, Color::Red));
        }
        let graph = ColoredBipartiteGraph::new(n, n, edges)
            .expect("the adversarial cycle is a valid simple graph");
        let k = rng.gen_range(0..=n);
        return Ok((graph, k));
    }

    let mut partner: Vec<usize> = (0..n).collect();
    partner.shuffle(&mut rng);

    let mut edges: Vec<(usize, usize, Color)> = Vec::new();
    match spec.mode {
        GenMode::RandomPlantedPm => {
            for (a, &b) in partner.iter().enumerate() {
                edges.push((a, b, color(&mut rng, spec.red_prob)));
            }
        }
        GenMode::PlantedExactK(k) => {
            let mut positions: Vec<usize> = (0..n).collect();
            positions.shuffle(&mut rng);
            let mut red = vec![false; n];
            for &p in &positions[..k] {
                red[p] = true;
            }
            for (a, &b) in partner.iter().enumerate() {
                let c = if red[a] { Color::Red } else { Color::Blue };
                edges.push((a, b, c));
            }
        }
        GenMode::LongCycleAdversarial => unreachable!("handled above"),
    }
    for (a, &planted_b) in partner.iter().enumerate() {
        for b in 0..n {
            if planted_b == b {
                continue;
            }
            if rng.gen_bool(spec.density) {
                edges.push((a, b, color(&mut rng, spec.red_prob)));
            }
        }
    }
    let graph =
        ColoredBipartiteGraph::new(n, n, edges).expect("noise never duplicates planted pairs");
    let k = match spec.mode {
        GenMode::PlantedExactK(k) => k,
        _ => rng.gen_range(0..=n),
    };
    Ok((graph, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_em_decision, EnumerationBudget};

    #[test]
    fn same_spec_same_instance() {
        let spec = GenSpec {
            n: 9,
            density: 0.4,
            red_prob: 0.5,
            seed: 1234,
            mode: GenMode::RandomPlantedPm,
        };
        let (g1, k1) = generate(&spec).unwrap();
        let (g2, k2) = generate(&spec).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(k1, k2);
    }

    #[test]
    fn planted_matching_guarantees_feasibility() {
        for seed in 0..30 {
            let spec = GenSpec {
                n: 6,
                density: 0.3,
                red_prob: 0.5,
                seed,
                mode: GenMode::RandomPlantedPm,
            };
            let (g, _) = generate(&spec).unwrap();
            assert!(crate::matching::min_red_pm(&g).is_ok());
        }
    }

    #[test]
    fn exact_k_mode_plants_a_yes_instance() {
        for seed in 0..30 {
            let k = (seed as usize) % 6;
            let spec = GenSpec {
                n: 5,
                density: 0.5,
                red_prob: 0.5,
                seed,
                mode: GenMode::PlantedExactK(k.min(5)),
            };
            let (g, emitted) = generate(&spec).unwrap();
            assert_eq!(emitted, k.min(5));
            assert!(exact_em_decision(&g, emitted, EnumerationBudget::default()).unwrap());
        }
    }

    #[test]
    fn exact_k_two_on_two_vertices_reaches_the_square() {
        let spec = GenSpec {
            n: 2,
            density: 1.0,
            red_prob: 0.5,
            seed: 7,
            mode: GenMode::PlantedExactK(2),
        };
        let (g, k) = generate(&spec).unwrap();
        assert_eq!(k, 2);
        assert_eq!(g.edge_count(), 4);
        assert!(g.edges().iter().filter(|e| e.color.is_red()).count() >= 2);
        assert!(exact_em_decision(&g, 2, EnumerationBudget::default()).unwrap());
    }

    #[test]
    fn all_blue_exact_zero() {
        let spec = GenSpec {
            n: 4,
            density: 0.5,
            red_prob: 0.0,
            seed: 99,
            mode: GenMode::PlantedExactK(0),
        };
        let (g, k) = generate(&spec).unwrap();
        assert_eq!(k, 0);
        assert!(g.edges().iter().all(|e| !e.color.is_red()));
        let out = crate::approx::solve_fixed_k(&g, 0, false).unwrap();
        assert_eq!(out.branch, crate::approx::Branch::ThresholdAtStart);
    }

    #[test]
    fn adversarial_cycle_shape() {
        let spec = GenSpec {
            n: 5,
            density: 0.0,
            red_prob: 0.0,
            seed: 3,
            mode: GenMode::LongCycleAdversarial,
        };
        let (g, _) = generate(&spec).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.red_edges().count(), 5);
        use crate::oracle::attainable_red_counts;
        let counts = attainable_red_counts(&g, EnumerationBudget::default()).unwrap();
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![0, 5]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let base = GenSpec {
            n: 3,
            density: 0.5,
            red_prob: 0.5,
            seed: 0,
            mode: GenMode::RandomPlantedPm,
        };
        assert!(generate(&GenSpec { n: 0, ..base }).is_err());
        assert!(generate(&GenSpec {
            density: 1.5,
            ..base
        })
        .is_err());
        assert!(generate(&GenSpec {
            red_prob: -0.1,
            ..base
        })
        .is_err());
        assert!(generate(&GenSpec {
            mode: GenMode::PlantedExactK(4),
            ..base
        })
        .is_err());
        assert!(generate(&GenSpec {
            n: 1,
            mode: GenMode::LongCycleAdversarial,
            ..base
        })
        .is_err());
    }
}
