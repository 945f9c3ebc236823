//! Shared corpus builders for the benchmarks.

use emopt_core::{generate, ColoredBipartiteGraph, GenMode, GenSpec};

/// A seeded random instance with a planted perfect matching and the
/// budget set to half the side size.
pub fn planted_instance(n: usize, density: f64, seed: u64) -> (ColoredBipartiteGraph, usize) {
    let (graph, _) = generate(&GenSpec {
        n,
        density,
        red_prob: 0.5,
        seed,
        mode: GenMode::RandomPlantedPm,
    })
    .expect("benchmark specs are valid");
    (graph, n / 2)
}
