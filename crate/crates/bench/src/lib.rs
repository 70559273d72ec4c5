//! Workload generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdd_core::{build_sweep, perturb, Point, PointSet, TdGraph, TriangleShape};

/// `n` uniform points in the unit square, in general position for `shape`.
pub fn uniform_points(shape: &TriangleShape, n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Point> = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
    PointSet::validated(shape, raw.clone())
        .or_else(|_| perturb(shape, &PointSet::new(raw), seed, 1e-9))
        .expect("uniform points can be put in general position")
}

pub fn uniform_graph(shape: &TriangleShape, n: usize, seed: u64) -> TdGraph {
    build_sweep(shape, &uniform_points(shape, n, seed)).expect("validated input builds")
}
