#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdd_core::{build_sweep, perturb, Point, PointSet, TdGraph, TriangleShape};

pub const SHAPES: [(f64, f64); 3] = [
    (PI / 3.0, PI / 3.0),
    (PI / 6.0, PI / 5.0),
    (PI / 4.0, PI / 3.0),
];

pub fn shapes() -> Vec<TriangleShape> {
    SHAPES
        .iter()
        .map(|&(a, b)| TriangleShape::new(a, b).unwrap())
        .collect()
}

/// Uniform points in the unit square, nudged into general position if needed.
pub fn random_points(shape: &TriangleShape, n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Point> = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
    PointSet::validated(shape, raw.clone())
        .or_else(|_| perturb(shape, &PointSet::new(raw), seed, 1e-9))
        .unwrap()
}

pub fn random_graph(shape: &TriangleShape, n: usize, seed: u64) -> TdGraph {
    build_sweep(shape, &random_points(shape, n, seed)).unwrap()
}
