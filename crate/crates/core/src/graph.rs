//! Point sets in general position and the TD-Delaunay graph builders.
//!
//! Two builders produce the same directed edge set: [`build_sweep`] keeps,
//! for each vertex and positive cone, the vertex whose homothet is smallest;
//! [`build_empty_homothet_oracle`] keeps `u → v` exactly when the interior of
//! `T^{u,v}` holds no other point. The second is cubic and exists to
//! cross-check the first.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    cone_of, homothet_contains, scale_in_cone, smallest_homothet, ConeIndex, Containment, Point,
    TriangleShape, PARALLEL_TOLERANCE,
};

/// Relative tolerance below which two candidate scales count as a tie.
pub const SCALE_TIE_TOLERANCE: f64 = 1e-12;

/// Attempts made by [`perturb`] before giving up.
pub const PERTURB_ATTEMPTS: usize = 100;

/// Ordered planar points; the list index is the vertex id.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    general_position: bool,
}

impl PointSet {
    /// Wraps points without validating them.
    pub fn new(points: Vec<Point>) -> Self {
        Self {
            points,
            general_position: false,
        }
    }

    /// Wraps and validates, failing on the first violation.
    pub fn validated(shape: &TriangleShape, points: Vec<Point>) -> Result<Self> {
        Self::new(points).validate(shape)
    }

    pub fn validate(mut self, shape: &TriangleShape) -> Result<Self> {
        let report = validate_general_position(shape, &self);
        if let Some(v) = report.violations.first() {
            return Err(Error::GeneralPosition(format!(
                "{} violation(s), first: {v}",
                report.violations.len()
            )));
        }
        self.general_position = true;
        Ok(self)
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_validated(&self) -> bool {
        self.general_position
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn diameter(&self) -> f64 {
        bounding_box_diameter(&self.points)
    }
}

pub(crate) fn bounding_box_diameter(points: &[Point]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (hi - lo).norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Coincident,
    /// The pair is parallel to the side from the first corner to the second.
    ParallelToSide(ConeIndex, ConeIndex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub kind: ViolationKind,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            ViolationKind::Coincident => write!(f, "points {} and {} coincide", self.a, self.b),
            ViolationKind::ParallelToSide(s, t) => {
                write!(
                    f,
                    "points {} and {} are parallel to side τ{s}τ{t}",
                    self.a, self.b
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every pair that coincides or lies on a line parallel to a side.
pub fn validate_general_position(shape: &TriangleShape, pts: &PointSet) -> ValidationReport {
    let points = pts.points();
    let sides = shape.sides();
    let mut violations = Vec::new();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let d = points[b] - points[a];
            let len = d.norm();
            if len == 0.0 {
                violations.push(Violation {
                    a,
                    b,
                    kind: ViolationKind::Coincident,
                });
                continue;
            }
            for &(s, t, side) in &sides {
                if d.cross(side).abs() <= PARALLEL_TOLERANCE * len * side.norm() {
                    violations.push(Violation {
                        a,
                        b,
                        kind: ViolationKind::ParallelToSide(s, t),
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Displaces every point by a seeded offset of length at most
/// `magnitude × diameter`, redrawing until the result is in general position.
pub fn perturb(
    shape: &TriangleShape,
    pts: &PointSet,
    seed: u64,
    magnitude: f64,
) -> Result<PointSet> {
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "perturbation magnitude {magnitude} must be > 0"
        )));
    }
    let radius = magnitude * pts.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PERTURB_ATTEMPTS {
        let moved: Vec<Point> = pts
            .points()
            .iter()
            .map(|&p| {
                let r = radius * rng.gen::<f64>().sqrt();
                let phi = rng.gen::<f64>() * std::f64::consts::TAU;
                p + Point::new(r * phi.cos(), r * phi.sin())
            })
            .collect();
        let candidate = PointSet::new(moved);
        if validate_general_position(shape, &candidate).is_valid() {
            return Ok(PointSet {
                general_position: true,
                ..candidate
            });
        }
    }
    Err(Error::PerturbationFailed(PERTURB_ATTEMPTS))
}

/// A `TD_{θ₁,θ₂}`-Delaunay graph: one optional out-edge per vertex and
/// positive cone, plus the induced undirected adjacency.
#[derive(Clone, Debug, PartialEq)]
pub struct TdGraph {
    shape: TriangleShape,
    points: PointSet,
    cone_edges: Vec<[Option<usize>; 3]>,
    adjacency: Vec<Vec<usize>>,
}

impl TdGraph {
    /// Assembles a graph from explicit directed edges, checking that every
    /// edge `u → v` filed under cone `i` really has `v ∈ C_{u,i}`.
    pub fn from_cone_edges(
        shape: TriangleShape,
        points: PointSet,
        cone_edges: Vec<[Option<usize>; 3]>,
    ) -> Result<Self> {
        if !points.is_validated() {
            return Err(Error::NotValidated);
        }
        if cone_edges.len() != points.len() {
            return Err(Error::GraphIntegrity(format!(
                "{} cone-edge rows for {} points",
                cone_edges.len(),
                points.len()
            )));
        }
        let n = points.len();
        for (u, row) in cone_edges.iter().enumerate() {
            for (slot, target) in row.iter().enumerate() {
                let Some(v) = *target else { continue };
                if v >= n || v == u {
                    return Err(Error::GraphIntegrity(format!("bad edge {u} -> {v}")));
                }
                let i = ConeIndex::from_slot(slot);
                let cone = cone_of(&shape, points.points()[u], points.points()[v])?;
                if !cone.is_positive() || cone.index != i {
                    return Err(Error::GraphIntegrity(format!(
                        "edge {u} -> {v} filed under cone {i} but lies in {cone}"
                    )));
                }
            }
        }
        Ok(Self::assemble(shape, points, cone_edges))
    }

    fn assemble(
        shape: TriangleShape,
        points: PointSet,
        cone_edges: Vec<[Option<usize>; 3]>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); points.len()];
        for (u, row) in cone_edges.iter().enumerate() {
            for v in row.iter().flatten() {
                adjacency[u].push(*v);
                adjacency[*v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self {
            shape,
            points,
            cone_edges,
            adjacency,
        }
    }

    pub fn shape(&self) -> &TriangleShape {
        &self.shape
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    #[inline]
    pub fn point(&self, u: usize) -> Point {
        self.points.points()[u]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cone_edges(&self) -> &[[Option<usize>; 3]] {
        &self.cone_edges
    }

    #[inline]
    pub fn cone_edge(&self, u: usize, i: ConeIndex) -> Option<usize> {
        self.cone_edges[u][i.slot()]
    }

    #[inline]
    pub fn neighbours(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.cone_edges[u].iter().flatten().count()
    }

    /// Directed edges as `(u, i, v)` with `v ∈ C_{u,i}`, sorted.
    pub fn directed_edges(&self) -> Vec<(usize, ConeIndex, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.cone_edges.iter().enumerate() {
            for (slot, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    out.push((u, ConeIndex::from_slot(slot), *v));
                }
            }
        }
        out
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .directed_edges()
            .into_iter()
            .map(|(u, _, v)| (u.min(v), u.max(v)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Vertices within `k` hops of `s`, sorted.
    pub fn k_neighbourhood(&self, s: usize, k: usize) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.len()];
        depth[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if depth[u] == k {
                continue;
            }
            for &v in self.neighbours(u) {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (0..self.len())
            .filter(|&v| depth[v] != usize::MAX)
            .collect()
    }
}

fn require_validated(pts: &PointSet) -> Result<()> {
    if pts.is_validated() {
        Ok(())
    } else {
        Err(Error::NotValidated)
    }
}

/// Nearest-in-cone construction, `O(n²)`.
pub fn build_sweep(shape: &TriangleShape, pts: &PointSet) -> Result<TdGraph> {
    require_validated(pts)?;
    let points = pts.points();
    let cone_edges = (0..points.len())
        .into_par_iter()
        .map(|u| {
            let mut best: [Option<(f64, usize)>; 3] = [None; 3];
            for (v, &q) in points.iter().enumerate() {
                if v == u {
                    continue;
                }
                let cone = cone_of(shape, points[u], q)?;
                if !cone.is_positive() {
                    continue;
                }
                let sigma = scale_in_cone(shape, points[u], cone.index, q);
                let slot = &mut best[cone.index.slot()];
                match *slot {
                    Some((current, w)) => {
                        if (sigma - current).abs() <= SCALE_TIE_TOLERANCE * current.max(sigma) {
                            return Err(Error::GeneralPosition(format!(
                                "vertices {w} and {v} tie as nearest to {u} in cone {}",
                                cone.index
                            )));
                        }
                        if sigma < current {
                            *slot = Some((sigma, v));
                        }
                    }
                    None => *slot = Some((sigma, v)),
                }
            }
            Ok(best.map(|b| b.map(|(_, v)| v)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TdGraph::assemble(shape.clone(), pts.clone(), cone_edges))
}

/// Empty-homothet construction, `O(n³)`: keeps `u → v` in cone `i` iff
/// `v ∈ C_{u,i}` and no other point lies in the interior of `T^{u,v}`.
pub fn build_empty_homothet_oracle(shape: &TriangleShape, pts: &PointSet) -> Result<TdGraph> {
    require_validated(pts)?;
    let points = pts.points();
    let cone_edges = (0..points.len())
        .into_par_iter()
        .map(|u| {
            let mut row: [Option<usize>; 3] = [None; 3];
            for (v, &q) in points.iter().enumerate() {
                if v == u {
                    continue;
                }
                let cone = cone_of(shape, points[u], q)?;
                if !cone.is_positive() {
                    continue;
                }
                let h = smallest_homothet(shape, points[u], q)?;
                let empty = points.iter().enumerate().all(|(w, &r)| {
                    w == u || w == v || !homothet_contains(&h, r, Containment::Open)
                });
                if empty {
                    let slot = &mut row[cone.index.slot()];
                    if let Some(w) = *slot {
                        return Err(Error::GraphIntegrity(format!(
                            "both {w} and {v} have empty homothets with {u} in cone {}",
                            cone.index
                        )));
                    }
                    *slot = Some(v);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TdGraph::assemble(shape.clone(), pts.clone(), cone_edges))
}
