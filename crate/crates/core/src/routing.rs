//! One-local, memoryless routing on TD-Delaunay graphs.
//!
//! At the current vertex `p` with destination `t`, the router distinguishes
//! four cases:
//!
//! - (i) `t` lies in a positive cone `C_{p,i}`: follow the unique edge there.
//! - (ii)–(iv) `t` lies in a negative cone `C̄_{p,i}`. Clip the three cones
//!   facing `t` with `T^{p,t}` to get the left, middle and right regions
//!   `X_L = C_{p,i-1} ∩ T`, `X_M = C̄_{p,i} ∩ T`, `X_R = C_{p,i+1} ∩ T`, and
//!   branch on how many of `X_L`, `X_R` are empty.
//!
//! Every case carries a potential `Φ(p, t)`, a walk along the boundary of
//! `T^{p,t}`. Each step drops the potential by at least the length of the
//! edge taken, so the route is never longer than `Φ(s, t)`; [`route`] can
//! check this at runtime.
//!
//! Decisions read only `p`, its incident edges and `t`, all exposed through
//! [`LocalView`].

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    cone_of, homothet_contains, smallest_homothet, ConeId, ConeIndex, Containment, Homothet, Point,
    TriangleShape, BOUNDARY_TOLERANCE,
};
use crate::graph::TdGraph;

/// Potential-decrease slack, relative to the instance diameter.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// (i) `t` in a positive cone.
    PositiveCone,
    /// (ii) `X_L` and `X_R` both empty.
    BothEmpty,
    /// (iii) exactly one of `X_L`, `X_R` empty.
    OneEmpty,
    /// (iv) neither empty.
    BothOccupied,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::PositiveCone => "i",
            Case::BothEmpty => "ii",
            Case::OneEmpty => "iii",
            Case::BothOccupied => "iv",
        }
    }

    /// Whether `next` may follow `self` along a route.
    pub fn may_precede(self, next: Case) -> bool {
        match self {
            Case::PositiveCone => next != Case::BothOccupied,
            Case::BothEmpty | Case::OneEmpty => matches!(next, Case::BothEmpty | Case::OneEmpty),
            Case::BothOccupied => next != Case::PositiveCone,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The neighbourhood of one vertex: its own position and the ids and
/// positions of the vertices it shares an edge with.
#[derive(Clone, Debug)]
pub struct LocalView<'a> {
    shape: &'a TriangleShape,
    id: usize,
    position: Point,
    neighbours: Vec<(usize, Point)>,
}

impl<'a> LocalView<'a> {
    pub fn new(
        shape: &'a TriangleShape,
        id: usize,
        position: Point,
        neighbours: Vec<(usize, Point)>,
    ) -> Self {
        Self {
            shape,
            id,
            position,
            neighbours,
        }
    }

    pub fn of(graph: &'a TdGraph, p: usize) -> Self {
        let neighbours = graph
            .neighbours(p)
            .iter()
            .map(|&v| (v, graph.point(v)))
            .collect();
        Self::new(graph.shape(), p, graph.point(p), neighbours)
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn position(&self) -> Point {
        self.position
    }

    pub fn neighbours(&self) -> &[(usize, Point)] {
        &self.neighbours
    }

    /// The neighbour in positive cone `i`; unique because positive-cone
    /// neighbours are exactly the out-edges.
    fn out_neighbour(&self, i: ConeIndex) -> Result<Option<(usize, Point)>> {
        let mut found = None;
        for &(v, q) in &self.neighbours {
            if cone_of(self.shape, self.position, q)? == ConeId::positive(i) {
                if let Some((w, _)) = found {
                    return Err(Error::GraphIntegrity(format!(
                        "vertex {} has neighbours {w} and {v} in positive cone {i}",
                        self.id
                    )));
                }
                found = Some((v, q));
            }
        }
        Ok(found)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub cone: ConeId,
    pub occupied: bool,
}

/// `X_L`, `X_M`, `X_R` for `t ∈ C̄_{p,i}`, with occupancy read from the
/// neighbourhood of `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSet {
    pub cone_index: ConeIndex,
    /// `T^{p,t}`, which clips all three regions.
    pub clip: Homothet,
    pub left: Region,
    /// Occupied when `p` has a neighbour in `X_M`; non-neighbours there are
    /// invisible to a 1-local router and do not count.
    pub middle: Region,
    pub right: Region,
    /// Neighbours of `p` in `X_M`, by id.
    pub middle_neighbours: Vec<usize>,
    /// Some neighbour sat within the boundary tolerance of `T^{p,t}`.
    pub ambiguous: bool,
    middle_points: Vec<(usize, Point)>,
    left_neighbour: Option<(usize, Point)>,
    right_neighbour: Option<(usize, Point)>,
}

impl RegionSet {
    /// Occupancy of `C_{p,i+j} ∩ T^{p,t}`.
    pub fn occupied(&self, j: i64) -> bool {
        if j > 0 {
            self.right.occupied
        } else {
            self.left.occupied
        }
    }

    fn side_neighbour(&self, j: i64) -> Option<(usize, Point)> {
        if j > 0 {
            self.right_neighbour
        } else {
            self.left_neighbour
        }
    }
}

fn near_boundary(h: &Homothet, q: Point) -> bool {
    h.barycentric(q)
        .iter()
        .any(|l| l.abs() <= BOUNDARY_TOLERANCE)
}

fn local_regions(view: &LocalView<'_>, t: Point) -> Result<RegionSet> {
    let p = view.position;
    let cone = cone_of(view.shape, p, t)?;
    if cone.is_positive() {
        return Err(Error::WrongCase(format!(
            "destination lies in positive cone {}",
            cone.index
        )));
    }
    let i = cone.index;
    let clip = smallest_homothet(view.shape, p, t)?;
    let mut ambiguous = false;

    let mut side = |j: i64| -> Result<(Region, Option<(usize, Point)>)> {
        let index = i.offset(j);
        let inside = match view.out_neighbour(index)? {
            Some((v, q)) => {
                ambiguous |= near_boundary(&clip, q);
                homothet_contains(&clip, q, Containment::Closed).then_some((v, q))
            }
            None => None,
        };
        Ok((
            Region {
                cone: ConeId::positive(index),
                occupied: inside.is_some(),
            },
            inside,
        ))
    };
    let (left, left_neighbour) = side(-1)?;
    let (right, right_neighbour) = side(1)?;

    let mut middle_points = Vec::new();
    for &(v, q) in &view.neighbours {
        if cone_of(view.shape, p, q)? == cone {
            ambiguous |= near_boundary(&clip, q) && q != t;
            if homothet_contains(&clip, q, Containment::Closed) {
                middle_points.push((v, q));
            }
        }
    }
    Ok(RegionSet {
        cone_index: i,
        clip,
        left,
        middle: Region {
            cone,
            occupied: !middle_points.is_empty(),
        },
        right,
        middle_neighbours: middle_points.iter().map(|&(v, _)| v).collect(),
        ambiguous,
        middle_points,
        left_neighbour,
        right_neighbour,
    })
}

/// How `j ∈ {+1, -1}` is chosen in cases (ii) and (iv).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Threshold {
    /// Minimise the detour along `T^{p,t}`.
    Optimal,
    /// Pick the corner `τ_{i+j}` nearer to `p`: the midpoint rule of the
    /// equilateral algorithm carried over by an affine map.
    Midpoint,
}

/// `+1` unless `-1` is strictly smaller.
fn argmin_j(f: impl Fn(i64) -> f64) -> i64 {
    if f(-1) < f(1) {
        -1
    } else {
        1
    }
}

/// The `X_M` neighbour closest in angle to the ray `X_M` shares with
/// `C_{p,i+j}`; ties go to the lower id.
fn closest_to_side(
    shape: &TriangleShape,
    p: Point,
    i: ConeIndex,
    j: i64,
    candidates: &[(usize, Point)],
) -> Option<usize> {
    let ray = shape.shared_ray(i, j);
    candidates
        .iter()
        .map(|&(v, q)| ((q - p).angle_to(ray), v))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, v)| v)
}

/// One step of the router: where to go next, which case applied, and the
/// `j` it settled on (absent in case (i)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RouteStep {
    pub next: usize,
    pub case: Case,
    pub j: Option<i64>,
    /// `Φ(p, t)` under the case that applied.
    pub potential: f64,
}

fn decide(view: &LocalView<'_>, t: Point, threshold: Threshold) -> Result<RouteStep> {
    let shape = view.shape;
    let p = view.position;
    if p == t {
        return Err(Error::Degenerate(format!(
            "vertex {} is already the destination",
            view.id
        )));
    }
    let cone = cone_of(shape, p, t)?;
    let h = smallest_homothet(shape, p, t)?;
    let i = cone.index;
    let tau = |j: i64| h.corner(i.offset(j));

    if cone.is_positive() {
        let (next, _) = view.out_neighbour(i)?.ok_or_else(|| {
            Error::GraphIntegrity(format!(
                "vertex {} has no edge in cone {i} towards the destination",
                view.id
            ))
        })?;
        let via = |j: i64| p.dist(tau(j)) + tau(j).dist(t);
        return Ok(RouteStep {
            next,
            case: Case::PositiveCone,
            j: None,
            potential: via(1).max(via(-1)),
        });
    }

    let regions = local_regions(view, t)?;
    let middle = &regions.middle_points;
    let detour = |j: i64| p.dist(tau(j)) + tau(j).dist(t);
    let long_detour = |j: i64| p.dist(tau(j)) + tau(j).dist(tau(-j)) + tau(-j).dist(t);
    let pick_j = |f: &dyn Fn(i64) -> f64| match threshold {
        Threshold::Optimal => argmin_j(f),
        Threshold::Midpoint => argmin_j(|j| p.dist(tau(j))),
    };
    let missing = |what: &str| {
        Error::GraphIntegrity(format!(
            "vertex {}: expected {what} towards the destination",
            view.id
        ))
    };

    let step = match (regions.left.occupied, regions.right.occupied) {
        (false, false) => {
            let j = pick_j(&detour);
            let next = closest_to_side(shape, p, i, j, middle)
                .ok_or_else(|| missing("a neighbour in X_M"))?;
            RouteStep {
                next,
                case: Case::BothEmpty,
                j: Some(j),
                potential: detour(1).min(detour(-1)),
            }
        }
        (true, true) => {
            let j = pick_j(&long_detour);
            let next = match closest_to_side(shape, p, i, j, middle) {
                Some(v) => v,
                // The region containing corner τ_{i+j} is C_{p,i-j}.
                None => {
                    regions
                        .side_neighbour(-j)
                        .ok_or_else(|| missing("an occupied side region"))?
                        .0
                }
            };
            RouteStep {
                next,
                case: Case::BothOccupied,
                j: Some(j),
                potential: long_detour(1).min(long_detour(-1)),
            }
        }
        _ => {
            let j = if regions.occupied(1) { -1 } else { 1 };
            let next = match closest_to_side(shape, p, i, j, middle) {
                Some(v) => v,
                None => {
                    regions
                        .side_neighbour(-j)
                        .ok_or_else(|| missing("an occupied side region"))?
                        .0
                }
            };
            RouteStep {
                next,
                case: Case::OneEmpty,
                j: Some(j),
                potential: detour(j),
            }
        }
    };
    Ok(step)
}

fn check_vertex(graph: &TdGraph, v: usize) -> Result<()> {
    if v < graph.len() {
        Ok(())
    } else {
        Err(Error::UnknownVertex(v))
    }
}

/// Left, middle and right regions of `p` for destination `t`.
pub fn regions(graph: &TdGraph, p: usize, t: usize) -> Result<RegionSet> {
    check_vertex(graph, p)?;
    check_vertex(graph, t)?;
    local_regions(&LocalView::of(graph, p), graph.point(t))
}

/// The next hop of the optimal router from `p` towards `t`.
pub fn route_step(graph: &TdGraph, p: usize, t: usize) -> Result<RouteStep> {
    check_vertex(graph, p)?;
    check_vertex(graph, t)?;
    decide(&LocalView::of(graph, p), graph.point(t), Threshold::Optimal)
}

/// Route step computed purely from a local view.
pub fn route_step_local(view: &LocalView<'_>, t: Point) -> Result<RouteStep> {
    decide(view, t, Threshold::Optimal)
}

/// `Φ(p, t)`; zero when `p = t`.
pub fn potential(graph: &TdGraph, p: usize, t: usize) -> Result<f64> {
    if p == t {
        check_vertex(graph, p)?;
        return Ok(0.0);
    }
    Ok(route_step(graph, p, t)?.potential)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub from: usize,
    pub to: usize,
    pub case: Case,
    pub j: Option<i64>,
    /// `Φ(from, t)` before the step.
    pub potential: f64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RouteTrace {
    pub vertices: Vec<usize>,
    pub steps: Vec<StepRecord>,
    pub total_length: f64,
}

impl RouteTrace {
    /// Path length over `|st|`; 1 for the trivial route.
    pub fn ratio(&self, graph: &TdGraph) -> f64 {
        let (s, t) = (self.vertices[0], *self.vertices.last().unwrap());
        if s == t {
            return 1.0;
        }
        self.total_length / graph.point(s).dist(graph.point(t))
    }
}

fn run(
    graph: &TdGraph,
    s: usize,
    t: usize,
    threshold: Threshold,
    verify: bool,
) -> Result<RouteTrace> {
    check_vertex(graph, s)?;
    check_vertex(graph, t)?;
    let n = graph.len();
    let limit = (n * n).max(1);
    let tolerance = VERIFY_TOLERANCE * graph.points().diameter().max(f64::MIN_POSITIVE);
    let target = graph.point(t);

    let mut vertices = vec![s];
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut total = 0.0;
    let mut p = s;
    let mut current = if s == t {
        None
    } else {
        Some(decide(&LocalView::of(graph, s), target, threshold)?)
    };

    while let Some(step) = current {
        if steps.len() >= limit {
            return Err(Error::StepLimit(limit));
        }
        let v = step.next;
        let length = graph.point(p).dist(graph.point(v));
        let next = if v == t {
            None
        } else {
            Some(decide(&LocalView::of(graph, v), target, threshold)?)
        };
        if verify {
            let after = next.map_or(0.0, |n| n.potential);
            if length + after > step.potential + tolerance {
                return Err(Error::Verification {
                    step: steps.len(),
                    reason: format!(
                        "case {} at {p}: |pv| + Φ(v,t) = {} exceeds Φ(p,t) = {}",
                        step.case,
                        length + after,
                        step.potential
                    ),
                });
            }
            if let Some(n) = next {
                if !step.case.may_precede(n.case) {
                    return Err(Error::Verification {
                        step: steps.len(),
                        reason: format!(
                            "case {} at {p} followed by case {} at {v}",
                            step.case, n.case
                        ),
                    });
                }
            }
        }
        steps.push(StepRecord {
            from: p,
            to: v,
            case: step.case,
            j: step.j,
            potential: step.potential,
            length,
        });
        vertices.push(v);
        total += length;
        p = v;
        current = next;
    }
    Ok(RouteTrace {
        vertices,
        steps,
        total_length: total,
    })
}

/// Routes from `s` to `t` with the optimal thresholds. With `verify`, every
/// step is checked against the potential and the case transition rules.
pub fn route(graph: &TdGraph, s: usize, t: usize, verify: bool) -> Result<RouteTrace> {
    run(graph, s, t, Threshold::Optimal, verify)
}

/// Same router with the midpoint threshold in cases (ii) and (iv).
pub fn affine_baseline_route(graph: &TdGraph, s: usize, t: usize) -> Result<RouteTrace> {
    run(graph, s, t, Threshold::Midpoint, false)
}
