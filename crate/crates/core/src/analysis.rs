//! Spanning and routing ratios, their closed-form bounds, and the two
//! adversarial constructions that make those bounds tight.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{cone_of, ConeIndex, Point, TriangleShape, ANGLE_ORDER_SLACK};
use crate::graph::{build_sweep, perturb, PointSet, TdGraph};
use crate::routing::{affine_baseline_route, route};

/// Grid intervals per corner when maximising `C(θ₁, θ₂)` over `α`.
pub const C_THETA_GRID: usize = 10_000;
/// Width of the final golden-section bracket.
pub const C_THETA_REFINEMENT: f64 = 1e-10;

/// A maximum ratio over vertex pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub ratio: f64,
    /// Pair attaining `ratio`; `None` when there are no pairs.
    pub witness: Option<(usize, usize)>,
    pub per_pair: Option<Vec<(usize, usize, f64)>>,
}

impl RatioReport {
    fn from_pairs(pairs: Vec<(usize, usize, f64)>, keep: bool) -> Self {
        let best = pairs
            .iter()
            .copied()
            .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)).then(b.1.cmp(&a.1)));
        Self {
            ratio: best.map_or(1.0, |b| b.2),
            witness: best.map(|b| (b.0, b.1)),
            per_pair: keep.then_some(pairs),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Pending(f64, usize);

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Euclidean-weighted shortest-path distances from `source` (Dijkstra).
pub fn shortest_paths(graph: &TdGraph, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Pending(0.0, source));
    while let Some(Pending(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &v in graph.neighbours(u) {
            let nd = d + graph.point(u).dist(graph.point(v));
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Pending(nd, v));
            }
        }
    }
    dist
}

fn spanning_pairs(graph: &TdGraph) -> Result<Vec<(usize, usize, f64)>> {
    let n = graph.len();
    let rows = (0..n)
        .into_par_iter()
        .map(|u| {
            let dist = shortest_paths(graph, u);
            (u + 1..n)
                .map(|v| {
                    if dist[v].is_finite() {
                        Ok((u, v, dist[v] / graph.point(u).dist(graph.point(v))))
                    } else {
                        Err(Error::GraphIntegrity(format!(
                            "vertices {u} and {v} are disconnected"
                        )))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Largest `d_G(u, v) / |uv|` over all pairs.
pub fn spanning_ratio(graph: &TdGraph) -> Result<RatioReport> {
    Ok(RatioReport::from_pairs(spanning_pairs(graph)?, false))
}

/// Like [`spanning_ratio`], keeping the full per-pair table.
pub fn spanning_ratio_with_pairs(graph: &TdGraph) -> Result<RatioReport> {
    Ok(RatioReport::from_pairs(spanning_pairs(graph)?, true))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Router {
    Optimal { verify: bool },
    AffineBaseline,
}

impl Router {
    fn ratio(self, graph: &TdGraph, s: usize, t: usize) -> Result<f64> {
        let trace = match self {
            Router::Optimal { verify } => route(graph, s, t, verify)?,
            Router::AffineBaseline => affine_baseline_route(graph, s, t)?,
        };
        Ok(trace.ratio(graph))
    }
}

/// Route ratios split by whether `t` starts in a positive or a negative cone
/// of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitRatios {
    pub positive: RatioReport,
    pub negative: RatioReport,
}

fn routing_pairs(graph: &TdGraph, router: Router) -> Result<Vec<(usize, usize, f64, bool)>> {
    let n = graph.len();
    let rows = (0..n)
        .into_par_iter()
        .map(|s| {
            (0..n)
                .filter(|&t| t != s)
                .map(|t| {
                    let positive =
                        cone_of(graph.shape(), graph.point(s), graph.point(t))?.is_positive();
                    Ok((s, t, router.ratio(graph, s, t)?, positive))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Largest route length over `|st|` across all ordered pairs.
pub fn routing_ratio_measured(graph: &TdGraph, router: Router) -> Result<RatioReport> {
    let pairs = routing_pairs(graph, router)?;
    Ok(RatioReport::from_pairs(
        pairs.into_iter().map(|(s, t, r, _)| (s, t, r)).collect(),
        false,
    ))
}

pub fn routing_ratio_split(graph: &TdGraph, router: Router) -> Result<SplitRatios> {
    let (pos, neg): (Vec<_>, Vec<_>) = routing_pairs(graph, router)?.into_iter().partition(|x| x.3);
    let strip =
        |v: Vec<(usize, usize, f64, bool)>| v.into_iter().map(|(s, t, r, _)| (s, t, r)).collect();
    Ok(SplitRatios {
        positive: RatioReport::from_pairs(strip(pos), false),
        negative: RatioReport::from_pairs(strip(neg), false),
    })
}

/// `1 / sin(θ₁ / 2)`, the worst-case spanning ratio.
pub fn spanning_bound(theta1: f64) -> Result<f64> {
    if !(theta1 > 0.0 && theta1 <= PI / 3.0 + ANGLE_ORDER_SLACK) {
        return Err(Error::OutOfRange(format!(
            "θ₁ = {theta1} must lie in (0, π/3]"
        )));
    }
    Ok(1.0 / (theta1 / 2.0).sin())
}

/// The routing bound's maximand for corner `j` at angle `α`:
/// `|sτ_{j+1}| + |sτ_{j-1}| + min(...)` over `|sτ_j|` when `s` sits on the
/// side opposite `τ_j` with `∠τ_{j-1}τ_j s = α`.
pub fn c_theta_integrand(thetas: [f64; 3], j: ConeIndex, alpha: f64) -> f64 {
    let th = |k: i64| thetas[j.offset(k).slot()];
    let (tj, tn, tp) = (th(0), th(1), th(-1));
    let near = (tj - alpha).sin() / tn.sin();
    let far = alpha.sin() / tp.sin();
    let up = (alpha + tp).sin();
    near + far + (far + up / tn.sin()).min(near + up / tp.sin())
}

/// `C(θ₁, θ₂)` with the maximising corner and angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub j: ConeIndex,
    pub alpha: f64,
    pub grid_intervals: usize,
    pub refinement: f64,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

/// Maximises the routing-bound expression over all three corners and over
/// `α ∈ [0, θ_j]`: a uniform grid, then golden-section refinement around the
/// best sample. The refined point is kept only if it beats the grid.
pub fn c_theta(theta1: f64, theta2: f64) -> Result<BoundValue> {
    let shape = TriangleShape::new(theta1, theta2)?;
    let thetas = shape.thetas();
    let mut best = BoundValue {
        value: f64::NEG_INFINITY,
        j: ConeIndex::new(1),
        alpha: 0.0,
        grid_intervals: C_THETA_GRID,
        refinement: C_THETA_REFINEMENT,
    };
    for j in ConeIndex::ALL {
        let width = thetas[j.slot()];
        let f = |a: f64| c_theta_integrand(thetas, j, a);
        let step = width / C_THETA_GRID as f64;
        let (mut k_best, mut v_best) = (0, f(0.0));
        for k in 1..=C_THETA_GRID {
            let v = f(k as f64 * step);
            if v > v_best {
                k_best = k;
                v_best = v;
            }
        }
        let mut alpha = k_best as f64 * step;
        let lo = k_best.saturating_sub(1) as f64 * step;
        let hi = ((k_best + 1).min(C_THETA_GRID) as f64 * step).min(width);
        let (x, v) = golden_max(f, lo, hi, C_THETA_REFINEMENT);
        if v > v_best {
            alpha = x;
            v_best = v;
        }
        if v_best > best.value {
            best.value = v_best;
            best.j = j;
            best.alpha = alpha;
        }
    }
    Ok(best)
}

/// Lower bound on the affine-baseline routing ratio at angle `α`.
pub fn baseline_ratio_expression(theta1: f64, theta2: f64, alpha: f64) -> Result<f64> {
    let shape = TriangleShape::new(theta1, theta2)?;
    let [t1, t2, t3] = shape.thetas();
    if !(0.0..=t3).contains(&alpha) {
        return Err(Error::OutOfRange(format!(
            "α = {alpha} must lie in [0, θ₃ = {t3}]"
        )));
    }
    Ok(
        (t3 - alpha).sin() / t1.sin()
            + 2.0 * alpha.sin() / t2.sin()
            + (alpha + t2).sin() / t1.sin(),
    )
}

/// Outward unit normal of the side of `shape` leaving `from` towards `to`.
fn outward_normal(shape: &TriangleShape, from: Point, to: Point) -> Point {
    let d = (to - from).unit();
    let n = Point::new(d.y, -d.x);
    let [a, b, c] = shape.corners();
    let centroid = Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
    if n.dot(centroid - from) > 0.0 {
        -n
    } else {
        n
    }
}

/// The five-point instance whose spanning ratio approaches `1/sin(θ₁/2)`.
#[derive(Clone, Debug)]
pub struct SpanningInstance {
    pub graph: TdGraph,
    pub a: usize,
    pub b: usize,
    /// Vertex ids of `τ₁`, `τ₂`, `τ₃`.
    pub corners: [usize; 3],
}

impl SpanningInstance {
    pub fn points(&self) -> &PointSet {
        self.graph.points()
    }

    /// `(|aτ₁| + |τ₁b|) / |ab|`.
    pub fn corner_path_ratio(&self) -> f64 {
        let g = &self.graph;
        let (a, b, t1) = (g.point(self.a), g.point(self.b), g.point(self.corners[0]));
        (a.dist(t1) + t1.dist(b)) / a.dist(b)
    }
}

/// Seed for the general-position perturbation of adversarial instances.
const ADVERSARIAL_SEED: u64 = 0x7d_5eed;
const ADVERSARIAL_ATTEMPTS: u64 = 256;

/// Places `a` and `b` just outside `Δ`, half the shorter side at `τ₁` away
/// from `τ₁`, hugging sides `τ₁τ₂` and `τ₁τ₃`. Their only short connection
/// runs through `τ₁`.
pub fn adversarial_spanning(shape: &TriangleShape, eps: f64) -> Result<SpanningInstance> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::OutOfRange(format!(
            "eps = {eps} must lie in (0, 0.1)"
        )));
    }
    let [t1, t2, t3] = shape.corners();
    let side = t1.dist(t2).min(t1.dist(t3));
    let reach = side / 2.0;
    let a = t1 + (t2 - t1).unit() * reach + outward_normal(shape, t1, t2) * (eps * side);
    let b = t1 + (t3 - t1).unit() * reach + outward_normal(shape, t1, t3) * (eps * side);
    let raw = PointSet::new(vec![a, b, t1, t2, t3]);

    // The corners sit on a common homothet, so whether each corner edge
    // survives depends on which way the perturbation tips the ties. Scan
    // seeds until every required edge is present.
    let required = [(2, 3), (3, 4), (2, 4), (0, 2), (0, 3), (1, 2), (1, 4)];
    let mut last = None;
    for seed in ADVERSARIAL_SEED..ADVERSARIAL_SEED + ADVERSARIAL_ATTEMPTS {
        let points = perturb(shape, &raw, seed, eps * 1e-3)?;
        let graph = build_sweep(shape, &points)?;
        last = required.into_iter().find(|&(u, v)| !graph.has_edge(u, v));
        if last.is_none() && !graph.has_edge(0, 1) {
            return Ok(SpanningInstance {
                graph,
                a: 0,
                b: 1,
                corners: [2, 3, 4],
            });
        }
    }
    Err(Error::Construction(match last {
        Some((u, v)) => format!("expected edge {u}-{v} is missing"),
        None => "edge ab must be absent".into(),
    }))
}

/// Parameters of the local-routing lower-bound construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoutingConstruction {
    /// Locality the two graphs must fool.
    pub k: usize,
    /// Distance of `p₁`, `q₁` from their corners, as a fraction of the side
    /// that carries `s`.
    pub eps: f64,
    /// Corner playing `τ₃` and the angle `α = ∠τ₂τ₃s`; defaults to the
    /// maximiser of `C(θ₁, θ₂)`.
    pub placement: Option<(ConeIndex, f64)>,
}

impl RoutingConstruction {
    pub fn new(k: usize, eps: f64) -> Self {
        Self {
            k,
            eps,
            placement: None,
        }
    }
}

impl Default for RoutingConstruction {
    fn default() -> Self {
        Self::new(3, 1e-5)
    }
}

/// Two graphs `G₁`, `G₂` whose `k`-neighbourhoods of `s` agree but whose
/// only way into the target differs.
///
/// Vertex layout (shared by both): `s = 0`, `p₁..p_k = 1..=k`,
/// `q₁..q_k = k+1..=2k`, target `2k+1`; `G₂` adds `p_{k+1} = 2k+2`.
#[derive(Clone, Debug)]
pub struct RoutingInstance {
    pub g1: TdGraph,
    pub g2: TdGraph,
    pub s: usize,
    pub target: usize,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub p_extra: usize,
    /// Corner of `Δ` playing `τ₃`.
    pub j: ConeIndex,
    pub alpha: f64,
    /// Corners playing `τ₁`, `τ₂`, `τ₃` (the first two are not vertices).
    pub frame: [Point; 3],
}

impl RoutingInstance {
    /// `|sτ₃|`.
    pub fn distance(&self) -> f64 {
        self.g1.point(self.s).dist(self.g1.point(self.target))
    }

    /// Shortest completions after each possible first hop, over `|sτ₃|`:
    /// `(p₁ first, in G₁; q₁ first, in G₂)`.
    pub fn forced_ratios(&self) -> (f64, f64) {
        let via = |g: &TdGraph, first: usize| {
            g.point(self.s).dist(g.point(first)) + shortest_paths(g, first)[self.target]
        };
        let d = self.distance();
        (via(&self.g1, self.p[0]) / d, via(&self.g2, self.q[0]) / d)
    }

    /// The corner-path ratio `min(|sτ₂τ₁τ₃|, |sτ₁τ₂τ₃|) / |sτ₃|` of the frame.
    pub fn corner_path_ratio(&self) -> f64 {
        let [t1, t2, t3] = self.frame;
        let s = self.g1.point(self.s);
        let a = s.dist(t2) + t2.dist(t1) + t1.dist(t3);
        let b = s.dist(t1) + t1.dist(t2) + t2.dist(t3);
        a.min(b) / s.dist(t3)
    }

    /// Expected undirected edges of `G₁` (`second = false`) or `G₂`.
    pub fn expected_edges(&self, second: bool) -> BTreeSet<(usize, usize)> {
        let k = self.p.len();
        let mut e = BTreeSet::new();
        let mut add = |a: usize, b: usize| {
            e.insert((a.min(b), a.max(b)));
        };
        let (p, q) = (&self.p, &self.q);
        add(self.s, p[0]);
        add(self.s, q[0]);
        add(p[0], q[0]);
        for i in 1..k {
            add(p[i - 1], p[i]);
            add(q[i - 1], q[i]);
            add(q[i - 1], p[i]);
            add(p[i], q[i]);
        }
        if second {
            add(p[k - 1], self.p_extra);
            add(q[k - 1], self.p_extra);
            add(self.p_extra, self.target);
        } else {
            add(q[k - 1], self.target);
        }
        e
    }
}

/// Inward unit bisector at corner `at` of the triangle `at, b, c`.
fn bisector(at: Point, b: Point, c: Point) -> Point {
    ((b - at).unit() + (c - at).unit()).unit()
}

/// Builds the `k`-local routing lower-bound pair.
///
/// The construction is written for the corner `τ₃` maximising `C(θ₁, θ₂)`;
/// other corners are handled by cyclically relabelling `Δ` so that the
/// maximising corner plays `τ₃` (which preserves orientation and therefore
/// every cone relation).
pub fn adversarial_routing(
    shape: &TriangleShape,
    params: RoutingConstruction,
) -> Result<RoutingInstance> {
    let RoutingConstruction { k, eps, placement } = params;
    if k == 0 {
        return Err(Error::OutOfRange("k must be positive".into()));
    }
    if !(eps > 0.0 && eps < 1e-2) {
        return Err(Error::OutOfRange(format!(
            "eps = {eps} must lie in (0, 0.01)"
        )));
    }
    let [theta1, theta2, _] = shape.thetas();
    let (j, alpha) = match placement {
        Some((j, alpha)) => {
            let width = shape.theta(j);
            if !(alpha > 0.0 && alpha < width) {
                return Err(Error::OutOfRange(format!(
                    "α = {alpha} must lie in (0, {width})"
                )));
            }
            (j, alpha)
        }
        None => {
            let bound = c_theta(theta1, theta2)?;
            // Keep s off the corners when the maximiser sits on an endpoint.
            let width = shape.theta(bound.j);
            (
                bound.j,
                bound.alpha.clamp(1e-3 * width, (1.0 - 1e-3) * width),
            )
        }
    };

    // Relabelled frame: a plays τ₁, b plays τ₂, c plays τ₃.
    let a = shape.corner(j.offset(1));
    let b = shape.corner(j.offset(-1));
    let c = shape.corner(j);
    let theta_b = shape.theta(j.offset(-1));

    let s = b + (a - b).unit() * (b.dist(c) * alpha.sin() / (alpha + theta_b).sin());
    let base = (b - a).unit();
    let height = |x: Point| base.cross(x - a);
    let side = a.dist(b);

    let q1 = a + bisector(a, b, c) * (eps * side);
    let h_q = height(q1);
    let reach_b = (eps * side).min(h_q / (2.0 * (theta_b / 2.0).sin()));
    let p1 = b + bisector(b, c, a) * reach_b;
    let h_p = height(p1);
    let h_c = height(c);
    // p₂ on segment p₁c, as far above q₁ as q₁ is above p₁.
    let lambda = (2.0 * h_q - h_p - h_p) / (h_c - h_p);
    let ratio = 1.0 - lambda;

    let level = |x: Point, i: usize| c + (x - c) * ratio.powi(i as i32);
    let mut pts = vec![s];
    pts.extend((0..k).map(|i| level(p1, i)));
    pts.extend((0..k).map(|i| level(q1, i)));
    pts.push(c);
    let mut pts2 = pts.clone();
    pts2.push(level(p1, k));

    let g1 = build_sweep(shape, &PointSet::validated(shape, pts)?)?;
    let g2 = build_sweep(shape, &PointSet::validated(shape, pts2)?)?;
    let instance = RoutingInstance {
        g1,
        g2,
        s: 0,
        target: 2 * k + 1,
        p: (1..=k).collect(),
        q: (k + 1..=2 * k).collect(),
        p_extra: 2 * k + 2,
        j,
        alpha,
        frame: [a, b, c],
    };

    for (graph, second) in [(&instance.g1, false), (&instance.g2, true)] {
        let actual: BTreeSet<_> = graph.undirected_edges().into_iter().collect();
        let expected = instance.expected_edges(second);
        if actual != expected {
            let missing: Vec<_> = expected.difference(&actual).collect();
            let extra: Vec<_> = actual.difference(&expected).collect();
            return Err(Error::Construction(format!(
                "G{} edges differ: missing {missing:?}, unexpected {extra:?}",
                if second { 2 } else { 1 }
            )));
        }
    }
    Ok(instance)
}
