//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdd_cli::format::GraphFile;
use tdd_cli::svg::{render, RenderOptions};
use tdd_core::{
    adversarial_routing, adversarial_spanning, affine_baseline_route, baseline_ratio_expression,
    build_empty_homothet_oracle, build_sweep, c_theta, cone_of, homothet_contains, perturb,
    regions, route, routing_ratio_split, smallest_homothet, spanning_bound, spanning_ratio, ConeId,
    ConeIndex, Containment, Homothet, Point, PointSet, Router, RoutingConstruction, TdGraph,
    TriangleShape,
};

const SHAPES: [(f64, f64); 3] = [
    (PI / 3.0, PI / 3.0),
    (PI / 6.0, PI / 5.0),
    (PI / 4.0, PI / 3.0),
];
const INSTANCES_PER_SHAPE: u64 = 100;
const INSTANCE_SIZE: usize = 100;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_points(shape: &TriangleShape, n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Point> = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
    PointSet::validated(shape, raw.clone())
        .or_else(|_| perturb(shape, &PointSet::new(raw), seed, 1e-9))
        .expect("random instance")
}

/// The 300 shared instances: 100 seeds for each shape.
struct Corpus {
    instances: Vec<(usize, PointSet, TdGraph)>,
}

impl Corpus {
    fn new() -> Self {
        let mut instances = Vec::new();
        for (k, &(t1, t2)) in SHAPES.iter().enumerate() {
            let shape = TriangleShape::new(t1, t2).unwrap();
            for seed in 0..INSTANCES_PER_SHAPE {
                let pts = random_points(&shape, INSTANCE_SIZE, 1000 * k as u64 + seed);
                let g = build_sweep(&shape, &pts).unwrap();
                instances.push((k, pts, g));
            }
        }
        Self { instances }
    }
}

fn bound_evaluators() -> Outcome {
    let b = c_theta(PI / 3.0, PI / 3.0).map_err(|e| e.to_string())?;
    ensure((b.value - 5.0 / 3f64.sqrt()).abs() <= 1e-9, || {
        format!("C = {}", b.value)
    })?;
    ensure((b.alpha - PI / 6.0).abs() <= 1e-6, || {
        format!("alpha = {}", b.alpha)
    })?;
    let s = spanning_bound(PI / 3.0).map_err(|e| e.to_string())?;
    ensure((s - 2.0).abs() <= 4.0 * f64::EPSILON, || {
        format!("1/sin = {s}")
    })?;
    Ok(format!(
        "C = {:.12}, alpha = {:.9}, 1/sin(pi/6) = {s}",
        b.value, b.alpha
    ))
}

fn gap_reproduction() -> Outcome {
    let c = c_theta(PI / 6.0, PI / 5.0)
        .map_err(|e| e.to_string())?
        .value;
    let base =
        baseline_ratio_expression(PI / 6.0, PI / 5.0, PI / 3.0).map_err(|e| e.to_string())?;
    ensure(c < 6.52, || format!("C = {c}"))?;
    ensure(base > 6.55, || format!("baseline = {base}"))?;
    Ok(format!("C = {c:.8} < 6.52, baseline = {base:.8} > 6.55"))
}

fn oracle_equivalence(corpus: &Corpus) -> Outcome {
    for (k, pts, g) in &corpus.instances {
        let shape = g.shape();
        let oracle = build_empty_homothet_oracle(shape, pts).map_err(|e| e.to_string())?;
        ensure(oracle.directed_edges() == g.directed_edges(), || {
            format!("shape {k}: builders disagree")
        })?;
    }
    Ok(format!("{} instances identical", corpus.instances.len()))
}

fn spanning_upper_bound(corpus: &Corpus) -> Outcome {
    let mut worst = [0.0f64; 3];
    for (k, _, g) in &corpus.instances {
        let r = spanning_ratio(g).map_err(|e| e.to_string())?.ratio;
        let bound = spanning_bound(SHAPES[*k].0).unwrap();
        ensure(r <= bound + 1e-9, || {
            format!("shape {k}: ratio {r} > bound {bound}")
        })?;
        worst[*k] = worst[*k].max(r);
    }
    Ok(format!(
        "worst per shape {:.4} / {:.4} / {:.4}",
        worst[0], worst[1], worst[2]
    ))
}

fn spanning_lower_bound() -> Outcome {
    let mut found = Vec::new();
    for &(t1, t2) in &SHAPES {
        let shape = TriangleShape::new(t1, t2).unwrap();
        let inst = adversarial_spanning(&shape, 1e-4).map_err(|e| e.to_string())?;
        let r = spanning_ratio(&inst.graph)
            .map_err(|e| e.to_string())?
            .ratio;
        let bound = spanning_bound(t1).unwrap();
        ensure(r >= bound - 0.01, || format!("ratio {r} vs bound {bound}"))?;
        found.push(format!("{r:.4}/{bound:.4}"));
    }
    Ok(found.join(", "))
}

fn routing_upper_bound(corpus: &Corpus) -> Outcome {
    let mut worst = [(0.0f64, 0.0f64); 3];
    let mut pairs = 0usize;
    for (k, _, g) in &corpus.instances {
        let (t1, t2) = SHAPES[*k];
        let split = routing_ratio_split(g, Router::Optimal { verify: true })
            .map_err(|e| format!("shape {k}: {e}"))?;
        let (c, s) = (c_theta(t1, t2).unwrap().value, spanning_bound(t1).unwrap());
        ensure(split.negative.ratio <= c + 1e-6, || {
            format!("negative ratio {} > {c}", split.negative.ratio)
        })?;
        ensure(split.positive.ratio <= s + 1e-6, || {
            format!("positive ratio {} > {s}", split.positive.ratio)
        })?;
        worst[*k].0 = worst[*k].0.max(split.negative.ratio);
        worst[*k].1 = worst[*k].1.max(split.positive.ratio);
        pairs += g.len() * (g.len() - 1);
    }
    let shown: Vec<String> = worst
        .iter()
        .map(|(n, p)| format!("{n:.3}/{p:.3}"))
        .collect();
    Ok(format!(
        "{pairs} verified routes; worst negative/positive {}",
        shown.join(", ")
    ))
}

fn routing_lower_bound() -> Outcome {
    let mut found = Vec::new();
    for &(t1, t2) in &SHAPES {
        let shape = TriangleShape::new(t1, t2).unwrap();
        let inst = adversarial_routing(&shape, RoutingConstruction::new(3, 1e-5))
            .map_err(|e| e.to_string())?;
        let ball1 = inst.g1.k_neighbourhood(inst.s, 3);
        ensure(ball1 == inst.g2.k_neighbourhood(inst.s, 3), || {
            "3-neighbourhoods differ".into()
        })?;
        ensure(inst.g1.neighbours(inst.target) == [inst.q[2]], || {
            "target degree in G1".into()
        })?;
        ensure(inst.g2.neighbours(inst.target) == [inst.p_extra], || {
            "target degree in G2".into()
        })?;
        let (a, b) = inst.forced_ratios();
        let c = c_theta(t1, t2).unwrap().value;
        ensure(a.max(b) >= c - 0.01, || format!("forced {a}, {b} vs C {c}"))?;
        found.push(format!("{:.4}/{c:.4}", a.max(b)));
    }
    Ok(found.join(", "))
}

fn baseline_suboptimality() -> Outcome {
    let shape = TriangleShape::new(PI / 6.0, PI / 5.0).unwrap();
    let params = RoutingConstruction {
        k: 3,
        eps: 1e-5,
        placement: Some((ConeIndex::new(3), PI / 3.0)),
    };
    let inst = adversarial_routing(&shape, params).map_err(|e| e.to_string())?;
    let g = &inst.g1;
    let [t1, t2, _] = inst.frame;
    let s = g.point(inst.s);
    ensure(s.dist(t2) < s.dist(t1), || {
        "s is not nearer to the second corner".into()
    })?;
    let opt = route(g, inst.s, inst.target, true).map_err(|e| e.to_string())?;
    let base = affine_baseline_route(g, inst.s, inst.target).map_err(|e| e.to_string())?;
    ensure(base.vertices[1] == inst.p[0], || {
        "baseline does not start at p1".into()
    })?;
    let (ro, rb) = (opt.ratio(g), base.ratio(g));
    ensure(rb > ro, || format!("baseline {rb} <= optimal {ro}"))?;

    let eq = TriangleShape::equilateral();
    for seed in 0..50 {
        let g = build_sweep(&eq, &random_points(&eq, 40, 9000 + seed)).unwrap();
        for a in 0..g.len() {
            for b in 0..g.len() {
                if a != b {
                    let x = route(&g, a, b, true).map_err(|e| e.to_string())?;
                    let y = affine_baseline_route(&g, a, b).map_err(|e| e.to_string())?;
                    ensure(x == y, || {
                        format!("equilateral seed {seed}: traces differ for {a} -> {b}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "baseline {rb:.4} > optimal {ro:.4}; 50 equilateral instances identical"
    ))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0usize;
    for &(t1, t2) in &SHAPES {
        let shape = TriangleShape::new(t1, t2).unwrap();
        // Cones and homothets on random pairs.
        for _ in 0..2000 {
            let u = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let v = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (Ok(a), Ok(b)) = (cone_of(&shape, u, v), cone_of(&shape, v, u)) else {
                continue;
            };
            ensure(a.index == b.index && a.polarity != b.polarity, || {
                "cone antisymmetry".into()
            })?;
            let h = smallest_homothet(&shape, u, v).map_err(|e| e.to_string())?;
            let pins = h.pins.unwrap();
            let shrunk = Homothet::with_apex(
                &shape,
                pins.corner_point,
                pins.corner_index,
                h.scale * 0.999,
            );
            ensure(
                !homothet_contains(&shrunk, pins.edge_point, Containment::Closed),
                || "minimality".into(),
            )?;
            let h2 = smallest_homothet(&shape, v, u).map_err(|e| e.to_string())?;
            ensure(
                (0..3).all(|k| h.corners[k].dist(h2.corners[k]) < 1e-9),
                || "homothet symmetry".into(),
            )?;
            checked += 1;
        }
        // Graph structure, case machine and occupancy on small instances.
        for seed in 0..10 {
            let g = build_sweep(&shape, &random_points(&shape, 50, 5000 + seed)).unwrap();
            ensure(g.is_connected(), || "disconnected".into())?;
            ensure(crossings(&g) == 0, || {
                format!("seed {seed}: crossing edges")
            })?;
            for p in 0..g.len() {
                for t in 0..g.len() {
                    if p == t {
                        continue;
                    }
                    let trace = route(&g, p, t, true).map_err(|e| e.to_string())?;
                    ensure(
                        trace
                            .steps
                            .windows(2)
                            .all(|w| w[0].case.may_precede(w[1].case)),
                        || "case machine".into(),
                    )?;
                    if cone_of(&shape, g.point(p), g.point(t))
                        .unwrap()
                        .is_positive()
                    {
                        continue;
                    }
                    let r = regions(&g, p, t).map_err(|e| e.to_string())?;
                    for side in [r.left, r.right] {
                        ensure(side.occupied == occupied(&g, p, t, side.cone), || {
                            "occupancy locality".into()
                        })?;
                    }
                }
            }
        }
        // File round trip.
        let g = build_sweep(&shape, &random_points(&shape, 100, 31)).unwrap();
        let file = GraphFile::from_graph(&g, None);
        let back = GraphFile::from_json(&file.to_json()).map_err(|e| e.to_string())?;
        ensure(back == file, || "graph file round trip".into())?;
        ensure(
            back.to_graph().map_err(|e| e.to_string())?.directed_edges() == g.directed_edges(),
            || "edges after round trip".into(),
        )?;
    }
    golden_svg()?;
    Ok(format!(
        "{checked} cone/homothet pairs, 30 graphs, round trips, golden SVGs"
    ))
}

fn occupied(g: &TdGraph, p: usize, t: usize, cone: ConeId) -> bool {
    let h = smallest_homothet(g.shape(), g.point(p), g.point(t)).unwrap();
    (0..g.len()).any(|w| {
        w != p
            && cone_of(g.shape(), g.point(p), g.point(w)).unwrap() == cone
            && homothet_contains(&h, g.point(w), Containment::Closed)
    })
}

fn crossings(g: &TdGraph) -> usize {
    let orient = |a: Point, b: Point, c: Point| (b - a).cross(c - a);
    let edges = g.undirected_edges();
    let mut count = 0;
    for (k, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[k + 1..] {
            if [c, d].contains(&a) || [c, d].contains(&b) {
                continue;
            }
            let (pa, pb, pc, pd) = (g.point(a), g.point(b), g.point(c), g.point(d));
            if orient(pc, pd, pa) * orient(pc, pd, pb) < 0.0
                && orient(pa, pb, pc) * orient(pa, pb, pd) < 0.0
            {
                count += 1;
            }
        }
    }
    count
}

/// Re-renders the golden-file scenes and compares byte for byte.
fn golden_svg() -> Result<(), String> {
    let pts: Vec<Point> = [
        (0.05, 0.11),
        (0.93, 0.07),
        (0.47, 0.88),
        (0.21, 0.52),
        (0.72, 0.41),
        (0.36, 0.23),
        (0.61, 0.69),
        (0.12, 0.81),
        (0.84, 0.83),
        (0.54, 0.04),
        (0.29, 0.97),
        (0.98, 0.56),
    ]
    .iter()
    .map(|&(x, y)| Point::new(x, y))
    .collect();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let eq = TriangleShape::equilateral();
    let g = build_sweep(&eq, &PointSet::validated(&eq, pts.clone()).unwrap()).unwrap();
    let plain = render(&g, &RenderOptions::default()).map_err(|e| e.to_string())?;
    let skew = TriangleShape::new(PI / 6.0, PI / 5.0).unwrap();
    let g = build_sweep(&skew, &PointSet::validated(&skew, pts).unwrap()).unwrap();
    let opts = RenderOptions {
        route: Some(route(&g, 0, 10, true).map_err(|e| e.to_string())?.vertices),
        cones: Some(4),
        homothet: Some((0, 10)),
    };
    let overlay = render(&g, &opts).map_err(|e| e.to_string())?;
    for (name, svg) in [("equilateral.svg", plain), ("skewed_overlays.svg", overlay)] {
        let expected =
            std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(svg == expected, || format!("{name} differs"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let started = Instant::now();
    let corpus = Corpus::new();
    let setup = started.elapsed();
    let criteria: Vec<(&str, Check)> = vec![
        ("bound evaluators", Box::new(bound_evaluators)),
        ("routing gap reproduction", Box::new(gap_reproduction)),
        (
            "sweep and oracle agree",
            Box::new(|| oracle_equivalence(&corpus)),
        ),
        (
            "spanning upper bound",
            Box::new(|| spanning_upper_bound(&corpus)),
        ),
        ("spanning lower bound", Box::new(spanning_lower_bound)),
        (
            "routing upper bound with potential verifier",
            Box::new(|| routing_upper_bound(&corpus)),
        ),
        ("routing lower bound", Box::new(routing_lower_bound)),
        ("baseline suboptimality", Box::new(baseline_suboptimality)),
        ("property suite", Box::new(properties)),
    ];
    println!(
        "acceptance: {} shared instances built in {:.1?}",
        corpus.instances.len(),
        setup
    );
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed: Duration = t.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS  {name} ({detail}) [{elapsed:.1?}]",
                n + 1
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name}: {reason} [{elapsed:.1?}]",
                    n + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
