use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use tdd_core::{
    adversarial_routing, adversarial_spanning, affine_baseline_route, build_empty_homothet_oracle,
    build_sweep, c_theta, perturb, route, routing_ratio_split, spanning_bound, spanning_ratio,
    ConeIndex, PointSet, Router, RoutingConstruction, TriangleShape,
};

use crate::format::{load_graph, parse_points, read_text, write_text, GraphFile, Normalization};
use crate::svg::{render, RenderOptions};

#[derive(Debug, Parser)]
#[command(
    name = "tdd",
    version,
    about = "Generalized TD-Delaunay graphs: build, route, measure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph from a points file.
    Build(BuildArgs),
    /// Route between two vertices and print every step.
    Route(RouteArgs),
    /// Spanning ratio of a graph.
    Span {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Worst routing ratio over all ordered pairs.
    Rratio {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        baseline: bool,
    },
    /// Evaluate the routing and spanning bounds for a triangle.
    Ctheta(ShapeArgs),
    /// Generate a lower-bound instance.
    #[command(subcommand)]
    Adversarial(Adversarial),
    /// Draw a graph as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Smallest angle of the triangle, in radians.
    #[arg(long)]
    pub theta1: f64,
    /// Middle angle, in radians.
    #[arg(long)]
    pub theta2: f64,
}

impl ShapeArgs {
    fn shape(&self) -> Result<TriangleShape> {
        Ok(TriangleShape::new(self.theta1, self.theta2)?)
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Use the cubic empty-homothet builder and check it against the sweep.
    #[arg(long)]
    pub oracle: bool,
    /// Nudge points into general position: seed and magnitude relative to
    /// the bounding-box diameter.
    #[arg(long, num_args = 2, value_names = ["SEED", "MAG"])]
    pub perturb: Option<Vec<String>>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub from: usize,
    #[arg(long)]
    pub to: usize,
    /// Use the affine baseline router.
    #[arg(long)]
    pub baseline: bool,
    /// Skip the per-step potential check.
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Adversarial {
    /// Five points whose spanning ratio approaches 1/sin(θ₁/2).
    Span {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two graphs no k-local router can tell apart; the second is written
    /// next to the first as `<stem>.g2.json`.
    Route {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        /// Angle at the target corner; defaults to the bound's maximiser.
        #[arg(long)]
        alpha: Option<f64>,
        /// Corner playing the target (1, 2 or 3); defaults to the maximiser.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=3))]
        j: Option<i64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub svg: PathBuf,
    /// Overlay the route between two vertices.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub route: Option<Vec<usize>>,
    /// Draw the cones at a vertex.
    #[arg(long, value_name = "V")]
    pub cones: Option<usize>,
    /// Draw the smallest homothet of two vertices.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub homothet: Option<Vec<usize>>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Build(args) => build(args, out),
        Command::Route(args) => route_cmd(args, out),
        Command::Span { graph } => span(&graph, out),
        Command::Rratio { graph, baseline } => rratio(&graph, baseline, out),
        Command::Ctheta(shape) => ctheta(&shape, out),
        Command::Adversarial(kind) => adversarial(kind, out),
        Command::Render(args) => render_cmd(args, out),
    }
}

fn metadata(value: Value) -> Option<Map<String, Value>> {
    match value {
        Value::Object(map) => Some(map),
        _ => None,
    }
}

fn build(args: BuildArgs, out: &mut dyn Write) -> Result<()> {
    let shape = args.shape.shape()?;
    let original = parse_points(&read_text(&args.points)?)?;
    let norm = Normalization::of(&original);
    let raw = PointSet::new(original.iter().map(|&p| norm.apply(p)).collect());

    let mut meta = json!({ "generator": "build" });
    let (points, original) = match &args.perturb {
        Some(v) => {
            let seed: u64 = v[0]
                .parse()
                .with_context(|| format!("bad seed {:?}", v[0]))?;
            let mag: f64 = v[1]
                .parse()
                .with_context(|| format!("bad magnitude {:?}", v[1]))?;
            let moved = perturb(&shape, &raw, seed, mag)?;
            let kept = moved.points().iter().map(|&p| norm.invert(p)).collect();
            meta["seed"] = json!(seed);
            meta["perturbation"] = json!(mag);
            (moved, kept)
        }
        None => (raw.validate(&shape)?, original),
    };

    let graph = if args.oracle {
        let oracle = build_empty_homothet_oracle(&shape, &points)?;
        if oracle.directed_edges() != build_sweep(&shape, &points)?.directed_edges() {
            bail!("sweep and empty-homothet builders disagree");
        }
        meta["builder"] = json!("oracle");
        oracle
    } else {
        build_sweep(&shape, &points)?
    };
    write_text(
        &args.out,
        &GraphFile::new(&graph, &original, metadata(meta)).to_json(),
    )?;
    writeln!(
        out,
        "{} vertices, {} edges -> {}",
        graph.len(),
        graph.undirected_edges().len(),
        args.out.display()
    )?;
    Ok(())
}

fn route_cmd(args: RouteArgs, out: &mut dyn Write) -> Result<()> {
    let (file, graph) = load_graph(&args.graph)?;
    let scale = file.normalization().scale;
    let trace = if args.baseline {
        affine_baseline_route(&graph, args.from, args.to)?
    } else {
        route(&graph, args.from, args.to, !args.no_verify)?
    };
    writeln!(
        out,
        "{:>4} {:>6} {:>6} {:>4} {:>3} {:>14} {:>14}",
        "step", "from", "to", "case", "j", "length", "potential"
    )?;
    for (k, s) in trace.steps.iter().enumerate() {
        let j = s.j.map_or("-".to_string(), |j| format!("{j:+}"));
        writeln!(
            out,
            "{:>4} {:>6} {:>6} {:>4} {:>3} {:>14.10} {:>14.10}",
            k,
            s.from,
            s.to,
            s.case.label(),
            j,
            s.length * scale,
            s.potential * scale
        )?;
    }
    let path: Vec<String> = trace.vertices.iter().map(|v| v.to_string()).collect();
    writeln!(out, "path: {}", path.join(" "))?;
    writeln!(out, "total length: {:.10}", trace.total_length * scale)?;
    writeln!(out, "ratio: {:.10}", trace.ratio(&graph))?;
    if let Some(svg) = args.svg {
        let opts = RenderOptions {
            route: Some(trace.vertices.clone()),
            ..Default::default()
        };
        write_text(&svg, &render(&graph, &opts)?)?;
    }
    Ok(())
}

fn span(path: &Path, out: &mut dyn Write) -> Result<()> {
    let (file, graph) = load_graph(path)?;
    let report = spanning_ratio(&graph)?;
    writeln!(out, "spanning ratio: {:.10}", report.ratio)?;
    if let Some((u, v)) = report.witness {
        writeln!(out, "witness: {u} {v}")?;
    }
    writeln!(
        out,
        "bound 1/sin(theta1/2): {:.10}",
        spanning_bound(file.theta1)?
    )?;
    Ok(())
}

fn rratio(path: &Path, baseline: bool, out: &mut dyn Write) -> Result<()> {
    let (file, graph) = load_graph(path)?;
    let router = if baseline {
        Router::AffineBaseline
    } else {
        Router::Optimal { verify: true }
    };
    let split = routing_ratio_split(&graph, router)?;
    let (all, witness) = if split.positive.ratio >= split.negative.ratio {
        (split.positive.ratio, split.positive.witness)
    } else {
        (split.negative.ratio, split.negative.witness)
    };
    let name = if baseline { "baseline" } else { "optimal" };
    writeln!(out, "routing ratio ({name}): {all:.10}")?;
    if let Some((s, t)) = witness {
        writeln!(out, "witness: {s} {t}")?;
    }
    for (label, part) in [("positive", &split.positive), ("negative", &split.negative)] {
        write!(out, "{label} cones: {:.10}", part.ratio)?;
        match part.witness {
            Some((s, t)) => writeln!(out, " ({s} -> {t})")?,
            None => writeln!(out)?,
        }
    }
    writeln!(
        out,
        "bound C(theta1, theta2): {:.10}",
        c_theta(file.theta1, file.theta2)?.value
    )?;
    Ok(())
}

fn ctheta(shape: &ShapeArgs, out: &mut dyn Write) -> Result<()> {
    let bound = c_theta(shape.theta1, shape.theta2)?;
    writeln!(out, "C(theta1, theta2) = {:.10}", bound.value)?;
    writeln!(out, "argmax: j = {}, alpha = {:.10}", bound.j, bound.alpha)?;
    writeln!(
        out,
        "spanning bound 1/sin(theta1/2) = {:.10}",
        spanning_bound(shape.theta1)?
    )?;
    Ok(())
}

/// `dir/stem.g2.json` for an output path `dir/stem.json`.
pub fn second_graph_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.g2.json"))
}

fn adversarial(kind: Adversarial, out: &mut dyn Write) -> Result<()> {
    match kind {
        Adversarial::Span {
            shape,
            eps,
            out: path,
        } => {
            let s = shape.shape()?;
            let inst = adversarial_spanning(&s, eps)?;
            let meta = json!({
                "generator": "adversarial-span",
                "eps": eps,
                "a": inst.a,
                "b": inst.b,
                "corners": inst.corners,
            });
            write_text(
                &path,
                &GraphFile::from_graph(&inst.graph, metadata(meta)).to_json(),
            )?;
            writeln!(
                out,
                "spanning ratio: {:.10}",
                spanning_ratio(&inst.graph)?.ratio
            )?;
            writeln!(
                out,
                "bound 1/sin(theta1/2): {:.10}",
                spanning_bound(shape.theta1)?
            )?;
            writeln!(out, "wrote {}", path.display())?;
        }
        Adversarial::Route {
            shape,
            k,
            eps,
            alpha,
            j,
            out: path,
        } => {
            let s = shape.shape()?;
            let placement = match (j, alpha) {
                (None, None) => None,
                (j, Some(alpha)) => {
                    let j = j
                        .map(ConeIndex::new)
                        .unwrap_or(c_theta(shape.theta1, shape.theta2)?.j);
                    Some((j, alpha))
                }
                (Some(_), None) => bail!("--j needs --alpha"),
            };
            let inst = adversarial_routing(&s, RoutingConstruction { k, eps, placement })?;
            let second = second_graph_path(&path);
            for (graph, role, target) in [(&inst.g1, "G1", &path), (&inst.g2, "G2", &second)] {
                let meta = json!({
                    "generator": "adversarial-route",
                    "graph": role,
                    "k": k,
                    "eps": eps,
                    "j": inst.j.get(),
                    "alpha": inst.alpha,
                    "s": inst.s,
                    "target": inst.target,
                    "p": inst.p,
                    "q": inst.q,
                });
                write_text(
                    target,
                    &GraphFile::from_graph(graph, metadata(meta)).to_json(),
                )?;
            }
            let (via_p, via_q) = inst.forced_ratios();
            writeln!(
                out,
                "s = {}, target = {}, j = {}, alpha = {:.10}",
                inst.s, inst.target, inst.j, inst.alpha
            )?;
            writeln!(out, "forced ratio via p1 in G1: {via_p:.10}")?;
            writeln!(out, "forced ratio via q1 in G2: {via_q:.10}")?;
            writeln!(
                out,
                "bound C(theta1, theta2): {:.10}",
                c_theta(shape.theta1, shape.theta2)?.value
            )?;
            writeln!(out, "wrote {} and {}", path.display(), second.display())?;
        }
    }
    Ok(())
}

fn pair(v: &Option<Vec<usize>>) -> Option<(usize, usize)> {
    v.as_ref().map(|v| (v[0], v[1]))
}

fn render_cmd(args: RenderArgs, out: &mut dyn Write) -> Result<()> {
    let (_, graph) = load_graph(&args.graph)?;
    let route = match pair(&args.route) {
        Some((s, t)) => Some(route(&graph, s, t, true)?.vertices),
        None => None,
    };
    let opts = RenderOptions {
        route,
        cones: args.cones,
        homothet: pair(&args.homothet),
    };
    write_text(&args.svg, &render(&graph, &opts)?)?;
    writeln!(out, "wrote {}", args.svg.display())?;
    Ok(())
}
