//! Deterministic SVG rendering of a graph with optional overlays.

use std::fmt::Write;

use tdd_core::{smallest_homothet, ConeIndex, Point, TdGraph};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RenderOptions {
    /// Vertex sequence drawn over the edges.
    pub route: Option<Vec<usize>>,
    /// Vertex whose six cones are drawn, negative ones shaded.
    pub cones: Option<usize>,
    /// Pair whose smallest homothet is drawn.
    pub homothet: Option<(usize, usize)>,
}

/// Maps graph coordinates into the drawing area, flipping `y` so the
/// triangle's apex points up.
struct Frame {
    lo: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Self {
        let (mut lo, mut hi) = (Point::new(0.0, 0.0), Point::new(0.0, 0.0));
        if let Some(&first) = points.first() {
            (lo, hi) = (first, first);
        }
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        let scale = if span > 0.0 {
            (SIZE - 2.0 * MARGIN) / span
        } else {
            1.0
        };
        Self {
            lo,
            scale,
            height: (hi.y - lo.y) * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let x = MARGIN + (p.x - self.lo.x) * self.scale;
        let y = self.height - MARGIN - (p.y - self.lo.y) * self.scale;
        (x, y)
    }

    fn xy(&self, p: Point) -> String {
        let (x, y) = self.map(p);
        format!("{x:.3},{y:.3}")
    }
}

fn polygon(frame: &Frame, corners: &[Point]) -> String {
    corners
        .iter()
        .map(|&c| frame.xy(c))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render(graph: &TdGraph, options: &RenderOptions) -> tdd_core::Result<String> {
    let points = graph.points().points();
    let frame = Frame::new(points);
    let mut out = String::new();
    let w = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    w(
        &mut out,
        format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{:.0}" viewBox="0 0 {SIZE:.0} {:.3}">"#,
            frame.height.ceil(),
            frame.height
        ),
    );
    w(
        &mut out,
        r#"<rect width="100%" height="100%" fill="white"/>"#.into(),
    );

    let reach = 2.0 * graph.points().diameter().max(1e-9);
    if let Some(v) = options.cones {
        let apex = graph.point(check(graph, v)?);
        w(&mut out, r#"<g id="cones">"#.into());
        for i in ConeIndex::ALL {
            let [r0, r1] = graph.shape().cone_rays(i);
            let shade = [apex, apex - r0 * reach, apex - r1 * reach];
            w(
                &mut out,
                format!(
                    r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.3" stroke="none"/>"##,
                    polygon(&frame, &shade)
                ),
            );
            for r in [r0, r1] {
                w(
                    &mut out,
                    format!(
                        r##"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#6baed6" stroke-width="1" stroke-dasharray="4 3"/>"##,
                        x1 = frame.map(apex).0,
                        y1 = frame.map(apex).1,
                        x2 = frame.map(apex + r * reach).0,
                        y2 = frame.map(apex + r * reach).1,
                    ),
                );
            }
        }
        w(&mut out, "</g>".into());
    }

    if let Some((u, v)) = options.homothet {
        let h = smallest_homothet(
            graph.shape(),
            graph.point(check(graph, u)?),
            graph.point(check(graph, v)?),
        )?;
        w(
            &mut out,
            format!(
                r##"<polygon id="homothet" points="{}" fill="#fdd0a2" fill-opacity="0.5" stroke="#e6550d" stroke-width="1.5"/>"##,
                polygon(&frame, &h.corners)
            ),
        );
    }

    w(
        &mut out,
        r##"<g id="edges" stroke="#444444" stroke-width="1">"##.into(),
    );
    for (a, b) in graph.undirected_edges() {
        let ((x1, y1), (x2, y2)) = (frame.map(graph.point(a)), frame.map(graph.point(b)));
        w(
            &mut out,
            format!(r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#),
        );
    }
    w(&mut out, "</g>".into());

    if let Some(route) = &options.route {
        let mut pts = String::new();
        for (k, &v) in route.iter().enumerate() {
            let sep = if k == 0 { "" } else { " " };
            write!(pts, "{sep}{}", frame.xy(graph.point(check(graph, v)?))).unwrap();
        }
        w(
            &mut out,
            format!(
                r##"<polyline id="route" points="{pts}" fill="none" stroke="#d62728" stroke-width="3"/>"##
            ),
        );
    }

    w(&mut out, r##"<g id="vertices" fill="#08306b">"##.into());
    for (k, &p) in points.iter().enumerate() {
        let (x, y) = frame.map(p);
        w(
            &mut out,
            format!(r#"<circle cx="{x:.3}" cy="{y:.3}" r="3"><title>{k}</title></circle>"#),
        );
    }
    w(&mut out, "</g>".into());
    w(&mut out, "</svg>".into());
    Ok(out)
}

fn check(graph: &TdGraph, v: usize) -> tdd_core::Result<usize> {
    if v < graph.len() {
        Ok(v)
    } else {
        Err(tdd_core::Error::UnknownVertex(v))
    }
}
