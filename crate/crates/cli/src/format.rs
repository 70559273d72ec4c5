//! Points files and graph files.
//!
//! A points file is plain text with one `x y` or `x,y` pair per line; `#`
//! starts a comment. A graph file is JSON carrying the triangle angles, the
//! points as given, and the directed cone edges as `[u, i, v]` triples.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tdd_core::{ConeIndex, Point, PointSet, TdGraph, TriangleShape};
use thiserror::Error;

pub const GRAPH_FORMAT: &str = "tdd-graph";
pub const GRAPH_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported {format} version {found} (expected {GRAPH_VERSION})")]
    Version { format: String, found: u32 },
    #[error("not a graph file: format is {0:?}")]
    Format(String),
    #[error("cone index {0} out of range 1..=3")]
    ConeIndex(u8),
    #[error("vertex {vertex} lists two edges in cone {cone}")]
    DuplicateEdge { vertex: usize, cone: u8 },
    #[error(transparent)]
    Core(#[from] tdd_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub fn parse_points(text: &str) -> Result<Vec<Point>, FormatError> {
    let mut points = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let err = |message: String| FormatError::Parse {
            line: k + 1,
            message,
        };
        let [x, y] = fields[..] else {
            return Err(err(format!("expected two coordinates, found {:?}", line)));
        };
        let parse = |f: &str| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("not a finite number: {f:?}")))
        };
        points.push(Point::new(parse(x)?, parse(y)?));
    }
    Ok(points)
}

pub fn write_points(points: &[Point]) -> String {
    points
        .iter()
        .map(|p| format!("{:?} {:?}\n", p.x, p.y))
        .collect()
}

/// Maps a point set onto bounding-box diameter 1 with its lower-left corner
/// at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub origin: Point,
    pub scale: f64,
}

impl Normalization {
    pub fn of(points: &[Point]) -> Self {
        let (mut lo, mut hi) = (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if points.is_empty() {
            return Self {
                origin: Point::new(0.0, 0.0),
                scale: 1.0,
            };
        }
        let d = lo.dist(hi);
        Self {
            origin: lo,
            scale: if d > 0.0 { d } else { 1.0 },
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        let d = p - self.origin;
        Point::new(d.x / self.scale, d.y / self.scale)
    }

    pub fn invert(&self, p: Point) -> Point {
        p * self.scale + self.origin
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub format: String,
    pub version: u32,
    pub theta1: f64,
    pub theta2: f64,
    pub points: Vec<[f64; 2]>,
    pub cone_edges: Vec<(usize, u8, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

impl GraphFile {
    /// Records `graph` with the caller's original coordinates, which must be
    /// listed in vertex order.
    pub fn new(graph: &TdGraph, original: &[Point], metadata: Option<Map<String, Value>>) -> Self {
        let [theta1, theta2, _] = graph.shape().thetas();
        Self {
            format: GRAPH_FORMAT.into(),
            version: GRAPH_VERSION,
            theta1,
            theta2,
            points: original.iter().map(|p| [p.x, p.y]).collect(),
            cone_edges: graph
                .directed_edges()
                .into_iter()
                .map(|(u, i, v)| (u, i.get() as u8, v))
                .collect(),
            metadata,
        }
    }

    /// Saves a graph whose own coordinates are the ones to keep.
    pub fn from_graph(graph: &TdGraph, metadata: Option<Map<String, Value>>) -> Self {
        Self::new(graph, graph.points().points(), metadata)
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let file: GraphFile = serde_json::from_str(text)?;
        if file.format != GRAPH_FORMAT {
            return Err(FormatError::Format(file.format));
        }
        if file.version != GRAPH_VERSION {
            return Err(FormatError::Version {
                format: file.format,
                found: file.version,
            });
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files always serialize")
    }

    pub fn shape(&self) -> Result<TriangleShape, FormatError> {
        Ok(TriangleShape::new(self.theta1, self.theta2)?)
    }

    pub fn original_points(&self) -> Vec<Point> {
        self.points.iter().map(|&[x, y]| Point::new(x, y)).collect()
    }

    pub fn normalization(&self) -> Normalization {
        Normalization::of(&self.original_points())
    }

    /// The graph on normalized coordinates, edges taken from the file.
    pub fn to_graph(&self) -> Result<TdGraph, FormatError> {
        let shape = self.shape()?;
        let norm = self.normalization();
        let pts: Vec<Point> = self
            .original_points()
            .into_iter()
            .map(|p| norm.apply(p))
            .collect();
        let points = PointSet::validated(&shape, pts)?;
        let mut cones = vec![[None; 3]; points.len()];
        for &(u, i, v) in &self.cone_edges {
            if !(1..=3).contains(&i) {
                return Err(FormatError::ConeIndex(i));
            }
            let slot = cones.get_mut(u).ok_or(tdd_core::Error::UnknownVertex(u))?;
            let entry = &mut slot[ConeIndex::new(i as i64).slot()];
            if entry.replace(v).is_some() {
                return Err(FormatError::DuplicateEdge { vertex: u, cone: i });
            }
        }
        Ok(TdGraph::from_cone_edges(shape, points, cones)?)
    }

    pub fn metadata_usize(&self, key: &str) -> Option<usize> {
        self.metadata
            .as_ref()?
            .get(key)?
            .as_u64()
            .map(|v| v as usize)
    }
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    std::fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_graph(path: &Path) -> Result<(GraphFile, TdGraph), FormatError> {
    let file = GraphFile::from_json(&read_text(path)?)?;
    let graph = file.to_graph()?;
    Ok((file, graph))
}
