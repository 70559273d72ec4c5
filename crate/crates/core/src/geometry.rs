//! The fixed triangle, its cones, and smallest homothets.
//!
//! The triangle is placed canonically with `τ₁ = (0, 0)`, `τ₂ = (1, 0)` and
//! `τ₃` above the x-axis, so corners are listed counter-clockwise. A point
//! `v` lies in the positive cone `C_{p,i}` when `p` sits at corner `τᵢ` of the
//! smallest homothet through `p` and `v`; the negative cone is the point
//! reflection of the positive one about `p`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative tolerance on `|d × s| / (|d| |s|)` below which a direction is
/// treated as parallel to a side of the triangle.
pub const PARALLEL_TOLERANCE: f64 = 1e-12;

/// Absolute tolerance on barycentric coordinates for closed containment.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Slack on the angle-ordering checks so that decimal inputs such as
/// `1.0471975512` are accepted for `π/3`.
pub const ANGLE_ORDER_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn unit(self) -> Point {
        self * (1.0 / self.norm())
    }

    /// Unsigned angle in `[0, π]` between two non-zero directions.
    pub fn angle_to(self, other: Point) -> f64 {
        self.cross(other).abs().atan2(self.dot(other))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Corner / cone index in `{1, 2, 3}`. Arithmetic wraps modulo 3, so
/// index 4 is 1 and index 0 is 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeIndex(u8);

impl ConeIndex {
    pub const ALL: [ConeIndex; 3] = [ConeIndex(1), ConeIndex(2), ConeIndex(3)];

    /// Wraps any integer into `{1, 2, 3}`.
    pub fn new(i: i64) -> Self {
        Self((i - 1).rem_euclid(3) as u8 + 1)
    }

    /// The index as a number in `{1, 2, 3}`.
    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Zero-based slot for array storage.
    #[inline]
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn offset(self, j: i64) -> Self {
        Self::new(self.0 as i64 + j)
    }

    pub fn from_slot(slot: usize) -> Self {
        Self::new(slot as i64 + 1)
    }
}

impl fmt::Display for ConeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConeId {
    pub polarity: Polarity,
    pub index: ConeIndex,
}

impl ConeId {
    pub fn positive(index: ConeIndex) -> Self {
        Self {
            polarity: Polarity::Positive,
            index,
        }
    }

    pub fn negative(index: ConeIndex) -> Self {
        Self {
            polarity: Polarity::Negative,
            index,
        }
    }

    pub fn is_positive(self) -> bool {
        self.polarity == Polarity::Positive
    }

    /// The cone obtained by rotating this one by π about its apex.
    pub fn opposite(self) -> Self {
        let polarity = match self.polarity {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        };
        Self {
            polarity,
            index: self.index,
        }
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "C{}", self.index),
            Polarity::Negative => write!(f, "~C{}", self.index),
        }
    }
}

/// The fixed triangle `Δ` in canonical placement.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleShape {
    theta: [f64; 3],
    corners: [Point; 3],
    /// For corner `i`: unit directions towards `τ_{i+1}` and `τ_{i-1}`.
    cone_rays: [[Point; 2]; 3],
}

impl TriangleShape {
    /// Builds `Δ` from `θ₁` and `θ₂`; `θ₃ = π - θ₁ - θ₂`.
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        if !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::InvalidAngles("angles must be finite".into()));
        }
        if theta1 <= 0.0 || theta2 <= 0.0 {
            return Err(Error::InvalidAngles(format!(
                "angles must be positive (θ₁ = {theta1}, θ₂ = {theta2})"
            )));
        }
        if theta1 + theta2 >= PI {
            return Err(Error::InvalidAngles(format!(
                "θ₁ + θ₂ = {} must be below π",
                theta1 + theta2
            )));
        }
        let theta3 = PI - theta1 - theta2;
        if theta1 > theta2 + ANGLE_ORDER_SLACK {
            return Err(Error::InvalidAngles(format!(
                "ordering violated: θ₁ ≤ θ₂ fails ({theta1} > {theta2})"
            )));
        }
        if theta2 > theta3 + ANGLE_ORDER_SLACK {
            return Err(Error::InvalidAngles(format!(
                "ordering violated: θ₂ ≤ θ₃ fails ({theta2} > {theta3})"
            )));
        }

        // Law of sines with |τ₁τ₂| = 1.
        let r = theta2.sin() / theta3.sin();
        let corners = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(r * theta1.cos(), r * theta1.sin()),
        ];
        let mut cone_rays = [[Point::default(); 2]; 3];
        for i in ConeIndex::ALL {
            let apex = corners[i.slot()];
            cone_rays[i.slot()] = [
                (corners[i.offset(1).slot()] - apex).unit(),
                (corners[i.offset(-1).slot()] - apex).unit(),
            ];
        }
        Ok(Self {
            theta: [theta1, theta2, theta3],
            corners,
            cone_rays,
        })
    }

    pub fn equilateral() -> Self {
        Self::new(PI / 3.0, PI / 3.0).expect("π/3 is a valid angle")
    }

    pub fn thetas(&self) -> [f64; 3] {
        self.theta
    }

    #[inline]
    pub fn theta(&self, i: ConeIndex) -> f64 {
        self.theta[i.slot()]
    }

    pub fn corners(&self) -> [Point; 3] {
        self.corners
    }

    #[inline]
    pub fn corner(&self, i: ConeIndex) -> Point {
        self.corners[i.slot()]
    }

    /// The two unit rays bounding positive cone `i`: towards `τ_{i+1}` and
    /// towards `τ_{i-1}`.
    #[inline]
    pub fn cone_rays(&self, i: ConeIndex) -> [Point; 2] {
        self.cone_rays[i.slot()]
    }

    /// Side vectors `τ₂-τ₁`, `τ₃-τ₂`, `τ₁-τ₃`, keyed by their start corner.
    pub fn sides(&self) -> [(ConeIndex, ConeIndex, Point); 3] {
        ConeIndex::ALL.map(|i| (i, i.offset(1), self.corner(i.offset(1)) - self.corner(i)))
    }

    /// Unit direction of the ray shared by the negative cone `i` and the
    /// positive cone `i+j`, i.e. the direction of `τᵢ - τ_{i+j}`.
    pub fn shared_ray(&self, i: ConeIndex, j: i64) -> Point {
        (self.corner(i) - self.corner(i.offset(j))).unit()
    }

    fn edge_vectors(&self, i: ConeIndex) -> (Point, Point) {
        let apex = self.corner(i);
        (
            self.corner(i.offset(1)) - apex,
            self.corner(i.offset(-1)) - apex,
        )
    }
}

/// Returns the cone of `p` that contains `q`.
///
/// Directions within [`PARALLEL_TOLERANCE`] of a side of `Δ` are rejected
/// instead of being assigned to an arbitrary neighbouring cone.
pub fn cone_of(shape: &TriangleShape, p: Point, q: Point) -> Result<ConeId> {
    let d = q - p;
    let len = d.norm();
    if len == 0.0 {
        return Err(Error::Degenerate(format!("points coincide at {p}")));
    }
    for (a, b, side) in shape.sides() {
        if d.cross(side).abs() <= PARALLEL_TOLERANCE * len * side.norm() {
            return Err(Error::GeneralPosition(format!(
                "direction {p} -> {q} is parallel to side τ{a}τ{b}"
            )));
        }
    }
    for i in ConeIndex::ALL {
        let [r0, r1] = shape.cone_rays(i);
        if r0.cross(d) > 0.0 && d.cross(r1) > 0.0 {
            return Ok(ConeId::positive(i));
        }
        if r0.cross(-d) > 0.0 && (-d).cross(r1) > 0.0 {
            return Ok(ConeId::negative(i));
        }
    }
    Err(Error::GeneralPosition(format!(
        "direction {p} -> {q} lies on a cone boundary"
    )))
}

/// Scale of the homothet with `apex` at corner `i` whose opposite edge
/// passes through `q`. Only meaningful when `q ∈ C_{apex,i}`.
pub fn scale_in_cone(shape: &TriangleShape, apex: Point, i: ConeIndex, q: Point) -> f64 {
    let (e_next, e_prev) = shape.edge_vectors(i);
    let d = q - apex;
    let det = e_next.cross(e_prev);
    let a = d.cross(e_prev) / det;
    let b = e_next.cross(d) / det;
    a + b
}

/// How a homothet's boundary is pinned by its two defining points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pins {
    pub corner_point: Point,
    pub corner_index: ConeIndex,
    pub edge_point: Point,
}

/// A translated and uniformly scaled copy of `Δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homothet {
    pub scale: f64,
    pub corners: [Point; 3],
    pub pins: Option<Pins>,
}

impl Homothet {
    /// The homothet of the given scale with `apex` at corner `i`.
    pub fn with_apex(shape: &TriangleShape, apex: Point, i: ConeIndex, scale: f64) -> Self {
        let anchor = shape.corner(i);
        let corners = shape.corners().map(|c| apex + (c - anchor) * scale);
        Self {
            scale,
            corners,
            pins: None,
        }
    }

    #[inline]
    pub fn corner(&self, i: ConeIndex) -> Point {
        self.corners[i.slot()]
    }

    pub fn centroid(&self) -> Point {
        let [a, b, c] = self.corners;
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    /// Barycentric coordinates of `q`, ordered like the corners.
    pub fn barycentric(&self, q: Point) -> [f64; 3] {
        let [a, b, c] = self.corners;
        let area = (b - a).cross(c - a);
        [
            (b - q).cross(c - q) / area,
            (c - q).cross(a - q) / area,
            (a - q).cross(b - q) / area,
        ]
    }
}

/// `T^{u,v}`: the smallest homothet of `Δ` with `u` and `v` on its boundary.
/// Symmetric in its arguments.
pub fn smallest_homothet(shape: &TriangleShape, u: Point, v: Point) -> Result<Homothet> {
    let cone = cone_of(shape, u, v)?;
    let (apex, other) = if cone.is_positive() { (u, v) } else { (v, u) };
    let i = cone.index;
    let scale = scale_in_cone(shape, apex, i, other);
    let mut h = Homothet::with_apex(shape, apex, i, scale);
    h.pins = Some(Pins {
        corner_point: apex,
        corner_index: i,
        edge_point: other,
    });
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    /// Interior only.
    Open,
    /// Interior plus boundary, within [`BOUNDARY_TOLERANCE`].
    Closed,
}

pub fn homothet_contains(h: &Homothet, q: Point, mode: Containment) -> bool {
    let bary = h.barycentric(q);
    match mode {
        Containment::Open => bary.iter().all(|&l| l > 0.0),
        Containment::Closed => bary.iter().all(|&l| l >= -BOUNDARY_TOLERANCE),
    }
}
