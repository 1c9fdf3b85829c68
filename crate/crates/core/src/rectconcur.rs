//! Rectangles `BCC₁B₂`, `CAA₁C₂`, `ABB₁A₂` erected outward on an acute
//! triangle with `∠BC₁C + ∠CA₁A + ∠AB₁B = π` make the lines `B₁C₂`, `C₁A₂`
//! and `A₁B₂` concurrent, at the common point of the three rectangle
//! circumcircles.
//!
//! This module builds such configurations (two heights free, the third
//! solved from the angle condition) and certifies concurrency numerically.
//! Tolerances are relative to the triangle diameter.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConcurError {
    #[error("triangle is not acute (or is degenerate)")]
    NotAcute,
    #[error("heights must be positive and finite")]
    BadHeight,
    #[error("no positive third height: residual angle {residual} is outside (0, π/2)")]
    Infeasible { residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn midpoint(self, other: Point) -> Point {
        (self + other) * 0.5
    }

    /// Rotation about `center` by `angle` radians.
    pub fn rotate_about(self, center: Point, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        let d = self - center;
        center + Point::new(c * d.x - s * d.y, s * d.x + c * d.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Orthogonal projection of `p` onto the line through `a` and `b`.
pub fn foot_of_perpendicular(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    a + d * ((p - a).dot(d) / d.dot(d))
}

pub fn distance_to_line(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    (d.cross(p - a)).abs() / d.norm()
}

/// Unsigned angle `∠p vertex q` in `[0, π]`, via `atan2(|cross|, dot)`.
pub fn angle_at(vertex: Point, p: Point, q: Point) -> f64 {
    let (u, v) = (p - vertex, q - vertex);
    u.cross(v).abs().atan2(u.dot(v))
}

/// An acute, nondegenerate triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleAbc {
    pub a_pt: Point,
    pub b_pt: Point,
    pub c_pt: Point,
}

impl TriangleAbc {
    pub fn new(a_pt: Point, b_pt: Point, c_pt: Point) -> Result<Self, ConcurError> {
        let (a2, b2, c2) = ((b_pt - c_pt).dot(b_pt - c_pt), (c_pt - a_pt).dot(c_pt - a_pt), (a_pt - b_pt).dot(a_pt - b_pt));
        let all_finite = [a_pt, b_pt, c_pt].iter().all(|p| p.x.is_finite() && p.y.is_finite());
        if !all_finite || !(a2 < b2 + c2 && b2 < c2 + a2 && c2 < a2 + b2) {
            return Err(ConcurError::NotAcute);
        }
        Ok(Self { a_pt, b_pt, c_pt })
    }

    pub fn equilateral(side: f64) -> Result<Self, ConcurError> {
        Self::new(Point::new(0.0, 0.0), Point::new(side, 0.0), Point::new(side / 2.0, side * 3f64.sqrt() / 2.0))
    }

    /// `|BC|, |CA|, |AB|`.
    pub fn side_lengths(&self) -> (f64, f64, f64) {
        (self.b_pt.dist(self.c_pt), self.c_pt.dist(self.a_pt), self.a_pt.dist(self.b_pt))
    }

    /// Longest side, used as the scale for relative tolerances.
    pub fn diameter(&self) -> f64 {
        let (a, b, c) = self.side_lengths();
        a.max(b).max(c)
    }

    pub fn centroid(&self) -> Point {
        (self.a_pt + self.b_pt + self.c_pt) * (1.0 / 3.0)
    }
}

/// Unit normal to `p → q` pointing away from `away_from`.
fn outward_normal(p: Point, q: Point, away_from: Point) -> Point {
    let d = q - p;
    let n = d.perp() * (1.0 / d.norm());
    if n.dot(away_from - p) > 0.0 {
        n * -1.0
    } else {
        n
    }
}

/// `h_c` such that `atan(|BC|/h_a) + atan(|CA|/h_b) + atan(|AB|/h_c) = π`.
pub fn solve_third_height(triangle: &TriangleAbc, h_a: f64, h_b: f64) -> Result<f64, ConcurError> {
    if !(h_a.is_finite() && h_a > 0.0 && h_b.is_finite() && h_b > 0.0) {
        return Err(ConcurError::BadHeight);
    }
    let (bc, ca, ab) = triangle.side_lengths();
    let residual = PI - (bc / h_a).atan() - (ca / h_b).atan();
    if !(residual > 0.0 && residual < FRAC_PI_2) {
        return Err(ConcurError::Infeasible { residual });
    }
    Ok(ab / residual.tan())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleConfig {
    pub triangle: TriangleAbc,
    pub h_a: f64,
    pub h_b: f64,
    pub h_c: f64,
    /// Outer vertex of rectangle `BCC₁B₂` next to `C`.
    pub c1: Point,
    pub b2: Point,
    pub a1: Point,
    pub c2: Point,
    pub b1: Point,
    pub a2: Point,
}

impl RectangleConfig {
    /// Erects the three rectangles with explicit heights; no angle condition
    /// is imposed (used for perturbation studies).
    pub fn with_heights(triangle: TriangleAbc, h_a: f64, h_b: f64, h_c: f64) -> Result<Self, ConcurError> {
        if ![h_a, h_b, h_c].iter().all(|h| h.is_finite() && *h > 0.0) {
            return Err(ConcurError::BadHeight);
        }
        let TriangleAbc { a_pt: a, b_pt: b, c_pt: c } = triangle;
        let n_bc = outward_normal(b, c, a);
        let n_ca = outward_normal(c, a, b);
        let n_ab = outward_normal(a, b, c);
        Ok(Self {
            triangle,
            h_a,
            h_b,
            h_c,
            c1: c + n_bc * h_a,
            b2: b + n_bc * h_a,
            a1: a + n_ca * h_b,
            c2: c + n_ca * h_b,
            b1: b + n_ab * h_c,
            a2: a + n_ab * h_c,
        })
    }

    /// `∠BC₁C + ∠CA₁A + ∠AB₁B`, measured on the built geometry.
    pub fn angle_sum(&self) -> f64 {
        let t = &self.triangle;
        angle_at(self.c1, t.b_pt, t.c_pt) + angle_at(self.a1, t.c_pt, t.a_pt) + angle_at(self.b1, t.a_pt, t.b_pt)
    }

    /// Circumcircles `(center, radius)` of `BCC₁B₂`, `CAA₁C₂`, `ABB₁A₂`.
    pub fn circumcircles(&self) -> [(Point, f64); 3] {
        let t = &self.triangle;
        let circle = |p: Point, q: Point| (p.midpoint(q), p.dist(q) / 2.0);
        [circle(t.b_pt, self.c1), circle(t.c_pt, self.a1), circle(t.a_pt, self.b1)]
    }

    /// The three rectangles as vertex loops `[B, C, C₁, B₂]`, `[C, A, A₁, C₂]`, `[A, B, B₁, A₂]`.
    pub fn rectangles(&self) -> [[Point; 4]; 3] {
        let t = &self.triangle;
        [
            [t.b_pt, t.c_pt, self.c1, self.b2],
            [t.c_pt, t.a_pt, self.a1, self.c2],
            [t.a_pt, t.b_pt, self.b1, self.a2],
        ]
    }
}

/// Erects the rectangles with `h_c` solved from the angle condition.
pub fn build_config(triangle: TriangleAbc, h_a: f64, h_b: f64) -> Result<RectangleConfig, ConcurError> {
    let h_c = solve_third_height(&triangle, h_a, h_b)?;
    RectangleConfig::with_heights(triangle, h_a, h_b, h_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrencyReport {
    /// Foot of the perpendicular from `A` to `B₁C₂`.
    pub p_point: Point,
    /// Distance from `p_point` to `B₁C₂` (zero up to rounding).
    pub on_line_defect: f64,
    /// Max distance from `p_point` to `C₁A₂` and `A₁B₂`.
    pub line_defect: f64,
    /// `| |P - Oᵢ| - rᵢ |` for the three rectangle circumcircles.
    pub circle_residuals: [f64; 3],
    /// Feet from `B` to `C₁A₂` and from `C` to `A₁B₂`.
    pub other_feet: [Point; 2],
    /// Max pairwise distance between the three feet.
    pub feet_spread: f64,
    /// `∠APC + ∠CA₁A - π`, `∠APB + ∠AB₁B - π`, `∠BPC + ∠BC₁C - π`.
    pub supplementary_defects: [f64; 3],
    pub scale: f64,
    pub passed: bool,
}

/// Relative tolerance on line and circle defects for a pass.
pub const CERTIFY_REL_TOL: f64 = 1e-9;

pub fn certify_concurrency(config: &RectangleConfig) -> ConcurrencyReport {
    let t = &config.triangle;
    let (a, b, c) = (t.a_pt, t.b_pt, t.c_pt);
    let p = foot_of_perpendicular(a, config.b1, config.c2);
    let line_defect = distance_to_line(p, config.c1, config.a2).max(distance_to_line(p, config.a1, config.b2));
    let circle_residuals = config.circumcircles().map(|(center, r)| (p.dist(center) - r).abs());
    let foot_b = foot_of_perpendicular(b, config.c1, config.a2);
    let foot_c = foot_of_perpendicular(c, config.a1, config.b2);
    let feet_spread = p.dist(foot_b).max(p.dist(foot_c)).max(foot_b.dist(foot_c));
    let supplementary_defects = [
        angle_at(p, a, c) + angle_at(config.a1, c, a) - PI,
        angle_at(p, a, b) + angle_at(config.b1, a, b) - PI,
        angle_at(p, b, c) + angle_at(config.c1, b, c) - PI,
    ];
    let scale = t.diameter();
    let tol = CERTIFY_REL_TOL * scale;
    ConcurrencyReport {
        p_point: p,
        on_line_defect: distance_to_line(p, config.b1, config.c2),
        line_defect,
        circle_residuals,
        other_feet: [foot_b, foot_c],
        feet_spread,
        supplementary_defects,
        scale,
        passed: line_defect <= tol && circle_residuals.iter().all(|&r| r <= tol),
    }
}

/// Smallest angle allowed in sampled triangles and sampled rectangle angles.
const SAMPLE_MARGIN: f64 = 0.15;

/// A random acute triangle in the unit square together with heights
/// `(h_a, h_b)` that leave a feasible `h_c`.
///
/// Triangle angles are kept within `[SAMPLE_MARGIN, π/2 - SAMPLE_MARGIN]`
/// and so are the three rectangle angles, so instances stay well conditioned.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> (TriangleAbc, f64, f64) {
    let triangle = loop {
        let pts: Vec<Point> = (0..3).map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>())).collect();
        let Ok(t) = TriangleAbc::new(pts[0], pts[1], pts[2]) else { continue };
        let angles = [angle_at(t.a_pt, t.b_pt, t.c_pt), angle_at(t.b_pt, t.c_pt, t.a_pt), angle_at(t.c_pt, t.a_pt, t.b_pt)];
        if angles.iter().all(|&x| (SAMPLE_MARGIN..=FRAC_PI_2 - SAMPLE_MARGIN).contains(&x)) {
            break t;
        }
    };
    let range = SAMPLE_MARGIN..FRAC_PI_2 - SAMPLE_MARGIN;
    let (theta_a, theta_b) = loop {
        let (x, y) = (rng.random_range(range.clone()), rng.random_range(range.clone()));
        let rest = PI - x - y;
        if range.contains(&rest) {
            break (x, y);
        }
    };
    let (bc, ca, _) = triangle.side_lengths();
    (triangle, bc / theta_a.tan(), ca / theta_b.tan())
}
