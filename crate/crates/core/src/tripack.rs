//! Packings of inverted unit equilateral triangles inside an upright
//! equilateral triangle `Δ` of side `L` with vertices `(0, 0)`, `(L, 0)`,
//! `(L/2, L√3/2)`.
//!
//! Each small triangle is identified by its anchor, the midpoint of its top
//! side: anchor `(x, y)` gives vertices `(x ± 1/2, y)` and `(x, y - √3/2)`.
//! Two such triangles have overlapping interiors exactly when the anchor
//! difference lies strictly inside the side-1 regular hexagon `T - T`, which
//! is why the side-1/2 hexagons centred on the anchors are pairwise disjoint
//! and `n ≤ (2/3)L²`.
//!
//! All coordinates live in `Q(√3)`; every verdict here is exact.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{format_rational, int, parse_rational, ratio, ExactScalar, QSqrt3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackError {
    #[error("side length must be positive")]
    NonPositiveSide,
    #[error("tessellation needs L >= 4")]
    SideTooSmall,
    #[error("side length too large to tessellate")]
    SideTooLarge,
    #[error("margin must be nonnegative")]
    NegativeMargin,
    #[error("triangle at anchor {anchor} is not inside Δ")]
    TriangleOutside { anchor: String },
    #[error("anchor x-coordinate {0} is not rational and cannot be written to a packing file")]
    IrrationalX(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A point with both coordinates in `Q(√3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactPoint {
    pub x: QSqrt3,
    pub y: QSqrt3,
}

impl ExactPoint {
    pub fn new(x: QSqrt3, y: QSqrt3) -> Self {
        Self { x, y }
    }

    /// `(x, y_rational + y_surd·√3)` with rational `x`.
    pub fn from_parts(x: ExactScalar, y_rational: ExactScalar, y_surd: ExactScalar) -> Self {
        Self { x: QSqrt3::from_rational(x), y: QSqrt3::new(y_rational, y_surd) }
    }

    pub fn offset(&self, dx: &QSqrt3, dy: &QSqrt3) -> Self {
        Self { x: &self.x + dx, y: &self.y + dy }
    }

    pub fn sub(&self, other: &ExactPoint) -> ExactPoint {
        ExactPoint { x: &self.x - &other.x, y: &self.y - &other.y }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl std::fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn half() -> ExactScalar {
    ratio(1, 2)
}

/// `√3 / 2`, the height of a unit equilateral triangle.
fn unit_height() -> QSqrt3 {
    QSqrt3::sqrt3_times(half())
}

/// Vertices of the inverted unit triangle anchored at `anchor`.
pub fn triangle_vertices(anchor: &ExactPoint) -> [ExactPoint; 3] {
    let h = QSqrt3::from_rational(half());
    let zero = QSqrt3::zero();
    [
        anchor.offset(&-h.clone(), &zero),
        anchor.offset(&h, &zero),
        anchor.offset(&zero, &-unit_height()),
    ]
}

/// Vertices of the regular hexagon of circumradius `radius` centred at
/// `center`, at angles `k·60°`.
pub fn hexagon_vertices(center: &ExactPoint, radius: &ExactScalar) -> [ExactPoint; 6] {
    let r = QSqrt3::from_rational(radius.clone());
    let half_r = QSqrt3::from_rational(radius * half());
    let rise = QSqrt3::sqrt3_times(radius * half());
    let zero = QSqrt3::zero();
    [
        center.offset(&r, &zero),
        center.offset(&half_r, &rise),
        center.offset(&-half_r.clone(), &rise),
        center.offset(&-r.clone(), &zero),
        center.offset(&-half_r.clone(), &-rise.clone()),
        center.offset(&half_r, &-rise),
    ]
}

/// The gauge (Minkowski functional) of the regular hexagon with vertices
/// `(±1, 0)`, `(±1/2, ±√3/2)`:
/// `max(|2y/√3|, |x + y/√3|, |x - y/√3|)`.
pub fn hex_gauge(d: &ExactPoint) -> QSqrt3 {
    let y_over_root3 = &d.y * &QSqrt3::sqrt3_times(ratio(1, 3));
    let vertical = y_over_root3.scale(&int(2)).abs();
    let rising = (&d.x + &y_over_root3).abs();
    let falling = (&d.x - &y_over_root3).abs();
    vertical.max(rising).max(falling)
}

/// Regular hexagon norm ball centred at `center` with circumradius `radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HexGauge {
    pub center: ExactPoint,
    pub radius: ExactScalar,
}

impl HexGauge {
    pub fn new(center: ExactPoint, radius: ExactScalar) -> Self {
        Self { center, radius }
    }

    pub fn value(&self, p: &ExactPoint) -> QSqrt3 {
        hex_gauge(&p.sub(&self.center)).scale(&self.radius.recip())
    }

    /// Closed-ball membership.
    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.value(p) <= QSqrt3::from_int(1)
    }
}

/// Whether the open interiors of the triangles at `a1` and `a2` intersect.
///
/// Separating-axis test over the three edge normals `(0, 1)`, `(√3, 1)`,
/// `(-√3, 1)`, which the two (translated) triangles share. Touching
/// boundaries do not count as overlap.
pub fn triangles_overlap_exact(a1: &ExactPoint, a2: &ExactPoint) -> bool {
    let axes = [
        (QSqrt3::zero(), QSqrt3::from_int(1)),
        (QSqrt3::sqrt3_times(ExactScalar::one()), QSqrt3::from_int(1)),
        (QSqrt3::sqrt3_times(-ExactScalar::one()), QSqrt3::from_int(1)),
    ];
    let (t1, t2) = (triangle_vertices(a1), triangle_vertices(a2));
    axes.iter().all(|(ax, ay)| {
        let project = |tri: &[ExactPoint; 3]| {
            let values: Vec<QSqrt3> = tri.iter().map(|p| &p.x * ax + &p.y * ay).collect();
            let lo = values.iter().min().expect("three vertices").clone();
            let hi = values.iter().max().expect("three vertices").clone();
            (lo, hi)
        };
        let ((lo1, hi1), (lo2, hi2)) = (project(&t1), project(&t2));
        hi1 > lo2 && hi2 > lo1
    })
}

/// Whether `‖a2 - a1‖_H < 1` for the side-1 hexagon gauge.
pub fn hex_gauge_overlap(a1: &ExactPoint, a2: &ExactPoint) -> bool {
    hex_gauge(&a2.sub(a1)) < QSqrt3::from_int(1)
}

/// Closed `Δ` shrunk by `margin` towards its interior.
fn inside_delta_with_margin(side: &ExactScalar, p: &ExactPoint, margin: &ExactScalar) -> bool {
    let root3 = QSqrt3::sqrt3_times(ExactScalar::one());
    let twice_margin = QSqrt3::from_rational(margin * int(2));
    let l = QSqrt3::from_rational(side.clone());
    // y >= m, (√3 x - y)/2 >= m, (√3 (L - x) - y)/2 >= m
    p.y >= QSqrt3::from_rational(margin.clone())
        && &root3 * &p.x - &p.y >= twice_margin
        && &root3 * &(l - &p.x) - &p.y >= twice_margin
}

pub fn inside_delta(side: &ExactScalar, p: &ExactPoint) -> bool {
    inside_delta_with_margin(side, p, &ExactScalar::zero())
}

pub fn triangle_inside_delta(side: &ExactScalar, anchor: &ExactPoint) -> bool {
    triangle_vertices(anchor).iter().all(|v| inside_delta(side, v))
}

/// Side length `L` plus anchors of inverted unit triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingInstance {
    pub side_len: ExactScalar,
    pub anchors: Vec<ExactPoint>,
}

impl PackingInstance {
    pub fn new(side_len: ExactScalar, anchors: Vec<ExactPoint>) -> Result<Self, PackError> {
        if side_len <= ExactScalar::zero() {
            return Err(PackError::NonPositiveSide);
        }
        Ok(Self { side_len, anchors })
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    /// Packing file: first line `L`, then one anchor per line as
    /// `x y_rational [y_surd]`, meaning `(x, y_rational + y_surd·√3)`.
    pub fn parse(text: &str) -> Result<Self, PackError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, reason: String| PackError::Parse { line, reason };
        let (first, side_text) = lines.next().ok_or_else(|| parse_err(1, "missing side length".into()))?;
        let side_len = parse_rational(side_text).map_err(|e| parse_err(first, e.to_string()))?;
        let mut anchors = Vec::new();
        for (line, content) in lines {
            let fields: Vec<&str> = content.split_whitespace().collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(parse_err(line, format!("expected 2 or 3 fields, got {}", fields.len())));
            }
            let parse = |s: &str| parse_rational(s).map_err(|e| parse_err(line, e.to_string()));
            let x = parse(fields[0])?;
            let y_rational = parse(fields[1])?;
            let y_surd = fields.get(2).map(|s| parse(s)).transpose()?.unwrap_or_else(ExactScalar::zero);
            anchors.push(ExactPoint::from_parts(x, y_rational, y_surd));
        }
        Self::new(side_len, anchors)
    }

    pub fn to_text(&self) -> Result<String, PackError> {
        let mut out = format!("{}\n", format_rational(&self.side_len));
        for a in &self.anchors {
            if !a.x.is_rational() {
                return Err(PackError::IrrationalX(a.x.to_string()));
            }
            out.push_str(&format_rational(&a.x.rational));
            out.push(' ');
            out.push_str(&format_rational(&a.y.rational));
            if !a.y.surd.is_zero() {
                out.push(' ');
                out.push_str(&format_rational(&a.y.surd));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Whether the side-1/2 hexagon centred at `anchor` lies inside `Δ`.
/// The triangle at `anchor` must itself fit.
pub fn hexagon_inside_delta(instance: &PackingInstance, anchor: &ExactPoint) -> Result<bool, PackError> {
    if !triangle_inside_delta(&instance.side_len, anchor) {
        return Err(PackError::TriangleOutside { anchor: anchor.to_string() });
    }
    Ok(hexagon_vertices(anchor, &half()).iter().all(|v| inside_delta(&instance.side_len, v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStrategy {
    /// All `n(n-1)/2` pairs.
    BruteForce,
    /// Only pairs in neighbouring unit grid cells.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Hard,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// `n <= (2/3) L²`.
    pub holds: bool,
    /// `(2/3) L²` as an exact rational string.
    pub limit: String,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub count: usize,
    pub side_len: String,
    /// Index of the first anchor whose triangle leaves `Δ`.
    pub first_outside: Option<usize>,
    /// Lexicographically first overlapping pair.
    pub first_overlap: Option<(usize, usize)>,
    pub bound: BoundCheck,
    /// Every side-1/2 hexagon inside `Δ` (only meaningful when all triangles fit).
    pub hexagons_inside: bool,
    /// `n · 3√3/8 <= (√3/4) L²`, i.e. `3n <= 2L²`.
    pub hexagon_area_fits: bool,
    /// `n / L²` exactly, and as a float.
    pub density: String,
    pub density_f64: f64,
    pub valid: bool,
}

/// Below this side length the `(2/3) L²` bound is reported as a warning.
pub fn bound_is_hard(side: &ExactScalar) -> bool {
    *side >= int(2)
}

pub fn validate_packing(instance: &PackingInstance) -> PackingReport {
    validate_packing_with(instance, PairStrategy::Grid)
}

pub fn validate_packing_with(instance: &PackingInstance, strategy: PairStrategy) -> PackingReport {
    let side = &instance.side_len;
    let n = instance.len();
    let first_outside = instance.anchors.iter().position(|a| !triangle_inside_delta(side, a));
    let first_overlap = match strategy {
        PairStrategy::BruteForce => first_overlap_brute(&instance.anchors),
        PairStrategy::Grid => first_overlap_grid(&instance.anchors),
    };
    let l2 = side * side;
    let limit = &l2 * ratio(2, 3);
    let count = int(n as i64);
    let bound = BoundCheck {
        holds: count <= limit,
        limit: format_rational(&limit),
        severity: if bound_is_hard(side) { Severity::Hard } else { Severity::Warning },
    };
    let hexagons_inside = first_outside.is_none()
        && instance.anchors.iter().all(|a| hexagon_vertices(a, &half()).iter().all(|v| inside_delta(side, v)));
    let hexagon_area_fits = &count * int(3) <= &l2 * int(2);
    let density = &count / &l2;
    let bound_ok = bound.holds || bound.severity == Severity::Warning;
    PackingReport {
        count: n,
        side_len: format_rational(side),
        first_outside,
        first_overlap,
        density_f64: density.to_f64().unwrap_or(f64::NAN),
        density: format_rational(&density),
        bound,
        hexagons_inside,
        hexagon_area_fits,
        valid: first_outside.is_none() && first_overlap.is_none() && bound_ok,
    }
}

fn first_overlap_brute(anchors: &[ExactPoint]) -> Option<(usize, usize)> {
    (0..anchors.len())
        .flat_map(|i| (i + 1..anchors.len()).map(move |j| (i, j)))
        .find(|&(i, j)| triangles_overlap_exact(&anchors[i], &anchors[j]))
}

fn first_overlap_grid(anchors: &[ExactPoint]) -> Option<(usize, usize)> {
    // overlapping anchors differ by less than 1 in each coordinate, so they
    // sit in the same or adjacent unit cells
    let cells: Vec<(i64, i64)> = anchors.iter().map(|a| (a.x.floor(), a.y.floor())).collect();
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &cell) in cells.iter().enumerate() {
        grid.entry(cell).or_default().push(i);
    }
    let mut best: Option<(usize, usize)> = None;
    for (i, &(cx, cy)) in cells.iter().enumerate() {
        if best.is_some_and(|(bi, _)| bi < i) {
            break;
        }
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(members) = grid.get(&(cx + dx, cy + dy)) else { continue };
                for &j in members {
                    if j > i && best.is_none_or(|b| (i, j) < b) && triangles_overlap_exact(&anchors[i], &anchors[j]) {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Anchors on the lattice of the side-1/2 hexagon tiling,
/// `x = 3i/4`, `y = (√3/4)·m` with `m ≡ i (mod 2)`, kept when the whole
/// triangle lies inside `Δ` shrunk by `margin`. Ordered by `(i, m)`.
pub fn tessellate(side: &ExactScalar, margin: &ExactScalar) -> Result<PackingInstance, PackError> {
    if *side < int(4) {
        return Err(PackError::SideTooSmall);
    }
    if *margin < ExactScalar::zero() {
        return Err(PackError::NegativeMargin);
    }
    let ceil_side = side.ceil().to_integer().to_i64().ok_or(PackError::SideTooLarge)?;
    let bound = ceil_side * 4 + 4;
    let mut anchors = Vec::new();
    for i in 0..=bound {
        for m in (i % 2..=2 * bound).step_by(2) {
            let anchor = ExactPoint::from_parts(ratio(3 * i, 4), ExactScalar::zero(), ratio(m, 4));
            if triangle_vertices(&anchor).iter().all(|v| inside_delta_with_margin(side, v, margin)) {
                anchors.push(anchor);
            }
        }
    }
    PackingInstance::new(side.clone(), anchors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: (i64, i64), y: (i64, i64), y_surd: (i64, i64)) -> ExactPoint {
        ExactPoint::from_parts(ratio(x.0, x.1), ratio(y.0, y.1), ratio(y_surd.0, y_surd.1))
    }

    fn origin() -> ExactPoint {
        ExactPoint::default()
    }

    #[test]
    fn overlap_examples() {
        let o = origin();
        assert!(!triangles_overlap_exact(&o, &pt((2, 1), (0, 1), (0, 1))));
        assert!(triangles_overlap_exact(&o, &pt((1, 2), (0, 1), (0, 1))));
        assert!(!triangles_overlap_exact(&o, &pt((1, 1), (0, 1), (0, 1))));
        assert!(triangles_overlap_exact(&o, &o));
    }

    #[test]
    fn gauge_examples() {
        let o = origin();
        assert_eq!(hex_gauge(&pt((1, 1), (0, 1), (0, 1))), QSqrt3::from_int(1));
        assert!(!hex_gauge_overlap(&o, &pt((1, 1), (0, 1), (0, 1))));
        assert!(hex_gauge_overlap(&o, &o));
        // (3/4, √3/4) is the midpoint of the hexagon edge from (1, 0) to
        // (1/2, √3/2): gauge exactly 1, so the triangles only touch
        let edge_mid = pt((3, 4), (0, 1), (1, 4));
        assert_eq!(hex_gauge(&edge_mid), QSqrt3::from_int(1));
        assert!(!hex_gauge_overlap(&o, &edge_mid));
        assert!(!triangles_overlap_exact(&o, &edge_mid));
        // slightly inside
        let inner = pt((3, 5), (0, 1), (1, 5));
        assert!(hex_gauge(&inner) < QSqrt3::from_int(1));
        assert!(hex_gauge_overlap(&o, &inner) && triangles_overlap_exact(&o, &inner));
    }

    #[test]
    fn gauge_is_symmetric_and_homogeneous() {
        let p = pt((1, 3), (-2, 7), (1, 5));
        let neg = ExactPoint::new(-p.x.clone(), -p.y.clone());
        assert_eq!(hex_gauge(&p), hex_gauge(&neg));
        let twice = ExactPoint::new(p.x.scale(&int(2)), p.y.scale(&int(2)));
        assert_eq!(hex_gauge(&twice), hex_gauge(&p).scale(&int(2)));
        let ball = HexGauge::new(origin(), int(1));
        for v in hexagon_vertices(&origin(), &int(1)) {
            assert_eq!(ball.value(&v), QSqrt3::from_int(1));
            assert!(ball.contains(&v));
        }
    }

    #[test]
    fn hexagon_containment_examples() {
        let ten = PackingInstance::new(int(10), vec![]).unwrap();
        assert_eq!(hexagon_inside_delta(&ten, &pt((5, 1), (3, 1), (0, 1))), Ok(true));
        // medial triangle of Δ with L = 2: the hexagon touches the left edge
        let two = PackingInstance::new(int(2), vec![]).unwrap();
        assert_eq!(hexagon_inside_delta(&two, &pt((1, 1), (0, 1), (1, 2))), Ok(true));
        assert!(matches!(hexagon_inside_delta(&ten, &pt((0, 1), (1, 1), (0, 1))), Err(PackError::TriangleOutside { .. })));
    }

    #[test]
    fn validate_examples() {
        // two triangles side by side in Δ of side 3
        let pair = PackingInstance::new(int(3), vec![pt((1, 1), (0, 1), (1, 2)), pt((2, 1), (0, 1), (1, 2))]).unwrap();
        let report = validate_packing(&pair);
        assert!(report.valid, "{report:?}");
        assert_eq!(report.count, 2);
        assert_eq!(report.bound.limit, "6");
        assert!(report.hexagons_inside && report.hexagon_area_fits);

        // an inverted unit triangle does not fit inside Δ of side 1
        let single = PackingInstance::new(int(1), vec![pt((1, 2), (0, 1), (1, 2))]).unwrap();
        let report = validate_packing(&single);
        assert_eq!(report.first_outside, Some(0));
        assert!(!report.bound.holds);
        assert_eq!(report.bound.severity, Severity::Warning);
        assert!(!report.valid);

        let clash = PackingInstance::new(int(10), vec![pt((3, 1), (1, 1), (0, 1)), pt((7, 2), (1, 1), (0, 1))]).unwrap();
        let report = validate_packing(&clash);
        assert_eq!(report.first_overlap, Some((0, 1)));
        assert!(!report.valid);
    }

    #[test]
    fn empty_packing_is_valid() {
        let report = validate_packing(&PackingInstance::new(int(5), vec![]).unwrap());
        assert!(report.valid && report.count == 0);
    }

    #[test]
    fn tessellation_small_sides() {
        let four = tessellate(&int(4), &ExactScalar::zero()).unwrap();
        assert!(!four.is_empty());
        assert!(validate_packing(&four).valid);
        let ten = tessellate(&int(10), &ExactScalar::zero()).unwrap();
        assert_eq!(validate_packing(&ten), validate_packing_with(&ten, PairStrategy::BruteForce));
        assert!(validate_packing(&ten).valid);
        assert_eq!(tessellate(&ratio(7, 2), &ExactScalar::zero()), Err(PackError::SideTooSmall));
        assert_eq!(tessellate(&int(5), &int(-1)), Err(PackError::NegativeMargin));
        let tight = tessellate(&int(10), &ratio(1, 4)).unwrap();
        assert!(tight.len() < ten.len());
    }

    #[test]
    fn packing_file_round_trip() {
        let inst = tessellate(&ratio(9, 2), &ExactScalar::zero()).unwrap();
        assert_eq!(PackingInstance::parse(&inst.to_text().unwrap()).unwrap(), inst);
        assert!(matches!(PackingInstance::parse("3\n1\n"), Err(PackError::Parse { line: 2, .. })));
        assert!(matches!(PackingInstance::parse(""), Err(PackError::Parse { .. })));
        assert_eq!(PackingInstance::parse("-1\n"), Err(PackError::NonPositiveSide));
    }
}
