use serde::{Deserialize, Serialize};

/// A point of the integer lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// `|x| + |y|`: the number of unit moves needed to reach this point from the origin.
    pub fn l1(self) -> u64 {
        self.x.unsigned_abs() + self.y.unsigned_abs()
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

/// Twice the area of triangle `abc` (shoelace formula). Zero iff collinear.
///
/// Computed in `i128`, so any `i64` coordinates are safe.
pub fn shoelace_doubled(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> u128 {
    let (ax, ay) = (a.x as i128, a.y as i128);
    let (bx, by) = (b.x as i128, b.y as i128);
    let (cx, cy) = (c.x as i128, c.y as i128);
    (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)).unsigned_abs()
}
