//! Three pins start at the origin; each unit move shifts one pin to an
//! adjacent lattice point. Find the fewest moves that leave the pins on a
//! triangle of doubled area `D`.
//!
//! The lower bound comes from the bounding box: a triangle covers at most
//! half of its axis-parallel bounding box, and `n` moves give a box with
//! `width + height <= n`, so `D <= width·height <= n²/4`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{isqrt_ceil_of_sqrt, shoelace_doubled, LatticePoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PinError {
    #[error("doubled area must be positive")]
    ZeroArea,
    #[error("budget cap {cap} exceeded without finding a witness for D = {doubled_area}")]
    BudgetCapExceeded { doubled_area: u64, cap: u64 },
    #[error("radius {radius} too small: need 4·D <= (2·radius)² for D = {doubled_area}")]
    RadiusTooSmall { doubled_area: u64, radius: u64 },
    #[error("no triangle with doubled area {doubled_area} within radius {radius}")]
    NotFoundWithinRadius { doubled_area: u64, radius: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PinState {
    pub a_pin: LatticePoint,
    pub b_pin: LatticePoint,
    pub c_pin: LatticePoint,
}

impl PinState {
    pub fn new(a_pin: LatticePoint, b_pin: LatticePoint, c_pin: LatticePoint) -> Self {
        Self { a_pin, b_pin, c_pin }
    }

    /// Minimum number of unit moves from the all-origin start.
    pub fn move_cost(&self) -> u64 {
        self.a_pin.l1() + self.b_pin.l1() + self.c_pin.l1()
    }

    pub fn doubled_area(&self) -> u128 {
        shoelace_doubled(self.a_pin, self.b_pin, self.c_pin)
    }
}

/// Sign pattern applied to pin A in the family `A = (∓p, ∓q), B = (x, 0), C = (0, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reflection {
    /// `A = (-p, -q)`, doubled area `xy + qx + py`.
    Base,
    /// `A = (p, -q)`, doubled area `xy + qx - py`.
    FlipX,
    /// `A = (-p, q)`, doubled area `xy - qx + py`.
    FlipY,
    /// `A = (p, q)`, doubled area `|xy - qx - py|`.
    FlipBoth,
}

impl Reflection {
    pub const ALL: [Reflection; 4] = [Self::Base, Self::FlipX, Self::FlipY, Self::FlipBoth];

    fn signs(self) -> (i64, i64) {
        match self {
            Self::Base => (-1, -1),
            Self::FlipX => (1, -1),
            Self::FlipY => (-1, 1),
            Self::FlipBoth => (1, 1),
        }
    }
}

/// A hit inside the four-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub reflection: Reflection,
    pub p: u64,
    pub q: u64,
    pub x: u64,
    pub y: u64,
    pub state: PinState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    CertifiedOptimal,
    UpperBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveCertificate {
    pub doubled_area_target: u64,
    pub lower_bound: u64,
    pub witness: PinState,
    pub family: FamilyWitness,
    pub cost: u64,
    pub status: CertificateStatus,
    /// `cost - lower_bound`.
    pub gap: u64,
    /// Set when the exhaustive oracle was run to close a nonzero gap.
    pub oracle_cost: Option<u64>,
}

/// Least `n` with `n² >= 4D`.
pub fn lower_bound(doubled_area: u64) -> Result<u64, PinError> {
    if doubled_area == 0 {
        return Err(PinError::ZeroArea);
    }
    let n = isqrt_ceil_of_sqrt(4 * u128::from(doubled_area)).map_err(|_| PinError::ZeroArea)?;
    Ok(n as u64)
}

/// Searches the family `A = (∓p, ∓q), B = (x, 0), C = (0, y)` with
/// `p + q + x + y = budget` for doubled area `D`.
///
/// Reflections are tried in [`Reflection::ALL`] order; within each the scan is
/// `p`, then `q`, then `x` ascending, so the result is deterministic.
pub fn family_search(doubled_area: u64, budget: u64) -> Option<FamilyWitness> {
    if doubled_area == 0 {
        return None;
    }
    let target = i128::from(doubled_area);
    Reflection::ALL.into_iter().find_map(|reflection| {
        let (sp, sq) = reflection.signs();
        for p in 0..=budget {
            for q in 0..=budget - p {
                let rest = budget - p - q;
                for x in 0..=rest {
                    let y = rest - x;
                    let (pi, qi, xi, yi) = (p as i128, q as i128, x as i128, y as i128);
                    // shoelace with A = (sp·p, sq·q), B = (x, 0), C = (0, y)
                    let area = (xi * yi - i128::from(sp) * pi * yi - i128::from(sq) * qi * xi).abs();
                    if area == target {
                        let state = PinState::new(
                            LatticePoint::new(sp * p as i64, sq * q as i64),
                            LatticePoint::new(x as i64, 0),
                            LatticePoint::new(0, y as i64),
                        );
                        return Some(FamilyWitness { reflection, p, q, x, y, state });
                    }
                }
            }
        }
        None
    })
}

/// Largest lower bound for which [`min_moves`] will run the exhaustive oracle
/// to close a gap between the family witness and the bound.
pub const ORACLE_GAP_CLOSING_LIMIT: u64 = 16;

/// Walks budgets upward from [`lower_bound`] until the family hits `D`.
pub fn min_moves(doubled_area: u64, budget_cap: u64) -> Result<SolveCertificate, PinError> {
    let bound = lower_bound(doubled_area)?;
    let family = (bound..=budget_cap)
        .find_map(|budget| family_search(doubled_area, budget))
        .ok_or(PinError::BudgetCapExceeded { doubled_area, cap: budget_cap })?;
    let cost = family.state.move_cost();
    let gap = cost - bound;
    let (status, oracle_cost) = if gap == 0 {
        (CertificateStatus::CertifiedOptimal, None)
    } else if bound <= ORACLE_GAP_CLOSING_LIMIT {
        // every pin of an optimal triangle has L1 norm <= cost, so radius = cost is complete
        let best = oracle_min_moves(doubled_area, cost)?;
        let status = if best == cost { CertificateStatus::CertifiedOptimal } else { CertificateStatus::UpperBoundOnly };
        (status, Some(best))
    } else {
        (CertificateStatus::UpperBoundOnly, None)
    };
    Ok(SolveCertificate {
        doubled_area_target: doubled_area,
        lower_bound: bound,
        witness: family.state,
        family,
        cost,
        status,
        gap,
        oracle_cost,
    })
}

/// Exhaustive minimum over all pin triples with per-pin L1 norm `<= radius`
/// and total cost `<= 2·radius`.
///
/// Independent of the family: it enumerates raw lattice points and evaluates
/// the shoelace formula directly.
pub fn oracle_min_moves(doubled_area: u64, radius: u64) -> Result<u64, PinError> {
    if doubled_area == 0 {
        return Err(PinError::ZeroArea);
    }
    if 4 * u128::from(doubled_area) > 4 * u128::from(radius) * u128::from(radius) {
        return Err(PinError::RadiusTooSmall { doubled_area, radius });
    }
    let r = radius as i64;
    let mut points: Vec<LatticePoint> = Vec::new();
    for x in -r..=r {
        let span = r - x.abs();
        for y in -span..=span {
            points.push(LatticePoint::new(x, y));
        }
    }
    points.sort_by_key(|p| p.l1());
    let cost: Vec<u64> = points.iter().map(|p| p.l1()).collect();
    let target = u128::from(doubled_area);

    // pins are interchangeable, so only visit index triples i <= j <= k of the
    // cost-sorted list; `best` is an exclusive upper bound on the total
    let mut best = 2 * radius + 1;
    for i in 0..points.len() {
        if 3 * cost[i] >= best {
            break;
        }
        for j in i..points.len() {
            if cost[i] + 2 * cost[j] >= best {
                break;
            }
            for k in j..points.len() {
                let total = cost[i] + cost[j] + cost[k];
                if total >= best {
                    break;
                }
                if shoelace_doubled(points[i], points[j], points[k]) == target {
                    best = total;
                    break;
                }
            }
        }
    }
    if best > 2 * radius {
        return Err(PinError::NotFoundWithinRadius { doubled_area, radius });
    }
    Ok(best)
}
