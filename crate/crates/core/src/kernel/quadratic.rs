use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{format_rational, ExactScalar};

/// An element `rational + surd·√3` of the field `Q(√3)`.
///
/// Equilateral geometry with rational side lengths lives here exactly, so
/// containment and overlap predicates never round.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt3 {
    pub rational: ExactScalar,
    pub surd: ExactScalar,
}

impl QSqrt3 {
    pub fn new(rational: ExactScalar, surd: ExactScalar) -> Self {
        Self { rational, surd }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(rational: ExactScalar) -> Self {
        Self { rational, surd: ExactScalar::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `√3 · coefficient`.
    pub fn sqrt3_times(coefficient: ExactScalar) -> Self {
        Self { rational: ExactScalar::zero(), surd: coefficient }
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// Exact sign of `a + b√3`.
    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&ExactScalar::zero());
        let b = self.surd.cmp(&ExactScalar::zero());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² with 3b²
            (a_sign, _) => {
                let a2 = &self.rational * &self.rational;
                let b2 = &self.surd * &self.surd * BigRational::from_integer(BigInt::from(3));
                match a2.cmp(&b2) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => a_sign,
                    Ordering::Less => a_sign.reverse(),
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        Self { rational: &self.rational * factor, surd: &self.surd * factor }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) + self.surd.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }

    /// Exact `⌊self⌋`, seeded from the float approximation and corrected.
    pub fn floor(&self) -> i64 {
        let mut k = self.to_f64().floor() as i64;
        while *self < Self::from_int(k) {
            k -= 1;
        }
        while *self >= Self::from_int(k + 1) {
            k += 1;
        }
        k
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.rational)),
            (true, false) => write!(f, "{}√3", format_rational(&self.surd)),
            (false, false) => {
                let sign = if self.surd.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}√3", format_rational(&self.rational), sign, format_rational(&self.surd.abs()))
            }
        }
    }
}

impl<'a> Add<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: &'a QSqrt3) -> QSqrt3 {
        QSqrt3 { rational: &self.rational + &rhs.rational, surd: &self.surd + &rhs.surd }
    }
}

impl<'a> Sub<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: &'a QSqrt3) -> QSqrt3 {
        QSqrt3 { rational: &self.rational - &rhs.rational, surd: &self.surd - &rhs.surd }
    }
}

impl<'a> Mul<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: &'a QSqrt3) -> QSqrt3 {
        let three = BigRational::from_integer(BigInt::from(3));
        QSqrt3 {
            rational: &self.rational * &rhs.rational + &self.surd * &rhs.surd * three,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        }
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3 { rational: -self.rational, surd: -self.surd }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<QSqrt3> for QSqrt3 {
            type Output = QSqrt3;
            fn $method(self, rhs: QSqrt3) -> QSqrt3 {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QSqrt3> for QSqrt3 {
            type Output = QSqrt3;
            fn $method(self, rhs: &'a QSqrt3) -> QSqrt3 {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
