//! Shared exact arithmetic, lattice primitives and number-theoretic helpers.

mod arith;
mod lattice;
mod quadratic;

pub use arith::{
    divisors, factorize, gcd, is_prime, isqrt_ceil_of_sqrt, isqrt_floor, Factorization,
};
pub use lattice::{shoelace_doubled, LatticePoint};
pub use quadratic::QSqrt3;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type ExactScalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("argument must be positive, got 0")]
    Zero,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// Builds `num/den` in canonical form. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25` into an exact rational.
pub fn parse_rational(text: &str) -> Result<ExactScalar, KernelError> {
    let bad = || KernelError::BadRational(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(num))
}

/// Formats as `p` or `p/q`; the inverse of [`parse_rational`].
pub fn format_rational(value: &ExactScalar) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
