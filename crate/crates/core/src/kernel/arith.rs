use serde::{Deserialize, Serialize};

use super::KernelError;

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u64,
    /// `(prime, exponent)` with primes strictly increasing and exponents `>= 1`.
    pub prime_powers: Vec<(u64, u32)>,
}

impl Factorization {
    /// `d(n) = Π (e + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.prime_powers.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.prime_powers.iter().all(|&(_, e)| e == 1)
    }

    /// Number of distinct prime factors.
    pub fn prime_count(&self) -> usize {
        self.prime_powers.len()
    }

    pub fn exponent_of(&self, prime: u64) -> u32 {
        self.prime_powers
            .iter()
            .find(|&&(p, _)| p == prime)
            .map_or(0, |&(_, e)| e)
    }

    /// Merges two factorizations into the factorization of the product.
    pub fn combine(&self, other: &Factorization) -> Factorization {
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(self.prime_powers.len() + other.prime_powers.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.prime_powers, &other.prime_powers);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) if p == q => {
                    merged.push((p, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, e)), Some(&(q, _))) if p < q => {
                    merged.push((p, e));
                    i += 1;
                }
                (Some(_), Some(&(q, f))) | (None, Some(&(q, f))) => {
                    merged.push((q, f));
                    j += 1;
                }
                (Some(&(p, e)), None) => {
                    merged.push((p, e));
                    i += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Factorization { value: self.value * other.value, prime_powers: merged }
    }

    /// Every positive divisor, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.prime_powers {
            let existing = out.len();
            let mut power = 1u64;
            for _ in 0..e {
                power *= p;
                for k in 0..existing {
                    out.push(out[k] * power);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Trial division up to `√n`.
pub fn factorize(n: u64) -> Result<Factorization, KernelError> {
    if n == 0 {
        return Err(KernelError::Zero);
    }
    let mut rest = n;
    let mut prime_powers = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            prime_powers.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        prime_powers.push((rest, 1));
    }
    Ok(Factorization { value: n, prime_powers })
}

pub fn divisors(n: u64) -> Result<Vec<u64>, KernelError> {
    Ok(factorize(n)?.divisors())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).is_ok_and(|f| f.prime_powers == [(n, 1)])
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn isqrt_floor(m: u128) -> u128 {
    m.isqrt()
}

/// Least `n` with `n² >= m`, in pure integer arithmetic.
pub fn isqrt_ceil_of_sqrt(m: u128) -> Result<u128, KernelError> {
    if m == 0 {
        return Err(KernelError::Zero);
    }
    let root = m.isqrt();
    Ok(if root * root == m { root } else { root + 1 })
}
