//! The cyclic system of `2n` equations
//!
//! ```text
//! a_{2i-1} = 1/a_{2i-2} + 1/a_{2i},    a_{2i} = a_{2i-1} + a_{2i+1}
//! ```
//!
//! with indices taken modulo `2n`. Eliminating the odd entries leaves the
//! reduced even-index system
//!
//! ```text
//! e_i = 1/e_{i-1} + 2/e_i + 1/e_{i+1},    e_i = a_{2i}
//! ```
//!
//! whose Jacobian is cyclic tridiagonal. [`solve`] runs damped Newton on it
//! and back-substitutes the odd entries. The unique positive solution is the
//! alternating vector `(1, 2, 1, 2, …)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CyclicError {
    #[error("n must be at least 4, got {0}")]
    TooSmall(usize),
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("entry {index} is not strictly positive and finite: {value}")]
    NonPositive { index: usize, value: f64 },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("vector is not a solution: residual {residual:e} exceeds tolerance {tol:e}")]
    NotASolution { residual: f64, tol: f64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Positive entries `a_1, …, a_{2n}` (stored zero-based), `n >= 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleVector {
    n: usize,
    entries: Vec<f64>,
}

impl CycleVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, CyclicError> {
        if !entries.len().is_multiple_of(2) {
            return Err(CyclicError::WrongLength { expected: entries.len() + 1, got: entries.len() });
        }
        let n = entries.len() / 2;
        if n < 4 {
            return Err(CyclicError::TooSmall(n));
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(CyclicError::NonPositive { index, value });
        }
        Ok(Self { n, entries })
    }

    /// Rebuilds the full vector from the even entries `a_2, a_4, …, a_{2n}`
    /// via `a_{2i-1} = 1/a_{2i-2} + 1/a_{2i}`.
    pub fn from_even(even: &[f64]) -> Result<Self, CyclicError> {
        let n = even.len();
        if n < 4 {
            return Err(CyclicError::TooSmall(n));
        }
        let mut entries = Vec::with_capacity(2 * n);
        for i in 0..n {
            let prev = even[(i + n - 1) % n];
            entries.push(1.0 / prev + 1.0 / even[i]);
            entries.push(even[i]);
        }
        Self::new(entries)
    }

    /// Entries drawn log-uniformly from `[0.1, 10]`.
    pub fn random(n: usize, seed: u64) -> Result<Self, CyclicError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = (0.1f64.ln(), 10f64.ln());
        Self::new((0..2 * n).map(|_| rng.random_range(lo..hi).exp()).collect())
    }

    /// One entry per line; blank lines and `#` comments skipped.
    pub fn parse(text: &str) -> Result<Self, CyclicError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let value = line
                .parse::<f64>()
                .map_err(|e| CyclicError::Parse { line: idx + 1, reason: e.to_string() })?;
            entries.push(value);
        }
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|v| format!("{v:?}\n")).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `a_k` for one-based `k`, cyclic.
    pub fn a(&self, k: isize) -> f64 {
        let len = self.entries.len() as isize;
        self.entries[((k - 1).rem_euclid(len)) as usize]
    }

    /// `e_i = a_{2i}` for `i = 1..=n`, stored zero-based.
    pub fn even(&self) -> Vec<f64> {
        self.entries.iter().skip(1).step_by(2).copied().collect()
    }

    pub fn odd(&self) -> Vec<f64> {
        self.entries.iter().step_by(2).copied().collect()
    }
}

/// `(1, 2, 1, 2, …)`.
pub fn canonical_solution(n: usize) -> Result<CycleVector, CyclicError> {
    if n < 4 {
        return Err(CyclicError::TooSmall(n));
    }
    CycleVector::new((0..2 * n).map(|k| if k % 2 == 0 { 1.0 } else { 2.0 }).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `a_{2i-1} - (1/a_{2i-2} + 1/a_{2i})`.
    pub odd_residuals: Vec<f64>,
    /// `a_{2i} - (a_{2i-1} + a_{2i+1})`.
    pub even_residuals: Vec<f64>,
    pub max_abs: f64,
}

pub fn residuals(v: &CycleVector) -> ResidualReport {
    let n = v.n as isize;
    let odd_residuals: Vec<f64> = (1..=n).map(|i| v.a(2 * i - 1) - (1.0 / v.a(2 * i - 2) + 1.0 / v.a(2 * i))).collect();
    let even_residuals: Vec<f64> = (1..=n).map(|i| v.a(2 * i) - (v.a(2 * i - 1) + v.a(2 * i + 1))).collect();
    let max_abs = odd_residuals.iter().chain(&even_residuals).fold(0.0f64, |m, r| m.max(r.abs()));
    ResidualReport { odd_residuals, even_residuals, max_abs }
}

fn reduced(even: &[f64]) -> Vec<f64> {
    let n = even.len();
    (0..n)
        .map(|i| {
            let (prev, cur, next) = (even[(i + n - 1) % n], even[i], even[(i + 1) % n]);
            cur - (1.0 / prev + 2.0 / cur + 1.0 / next)
        })
        .collect()
}

/// `e_i - (1/e_{i-1} + 2/e_i + 1/e_{i+1})` over the even entries.
pub fn reduced_even_residuals(v: &CycleVector) -> Vec<f64> {
    reduced(&v.even())
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solves `A x = rhs` for cyclic tridiagonal `A` with `sub[i] = A[i][i-1]`,
/// `diag[i] = A[i][i]`, `sup[i] = A[i][i+1]` (indices mod n), by
/// Sherman–Morrison on top of the Thomas algorithm. `None` on a zero pivot.
pub fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    if n < 3 || sub.len() != n || sup.len() != n || rhs.len() != n {
        return None;
    }
    let corner_bottom = sup[n - 1]; // A[n-1][0]
    let corner_top = sub[0]; // A[0][n-1]
    let gamma = -diag[0];
    let mut modified = diag.to_vec();
    modified[0] -= gamma;
    modified[n - 1] -= corner_bottom * corner_top / gamma;

    let x = thomas(sub, &modified, sup, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner_bottom;
    let z = thomas(sub, &modified, sup, &u)?;

    let denom = 1.0 + z[0] + corner_top * z[n - 1] / gamma;
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    let factor = (x[0] + corner_top * x[n - 1] / gamma) / denom;
    Some(x.iter().zip(&z).map(|(xi, zi)| xi - factor * zi).collect())
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return None;
    }
    c_prime[0] = sup[0] / pivot;
    d_prime[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c_prime[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c_prime[i] = if i + 1 < n { sup[i] / pivot } else { 0.0 };
        d_prime[i] = (rhs[i] - sub[i] * d_prime[i - 1]) / pivot;
    }
    let mut x = d_prime;
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub iterations: usize,
    pub converged: bool,
    /// Full-system `max_abs` after back-substitution.
    pub final_residual: f64,
    /// Reduced residual sup-norm before each iteration, and after the last.
    pub reduced_history: Vec<f64>,
    /// Number of step halvings across all iterations.
    pub halvings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub solution: CycleVector,
    pub record: ConvergenceRecord,
}

const MIN_STEP: f64 = 1.0 / (1u64 << 40) as f64;

/// Damped Newton on the reduced even-index system from the even entries of
/// `init`. Steps are halved until every entry stays positive and the
/// residual decreases; positivity is never imposed by clamping.
pub fn solve(init: &CycleVector, options: &SolveOptions) -> Result<SolveOutcome, CyclicError> {
    if !(options.tol.is_finite() && options.tol > 0.0) {
        return Err(CyclicError::BadTolerance);
    }
    let n = init.n;
    let mut even = init.even();
    let mut g = reduced(&even);
    let mut history = vec![max_abs(&g)];
    let mut halvings = 0;
    let mut iterations = 0;

    let full_residual = |even: &[f64]| CycleVector::from_even(even).map(|v| residuals(&v).max_abs);

    loop {
        // the reduced system alone can converge while the original `init`
        // odd entries are garbage, so test the back-substituted vector
        let current = full_residual(&even)?;
        if current <= options.tol {
            let solution = CycleVector::from_even(&even)?;
            let record = ConvergenceRecord { iterations, converged: true, final_residual: current, reduced_history: history, halvings };
            return Ok(SolveOutcome { solution, record });
        }
        if iterations >= options.max_iter {
            return Err(CyclicError::NonConvergence { iterations, residual: current });
        }
        iterations += 1;

        let sub: Vec<f64> = (0..n).map(|i| 1.0 / even[(i + n - 1) % n].powi(2)).collect();
        let diag: Vec<f64> = even.iter().map(|e| 1.0 + 2.0 / (e * e)).collect();
        let sup: Vec<f64> = (0..n).map(|i| 1.0 / even[(i + 1) % n].powi(2)).collect();
        let rhs: Vec<f64> = g.iter().map(|r| -r).collect();
        // a singular Jacobian falls back to the residual direction, which is
        // a descent direction for the diagonal-dominant part of the system
        let step = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs).unwrap_or(rhs);

        let norm = max_abs(&g);
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = even.iter().zip(&step).map(|(e, s)| e + lambda * s).collect();
            if trial.iter().all(|&e| e > 0.0 && e.is_finite()) {
                let trial_g = reduced(&trial);
                let trial_norm = max_abs(&trial_g);
                if trial_norm < (1.0 - 1e-4 * lambda) * norm || (lambda <= MIN_STEP && trial_norm.is_finite()) {
                    even = trial;
                    g = trial_g;
                    break;
                }
            }
            if lambda <= MIN_STEP {
                let residual = full_residual(&even)?;
                return Err(CyclicError::NonConvergence { iterations, residual });
            }
            lambda *= 0.5;
            halvings += 1;
        }
        history.push(max_abs(&g));
    }
}

/// Slack allowed on the derived identities for a vector whose residual is
/// at most `tol`. Summing `n` reduced residuals (each at most `3·tol`) and
/// dividing by entries no smaller than `min_even` gives this bound up to the
/// factor 10 kept for rounding.
pub fn propagated_slack(n: usize, tol: f64, min_even: f64) -> f64 {
    10.0 * n as f64 * tol * (1.0 + 1.0 / min_even).powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub sum_even: f64,
    pub sum_four_over_even: f64,
    /// `|Σ e - Σ 4/e|`.
    pub sum_identity_slack: f64,
    pub squared_pair_sum: f64,
    /// `|n - Σ (1/e_i + 1/e_{i+1})²|`.
    pub squared_pair_slack: f64,
    /// `|Σ e - 2n|`, the equality case of the mean-inequality chain.
    pub equality_slack: f64,
    pub allowed_slack: f64,
    pub passed: bool,
}

fn require_solution(v: &CycleVector, tol: f64) -> Result<(), CyclicError> {
    let residual = residuals(v).max_abs;
    if residual > tol {
        return Err(CyclicError::NotASolution { residual, tol });
    }
    Ok(())
}

/// Checks `Σ e = Σ 4/e`, `n = Σ (1/e_i + 1/e_{i+1})²` and `Σ e = 2n`.
pub fn identity_checks(v: &CycleVector, tol: f64) -> Result<IdentityReport, CyclicError> {
    require_solution(v, tol)?;
    let even = v.even();
    let n = v.n;
    let sum_even: f64 = even.iter().sum();
    let sum_four_over_even: f64 = even.iter().map(|e| 4.0 / e).sum();
    let squared_pair_sum: f64 = (0..n).map(|i| (1.0 / even[i] + 1.0 / even[(i + 1) % n]).powi(2)).sum();
    let min_even = even.iter().copied().fold(f64::INFINITY, f64::min);
    let allowed_slack = propagated_slack(n, tol, min_even);
    let sum_identity_slack = (sum_even - sum_four_over_even).abs();
    let squared_pair_slack = (n as f64 - squared_pair_sum).abs();
    let equality_slack = (sum_even - 2.0 * n as f64).abs();
    let passed = [sum_identity_slack, squared_pair_slack, equality_slack].iter().all(|&s| s <= allowed_slack);
    Ok(IdentityReport {
        sum_even,
        sum_four_over_even,
        sum_identity_slack,
        squared_pair_sum,
        squared_pair_slack,
        equality_slack,
        allowed_slack,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxReport {
    pub min_even: f64,
    pub max_even: f64,
    /// `m >= 2/m + 2/M - slack`.
    pub lower_holds: bool,
    /// `M <= 2/m + 2/M + slack`.
    pub upper_holds: bool,
    /// `M - m`.
    pub spread: f64,
    pub slack: f64,
    /// Both inequalities hold and `M - m <= 2·slack`.
    pub passed: bool,
}

/// The min/max squeeze `m >= 2/m + 2/M >= M` on the even entries.
pub fn minmax_certificate(v: &CycleVector, tol: f64) -> Result<MinMaxReport, CyclicError> {
    require_solution(v, tol)?;
    let even = v.even();
    let m = even.iter().copied().fold(f64::INFINITY, f64::min);
    let big_m = even.iter().copied().fold(0.0, f64::max);
    let slack = propagated_slack(v.n, tol, m);
    let middle = 2.0 / m + 2.0 / big_m;
    let lower_holds = m >= middle - slack;
    let upper_holds = big_m <= middle + slack;
    let spread = big_m - m;
    Ok(MinMaxReport {
        min_even: m,
        max_even: big_m,
        lower_holds,
        upper_holds,
        spread,
        slack,
        passed: lower_holds && upper_holds && spread <= 2.0 * slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_solution(4).unwrap().entries(), &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        assert_eq!(residuals(&canonical_solution(5).unwrap()).max_abs, 0.0);
        assert_eq!(canonical_solution(3), Err(CyclicError::TooSmall(3)));
    }

    #[test]
    fn vector_validation() {
        assert_eq!(CycleVector::new(vec![1.0; 6]), Err(CyclicError::TooSmall(3)));
        assert!(matches!(CycleVector::new(vec![1.0; 7]), Err(CyclicError::WrongLength { .. })));
        assert!(matches!(CycleVector::new(vec![1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]), Err(CyclicError::NonPositive { index: 1, .. })));
        assert!(matches!(CycleVector::new(vec![f64::NAN; 8]), Err(CyclicError::NonPositive { index: 0, .. })));
    }

    #[test]
    fn residual_examples() {
        let ones = CycleVector::new(vec![1.0; 8]).unwrap();
        let report = residuals(&ones);
        assert!(report.odd_residuals.iter().all(|&r| r == -1.0));
        assert!(report.even_residuals.iter().all(|&r| r == -1.0));
        assert_eq!(report.max_abs, 1.0);

        // perturb a_2: the odd equations for a_1, a_3 and the even one for a_2 move
        let mut entries = canonical_solution(4).unwrap().entries().to_vec();
        entries[1] = 2.1;
        let report = residuals(&CycleVector::new(entries).unwrap());
        let nonzero_odd: Vec<usize> = (0..4).filter(|&i| report.odd_residuals[i] != 0.0).collect();
        let nonzero_even: Vec<usize> = (0..4).filter(|&i| report.even_residuals[i] != 0.0).collect();
        assert_eq!(nonzero_odd, vec![0, 1]);
        assert_eq!(nonzero_even, vec![0]);
    }

    #[test]
    fn reduced_residual_examples() {
        assert!(reduced_even_residuals(&canonical_solution(6).unwrap()).iter().all(|&r| r == 0.0));
        for c in [0.5, 1.0, 2.0, 3.0, 7.5] {
            let v = CycleVector::from_even(&[c; 5]).unwrap();
            for r in reduced_even_residuals(&v) {
                assert!((r - (c - 4.0 / c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cyclic_tridiagonal_matches_dense_product() {
        let n = 7;
        let sub: Vec<f64> = (0..n).map(|i| 0.3 + 0.1 * i as f64).collect();
        let diag: Vec<f64> = (0..n).map(|i| 3.0 + 0.2 * i as f64).collect();
        let sup: Vec<f64> = (0..n).map(|i| 0.7 - 0.05 * i as f64).collect();
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 1.0).collect();
        let x = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs).unwrap();
        for i in 0..n {
            let ax = sub[i] * x[(i + n - 1) % n] + diag[i] * x[i] + sup[i] * x[(i + 1) % n];
            assert!((ax - rhs[i]).abs() < 1e-12, "row {i}");
        }
    }

    #[test]
    fn solve_from_all_ones() {
        let out = solve(&CycleVector::new(vec![1.0; 8]).unwrap(), &SolveOptions::default()).unwrap();
        let canonical = canonical_solution(4).unwrap();
        for (a, b) in out.solution.entries().iter().zip(canonical.entries()) {
            assert!((a - b).abs() <= 1e-8);
        }
        assert!(out.record.final_residual <= 1e-10);
    }

    #[test]
    fn solve_at_fixed_point_takes_no_iterations() {
        let out = solve(&canonical_solution(6).unwrap(), &SolveOptions::default()).unwrap();
        assert_eq!(out.record.iterations, 0);
    }

    #[test]
    fn solve_reports_nonconvergence() {
        let init = CycleVector::random(5, 3).unwrap();
        let err = solve(&init, &SolveOptions { tol: 1e-10, max_iter: 1 }).unwrap_err();
        assert!(matches!(err, CyclicError::NonConvergence { iterations: 1, .. }));
        assert_eq!(solve(&init, &SolveOptions { tol: 0.0, max_iter: 5 }), Err(CyclicError::BadTolerance));
    }

    #[test]
    fn identities_at_canonical_solution() {
        let r = identity_checks(&canonical_solution(4).unwrap(), 1e-12).unwrap();
        assert_eq!((r.sum_even, r.sum_four_over_even, r.squared_pair_sum), (8.0, 8.0, 4.0));
        assert!(r.passed);
        let r7 = identity_checks(&canonical_solution(7).unwrap(), 1e-12).unwrap();
        assert_eq!(r7.squared_pair_sum, 7.0);
        let ones = CycleVector::new(vec![1.0; 8]).unwrap();
        assert!(matches!(identity_checks(&ones, 1e-10), Err(CyclicError::NotASolution { .. })));
    }

    #[test]
    fn minmax_at_canonical_solution() {
        let r = minmax_certificate(&canonical_solution(4).unwrap(), 1e-12).unwrap();
        assert_eq!((r.min_even, r.max_even), (2.0, 2.0));
        assert_eq!(2.0 / r.min_even + 2.0 / r.max_even, 2.0);
        assert!(r.lower_holds && r.upper_holds && r.passed);
        assert_eq!(minmax_certificate(&canonical_solution(9).unwrap(), 1e-12).unwrap().spread, 0.0);
    }

    #[test]
    fn text_round_trip() {
        let v = CycleVector::random(4, 11).unwrap();
        assert_eq!(CycleVector::parse(&v.to_text()).unwrap(), v);
        assert!(matches!(CycleVector::parse("1\nx\n"), Err(CyclicError::Parse { line: 2, .. })));
    }
}
