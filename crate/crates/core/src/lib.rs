//! Executable checkers for six competition problems: a functional equation,
//! a concurrency theorem, a triangle packing bound, a lattice pin-moving
//! optimisation, gcd-perfect sets and a cyclic nonlinear system.
//!
//! Verdicts that depend on geometry or number theory are computed exactly
//! (rationals, `Q(√3)`, integers). Floating point only appears inside the
//! two iterative numeric modules, [`rectconcur`] and [`cyclic`], whose
//! results are certified by residual thresholds.

pub mod cyclic;
pub mod funceq;
pub mod gcdperfect;
pub mod kernel;
pub mod pinopt;
pub mod rectconcur;
pub mod tripack;

pub use kernel::{ExactScalar, Factorization, LatticePoint, QSqrt3};
