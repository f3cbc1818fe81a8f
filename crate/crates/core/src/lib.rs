//! Gelfand problems `-Δ_p u = λ f(u)` on intervals and balls.
//!
//! The crate covers two regimes:
//!
//! - `p = 1`: every solution of the 1-Laplacian problem on a finite union of
//!   intervals ([`one_dim`]) and every radial solution on the unit ball
//!   ([`radial1`]) is built in closed form, together with its vector field
//!   `z` and validators for `|z| ≤ 1`, `-div z = λ f(u)` and the boundary sign
//!   condition.
//! - `p > 1`: the radial problem is solved by shooting ([`pradial`]). This gives
//!   the bifurcation curve `λ(α)`, the extremal value `λ_p*`, the minimal
//!   branch and the Gamma-function bounds on `λ_p*`.
//!
//! [`asymptotics`] ties the two together: sweeps in `p → 1`, the jump-condition
//! selector that picks the 1-Laplacian solutions reachable as limits, and the
//! bifurcation diagrams (CSV + SVG).
//!
//! ```
//! use gelfand_core::{Nonlinearity, pradial::{bounds, RadialProblem}};
//!
//! let problem = RadialProblem::new(3, 2.0, Nonlinearity::Exponential).unwrap();
//! let report = bounds(&problem).unwrap();
//! assert!((report.lower - 6.0 / std::f64::consts::E).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod nonlinearity;
pub mod numerics;
pub mod one_dim;
pub mod pradial;
pub mod radial1;
pub mod specfun;

pub use error::{GelfandError, Result};
pub use nonlinearity::{FpProfile, MonotoneTable, Nonlinearity};

/// Formats a float with 17 significant digits, the precision used by every
/// CSV and JSON artifact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
