//! Radial p-Laplacian Gelfand problem on the unit ball, `1 < p ≤ 4`.
//!
//! Radial solutions `u(x) = v(|x|)` solve the first-order system
//!
//! ```text
//! v' = sign(w)|w|^{1/(p-1)},   w' = -((N-1)/r) w - λ f(v),
//! v(0) = α,  w(0) = 0,  v(1) = 0,
//! ```
//!
//! with `w = |v'|^{p-2} v'`. For every sup-norm `α > 0` there is exactly one
//! `λ(α)`. A solution of the initial value problem at any `λ₀` with first
//! zero `R₀` rescales to the unit ball with `λ = λ₀ R₀^p`, which is how
//! [`lambda_of_alpha`] evaluates the curve.

mod bounds;
mod checks;
mod curve;
mod ivp;
mod shoot;

use serde::Serialize;

use crate::error::{GelfandError, Result};
use crate::nonlinearity::Nonlinearity;

pub use bounds::{bounds, bounds_csv, BoundsReport};
pub use checks::{continuum_lambda, energy_trace, integral_residual, EnergyTrace};
pub use curve::{
    bifurcation_curve, count_solutions, lambda_star, log_grid, minimal_branch, BifurcationCurve,
    CurveSample, LambdaStar, MinimalBranch,
};
pub use ivp::{integrate_ivp, profile_mesh, RadialProfile};
pub use shoot::{
    lambda_of_alpha, shoot_lambda, shoot_lambda_bracketed, terminal_value, ShotResult,
};

/// Smallest supported `p`. Below it the exponent `1/(p-1)` exceeds 100.
pub const P_MIN: f64 = 1.01;
pub const P_MAX: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProblem {
    pub dim: usize,
    pub p: f64,
    pub model: Nonlinearity,
}

impl RadialProblem {
    pub fn new(dim: usize, p: f64, model: Nonlinearity) -> Result<Self> {
        if dim < 1 {
            return Err(GelfandError::InvalidInput(
                "dimension must be at least 1".into(),
            ));
        }
        if !(P_MIN..=P_MAX).contains(&p) {
            return Err(GelfandError::domain(
                "p",
                p,
                format!("supported range is [{P_MIN}, {P_MAX}]"),
            ));
        }
        Ok(RadialProblem { dim, p, model })
    }

    /// `p' = p/(p-1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// `(p² + 3p)/(p - 1)`; bounded extremal solutions need `N` below it.
    pub fn window_limit(&self) -> f64 {
        (self.p * self.p + 3.0 * self.p) / (self.p - 1.0)
    }

    pub fn in_window(&self) -> bool {
        (self.dim as f64) < self.window_limit()
    }

    pub fn check_window(&self) -> Result<()> {
        if self.in_window() {
            Ok(())
        } else {
            Err(GelfandError::Window {
                dim: self.dim,
                p: self.p,
                limit: self.window_limit(),
            })
        }
    }

    /// `p^{p-1}(N - p)`, the line the curve oscillates around when `p < N`.
    pub fn singular_level(&self) -> f64 {
        self.p.powf(self.p - 1.0) * (self.dim as f64 - self.p)
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(GelfandError::domain("alpha", alpha, "need alpha > 0"));
        }
        if alpha > self.model.s_max() {
            return Err(GelfandError::domain(
                "alpha",
                alpha,
                format!("beyond the nonlinearity range {}", self.model.s_max()),
            ));
        }
        Ok(())
    }
}

/// Numerical controls shared by the integrator and the quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct IvpControls {
    pub rtol: f64,
    /// Absolute tolerance, scaled by `α` for `v` and by `max |w|` for `w`.
    pub atol: f64,
    /// Largest radius at which the series start is used.
    pub r0: f64,
    pub mesh_points: usize,
    pub mesh_power: f64,
    pub max_steps: usize,
}

impl Default for IvpControls {
    fn default() -> Self {
        IvpControls {
            rtol: 1e-10,
            atol: 1e-10,
            r0: 1e-4,
            mesh_points: 4096,
            mesh_power: 1.5,
            max_steps: 500_000,
        }
    }
}

impl IvpControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol < 1e-2) {
            return Err(GelfandError::domain(
                "rtol",
                self.rtol,
                "need 0 < rtol < 1e-2",
            ));
        }
        if !(self.atol > 0.0 && self.atol < 1e-2) {
            return Err(GelfandError::domain(
                "atol",
                self.atol,
                "need 0 < atol < 1e-2",
            ));
        }
        if !(self.r0 > 0.0 && self.r0 < 0.1) {
            return Err(GelfandError::domain("r0", self.r0, "need 0 < r0 < 0.1"));
        }
        if self.mesh_points < 16 {
            return Err(GelfandError::InvalidInput(
                "mesh needs at least 16 points".into(),
            ));
        }
        if !(self.mesh_power >= 1.0 && self.mesh_power <= 4.0) {
            return Err(GelfandError::domain(
                "mesh_power",
                self.mesh_power,
                "need 1 <= power <= 4",
            ));
        }
        Ok(())
    }
}
