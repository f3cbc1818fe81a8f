use serde::Serialize;

use super::checks::continuum_lambda;
use super::ivp::{check_lambda, control, integrate_ivp, series_start, system, RadialProfile};
use super::{IvpControls, RadialProblem};
use crate::error::{GelfandError, Result};
use crate::numerics::ode::{integrate, State};
use crate::numerics::roots::{brent, RootTol};

/// Comparison values bracketing `λ(α)`. Since `f(0) ≤ f(v) ≤ f(α)` along the
/// profile, `λ_low(α) = N (α p/(p-1))^{p-1}/f(α)` gives `v(1) ≥ 0` and
/// `λ_high(α)`, the same with `f(0)`, gives `v(1) ≤ 0`.
fn comparison_bracket(problem: &RadialProblem, alpha: f64) -> Result<(f64, f64)> {
    let p = problem.p;
    let log_core = (problem.dim as f64).ln() + (p - 1.0) * (alpha * p / (p - 1.0)).ln();
    let low = (log_core - problem.model.f(alpha)?.ln()).exp();
    let high = (log_core - problem.model.f0().ln()).exp();
    Ok((low, high))
}

/// First zero of `v` for the initial value problem at `λ`, on `(0, ∞)`.
fn first_zero(problem: &RadialProblem, lambda: f64, alpha: f64, ctl: &IvpControls) -> Result<f64> {
    let start = series_start(problem, lambda, alpha, ctl.r0)?;
    let mut rhs = system(problem, lambda);
    let run = integrate(
        &mut rhs,
        (start.r0, start.state),
        1e150,
        &[],
        &control(ctl, alpha, start.r0),
        Some(|y: &State| y[0]),
    )?;
    run.event
        .map(|(r, _)| r)
        .ok_or_else(|| GelfandError::NoSolution(format!("v never vanishes for alpha = {alpha}")))
}

/// `λ(α)` by rescaling: integrate at `λ₀ = λ_low(α)` (first zero `R₀ ≥ 1`)
/// and return `λ₀ R₀^p`.
pub fn lambda_of_alpha(problem: &RadialProblem, alpha: f64, ctl: &IvpControls) -> Result<f64> {
    ctl.validate()?;
    problem.check_alpha(alpha)?;
    let (lambda0, _) = comparison_bracket(problem, alpha)?;
    let r0 = first_zero(problem, lambda0, alpha, ctl)?;
    Ok(lambda0 * r0.powf(problem.p))
}

/// `v(1)` for the initial value problem at `λ`.
pub fn terminal_value(
    problem: &RadialProblem,
    lambda: f64,
    alpha: f64,
    ctl: &IvpControls,
) -> Result<f64> {
    check_lambda(lambda)?;
    problem.check_alpha(alpha)?;
    let start = series_start(problem, lambda, alpha, ctl.r0)?;
    let mut rhs = system(problem, lambda);
    let run = integrate(
        &mut rhs,
        (start.r0, start.state),
        1.0,
        &[],
        &control(ctl, alpha, start.r0),
        None::<fn(&State) -> f64>,
    )?;
    Ok(run.end.1[0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotResult {
    pub lambda: f64,
    pub profile: RadialProfile,
    /// `v(1)` of the returned profile.
    pub v1_residual: f64,
    /// `λ` recomputed from the profile through the integral parameterization.
    pub continuum_lambda: f64,
    /// `|v(1)| ≤ 1e-9 α` and the parameterization agrees to `1e-6`.
    pub accepted: bool,
}

fn v1_tolerance(alpha: f64) -> f64 {
    1e-9 * alpha
}

/// Root of `λ ↦ v(1; λ)` on the profile mesh from a starting guess,
/// bracketing outward by factors of ten in the relative step.
fn polish(problem: &RadialProblem, guess: f64, alpha: f64, ctl: &IvpControls) -> Result<f64> {
    let g = |lambda: f64| Ok(integrate_ivp(problem, lambda, alpha, ctl)?.v_at_one());
    let g0 = g(guess)?;
    if g0.abs() <= 0.1 * v1_tolerance(alpha) {
        return Ok(guess);
    }
    // v(1; λ) decreases in λ
    let dir = if g0 > 0.0 { 1.0 } else { -1.0 };
    let mut step = 1e-10;
    let mut other = guess;
    for _ in 0..12 {
        other = guess * (1.0 + dir * step);
        if g(other)? * g0 <= 0.0 {
            break;
        }
        step *= 10.0;
    }
    let (a, b) = if guess < other {
        (guess, other)
    } else {
        (other, guess)
    };
    brent(
        g,
        a,
        b,
        RootTol {
            ftol: 0.1 * v1_tolerance(alpha),
            rtol: 4.0 * f64::EPSILON,
            ..RootTol::default()
        },
    )
}

fn finish(
    problem: &RadialProblem,
    lambda: f64,
    alpha: f64,
    ctl: &IvpControls,
) -> Result<ShotResult> {
    let profile = integrate_ivp(problem, lambda, alpha, ctl)?;
    let v1 = profile.v_at_one();
    let cont = continuum_lambda(&profile, &problem.model)?;
    let accepted = v1.abs() <= v1_tolerance(alpha) && ((cont - lambda) / lambda).abs() <= 1e-6;
    Ok(ShotResult {
        lambda,
        profile,
        v1_residual: v1,
        continuum_lambda: cont,
        accepted,
    })
}

/// The unique `λ` with `v(1) = 0` for sup-norm `α`, with its profile.
///
/// `λ` comes from [`lambda_of_alpha`]; if the profile integrated at that `λ`
/// misses `|v(1)| ≤ 1e-9 α` it is polished by Brent on `v(1; λ)`.
pub fn shoot_lambda(problem: &RadialProblem, alpha: f64, ctl: &IvpControls) -> Result<ShotResult> {
    let guess = lambda_of_alpha(problem, alpha, ctl)?;
    let first = finish(problem, guess, alpha, ctl)?;
    if first.v1_residual.abs() <= 0.5 * v1_tolerance(alpha) {
        return Ok(first);
    }
    let lambda = polish(problem, guess, alpha, ctl)?;
    finish(problem, lambda, alpha, ctl)
}

/// Cross-check route: Brent on `log λ ↦ v(1; λ)` over the comparison
/// bracket `[λ_low(α), λ_high(α)]`, without rescaling.
pub fn shoot_lambda_bracketed(
    problem: &RadialProblem,
    alpha: f64,
    ctl: &IvpControls,
) -> Result<ShotResult> {
    ctl.validate()?;
    problem.check_alpha(alpha)?;
    let (low, high) = comparison_bracket(problem, alpha)?;
    let g = |t: f64| terminal_value(problem, t.exp(), alpha, ctl);
    let (ga, gb) = (g(low.ln())?, g(high.ln())?);
    if ga * gb > 0.0 {
        return Err(GelfandError::Bracketing(format!(
            "v(1) has one sign on [{low}, {high}] for alpha = {alpha}: {ga}, {gb}"
        )));
    }
    let t = brent(
        g,
        low.ln(),
        high.ln(),
        RootTol {
            ftol: 0.1 * v1_tolerance(alpha),
            xtol: 1e-15,
            ..RootTol::default()
        },
    )?;
    finish(problem, t.exp(), alpha, ctl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Nonlinearity;

    fn bratu(alpha: f64) -> f64 {
        // closed form for N = 1, p = 2, f = e^u
        2.0 * (alpha / 2.0).exp().acosh().powi(2) * (-alpha).exp()
    }

    #[test]
    fn bratu_roots_reproduce_lambda() {
        let prob = RadialProblem::new(1, 2.0, Nonlinearity::Exponential).unwrap();
        let ctl = IvpControls::default();
        for &alpha in &[0.746_458_908_0, 1.770_569_562_9] {
            let shot = shoot_lambda(&prob, alpha, &ctl).unwrap();
            assert!((shot.lambda - 0.8).abs() < 1e-6, "{}", shot.lambda);
            assert!(shot.accepted);
        }
        for &alpha in &[0.1, 1.0, 3.0, 8.0] {
            let l = lambda_of_alpha(&prob, alpha, &ctl).unwrap();
            assert!(
                (l - bratu(alpha)).abs() < 1e-8 * bratu(alpha),
                "alpha = {alpha}"
            );
        }
    }

    #[test]
    fn routes_agree() {
        let ctl = IvpControls::default();
        for &(dim, p, alpha) in &[
            (2usize, 1.5, 0.7),
            (3, 2.0, 4.0),
            (2, 1.1, 0.05),
            (1, 3.0, 2.0),
        ] {
            let prob = RadialProblem::new(dim, p, Nonlinearity::Exponential).unwrap();
            let a = shoot_lambda(&prob, alpha, &ctl).unwrap();
            let b = shoot_lambda_bracketed(&prob, alpha, &ctl).unwrap();
            assert!(
                ((a.lambda - b.lambda) / a.lambda).abs() < 1e-7,
                "{dim} {p} {alpha}"
            );
            assert!(a.accepted && b.accepted);
        }
    }

    #[test]
    fn small_alpha_branch_increases() {
        let prob = RadialProblem::new(2, 2.0, Nonlinearity::Exponential).unwrap();
        let ctl = IvpControls::default();
        let l1 = lambda_of_alpha(&prob, 1e-3, &ctl).unwrap();
        let l2 = lambda_of_alpha(&prob, 2e-3, &ctl).unwrap();
        assert!((l1 - 0.003_997).abs() < 1e-6);
        assert!((l2 - 0.007_988).abs() < 1e-6);
        assert!(l1 < l2);
    }

    #[test]
    fn joseph_lundgren_regime() {
        let prob = RadialProblem::new(3, 2.0, Nonlinearity::Exponential).unwrap();
        let shot = shoot_lambda(&prob, 10.0, &IvpControls::default()).unwrap();
        assert!((shot.lambda - 2.0432).abs() < 1e-3);
        assert!((shot.lambda - 2.0).abs() < 0.5);
    }
}
