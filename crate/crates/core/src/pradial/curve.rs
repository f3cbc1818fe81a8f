use rayon::prelude::*;
use serde::Serialize;

use super::shoot::{lambda_of_alpha, shoot_lambda, ShotResult};
use super::{IvpControls, RadialProblem};
use crate::error::{GelfandError, Result};
use crate::fmt_f64;
use crate::numerics::roots::{brent, golden_max, RootTol};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub alpha: f64,
    /// `NaN` when the sample failed.
    pub lambda: f64,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationCurve {
    pub dim: usize,
    pub p: f64,
    pub family: String,
    pub samples: Vec<CurveSample>,
    pub lambda_star: f64,
    pub alpha_star: f64,
}

impl BifurcationCurve {
    /// Samples below `α*`: the increasing branch of minimal solutions.
    pub fn lower_branch(&self) -> impl Iterator<Item = &CurveSample> {
        self.samples
            .iter()
            .filter(move |s| s.converged && s.alpha < self.alpha_star)
    }

    /// CSV with header `alpha,lambda,converged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,lambda,converged\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(s.alpha),
                fmt_f64(s.lambda),
                s.converged
            ));
        }
        out
    }
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    grid
}

fn sample_all(problem: &RadialProblem, alphas: &[f64], ctl: &IvpControls) -> Vec<CurveSample> {
    // collect keeps input order whatever the worker count
    alphas
        .par_iter()
        .map(|&alpha| match lambda_of_alpha(problem, alpha, ctl) {
            Ok(lambda) => CurveSample {
                alpha,
                lambda,
                converged: true,
                error: None,
            },
            Err(e) => CurveSample {
                alpha,
                lambda: f64::NAN,
                converged: false,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn argmax(samples: &[CurveSample]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in samples.iter().enumerate() {
        if s.converged && best.is_none_or(|b| s.lambda > samples[b].lambda) {
            best = Some(i);
        }
    }
    best
}

/// Golden-section on `α ↦ λ(α)` between the neighbours of the grid argmax.
fn refine(
    problem: &RadialProblem,
    samples: &[CurveSample],
    at: usize,
    ctl: &IvpControls,
) -> Result<(f64, f64)> {
    let lo = samples[at.saturating_sub(1)].alpha;
    let hi = samples[(at + 1).min(samples.len() - 1)].alpha;
    if lo == hi {
        return Ok((samples[at].alpha, samples[at].lambda));
    }
    let (alpha, lambda) = golden_max(|a| lambda_of_alpha(problem, a, ctl), lo, hi, 1e-9, 0.0, 200)?;
    if lambda >= samples[at].lambda {
        Ok((alpha, lambda))
    } else {
        Ok((samples[at].alpha, samples[at].lambda))
    }
}

/// `λ(α)` on an increasing grid, with the refined maximum. Failed samples
/// are kept and marked.
pub fn bifurcation_curve(
    problem: &RadialProblem,
    alpha_grid: &[f64],
    ctl: &IvpControls,
) -> Result<BifurcationCurve> {
    ctl.validate()?;
    if alpha_grid.is_empty() || alpha_grid.windows(2).any(|w| w[0] >= w[1]) || alpha_grid[0] <= 0.0
    {
        return Err(GelfandError::InvalidInput(
            "alpha grid must be positive and increasing".into(),
        ));
    }
    let samples = sample_all(problem, alpha_grid, ctl);
    let at = argmax(&samples)
        .ok_or_else(|| GelfandError::NoSolution("every curve sample failed".into()))?;
    let (alpha_star, lambda_star) = refine(problem, &samples, at, ctl)?;
    Ok(BifurcationCurve {
        dim: problem.dim,
        p: problem.p,
        family: problem.model.id(),
        samples,
        lambda_star,
        alpha_star,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaStar {
    pub lambda_star: f64,
    pub alpha_star: f64,
    /// Largest `α` sampled before the running maximum settled.
    pub alpha_max: f64,
    pub samples: Vec<CurveSample>,
}

const DOUBLING_POINTS: usize = 16;
const MAX_DOUBLINGS: usize = 48;

/// Extremal value `λ_p* = max λ(α)`.
///
/// 64 log-spaced samples on `[ᾱ/64, 4ᾱ]` (ᾱ the maximizer of
/// `α^{p-1}/f(α)`), then `α_max` doubles until a doubling leaves the running
/// maximum unchanged, then golden-section around the grid argmax.
pub fn lambda_star(problem: &RadialProblem, ctl: &IvpControls) -> Result<LambdaStar> {
    problem.check_window()?;
    ctl.validate()?;
    let center = problem
        .model
        .maximize_fp(problem.p)
        .map(|fp| fp.alpha_bar)
        .unwrap_or(1.0);
    let top = (4.0 * center).min(problem.model.s_max());
    let mut samples = sample_all(problem, &log_grid(center / 64.0, top, 64), ctl);
    let mut best = argmax(&samples)
        .ok_or_else(|| GelfandError::NoSolution("every curve sample failed".into()))?;
    let mut alpha_max = top;
    for _ in 0..MAX_DOUBLINGS {
        let next = (2.0 * alpha_max).min(problem.model.s_max());
        if next <= alpha_max {
            break;
        }
        let mut chunk = log_grid(alpha_max, next, DOUBLING_POINTS + 1);
        chunk.remove(0);
        samples.extend(sample_all(problem, &chunk, ctl));
        alpha_max = next;
        let now = argmax(&samples).unwrap();
        if samples[now].lambda <= samples[best].lambda {
            break;
        }
        best = now;
    }
    let (alpha_star, lambda_star) = refine(problem, &samples, best, ctl)?;
    Ok(LambdaStar {
        lambda_star,
        alpha_star,
        alpha_max,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalBranch {
    pub lambda: f64,
    pub alpha_min: f64,
    pub shot: ShotResult,
}

const BRANCH_SCAN: usize = 256;

/// Smallest `α` with `λ(α) = λ`: a 256-point log scan of `(0, α*]` from a
/// start where `λ(α) < λ` is guaranteed, then Brent on the first crossing.
pub fn minimal_branch(
    problem: &RadialProblem,
    lambda: f64,
    ctl: &IvpControls,
) -> Result<MinimalBranch> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(GelfandError::domain("lambda", lambda, "need lambda > 0"));
    }
    let star = lambda_star(problem, ctl)?;
    if lambda >= star.lambda_star {
        return Err(GelfandError::NoSolution(format!(
            "lambda = {lambda} is not below lambda_p* = {}",
            star.lambda_star
        )));
    }
    // λ(α) ≤ N (α p/(p-1))^{p-1}/f(0); start where that bound is λ/2
    let p = problem.p;
    let lo = (p - 1.0) / p
        * ((lambda * problem.model.f0() / (2.0 * problem.dim as f64)).ln() / (p - 1.0)).exp();
    let lo = lo.max(1e-300);
    let grid = log_grid(lo, star.alpha_star, BRANCH_SCAN);
    let samples = sample_all(problem, &grid, ctl);
    let mut prev: Option<&CurveSample> = None;
    for s in &samples {
        if !s.converged {
            return Err(GelfandError::NoSolution(format!(
                "branch scan failed at alpha = {}: {}",
                s.alpha,
                s.error.as_deref().unwrap_or("")
            )));
        }
        if s.lambda >= lambda {
            let Some(a) = prev else {
                return Err(GelfandError::Bracketing(format!(
                    "lambda({}) = {} already exceeds {lambda}",
                    s.alpha, s.lambda
                )));
            };
            let alpha_min = brent(
                |x| Ok(lambda_of_alpha(problem, x, ctl)? - lambda),
                a.alpha,
                s.alpha,
                RootTol {
                    xtol: 1e-13 * a.alpha,
                    ..RootTol::default()
                },
            )?;
            let shot = shoot_lambda(problem, alpha_min, ctl)?;
            return Ok(MinimalBranch {
                lambda,
                alpha_min,
                shot,
            });
        }
        prev = Some(s);
    }
    Err(GelfandError::NoSolution(format!(
        "no crossing of lambda = {lambda} below alpha*"
    )))
}

/// Number of sign changes of `λ(α) - λ` over `n` log-spaced `α` in
/// `[lo, hi]`.
pub fn count_solutions(
    problem: &RadialProblem,
    lambda: f64,
    lo: f64,
    hi: f64,
    n: usize,
    ctl: &IvpControls,
) -> Result<usize> {
    let samples = sample_all(problem, &log_grid(lo, hi, n), ctl);
    if let Some(bad) = samples.iter().find(|s| !s.converged) {
        return Err(GelfandError::NoSolution(format!(
            "sample at alpha = {} failed: {}",
            bad.alpha,
            bad.error.as_deref().unwrap_or("")
        )));
    }
    Ok(samples
        .windows(2)
        .filter(|w| (w[0].lambda - lambda).signum() != (w[1].lambda - lambda).signum())
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Nonlinearity;

    #[test]
    fn bratu_extremal_value() {
        let prob = RadialProblem::new(1, 2.0, Nonlinearity::Exponential).unwrap();
        let star = lambda_star(&prob, &IvpControls::default()).unwrap();
        assert!((star.lambda_star - 0.878_457_679_78).abs() < 1e-8);
        assert!((star.alpha_star - 1.186_842).abs() < 1e-4);
    }

    #[test]
    fn curve_with_refined_max() {
        let prob = RadialProblem::new(1, 2.0, Nonlinearity::Exponential).unwrap();
        let curve =
            bifurcation_curve(&prob, &log_grid(0.1, 8.0, 40), &IvpControls::default()).unwrap();
        assert!((curve.lambda_star - 0.878_457_68).abs() < 1e-7);
        assert!(curve.lower_branch().count() > 10);
        let lower: Vec<f64> = curve.lower_branch().map(|s| s.lambda).collect();
        assert!(lower.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn window_enforced() {
        let prob = RadialProblem::new(11, 2.0, Nonlinearity::Exponential).unwrap();
        assert!(matches!(
            lambda_star(&prob, &IvpControls::default()),
            Err(GelfandError::Window { .. })
        ));
    }

    #[test]
    fn minimal_branch_matches_bratu() {
        let prob = RadialProblem::new(1, 2.0, Nonlinearity::Exponential).unwrap();
        let mb = minimal_branch(&prob, 0.8, &IvpControls::default()).unwrap();
        assert!((mb.alpha_min - 0.746_458_908_0).abs() < 1e-6);
        assert!(mb.shot.accepted);
        assert!(minimal_branch(&prob, 0.9, &IvpControls::default()).is_err());
    }

    #[test]
    fn exactly_two_bratu_solutions() {
        let prob = RadialProblem::new(1, 2.0, Nonlinearity::Exponential).unwrap();
        assert_eq!(
            count_solutions(&prob, 0.5, 1e-6, 20.0, 400, &IvpControls::default()).unwrap(),
            2
        );
    }
}
