use serde::Serialize;

use super::RadialProblem;
use crate::error::Result;
use crate::fmt_f64;
use crate::nonlinearity::FpProfile;
use crate::specfun::g_factor;

/// Analytic enclosure of `λ_p*`:
/// `lower = N (p/(p-1))^{p-1} F_p(ᾱ)` and `upper = λ_{1,p}^+ F_p(ᾱ)`, where
/// `λ_{1,p}^+ = N (p/(p-1))^{p-1} G(p, N)` bounds the first eigenvalue of the
/// p-Laplacian on the ball from above.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub dim: usize,
    pub p: f64,
    pub family: String,
    pub lower: f64,
    pub upper: f64,
    pub eigen_upper: f64,
    pub fp: FpProfile,
    pub computed_lambda_star: Option<f64>,
}

impl BoundsReport {
    pub fn with_computed(mut self, lambda_star: f64) -> Self {
        self.computed_lambda_star = Some(lambda_star);
        self
    }

    /// `lower ≤ λ_p* ≤ upper` up to a relative slack.
    pub fn sandwich_holds(&self, rel_slack: f64) -> Option<bool> {
        self.computed_lambda_star
            .map(|l| l >= self.lower * (1.0 - rel_slack) && l <= self.upper * (1.0 + rel_slack))
    }
}

pub fn bounds(problem: &RadialProblem) -> Result<BoundsReport> {
    let p = problem.p;
    let fp = problem.model.maximize_fp(p)?;
    let n = problem.dim as f64;
    let base = n * (p / (p - 1.0)).powf(p - 1.0);
    let eigen_upper = base * g_factor(p, problem.dim)?;
    Ok(BoundsReport {
        dim: problem.dim,
        p,
        family: problem.model.id(),
        lower: base * fp.fp_max,
        upper: eigen_upper * fp.fp_max,
        eigen_upper,
        fp,
        computed_lambda_star: None,
    })
}

/// CSV with header `N,p,family,lower,upper,computed`.
pub fn bounds_csv(reports: &[BoundsReport]) -> String {
    let mut out = String::from("N,p,family,lower,upper,computed\n");
    for b in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.dim,
            fmt_f64(b.p),
            b.family,
            fmt_f64(b.lower),
            fmt_f64(b.upper),
            b.computed_lambda_star.map(fmt_f64).unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Nonlinearity;

    #[test]
    fn exponential_examples() {
        let b = bounds(&RadialProblem::new(3, 2.0, Nonlinearity::Exponential).unwrap()).unwrap();
        assert!((b.lower - 6.0 / std::f64::consts::E).abs() < 1e-10);
        assert!((b.upper - 1.75 * 6.0 / std::f64::consts::E).abs() < 1e-10);
        assert!((b.lower - 2.207_277).abs() < 1e-6);
        assert!((b.upper - 3.862_735).abs() < 1e-6);
    }

    #[test]
    fn power_example() {
        let b = bounds(&RadialProblem::new(1, 2.0, Nonlinearity::power(2.0).unwrap()).unwrap())
            .unwrap();
        assert!((b.lower - 0.5).abs() < 1e-10);
        assert!((b.upper - 0.625).abs() < 1e-10);
    }

    #[test]
    fn bounds_pinch_to_n_as_p_to_one() {
        let b = bounds(&RadialProblem::new(2, 1.01, Nonlinearity::Exponential).unwrap()).unwrap();
        assert!((b.lower - 2.0).abs() < 0.02);
        assert!((b.upper - 2.0).abs() < 0.02);
        let wide =
            bounds(&RadialProblem::new(2, 1.05, Nonlinearity::Exponential).unwrap()).unwrap();
        assert!((wide.lower - 1.907_105_578_5).abs() < 1e-8);
        assert!((wide.upper - 1.912_717_490_9).abs() < 1e-8);
    }

    #[test]
    fn slow_power_rejected() {
        let prob = RadialProblem::new(2, 3.0, Nonlinearity::power(1.5).unwrap()).unwrap();
        assert!(bounds(&prob).is_err());
    }
}
