//! Gamma, log-Gamma and digamma for positive real arguments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{GelfandError, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `Γ`, `ln Γ` and `ψ` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaEval {
    pub x: f64,
    pub gamma: f64,
    pub lgamma: f64,
    pub digamma: f64,
}

impl GammaEval {
    pub fn at(x: f64) -> Result<Self> {
        Ok(GammaEval {
            x,
            gamma: gamma(x)?,
            lgamma: lgamma(x)?,
            digamma: digamma(x)?,
        })
    }
}

fn check_positive(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(GelfandError::domain("x", x, "need a finite x > 0"));
    }
    Ok(())
}

/// `(ln t, sum)` pieces of the Lanczos formula for `Γ(x)`, `x ≥ 0.5`.
fn lanczos_parts(x: f64) -> (f64, f64) {
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    ((z + 0.5) * t.ln() - t, sum)
}

/// `ln Γ(x)` for `x > 0`.
pub fn lgamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    if x < 0.5 {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx)
        let (lt, sum) = lanczos_parts(1.0 - x);
        let lg1mx = LN_SQRT_2PI + lt + sum.ln();
        return Ok(PI.ln() - (PI * x).sin().ln() - lg1mx);
    }
    let (lt, sum) = lanczos_parts(x);
    Ok(LN_SQRT_2PI + lt + sum.ln())
}

/// `Γ(x)` for `0 < x ≤ 170`.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    if x > 170.0 {
        return Err(GelfandError::Overflow(x));
    }
    if x < 0.5 {
        return Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?));
    }
    let (lt, sum) = lanczos_parts(x);
    Ok((LN_SQRT_2PI + lt).exp() * sum)
}

/// `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`: upward recurrence to `x ≥ 6`, then the
/// asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < 6.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k}/(2k) up to x^-14
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 * inv - series)
}

/// `G(p, N) = Γ(p+1+N(p-1)/p) / (Γ(p+1) Γ(2+N(p-1)/p))`, the factor that
/// turns the lower bound on `λ_p*` into the upper one.
pub fn g_factor(p: f64, dim: usize) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(GelfandError::domain("p", p, "need p > 1"));
    }
    if dim == 0 {
        return Err(GelfandError::InvalidInput(
            "dimension N must be >= 1".into(),
        ));
    }
    let c = dim as f64 * (p - 1.0) / p;
    Ok((lgamma(p + 1.0 + c)? - lgamma(p + 1.0)? - lgamma(2.0 + c)?).exp())
}
