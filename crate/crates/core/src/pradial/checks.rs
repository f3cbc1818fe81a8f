use serde::Serialize;

use super::ivp::RadialProfile;
use crate::error::Result;
use crate::nonlinearity::Nonlinearity;
use crate::numerics::quadrature::cumulative_simpson;

/// `t^{1-N} ∫₀ᵗ s^{N-1} f(v(s)) ds` on the profile mesh (zero at `t = 0`).
fn mass_profile(profile: &RadialProfile, model: &Nonlinearity) -> Result<Vec<f64>> {
    let bend = profile.dim as i32 - 1;
    let integrand = profile
        .r
        .iter()
        .zip(&profile.v)
        .map(|(&s, &v)| Ok(s.powi(bend) * model.f_clamped(v)?))
        .collect::<Result<Vec<f64>>>()?;
    let cumulative = cumulative_simpson(&profile.r, &integrand);
    Ok(profile
        .r
        .iter()
        .zip(&cumulative)
        .map(|(&t, &m)| if t == 0.0 { 0.0 } else { m / t.powi(bend) })
        .collect())
}

/// `x^{1/(p-1)}` in log space with `x` clamped below at `1e-300`.
fn root_power(x: f64, p: f64) -> f64 {
    (x.max(1e-300).ln() / (p - 1.0)).exp()
}

/// `λ` from the integral parameterization
/// `λ = α^{p-1} (∫₀¹ (t^{1-N}∫₀ᵗ s^{N-1} f(v) ds)^{1/(p-1)} dt)^{1-p}`.
pub fn continuum_lambda(profile: &RadialProfile, model: &Nonlinearity) -> Result<f64> {
    let p = profile.p;
    let mass = mass_profile(profile, model)?;
    let outer: Vec<f64> = mass.iter().map(|&m| root_power(m, p)).collect();
    let total = *cumulative_simpson(&profile.r, &outer).last().unwrap();
    Ok(((p - 1.0) * (profile.alpha.ln() - total.ln())).exp())
}

/// `sup_i |v(r_i) - ∫_{r_i}^1 (λ t^{1-N} ∫₀ᵗ s^{N-1} f(v) ds)^{1/(p-1)} dt|`,
/// both integrals by cumulative Simpson on the profile mesh.
pub fn integral_residual(profile: &RadialProfile, model: &Nonlinearity) -> Result<f64> {
    let p = profile.p;
    let mass = mass_profile(profile, model)?;
    let outer: Vec<f64> = mass
        .iter()
        .map(|&m| root_power(profile.lambda * m, p))
        .collect();
    let cumulative = cumulative_simpson(&profile.r, &outer);
    let total = *cumulative.last().unwrap();
    Ok(profile
        .v
        .iter()
        .zip(&cumulative)
        .map(|(&v, &c)| (v - (total - c)).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub r: Vec<f64>,
    pub energy: Vec<f64>,
    /// Central differences of `E` at interior nodes (zero at the ends).
    pub slope_fd: Vec<f64>,
    /// `-((N-1)/r)|w|^{p'}`.
    pub slope_exact: Vec<f64>,
    /// `max(E(r_{i+1}) - E(r_i), 0)`.
    pub max_increase: f64,
    /// `max |E(r_i) - E(0)|`.
    pub max_drift: f64,
    /// `max |slope_fd - slope_exact| / max |slope_exact|` over interior nodes
    /// away from both ends; zero when the exact slope vanishes identically.
    pub slope_mismatch: f64,
}

/// Energy `E = |w|^{p'}/p' + λF(v)` along the profile and its decay law
/// `dE/dr = -((N-1)/r)|w|^{p'}`.
pub fn energy_trace(profile: &RadialProfile) -> EnergyTrace {
    let n = profile.r.len();
    let conj = profile.p / (profile.p - 1.0);
    let bend = profile.dim as f64 - 1.0;
    let r = &profile.r;
    let e = &profile.energy;
    let slope_exact: Vec<f64> = (0..n)
        .map(|i| {
            if r[i] == 0.0 || bend == 0.0 || profile.w[i] == 0.0 {
                0.0
            } else {
                -bend / r[i] * (conj * profile.w[i].abs().ln()).exp()
            }
        })
        .collect();
    let mut slope_fd = vec![0.0; n];
    for i in 1..n - 1 {
        // second-order central difference on a non-uniform mesh
        let h0 = r[i] - r[i - 1];
        let h1 = r[i + 1] - r[i];
        slope_fd[i] =
            (h0 * h0 * (e[i + 1] - e[i]) + h1 * h1 * (e[i] - e[i - 1])) / (h0 * h1 * (h0 + h1));
    }
    let max_increase = e.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let max_drift = e.iter().map(|x| (x - e[0]).abs()).fold(0.0, f64::max);
    let scale = slope_exact.iter().map(|s| s.abs()).fold(0.0, f64::max);
    let lo = n / 64;
    let slope_mismatch = if scale == 0.0 {
        0.0
    } else {
        (lo.max(1)..n - 1)
            .map(|i| (slope_fd[i] - slope_exact[i]).abs())
            .fold(0.0, f64::max)
            / scale
    };
    EnergyTrace {
        r: r.clone(),
        energy: e.clone(),
        slope_fd,
        slope_exact,
        max_increase,
        max_drift,
        slope_mismatch,
    }
}
