use serde::Serialize;

use super::{IvpControls, RadialProblem};
use crate::error::{GelfandError, Result};
use crate::fmt_f64;
use crate::numerics::ode::{integrate, Control, State};
use crate::radial1::RadialShape;

/// A sampled solution of the shooting system on a mesh of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub dim: usize,
    pub p: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    /// `w = |v'|^{p-2} v'`.
    pub w: Vec<f64>,
    /// `|w|^{p'}/p' + λ F(v)`.
    pub energy: Vec<f64>,
    /// First radius where `v` reaches zero before `r = 1`, if any.
    pub crossing: Option<f64>,
}

impl RadialProfile {
    pub fn v_at_one(&self) -> f64 {
        *self.v.last().unwrap()
    }

    /// CSV with header `r,v,w,E`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,v,w,E\n");
        for i in 0..self.r.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(self.r[i]),
                fmt_f64(self.v[i]),
                fmt_f64(self.w[i]),
                fmt_f64(self.energy[i])
            ));
        }
        out
    }

    fn locate(&self, r: f64) -> (usize, f64) {
        let k = self
            .r
            .partition_point(|&x| x <= r)
            .clamp(1, self.r.len() - 1)
            - 1;
        let t = (r - self.r[k]) / (self.r[k + 1] - self.r[k]);
        (k, t)
    }
}

impl RadialShape for RadialProfile {
    fn value(&self, r: f64) -> Result<f64> {
        let (k, t) = self.locate(r);
        Ok(self.v[k] + t * (self.v[k + 1] - self.v[k]))
    }

    fn slope(&self, r: f64) -> Result<f64> {
        let (k, t) = self.locate(r);
        let w = self.w[k] + t * (self.w[k + 1] - self.w[k]);
        Ok(flux_to_slope(w, self.p))
    }

    fn jumps(&self) -> Result<Vec<(f64, f64, f64)>> {
        Ok(Vec::new())
    }
}

/// `sign(w)|w|^{1/(p-1)}`, powered in log space.
pub(crate) fn flux_to_slope(w: f64, p: f64) -> f64 {
    let mag = (w.abs().max(1e-300).ln() / (p - 1.0)).exp();
    if w < 0.0 {
        -mag
    } else if w > 0.0 {
        mag
    } else {
        0.0
    }
}

/// `|w|^{p'}/p'` in log space.
pub(crate) fn kinetic(w: f64, conj: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        (conj * w.abs().ln()).exp() / conj
    }
}

/// `ln` of the coefficient in the series `v ≈ α - coef r^{p'}`; the
/// coefficient itself overflows for large `α` and `p` near 1.
fn log_series_coef(problem: &RadialProblem, lambda: f64, f_alpha: f64) -> f64 {
    let p = problem.p;
    ((p - 1.0) / p).ln() + (lambda * f_alpha / problem.dim as f64).ln() / (p - 1.0)
}

/// Radius where the series drop `coef r^{p'}` equals one: the width of the
/// core where `v` stays close to `α`.
pub(crate) fn core_radius(problem: &RadialProblem, lambda: f64, alpha: f64) -> Result<f64> {
    let log_coef = log_series_coef(problem, lambda, problem.model.f(alpha)?);
    Ok((-log_coef / problem.conjugate()).exp().clamp(1e-300, 1e6))
}

/// Mesh of `[0, 1]` graded toward `0`: `t_i = (i/(n-1))^power` mapped through
/// `r = c (exp(t ln(1 + 1/c)) - 1)`. For a wide core `c` this is the plain
/// power grading; a narrow core adds logarithmic grading down to scale `c`.
pub fn profile_mesh(n: usize, power: f64, core: f64) -> Vec<f64> {
    let span = (1.0 / core).ln_1p();
    let mut mesh: Vec<f64> = (0..n)
        .map(|i| {
            let t = (i as f64 / (n - 1) as f64).powf(power);
            core * (t * span).exp_m1()
        })
        .collect();
    mesh[0] = 0.0;
    mesh[n - 1] = 1.0;
    mesh
}

pub(crate) struct Start {
    pub r0: f64,
    pub state: State,
    log_coef: f64,
    f_alpha: f64,
}

impl Start {
    /// Series values for `r ≤ r0`.
    pub fn at(&self, problem: &RadialProblem, lambda: f64, alpha: f64, r: f64) -> State {
        if r == 0.0 {
            return [alpha, 0.0];
        }
        let v = alpha - (self.log_coef + problem.conjugate() * r.ln()).exp();
        let w = -lambda * self.f_alpha * r / problem.dim as f64;
        [v, w]
    }
}

/// Series start, with `r0` shrunk until the drop is below `1e-8 min(α, 1)`.
pub(crate) fn series_start(
    problem: &RadialProblem,
    lambda: f64,
    alpha: f64,
    r0_max: f64,
) -> Result<Start> {
    let f_alpha = problem.model.f(alpha)?;
    let log_coef = log_series_coef(problem, lambda, f_alpha);
    let allowed = 1e-8 * alpha.min(1.0);
    let r_drop = ((allowed.ln() - log_coef) / problem.conjugate()).exp();
    let r0 = r0_max.min(r_drop);
    if !(r0 > 0.0) {
        return Err(GelfandError::StepUnderflow { r: 0.0, h: r0 });
    }
    let mut start = Start {
        r0,
        state: [0.0; 2],
        log_coef,
        f_alpha,
    };
    start.state = start.at(problem, lambda, alpha, r0);
    Ok(start)
}

pub(crate) fn control(ctl: &IvpControls, alpha: f64, h_init: f64) -> Control {
    Control {
        rtol: ctl.rtol,
        atol: [ctl.atol * alpha, ctl.atol],
        peak_relative: [false, true],
        max_steps: ctl.max_steps,
        h_init,
    }
}

/// Right-hand side of the shooting system, with `f` frozen at `f(0)` once
/// `v` goes negative.
pub(crate) fn system(
    problem: &RadialProblem,
    lambda: f64,
) -> impl FnMut(f64, &State) -> Result<State> + '_ {
    let p = problem.p;
    let bend = problem.dim as f64 - 1.0;
    move |r, y| {
        let dv = flux_to_slope(y[1], p);
        let dw = -bend / r * y[1] - lambda * problem.model.f_clamped(y[0])?;
        Ok([dv, dw])
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(GelfandError::domain("lambda", lambda, "need lambda > 0"));
    }
    Ok(())
}

/// Integrates the shooting system at fixed `(λ, α)` onto the profile mesh.
///
/// The mesh is graded to the core width of the solution, so large `α`
/// with a thin boundary layer near `0` stays resolved.
pub fn integrate_ivp(
    problem: &RadialProblem,
    lambda: f64,
    alpha: f64,
    ctl: &IvpControls,
) -> Result<RadialProfile> {
    ctl.validate()?;
    check_lambda(lambda)?;
    problem.check_alpha(alpha)?;
    let core = core_radius(problem, lambda, alpha)?;
    let mesh = profile_mesh(ctl.mesh_points, ctl.mesh_power, core);
    let start = series_start(problem, lambda, alpha, ctl.r0.min(0.5 * mesh[1]))?;

    let mut states = Vec::with_capacity(mesh.len());
    let first = mesh.partition_point(|&r| r <= start.r0);
    for &r in &mesh[..first] {
        states.push(start.at(problem, lambda, alpha, r));
    }
    let mut rhs = system(problem, lambda);
    let run = integrate(
        &mut rhs,
        (start.r0, start.state),
        1.0,
        &mesh[first..],
        &control(ctl, alpha, start.r0),
        None::<fn(&State) -> f64>,
    )?;
    states.extend(run.outputs.iter().map(|(_, y)| *y));
    debug_assert_eq!(states.len(), mesh.len());

    let conj = problem.conjugate();
    let mut v = Vec::with_capacity(mesh.len());
    let mut w = Vec::with_capacity(mesh.len());
    let mut energy = Vec::with_capacity(mesh.len());
    for y in &states {
        v.push(y[0]);
        w.push(y[1]);
        energy.push(kinetic(y[1], conj) + lambda * problem.model.F(y[0].max(0.0))?);
    }
    let crossing = (1..mesh.len())
        .find(|&i| v[i] <= 0.0 && v[i - 1] > 0.0)
        .and_then(|i| {
            if i == mesh.len() - 1 && v[i] == 0.0 {
                return None;
            }
            let t = v[i - 1] / (v[i - 1] - v[i]);
            Some(mesh[i - 1] + t * (mesh[i] - mesh[i - 1]))
        });
    Ok(RadialProfile {
        dim: problem.dim,
        p: problem.p,
        lambda,
        alpha,
        r: mesh,
        v,
        w,
        energy,
        crossing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Nonlinearity;

    #[test]
    fn mesh_shapes() {
        let plain = profile_mesh(5, 1.5, 1e6);
        for (i, r) in plain.iter().enumerate() {
            assert!((r - (i as f64 / 4.0).powf(1.5)).abs() < 1e-5);
        }
        let thin = profile_mesh(4096, 1.5, 1e-9);
        assert_eq!(thin[0], 0.0);
        assert_eq!(thin[4095], 1.0);
        assert!(thin[1] < 1e-9);
        assert!(thin.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn series_slope_at_origin() {
        let prob = RadialProblem::new(3, 1.7, Nonlinearity::Exponential).unwrap();
        let prof = integrate_ivp(&prob, 1.3, 0.8, &IvpControls::default()).unwrap();
        let target = -1.3 * 0.8f64.exp() / 3.0;
        for i in 1..6 {
            assert!((prof.w[i] / prof.r[i] - target).abs() < 1e-6 * target.abs());
        }
        assert_eq!(prof.v[0], 0.8);
        assert_eq!(prof.w[0], 0.0);
    }

    #[test]
    fn bratu_closed_form() {
        // N = 1, p = 2: v = α - 2 ln cosh(√(λ e^α / 2) r)
        let prob = RadialProblem::new(1, 2.0, Nonlinearity::Exponential).unwrap();
        let (lambda, alpha) = (0.8, 0.746_458_908_0);
        let prof = integrate_ivp(&prob, lambda, alpha, &IvpControls::default()).unwrap();
        let k = (lambda * alpha.exp() / 2.0).sqrt();
        for (r, v) in prof.r.iter().zip(&prof.v).step_by(97) {
            let exact = alpha - 2.0 * (k * r).cosh().ln();
            assert!((v - exact).abs() < 1e-9, "r = {r}");
        }
        assert!(prof.v_at_one().abs() < 1e-8);
    }

    #[test]
    fn crossing_reported() {
        let prob = RadialProblem::new(2, 2.0, Nonlinearity::Exponential).unwrap();
        let prof = integrate_ivp(&prob, 10.0, 1.0, &IvpControls::default()).unwrap();
        let c = prof.crossing.unwrap();
        assert!(c > 0.0 && c < 1.0);
        assert!(prof.v_at_one() < 0.0);
    }

    #[test]
    fn large_alpha_follows_singular_profile() {
        // N = 3, p = 2, λ = 2: v → -2 ln r away from the origin
        let prob = RadialProblem::new(3, 2.0, Nonlinearity::Exponential).unwrap();
        let prof = integrate_ivp(&prob, 2.0, 30.0, &IvpControls::default()).unwrap();
        for (r, v) in prof.r.iter().zip(&prof.v) {
            if *r > 0.05 {
                assert!((v + 2.0 * r.ln()).abs() < 5e-3, "r = {r}, v = {v}");
            }
        }
    }
}
