//! Dormand–Prince 5(4) embedded pair for two-component systems.
//!
//! The driver lands exactly on requested output abscissae (the step is
//! clipped, never interpolated) and can stop at the first downward zero
//! crossing of a scalar event function.

use crate::error::{GelfandError, Result};
use crate::numerics::roots::{brent, RootTol};

pub type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone)]
pub struct Control {
    pub rtol: f64,
    pub atol: State,
    /// Component-wise: measure the absolute tolerance against the largest
    /// magnitude seen so far instead of using `atol` verbatim.
    pub peak_relative: [bool; 2],
    pub max_steps: usize,
    pub h_init: f64,
}

#[derive(Debug, Clone)]
pub struct Integration {
    /// `(r, y)` at every output abscissa reached, in order.
    pub outputs: Vec<(f64, State)>,
    /// Location of the terminal event, if it fired.
    pub event: Option<(f64, State)>,
    /// Last point reached.
    pub end: (f64, State),
    pub steps: usize,
    pub rejected: usize,
}

struct Stepped {
    y: State,
    err: State,
    k7: State,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

fn dp_step<F>(rhs: &mut F, r: f64, y: &State, k1: &State, h: f64) -> Result<Stepped>
where
    F: FnMut(f64, &State) -> Result<State>,
{
    let k2 = rhs(r + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = rhs(r + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = rhs(
        r + C4 * h,
        &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
    )?;
    let k5 = rhs(
        r + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = rhs(
        r + h,
        &axpy(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y5 = axpy(
        y,
        h,
        &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
    );
    let k7 = rhs(r + h, &y5)?;
    let mut err = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Ok(Stepped { y: y5, err, k7 })
}

fn finite(y: &State) -> bool {
    y[0].is_finite() && y[1].is_finite()
}

/// Integrates `y' = rhs(r, y)` from `start` toward `r_end`.
///
/// `outputs` must be increasing; entries outside `(start.0, r_end]` are
/// ignored. With an `event`, integration stops at the first point where
/// `event(y)` drops from positive to non-positive.
pub fn integrate<F, E>(
    rhs: &mut F,
    start: (f64, State),
    r_end: f64,
    outputs: &[f64],
    ctl: &Control,
    mut event: Option<E>,
) -> Result<Integration>
where
    F: FnMut(f64, &State) -> Result<State>,
    E: FnMut(&State) -> f64,
{
    let (mut r, mut y) = start;
    let mut k1 = rhs(r, &y)?;
    let mut h = ctl.h_init.min(r_end - r);
    let mut peak = [y[0].abs(), y[1].abs()];
    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = outputs.partition_point(|&t| t <= r);
    let mut steps = 0;
    let mut rejected = 0;
    let mut ev_prev = event.as_mut().map(|e| e(&y));

    while r < r_end {
        if steps + rejected >= ctl.max_steps {
            return Err(GelfandError::TooManySteps(ctl.max_steps));
        }
        let target = if next_out < outputs.len() {
            outputs[next_out].min(r_end)
        } else {
            r_end
        };
        let clipped = r + h >= target;
        let h_try = if clipped { target - r } else { h };
        if h_try <= 1e-15 * r.abs().max(1e-300) {
            return Err(GelfandError::StepUnderflow { r, h: h_try });
        }
        let st = dp_step(rhs, r, &y, &k1, h_try)?;
        if !finite(&st.y) {
            if h_try < 1e-12 * r.abs().max(1e-300) {
                return Err(GelfandError::BlowUp { r });
            }
            h = 0.25 * h_try;
            rejected += 1;
            continue;
        }
        let mut err_norm: f64 = 0.0;
        for i in 0..2 {
            let mag = y[i].abs().max(st.y[i].abs());
            let atol = if ctl.peak_relative[i] {
                ctl.atol[i] * peak[i].max(mag)
            } else {
                ctl.atol[i]
            };
            let sc = atol + ctl.rtol * mag;
            err_norm = err_norm.max((st.err[i] / sc).abs());
        }
        if !err_norm.is_finite() {
            h = 0.25 * h_try;
            rejected += 1;
            continue;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err_norm > 1.0 {
            h = h_try * factor.min(1.0);
            rejected += 1;
            continue;
        }

        // accepted
        steps += 1;
        if let (Some(ev), Some(prev)) = (event.as_mut(), ev_prev) {
            let now = ev(&st.y);
            if prev > 0.0 && now <= 0.0 {
                let (r0, y0, k0) = (r, y, k1);
                let s = brent(
                    |s| {
                        let trial = dp_step(rhs, r0, &y0, &k0, s)?;
                        Ok(ev(&trial.y))
                    },
                    0.0,
                    h_try,
                    RootTol {
                        xtol: 1e-15 * (r0.abs() + h_try),
                        rtol: 0.0,
                        ftol: 0.0,
                        max_iter: 200,
                    },
                )?;
                let hit = if s == 0.0 {
                    y0
                } else {
                    dp_step(rhs, r0, &y0, &k0, s)?.y
                };
                return Ok(Integration {
                    outputs: out,
                    event: Some((r0 + s, hit)),
                    end: (r0 + s, hit),
                    steps,
                    rejected,
                });
            }
            ev_prev = Some(now);
        }
        r = if clipped { target } else { r + h_try };
        y = st.y;
        k1 = st.k7;
        peak[0] = peak[0].max(y[0].abs());
        peak[1] = peak[1].max(y[1].abs());
        if clipped {
            while next_out < outputs.len() && outputs[next_out] <= r {
                out.push((r, y));
                next_out += 1;
            }
            // a clipped step says nothing about the natural step size
            if factor < 1.0 {
                h = h.min(h_try * factor);
            }
        } else {
            h = h_try * factor;
        }
    }
    Ok(Integration {
        outputs: out,
        event: None,
        end: (r, y),
        steps,
        rejected,
    })
}
