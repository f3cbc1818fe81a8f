//! Radial solutions of the 1-Laplacian Gelfand problem on the unit ball.
//!
//! With `λ* = N/f(0)` and `λ̄ = (N-1)/f(0)` the solutions are:
//!
//! - trivial `u = 0` with `z = -(λ f(0)/N) x`, for `λ ≤ λ*`;
//! - constant `u = f⁻¹(N/λ)` with `z = -x`, for `λ < λ*`;
//! - unbounded `u = f⁻¹((N-1)/(λ|x|))` with `z = -x/|x|`, for `λ ≤ λ̄`;
//! - discontinuous: constant `f⁻¹(N/(λρ))` on `|x| < ρ` with `z = -x/ρ`,
//!   then the unbounded profile outside, for `λ ≤ λ̄` and `0 < ρ < 1`.
//!
//! Solutions are stored in closed form. Grids only appear on export.

use serde::Serialize;

use crate::error::{GelfandError, Result};
use crate::fmt_f64;
use crate::nonlinearity::Nonlinearity;
use crate::numerics::quadrature::PanelRule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialKind {
    Trivial,
    Constant { value: f64 },
    Unbounded,
    Discontinuous { rho: f64 },
}

impl RadialKind {
    pub fn tag(&self) -> KindTag {
        match self {
            RadialKind::Trivial => KindTag::Trivial,
            RadialKind::Constant { .. } => KindTag::Constant,
            RadialKind::Unbounded => KindTag::Unbounded,
            RadialKind::Discontinuous { .. } => KindTag::Discontinuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KindTag {
    Trivial,
    Constant,
    Unbounded,
    Discontinuous,
}

/// Radial component `z·x/|x|` of the field on one annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FieldPiece {
    /// `z = -slope · x`, divergence `-N slope`.
    Linear { slope: f64 },
    /// `z = -x/|x|`, divergence `-(N-1)/|x|`.
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRegion {
    pub r_lo: f64,
    pub r_hi: f64,
    pub piece: FieldPiece,
}

impl FieldRegion {
    fn z_radial(&self, r: f64) -> f64 {
        match self.piece {
            FieldPiece::Linear { slope } => -slope * r,
            FieldPiece::Radial => -1.0,
        }
    }

    fn div(&self, dim: usize, r: f64) -> f64 {
        match self.piece {
            FieldPiece::Linear { slope } => -(dim as f64) * slope,
            FieldPiece::Radial => -((dim - 1) as f64) / r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseRadialSolution {
    dim: usize,
    lambda: f64,
    model: Nonlinearity,
    kind: RadialKind,
    field: Vec<FieldRegion>,
}

fn check_dim_lambda(dim: usize, lambda: f64) -> Result<()> {
    if dim < 1 {
        return Err(GelfandError::InvalidInput(
            "dimension must be at least 1".into(),
        ));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(GelfandError::domain("lambda", lambda, "need lambda > 0"));
    }
    Ok(())
}

/// `λ* = N/f(0)`.
pub fn lambda_star(dim: usize, model: &Nonlinearity) -> f64 {
    dim as f64 / model.f0()
}

/// `λ̄ = (N-1)/f(0)`.
pub fn lambda_bar(dim: usize, model: &Nonlinearity) -> f64 {
    (dim as f64 - 1.0) / model.f0()
}

impl PiecewiseRadialSolution {
    /// Assembles an arbitrary candidate. The field regions must tile `[0, 1]`
    /// in order.
    pub fn from_parts(
        dim: usize,
        lambda: f64,
        model: Nonlinearity,
        kind: RadialKind,
        field: Vec<FieldRegion>,
    ) -> Result<Self> {
        check_dim_lambda(dim, lambda)?;
        let tiles = !field.is_empty()
            && field[0].r_lo == 0.0
            && field.last().unwrap().r_hi == 1.0
            && field.windows(2).all(|w| w[0].r_hi == w[1].r_lo)
            && field.iter().all(|g| g.r_lo < g.r_hi);
        if !tiles {
            return Err(GelfandError::InvalidInput(
                "field regions must tile [0, 1]".into(),
            ));
        }
        if let RadialKind::Discontinuous { rho } = kind {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(GelfandError::domain("rho", rho, "need 0 < rho < 1"));
            }
        }
        Ok(PiecewiseRadialSolution {
            dim,
            lambda,
            model,
            kind,
            field,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn model(&self) -> &Nonlinearity {
        &self.model
    }

    pub fn kind(&self) -> RadialKind {
        self.kind
    }

    pub fn field(&self) -> &[FieldRegion] {
        &self.field
    }

    pub fn lambda_star(&self) -> f64 {
        lambda_star(self.dim, &self.model)
    }

    pub fn lambda_bar(&self) -> f64 {
        lambda_bar(self.dim, &self.model)
    }

    fn outer_profile(&self, r: f64) -> Result<f64> {
        self.model
            .f_inv((self.dim as f64 - 1.0) / (self.lambda * r))
    }

    /// `u` at radius `r`. The discontinuous kind takes the inner value at
    /// `r = ρ`.
    pub fn value(&self, r: f64) -> Result<f64> {
        match self.kind {
            RadialKind::Trivial => Ok(0.0),
            RadialKind::Constant { value } => Ok(value),
            RadialKind::Unbounded => {
                if r <= 0.0 {
                    Ok(f64::INFINITY)
                } else {
                    self.outer_profile(r)
                }
            }
            RadialKind::Discontinuous { rho } => {
                if r <= rho {
                    self.model.f_inv(self.dim as f64 / (self.lambda * rho))
                } else {
                    self.outer_profile(r)
                }
            }
        }
    }

    /// `‖u‖∞`.
    pub fn sup_norm(&self) -> Result<f64> {
        self.value(0.0)
    }

    fn region(&self, r: f64) -> &FieldRegion {
        let k = self.field.partition_point(|g| g.r_hi < r);
        &self.field[k.min(self.field.len() - 1)]
    }

    /// Radial component of `z` at `r`.
    pub fn z_radial(&self, r: f64) -> f64 {
        self.region(r).z_radial(r)
    }

    /// Samples `(r, u, z·x/|x|)` on the given radii. Unbounded kinds need
    /// `r > 0`.
    pub fn sample(&self, r_grid: &[f64]) -> Result<SampledProfile> {
        let mut out = SampledProfile::default();
        for &r in r_grid {
            if !(0.0..=1.0).contains(&r) {
                return Err(GelfandError::domain("r", r, "radii must lie in [0, 1]"));
            }
            if r == 0.0 && self.kind == RadialKind::Unbounded {
                return Err(GelfandError::domain(
                    "r",
                    r,
                    "unbounded profile needs r > 0",
                ));
            }
            out.r.push(r);
            out.v.push(self.value(r)?);
            out.z_radial.push(self.z_radial(r));
        }
        Ok(out)
    }

    /// Default export grid: `n` uniform radii on `(0, 1]`, plus `r = 0` for
    /// bounded kinds and a duplicated `ρ` showing the jump.
    pub fn export_grid(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let mut grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        match self.kind {
            RadialKind::Unbounded => {}
            RadialKind::Discontinuous { rho } => {
                grid.insert(0, 0.0);
                let k = grid.partition_point(|&r| r < rho);
                grid.retain(|&r| r != rho);
                grid.insert(k, rho);
            }
            _ => grid.insert(0, 0.0),
        }
        grid
    }

    /// CSV with header `r,v,z_radial`. At a jump radius the row carries the
    /// inner value and a second row just outside carries the outer one.
    pub fn to_csv(&self, r_grid: &[f64]) -> Result<String> {
        let s = self.sample(r_grid)?;
        let mut out = String::from("r,v,z_radial\n");
        for i in 0..s.r.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(s.r[i]),
                fmt_f64(s.v[i]),
                fmt_f64(s.z_radial[i])
            ));
            if let RadialKind::Discontinuous { rho } = self.kind {
                if s.r[i] == rho {
                    let v_out = self.outer_profile(rho)?;
                    out.push_str(&format!(
                        "{},{},{}\n",
                        fmt_f64(rho),
                        fmt_f64(v_out),
                        fmt_f64(-1.0)
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Kind, parameters, thresholds and a closed-form description. Unbounded
    /// exports also report the value at the smallest exported radius.
    pub fn to_json(&self, r_grid: &[f64]) -> Result<String> {
        #[derive(Serialize)]
        struct Export<'a> {
            dim: usize,
            lambda: f64,
            family: String,
            lambda_star: f64,
            lambda_bar: f64,
            #[serde(flatten)]
            kind: RadialKind,
            sup_norm: Option<f64>,
            profile: String,
            field: &'a [FieldRegion],
            smallest_r: Option<f64>,
            value_at_smallest_r: Option<f64>,
        }
        let (profile, bounded) = match self.kind {
            RadialKind::Trivial => ("u = 0".to_string(), true),
            RadialKind::Constant { .. } => ("u = f^-1(N/lambda)".to_string(), true),
            RadialKind::Unbounded => (
                "u = f^-1((N-1)/(lambda r)), blows up as r -> 0".to_string(),
                false,
            ),
            RadialKind::Discontinuous { .. } => (
                "u = f^-1(N/(lambda rho)) for r < rho, f^-1((N-1)/(lambda r)) for r > rho"
                    .to_string(),
                true,
            ),
        };
        let smallest = r_grid
            .iter()
            .copied()
            .filter(|&r| r > 0.0)
            .fold(f64::INFINITY, f64::min);
        let (smallest_r, value_at_smallest_r) = if !bounded && smallest.is_finite() {
            (Some(smallest), Some(self.value(smallest)?))
        } else {
            (None, None)
        };
        Ok(serde_json::to_string_pretty(&Export {
            dim: self.dim,
            lambda: self.lambda,
            family: self.model.id(),
            lambda_star: self.lambda_star(),
            lambda_bar: self.lambda_bar(),
            kind: self.kind,
            sup_norm: if bounded {
                Some(self.sup_norm()?)
            } else {
                None
            },
            profile,
            field: &self.field,
            smallest_r,
            value_at_smallest_r,
        })?)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SampledProfile {
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    pub z_radial: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RadialClass {
    NoSolution,
    Available(Vec<KindTag>),
}

impl RadialClass {
    pub fn contains(&self, tag: KindTag) -> bool {
        matches!(self, RadialClass::Available(k) if k.contains(&tag))
    }
}

/// Kinds available at `λ`: none above `λ*`; the trivial one up to `λ*`;
/// constants below `λ*`; unbounded and discontinuous ones up to `λ̄`.
pub fn classify_radial(dim: usize, model: &Nonlinearity, lambda: f64) -> Result<RadialClass> {
    check_dim_lambda(dim, lambda)?;
    let f0 = model.f0();
    let n = dim as f64;
    // products avoid the rounding of N/f(0)
    if lambda * f0 > n {
        return Ok(RadialClass::NoSolution);
    }
    let mut kinds = vec![KindTag::Trivial];
    if lambda * f0 < n {
        kinds.push(KindTag::Constant);
    }
    if lambda * f0 <= n - 1.0 {
        kinds.push(KindTag::Unbounded);
        kinds.push(KindTag::Discontinuous);
    }
    Ok(RadialClass::Available(kinds))
}

pub fn trivial_solution(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
) -> Result<PiecewiseRadialSolution> {
    check_dim_lambda(dim, lambda)?;
    if lambda * model.f0() > dim as f64 {
        return Err(GelfandError::NoSolution(format!(
            "lambda = {lambda} exceeds lambda* = {}",
            lambda_star(dim, model)
        )));
    }
    let slope = lambda * model.f0() / dim as f64;
    PiecewiseRadialSolution::from_parts(
        dim,
        lambda,
        model.clone(),
        RadialKind::Trivial,
        vec![FieldRegion {
            r_lo: 0.0,
            r_hi: 1.0,
            piece: FieldPiece::Linear { slope },
        }],
    )
}

/// `u = f⁻¹(N/λ)`, `z = -x`, for `0 < λ < λ*`.
pub fn constant_solution(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
) -> Result<PiecewiseRadialSolution> {
    check_dim_lambda(dim, lambda)?;
    if lambda * model.f0() >= dim as f64 {
        return Err(GelfandError::NoSolution(format!(
            "constant solutions need lambda < lambda* = {}",
            lambda_star(dim, model)
        )));
    }
    let value = model.f_inv(dim as f64 / lambda)?;
    PiecewiseRadialSolution::from_parts(
        dim,
        lambda,
        model.clone(),
        RadialKind::Constant { value },
        vec![FieldRegion {
            r_lo: 0.0,
            r_hi: 1.0,
            piece: FieldPiece::Linear { slope: 1.0 },
        }],
    )
}

fn check_below_bar(dim: usize, model: &Nonlinearity, lambda: f64) -> Result<()> {
    check_dim_lambda(dim, lambda)?;
    if lambda * model.f0() > dim as f64 - 1.0 {
        return Err(GelfandError::NoSolution(format!(
            "unbounded and discontinuous solutions need lambda <= lambda_bar = {}",
            lambda_bar(dim, model)
        )));
    }
    Ok(())
}

/// `u = f⁻¹((N-1)/(λ|x|))`, `z = -x/|x|`, for `0 < λ ≤ λ̄`.
pub fn unbounded_solution(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
) -> Result<PiecewiseRadialSolution> {
    check_below_bar(dim, model, lambda)?;
    PiecewiseRadialSolution::from_parts(
        dim,
        lambda,
        model.clone(),
        RadialKind::Unbounded,
        vec![FieldRegion {
            r_lo: 0.0,
            r_hi: 1.0,
            piece: FieldPiece::Radial,
        }],
    )
}

/// The unbounded profile sampled on `r_grid ⊂ (0, 1]`.
pub fn unbounded_profile(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
    r_grid: &[f64],
) -> Result<SampledProfile> {
    unbounded_solution(dim, model, lambda)?.sample(r_grid)
}

pub fn discontinuous_solution(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
    rho: f64,
) -> Result<PiecewiseRadialSolution> {
    check_below_bar(dim, model, lambda)?;
    PiecewiseRadialSolution::from_parts(
        dim,
        lambda,
        model.clone(),
        RadialKind::Discontinuous { rho },
        vec![
            FieldRegion {
                r_lo: 0.0,
                r_hi: rho,
                piece: FieldPiece::Linear { slope: 1.0 / rho },
            },
            FieldRegion {
                r_lo: rho,
                r_hi: 1.0,
                piece: FieldPiece::Radial,
            },
        ],
    )
}

/// `λ(F(v⁺) - F(v⁻)) - ((N-1)/ρ)(v⁺ - v⁻)` across the jump at `ρ`, with
/// `v⁺ = f⁻¹(N/(λρ))` and `v⁻ = f⁻¹((N-1)/(λρ))`.
pub fn jump_residual(dim: usize, model: &Nonlinearity, lambda: f64, rho: f64) -> Result<f64> {
    check_below_bar(dim, model, lambda)?;
    if !(rho > 0.0 && rho < 1.0) {
        return Err(GelfandError::domain("rho", rho, "need 0 < rho < 1"));
    }
    let n = dim as f64;
    let inner = model.f_inv(n / (lambda * rho))?;
    let outer = model.f_inv((n - 1.0) / (lambda * rho))?;
    Ok(lambda * (model.F(inner)? - model.F(outer)?) - (n - 1.0) / rho * (inner - outer))
}

/// A radial profile `v` on `(0, 1]` that is smooth between finitely many
/// jumps.
pub trait RadialShape {
    fn value(&self, r: f64) -> Result<f64>;
    /// `v'` away from jumps.
    fn slope(&self, r: f64) -> Result<f64>;
    /// `(ρ, v(ρ⁻), v(ρ⁺))` for each jump.
    fn jumps(&self) -> Result<Vec<(f64, f64, f64)>>;
}

impl RadialShape for PiecewiseRadialSolution {
    fn value(&self, r: f64) -> Result<f64> {
        PiecewiseRadialSolution::value(self, r)
    }

    fn slope(&self, r: f64) -> Result<f64> {
        let outer = match self.kind {
            RadialKind::Trivial | RadialKind::Constant { .. } => false,
            RadialKind::Unbounded => true,
            RadialKind::Discontinuous { rho } => r > rho,
        };
        if !outer {
            return Ok(0.0);
        }
        // f(v) = (N-1)/(λr), so f'(v) v' = -(N-1)/(λr²)
        let v = self.outer_profile(r)?;
        Ok(-(self.dim as f64 - 1.0) / (self.lambda * r * r * self.model.f_prime(v)?))
    }

    fn jumps(&self) -> Result<Vec<(f64, f64, f64)>> {
        match self.kind {
            RadialKind::Discontinuous { rho } => {
                Ok(vec![(rho, self.value(rho)?, self.outer_profile(rho)?)])
            }
            _ => Ok(Vec::new()),
        }
    }
}

/// Test-bump family for [`check_clau`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpFamily {
    /// Profiles are tested on `(σ, 1)`.
    pub sigma: f64,
    pub centers: usize,
    pub scales: usize,
    /// Gauss–Legendre order and panel count on each bump support.
    pub order: usize,
    pub panels: usize,
}

impl Default for BumpFamily {
    fn default() -> Self {
        BumpFamily {
            sigma: 0.05,
            centers: 50,
            scales: 3,
            order: 16,
            panels: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClauReport {
    pub residual: f64,
    pub worst_center: f64,
    pub worst_width: f64,
    pub bumps: usize,
}

fn bump(c: f64, w: f64, r: f64) -> (f64, f64) {
    let t = (r - c) / w;
    let q = 1.0 - t * t;
    if q <= 0.0 {
        return (0.0, 0.0);
    }
    let psi = (1.0 - 1.0 / q).exp();
    (psi, psi * (-2.0 * t / (q * q)) / w)
}

/// Distributional residual of `λ dF(v)/dr = -((N-1)/r)|Dv|`:
/// the largest `|λ∫F(v)ψ' - ∫((N-1)/r)ψ d|Dv||` over smooth bumps `ψ`
/// normalized by `ψ(center) = 1`.
///
/// The family has `centers` uniform centers on `(σ, 1)` at `scales` halving
/// widths, plus one bump centered on each jump. The bump on a jump at `ρ`
/// picks up exactly the jump residual.
pub fn check_clau<S: RadialShape + ?Sized>(
    shape: &S,
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
    family: &BumpFamily,
) -> Result<ClauReport> {
    let jumps = shape.jumps()?;
    let mut sigma = family.sigma;
    for &(rho, _, _) in &jumps {
        sigma = sigma.min(0.5 * rho);
    }
    let span = 1.0 - sigma;
    let base_width = 0.25 * span;
    let mut bumps: Vec<(f64, f64)> = Vec::new();
    for k in 0..family.centers {
        let c = sigma + (k as f64 + 0.5) * span / family.centers as f64;
        let room = (c - sigma).min(1.0 - c);
        let mut w = base_width;
        for _ in 0..family.scales {
            bumps.push((c, w.min(room)));
            w *= 0.5;
        }
    }
    for &(rho, _, _) in &jumps {
        bumps.push((rho, base_width.min(rho - sigma).min(1.0 - rho)));
    }

    let rule = PanelRule::new(family.order, family.panels);
    let coeff = dim as f64 - 1.0;
    let mut report = ClauReport {
        residual: 0.0,
        worst_center: f64::NAN,
        worst_width: f64::NAN,
        bumps: bumps.len(),
    };
    for &(c, w) in &bumps {
        let (lo, hi) = (c - w, c + w);
        let mut cuts = vec![lo];
        cuts.extend(
            jumps
                .iter()
                .map(|j| j.0)
                .filter(|&rho| rho > lo && rho < hi),
        );
        cuts.push(hi);
        // ψ' integrates to zero, so shifting F(v) by a constant is free and
        // makes constant profiles exact
        let level = model.F(shape.value(c)?)?;
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for seg in cuts.windows(2) {
            lhs += rule.try_integrate(seg[0], seg[1], |r| {
                Ok((model.F(shape.value(r)?)? - level) * bump(c, w, r).1)
            })?;
            rhs += rule.try_integrate(seg[0], seg[1], |r| {
                Ok(coeff / r * shape.slope(r)?.abs() * bump(c, w, r).0)
            })?;
        }
        for &(rho, inner, outer) in &jumps {
            if rho > lo && rho < hi {
                rhs += coeff / rho * (inner - outer).abs() * bump(c, w, rho).0;
            }
        }
        let residual = (lambda * lhs - rhs).abs();
        if residual > report.residual || report.worst_center.is_nan() {
            report.residual = residual;
            report.worst_center = c;
            report.worst_width = w;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RadialFieldResidual {
    /// `max |div z + λ f(u)| / max(1, |div z|)` over sample radii of each
    /// region.
    pub divergence: f64,
    /// `max |z| - 1` when positive.
    pub z_excess: f64,
    /// Largest jump of `z` between adjacent regions.
    pub z_jump: f64,
    /// `|z·ν + 1|` at `r = 1` for nontrivial kinds.
    pub boundary: f64,
}

impl RadialFieldResidual {
    pub fn max(&self) -> f64 {
        self.divergence
            .max(self.z_excess)
            .max(self.z_jump)
            .max(self.boundary)
    }
}

/// Checks `-div z = λ f(u)`, `|z| ≤ 1`, continuity of `z` and the boundary
/// trace region by region.
pub fn validate_field_radial(sol: &PiecewiseRadialSolution) -> Result<RadialFieldResidual> {
    const SAMPLES: usize = 65;
    let mut res = RadialFieldResidual::default();
    for g in sol.field() {
        // sample strictly inside the region, ending exactly at r = 1
        let width = g.r_hi - g.r_lo;
        for i in 0..SAMPLES {
            let r_in = if i == SAMPLES - 1 && g.r_hi == 1.0 {
                1.0
            } else {
                g.r_lo + width * (i as f64 + 0.5) / SAMPLES as f64
            };
            let div = g.div(sol.dim, r_in);
            let u = sol.value(r_in)?;
            let source = sol.lambda * sol.model.f(u)?;
            res.divergence = res
                .divergence
                .max((div + source).abs() / div.abs().max(1.0));
            res.z_excess = res.z_excess.max(g.z_radial(r_in).abs() - 1.0);
        }
    }
    for w in sol.field().windows(2) {
        let r = w[0].r_hi;
        res.z_jump = res.z_jump.max((w[0].z_radial(r) - w[1].z_radial(r)).abs());
    }
    if sol.kind != RadialKind::Trivial {
        res.boundary = (sol.field().last().unwrap().z_radial(1.0) + 1.0).abs();
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXP: Nonlinearity = Nonlinearity::Exponential;

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_radial(2, &EXP, 2.5).unwrap(),
            RadialClass::NoSolution
        );
        assert_eq!(
            classify_radial(2, &EXP, 1.5).unwrap(),
            RadialClass::Available(vec![KindTag::Trivial, KindTag::Constant])
        );
        assert_eq!(
            classify_radial(3, &EXP, 1.0).unwrap(),
            RadialClass::Available(vec![
                KindTag::Trivial,
                KindTag::Constant,
                KindTag::Unbounded,
                KindTag::Discontinuous
            ])
        );
        assert_eq!(
            classify_radial(2, &EXP, 2.0).unwrap(),
            RadialClass::Available(vec![KindTag::Trivial])
        );
        assert!(classify_radial(2, &EXP, -1.0).is_err());
    }

    #[test]
    fn constant_examples() {
        let sol = constant_solution(2, &EXP, 0.5).unwrap();
        assert_eq!(sol.kind(), RadialKind::Constant { value: 4f64.ln() });
        assert!((sol.sup_norm().unwrap() - 1.386_294).abs() < 1e-6);
        let quad = Nonlinearity::power(2.0).unwrap();
        assert!(constant_solution(3, &quad, 3.0).is_err());
        let near = constant_solution(2, &EXP, 2.0 - 1e-9).unwrap();
        assert!(near.sup_norm().unwrap() < 1e-9);
    }

    #[test]
    fn unbounded_examples() {
        let p = unbounded_profile(2, &EXP, 0.5, &[0.5, 1.0]).unwrap();
        assert!((p.v[0] - 4f64.ln()).abs() < 1e-15);
        let at_bar = unbounded_profile(2, &EXP, 1.0, &[1.0]).unwrap();
        assert_eq!(at_bar.v[0], 0.0);
        let grid: Vec<f64> = (0..30).map(|k| 0.5f64.powi(k)).collect();
        let p = unbounded_profile(3, &EXP, 1.0, &grid).unwrap();
        for (i, r) in grid.iter().enumerate() {
            let product = EXP.f(p.v[i]).unwrap() * r;
            assert!((product - 2.0).abs() < 1e-14);
            if i > 0 {
                assert!(p.v[i] > p.v[i - 1]);
            }
        }
        assert!(unbounded_solution(2, &EXP, 1.5).is_err());
        assert!(unbounded_profile(2, &EXP, 0.5, &[0.0]).is_err());
    }

    #[test]
    fn discontinuous_examples() {
        let sol = discontinuous_solution(2, &EXP, 1.0, 0.5).unwrap();
        assert!((sol.value(0.2).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!((sol.value(0.8).unwrap() - (1.0f64 / 0.8).ln()).abs() < 1e-15);
        let j = sol.jumps().unwrap();
        assert!((j[0].1 - 4f64.ln()).abs() < 1e-15);
        assert!((j[0].2 - 2f64.ln()).abs() < 1e-15);
        let near_one = discontinuous_solution(2, &EXP, 1.0, 1.0 - 1e-12).unwrap();
        assert!((near_one.sup_norm().unwrap() - 2f64.ln()).abs() < 1e-11);
        let s = discontinuous_solution(3, &EXP, 2.0, 0.25).unwrap();
        assert!((s.sup_norm().unwrap() - 6f64.ln()).abs() < 1e-15);
        assert!(discontinuous_solution(2, &EXP, 1.0, 1.0).is_err());
        assert!(discontinuous_solution(2, &EXP, 1.2, 0.5).is_err());
    }

    #[test]
    fn sup_norm_decreases_in_rho() {
        let mut last = f64::INFINITY;
        for k in 1..100 {
            let s = discontinuous_solution(3, &EXP, 1.5, k as f64 / 100.0).unwrap();
            let sup = s.sup_norm().unwrap();
            assert!(sup < last);
            last = sup;
        }
        assert!(last > EXP.f_inv(3.0 / 1.5).unwrap());
    }

    #[test]
    fn jump_examples() {
        let j = jump_residual(2, &EXP, 1.0, 0.5).unwrap();
        assert!((j - 2.0 * (1.0 - 2f64.ln())).abs() < 1e-12);
        let j3 = jump_residual(3, &EXP, 1.0, 0.5).unwrap();
        assert!((j3 - 2.0 * (1.0 - 2.0 * 1.5f64.ln())).abs() < 1e-12);
        assert!((j3 - 0.378_139_567_567).abs() < 1e-11);
    }

    #[test]
    fn clau_on_continuous_kinds() {
        let fam = BumpFamily::default();
        let c = constant_solution(2, &EXP, 0.5).unwrap();
        assert_eq!(check_clau(&c, 2, &EXP, 0.5, &fam).unwrap().residual, 0.0);
        let u = unbounded_solution(2, &EXP, 1.0).unwrap();
        let r = check_clau(&u, 2, &EXP, 1.0, &fam).unwrap();
        assert!(r.residual <= 1e-10, "{r:?}");
        assert_eq!(r.bumps, 150);
    }

    #[test]
    fn clau_on_jump_matches_jump_residual() {
        let fam = BumpFamily::default();
        let d = discontinuous_solution(2, &EXP, 1.0, 0.5).unwrap();
        let r = check_clau(&d, 2, &EXP, 1.0, &fam).unwrap();
        assert!(
            (r.residual - 2.0 * (1.0 - 2f64.ln())).abs() < 1e-10,
            "{r:?}"
        );
        assert_eq!(r.worst_center, 0.5);
    }

    #[test]
    fn validators_on_constructions() {
        let quad = Nonlinearity::power(2.0).unwrap();
        let sols = vec![
            trivial_solution(2, &EXP, 1.3).unwrap(),
            constant_solution(2, &EXP, 1.5).unwrap(),
            unbounded_solution(3, &EXP, 1.0).unwrap(),
            discontinuous_solution(2, &EXP, 1.0, 0.5).unwrap(),
            discontinuous_solution(5, &quad, 2.0, 0.3).unwrap(),
        ];
        for s in &sols {
            let r = validate_field_radial(s).unwrap();
            assert!(r.max() <= 1e-14, "{:?}: {r:?}", s.kind());
        }
    }

    #[test]
    fn validator_flags_hand_made_field() {
        let bad = PiecewiseRadialSolution::from_parts(
            2,
            1.0,
            EXP,
            RadialKind::Constant { value: 4f64.ln() },
            vec![FieldRegion {
                r_lo: 0.0,
                r_hi: 1.0,
                piece: FieldPiece::Linear { slope: 2.0 },
            }],
        )
        .unwrap();
        let r = validate_field_radial(&bad).unwrap();
        assert!((r.z_excess - 1.0).abs() < 1e-15);
        assert!((r.boundary - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exports() {
        let d = discontinuous_solution(2, &EXP, 1.0, 0.5).unwrap();
        let grid = d.export_grid(10);
        let csv = d.to_csv(&grid).unwrap();
        assert!(csv.starts_with("r,v,z_radial\n"));
        assert_eq!(csv.lines().count(), 1 + grid.len() + 1);
        let u = unbounded_solution(2, &EXP, 0.5).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&u.to_json(&u.export_grid(10)).unwrap()).unwrap();
        assert_eq!(json["kind"], "unbounded");
        assert_eq!(json["smallest_r"], 0.1);
    }
}
