//! The `p → 1` limit: sweeps of `λ_p*` and of the minimal branch, the jump
//! condition that singles out 1-Laplacian solutions reachable as limits,
//! and the four bifurcation diagrams.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GelfandError, Result};
use crate::fmt_f64;
use crate::nonlinearity::Nonlinearity;
use crate::pradial::{
    bifurcation_curve, bounds, lambda_star, log_grid, minimal_branch, IvpControls, RadialProblem,
};
use crate::radial1::{
    check_clau, classify_radial, constant_solution, discontinuous_solution, jump_residual,
    trivial_solution, unbounded_solution, BumpFamily, KindTag, PiecewiseRadialSolution, RadialKind,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub lambda_star: f64,
    pub alpha_star: f64,
    pub lower: f64,
    pub upper: f64,
    /// `None` when `λ̃ ≥ λ_p*` (no minimal solution at this `p`).
    pub alpha_min: Option<f64>,
    pub applicable: bool,
    /// `|λ_p* - N/f(0)|`.
    pub gap: f64,
    /// Largest distance from `N/f(0)` to an end of `[lower, upper]`.
    pub envelope: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub dim: usize,
    pub family: String,
    pub lambda_tilde: f64,
    pub limit_target: f64,
    /// Ordered by decreasing `p`.
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Gaps over rows with `p ≤ 1.1` never grow by more than 10%.
    pub fn tail_gap_settles(&self) -> bool {
        let tail: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.p <= 1.1 && r.error.is_none())
            .map(|r| r.gap)
            .collect();
        tail.windows(2).all(|w| w[1] <= 1.1 * w[0])
    }

    /// CSV with header `p,lambda_star,alpha_star,lower,upper,alpha_min,gap,envelope`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,lambda_star,alpha_star,lower,upper,alpha_min,gap,envelope\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt_f64(r.p),
                fmt_f64(r.lambda_star),
                fmt_f64(r.alpha_star),
                fmt_f64(r.lower),
                fmt_f64(r.upper),
                r.alpha_min.map(fmt_f64).unwrap_or_default(),
                fmt_f64(r.gap),
                fmt_f64(r.envelope)
            );
        }
        out
    }
}

fn sweep_row(
    dim: usize,
    model: &Nonlinearity,
    p: f64,
    lambda_tilde: f64,
    ctl: &IvpControls,
) -> Result<SweepRow> {
    let problem = RadialProblem::new(dim, p, model.clone())?;
    let star = lambda_star(&problem, ctl)?;
    let b = bounds(&problem)?;
    let target = dim as f64 / model.f0();
    let applicable = lambda_tilde < star.lambda_star;
    let alpha_min = if applicable {
        Some(minimal_branch(&problem, lambda_tilde, ctl)?.alpha_min)
    } else {
        None
    };
    Ok(SweepRow {
        p,
        lambda_star: star.lambda_star,
        alpha_star: star.alpha_star,
        lower: b.lower,
        upper: b.upper,
        alpha_min,
        applicable,
        gap: (star.lambda_star - target).abs(),
        envelope: (target - b.lower).abs().max((b.upper - target).abs()),
        error: None,
    })
}

/// `λ_p*`, its bounds and the minimal sup-norm at `λ̃` for each `p`. Rows
/// run in parallel; a failing row is kept with its error.
pub fn sweep_p(
    dim: usize,
    model: &Nonlinearity,
    p_list: &[f64],
    lambda_tilde: f64,
    ctl: &IvpControls,
) -> Result<SweepReport> {
    let target = dim as f64 / model.f0();
    if !(lambda_tilde > 0.0 && lambda_tilde < target) {
        return Err(GelfandError::domain(
            "lambda_tilde",
            lambda_tilde,
            format!("need 0 < lambda_tilde < N/f(0) = {target}"),
        ));
    }
    for &p in p_list {
        RadialProblem::new(dim, p, model.clone())?;
    }
    let mut ps = p_list.to_vec();
    ps.sort_by(|a, b| b.total_cmp(a));
    ps.dedup();
    let rows = ps
        .par_iter()
        .map(|&p| {
            sweep_row(dim, model, p, lambda_tilde, ctl).unwrap_or_else(|e| SweepRow {
                p,
                lambda_star: f64::NAN,
                alpha_star: f64::NAN,
                lower: f64::NAN,
                upper: f64::NAN,
                alpha_min: None,
                applicable: false,
                gap: f64::NAN,
                envelope: f64::NAN,
                error: Some(e.to_string()),
            })
        })
        .collect();
    Ok(SweepReport {
        dim,
        family: model.id(),
        lambda_tilde,
        limit_target: target,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectorEntry {
    pub kind: RadialKind,
    pub clau_residual: f64,
    /// Set for discontinuous candidates.
    pub jump_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectorReport {
    pub satisfied: Vec<SelectorEntry>,
    pub violated: Vec<SelectorEntry>,
}

/// Residual below which a candidate is taken to satisfy the jump condition.
pub const CLAU_TOLERANCE: f64 = 1e-8;

/// Splits candidates by whether `λ dF(v)/dr = -((N-1)/r)|Dv|` holds in the
/// sense of distributions.
pub fn clau_selector(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
    candidates: &[PiecewiseRadialSolution],
) -> Result<SelectorReport> {
    let family = BumpFamily::default();
    let mut report = SelectorReport {
        satisfied: Vec::new(),
        violated: Vec::new(),
    };
    for c in candidates {
        let clau_residual = if dim == 1 {
            // no curvature term; every 1-D solution is constant
            0.0
        } else {
            check_clau(c, dim, model, lambda, &family)?.residual
        };
        let jump = match c.kind() {
            RadialKind::Discontinuous { rho } => Some(jump_residual(dim, model, lambda, rho)?),
            _ => None,
        };
        let entry = SelectorEntry {
            kind: c.kind(),
            clau_residual,
            jump_residual: jump,
        };
        if clau_residual <= CLAU_TOLERANCE {
            report.satisfied.push(entry);
        } else {
            report.violated.push(entry);
        }
    }
    Ok(report)
}

/// Every kind available at `λ`, with one discontinuous candidate per `ρ`.
pub fn radial_candidates(
    dim: usize,
    model: &Nonlinearity,
    lambda: f64,
    rhos: &[f64],
) -> Result<Vec<PiecewiseRadialSolution>> {
    let class = classify_radial(dim, model, lambda)?;
    let mut out = Vec::new();
    if class.contains(KindTag::Trivial) {
        out.push(trivial_solution(dim, model, lambda)?);
    }
    if class.contains(KindTag::Constant) {
        out.push(constant_solution(dim, model, lambda)?);
    }
    if class.contains(KindTag::Unbounded) {
        out.push(unbounded_solution(dim, model, lambda)?);
    }
    if class.contains(KindTag::Discontinuous) {
        for &rho in rhos {
            out.push(discontinuous_solution(dim, model, lambda, rho)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureKind {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl FigureKind {
    pub fn name(&self) -> &'static str {
        match self {
            FigureKind::Fig1 => "fig1",
            FigureKind::Fig2 => "fig2",
            FigureKind::Fig3 => "fig3",
            FigureKind::Fig4 => "fig4",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(FigureKind::Fig1),
            "fig2" => Ok(FigureKind::Fig2),
            "fig3" => Ok(FigureKind::Fig3),
            "fig4" => Ok(FigureKind::Fig4),
            _ => Err(GelfandError::InvalidInput(format!("unknown figure {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagramParams {
    pub dim: usize,
    pub p: f64,
    pub model: Nonlinearity,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub points: usize,
    /// Sup-norm ceiling for the unbounded families of fig1/fig2.
    pub ceiling: f64,
}

impl DiagramParams {
    /// Defaults reproducing the published panels.
    pub fn defaults(kind: FigureKind) -> Self {
        let (dim, alpha_lo, alpha_hi) = match kind {
            FigureKind::Fig1 => (1, 0.0, 0.0),
            FigureKind::Fig2 => (2, 0.0, 0.0),
            FigureKind::Fig3 => (1, 0.01, 8.0),
            FigureKind::Fig4 => (3, 0.01, 40.0),
        };
        DiagramParams {
            dim,
            p: 2.0,
            model: Nonlinearity::Exponential,
            alpha_lo,
            alpha_hi,
            points: 400,
            ceiling: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagram {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub annotations: Vec<String>,
}

fn series(name: &str, points: Vec<(f64, f64)>, dashed: bool) -> Series {
    Series {
        name: name.to_string(),
        points,
        dashed,
    }
}

/// Points `(λ, f⁻¹(c/λ))` for `λ` on `(0, λ_end)`, clipped at the ceiling.
fn inverse_branch(
    model: &Nonlinearity,
    c: f64,
    lambda_end: f64,
    ceiling: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut pts = Vec::new();
    // start where the branch meets the ceiling
    let lambda_top = (c / model.f(ceiling.min(model.s_max()))?).min(lambda_end);
    for i in 0..n {
        let lambda = lambda_top + (lambda_end - lambda_top) * i as f64 / (n - 1) as f64;
        pts.push((lambda, model.f_inv(c / lambda)?.min(ceiling)));
    }
    Ok(pts)
}

fn check_params(params: &DiagramParams) -> Result<()> {
    if params.points < 2 {
        return Err(GelfandError::InvalidInput("need at least 2 points".into()));
    }
    if !(params.ceiling > 0.0) {
        return Err(GelfandError::domain(
            "ceiling",
            params.ceiling,
            "need ceiling > 0",
        ));
    }
    if params.dim < 1 {
        return Err(GelfandError::InvalidInput(
            "dimension must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Dataset for one of the four bifurcation diagrams. fig1/fig2 are the
/// closed-form `p = 1` diagrams in dimension 1 and `N ≥ 2`; fig3/fig4 are
/// shooting curves for `N ≤ p` and `p < N`.
pub fn diagram(kind: FigureKind, params: &DiagramParams, ctl: &IvpControls) -> Result<Diagram> {
    check_params(params)?;
    let model = &params.model;
    let n = params.points;
    let dim = params.dim as f64;
    let star = dim / model.f0();
    match kind {
        FigureKind::Fig1 | FigureKind::Fig2 => {
            if kind == FigureKind::Fig2 && params.dim < 2 {
                return Err(GelfandError::InvalidInput("fig2 needs N >= 2".into()));
            }
            let mut out = vec![
                series("trivial", vec![(0.0, 0.0), (star, 0.0)], false),
                series(
                    "constant",
                    inverse_branch(model, dim, star, params.ceiling, n)?,
                    false,
                ),
            ];
            let mut notes = vec![format!("lambda* = N/f(0) = {}", fmt_f64(star))];
            if kind == FigureKind::Fig2 {
                let bar = (dim - 1.0) / model.f0();
                let bottom = model.f_inv(dim / bar)?;
                out.push(series(
                    "discontinuous_at_bar",
                    vec![(bar, bottom), (bar, params.ceiling)],
                    false,
                ));
                for k in 1..=12 {
                    let lambda = bar * k as f64 / 13.0;
                    let bottom = model.f_inv(dim / lambda)?;
                    if bottom < params.ceiling {
                        out.push(series(
                            &format!("discontinuous_{k:02}"),
                            vec![(lambda, bottom), (lambda, params.ceiling)],
                            true,
                        ));
                    }
                }
                notes.push(format!("lambda_bar = (N-1)/f(0) = {}", fmt_f64(bar)));
                notes.push(format!(
                    "unbounded solutions for 0 < lambda <= lambda_bar, clipped at {}",
                    fmt_f64(params.ceiling)
                ));
                notes.push(
                    "limits of p-problems: trivial and constant branches; asymptote at lambda = 0"
                        .into(),
                );
            }
            Ok(Diagram {
                name: kind.name().into(),
                title: format!("1-Laplacian, N = {}, f = {}", params.dim, model.id()),
                x_label: "lambda".into(),
                y_label: "sup-norm".into(),
                series: out,
                annotations: notes,
            })
        }
        FigureKind::Fig3 | FigureKind::Fig4 => {
            let problem = RadialProblem::new(params.dim, params.p, model.clone())?;
            if !(params.alpha_lo > 0.0 && params.alpha_hi > params.alpha_lo) {
                return Err(GelfandError::InvalidInput(
                    "need 0 < alpha_lo < alpha_hi".into(),
                ));
            }
            let curve = bifurcation_curve(
                &problem,
                &log_grid(params.alpha_lo, params.alpha_hi, n),
                ctl,
            )?;
            let pts = curve
                .samples
                .iter()
                .filter(|s| s.converged)
                .map(|s| (s.lambda, s.alpha))
                .collect();
            let mut out = vec![series("curve", pts, false)];
            let mut notes = vec![format!(
                "lambda_p* = {} at alpha = {}",
                fmt_f64(curve.lambda_star),
                fmt_f64(curve.alpha_star)
            )];
            if kind == FigureKind::Fig4 {
                let level = problem.singular_level();
                out.push(series(
                    "singular_level",
                    vec![(level, 0.0), (level, params.alpha_hi)],
                    true,
                ));
                notes.push(format!(
                    "lambda_bar_(p) = p^(p-1)(N-p) = {}",
                    fmt_f64(level)
                ));
                notes.push(format!(
                    "lambda_bar_(p) -> N-1 = {} as p -> 1",
                    params.dim - 1
                ));
            }
            Ok(Diagram {
                name: kind.name().into(),
                title: format!("p = {}, N = {}, f = {}", params.p, params.dim, model.id()),
                x_label: "lambda".into(),
                y_label: "alpha = sup-norm".into(),
                series: out,
                annotations: notes,
            })
        }
    }
}

impl Diagram {
    /// CSV with header `series,x,y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for s in &self.series {
            for &(x, y) in &s.points {
                let _ = writeln!(out, "{},{},{}", s.name, fmt_f64(x), fmt_f64(y));
            }
        }
        out
    }

    /// Standalone SVG: axes with ticks, one polyline per series, the
    /// annotations listed under the title.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 480.0;
        const LEFT: f64 = 70.0;
        const RIGHT: f64 = 20.0;
        const TOP: f64 = 40.0 + 16.0 * 4.0;
        const BOTTOM: f64 = 50.0;
        let mut xs = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0));
        let first = xs.next().unwrap_or(0.0);
        let (mut x0, mut x1) = xs.fold((first, first), |(a, b), x| (a.min(x), b.max(x)));
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1));
        let (mut y0, mut y1) = ys.fold((0.0f64, 0.0f64), |(a, b), y| (a.min(y), b.max(y)));
        x0 = x0.min(0.0);
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        x1 *= 1.05;
        y1 *= 1.05;
        y0 = y0.min(0.0);
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
        let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

        let palette = ["firebrick", "black", "steelblue", "purple", "seagreen"];
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="20" font-size="14">{}</text>"#,
            LEFT,
            escape(&self.title)
        );
        for (i, a) in self.annotations.iter().enumerate() {
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" fill="gray">{}</text>"#,
                LEFT,
                38.0 + 15.0 * i as f64,
                escape(a)
            );
        }
        let (ax, ay) = (px(x0), py(y0));
        let _ = writeln!(
            svg,
            r#"<path d="M{ax:.2},{:.2} L{ax:.2},{ay:.2} L{:.2},{ay:.2}" stroke="black" fill="none"/>"#,
            py(y1),
            px(x1)
        );
        for k in 0..=5 {
            let x = x0 + (x1 - x0) * k as f64 / 5.0;
            let y = y0 + (y1 - y0) * k as f64 / 5.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{0:.2}" y1="{ay:.2}" x2="{0:.2}" y2="{1:.2}" stroke="black"/>"#,
                px(x),
                ay + 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                px(x),
                ay + 18.0,
                tick(x)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{ax:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black"/>"#,
                py(y),
                ax - 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                ax - 8.0,
                py(y) + 4.0,
                tick(y)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            0.5 * (LEFT + W - RIGHT),
            H - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
            0.5 * (TOP + H - BOTTOM),
            escape(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let color = palette[i.min(palette.len() - 1)];
            let dash = if s.dashed {
                r#" stroke-dasharray="6,4""#
            } else {
                ""
            };
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"{dash}><title>{}</title></polyline>"#,
                pts.join(" "),
                escape(&s.name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }

    /// Writes `<name>.csv` and `<name>.svg` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.csv", self.name)), self.to_csv())?;
        std::fs::write(dir.join(format!("{}.svg", self.name)), self.to_svg())?;
        Ok(())
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXP: Nonlinearity = Nonlinearity::Exponential;

    #[test]
    fn selector_picks_continuous_kinds() {
        let rhos: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let cands = radial_candidates(2, &EXP, 0.5, &rhos).unwrap();
        let rep = clau_selector(2, &EXP, 0.5, &cands).unwrap();
        let kinds: Vec<KindTag> = rep.satisfied.iter().map(|e| e.kind.tag()).collect();
        assert_eq!(
            kinds,
            vec![KindTag::Trivial, KindTag::Constant, KindTag::Unbounded]
        );
        assert_eq!(rep.violated.len(), 9);
        assert!(rep.violated.iter().all(|e| e.jump_residual.unwrap() > 0.0));
        assert_eq!(
            rep.satisfied[1].kind,
            RadialKind::Constant { value: 4f64.ln() }
        );
    }

    #[test]
    fn selector_in_one_dimension() {
        let cands = radial_candidates(1, &EXP, 0.5, &[0.5]).unwrap();
        assert_eq!(cands.len(), 2);
        let rep = clau_selector(1, &EXP, 0.5, &cands).unwrap();
        assert_eq!(rep.satisfied.len(), 2);
    }

    #[test]
    fn unbounded_at_bar_has_zero_trace() {
        let u = unbounded_solution(3, &EXP, 2.0).unwrap();
        let rep = clau_selector(3, &EXP, 2.0, std::slice::from_ref(&u)).unwrap();
        assert_eq!(rep.satisfied.len(), 1);
        assert_eq!(u.value(1.0).unwrap(), 0.0);
    }

    #[test]
    fn fig2_structure() {
        let d = diagram(
            FigureKind::Fig2,
            &DiagramParams::defaults(FigureKind::Fig2),
            &IvpControls::default(),
        )
        .unwrap();
        let vertical = d
            .series
            .iter()
            .find(|s| s.name == "discontinuous_at_bar")
            .unwrap();
        assert_eq!(vertical.points[0], (1.0, 2f64.ln()));
        assert_eq!(vertical.points[1].1, 8.0);
        let constant = d.series.iter().find(|s| s.name == "constant").unwrap();
        for &(l, v) in &constant.points {
            assert!(l > 0.0 && l <= 2.0);
            assert!((v - (2.0 / l).ln().min(8.0)).abs() < 1e-12);
        }
        let svg = d.to_svg();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(d.to_csv().starts_with("series,x,y\n"));
    }

    #[test]
    fn fig3_fold() {
        let mut params = DiagramParams::defaults(FigureKind::Fig3);
        params.points = 60;
        let d = diagram(FigureKind::Fig3, &params, &IvpControls::default()).unwrap();
        let top = d.series[0].points.iter().map(|p| p.0).fold(0.0, f64::max);
        assert!((top - 0.8785).abs() < 0.005);
    }
}
