//! Reaction terms `f`: positive at zero, strictly increasing.
//!
//! Besides `f` itself every solver needs the antiderivative `F(s) = ∫₀ˢ f`,
//! the inverse `f⁻¹` on `[f(0), ∞)`, the log-derivative for the stationarity
//! check, and the maximizer of `F_p(α) = α^{p-1} / f(α)`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GelfandError, Result};
use crate::numerics::roots::{brent, golden_max, RootTol};

/// Sampled `f` interpolated by a monotone (Fritsch–Carlson) cubic.
///
/// The first abscissa must be `0` so that `f(0)` is part of the data, and
/// evaluation outside the table is an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableData", into = "TableData")]
pub struct MonotoneTable {
    s: Vec<f64>,
    f: Vec<f64>,
    slopes: Vec<f64>,
    /// `∫₀^{s_k} f` at every knot.
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TableData {
    s: Vec<f64>,
    f: Vec<f64>,
}

impl TryFrom<TableData> for MonotoneTable {
    type Error = GelfandError;
    fn try_from(d: TableData) -> Result<Self> {
        MonotoneTable::new(d.s, d.f)
    }
}

impl From<MonotoneTable> for TableData {
    fn from(t: MonotoneTable) -> Self {
        TableData { s: t.s, f: t.f }
    }
}

#[derive(Deserialize)]
struct TableRow {
    s: f64,
    f: f64,
}

impl MonotoneTable {
    pub fn new(s: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if s.len() != f.len() || s.len() < 2 {
            return Err(GelfandError::InvalidInput(
                "table needs at least two (s, f) rows of equal length".into(),
            ));
        }
        if s[0] != 0.0 {
            return Err(GelfandError::InvalidInput(format!(
                "table must start at s = 0, got {}",
                s[0]
            )));
        }
        if !(f[0] > 0.0) {
            return Err(GelfandError::InvalidInput(format!(
                "f(0) = {} must be positive",
                f[0]
            )));
        }
        for k in 1..s.len() {
            if !(s[k] > s[k - 1]) || !s[k].is_finite() {
                return Err(GelfandError::InvalidInput(format!(
                    "s must be strictly increasing (row {k})"
                )));
            }
            if !(f[k] > f[k - 1]) || !f[k].is_finite() {
                return Err(GelfandError::InvalidInput(format!(
                    "f must be strictly increasing (row {k})"
                )));
            }
        }
        let slopes = fritsch_carlson(&s, &f);
        let mut cumulative = vec![0.0; s.len()];
        for k in 1..s.len() {
            let h = s[k] - s[k - 1];
            cumulative[k] = cumulative[k - 1]
                + h * (f[k - 1] + f[k]) / 2.0
                + h * h * (slopes[k - 1] - slopes[k]) / 12.0;
        }
        Ok(MonotoneTable {
            s,
            f,
            slopes,
            cumulative,
        })
    }

    /// Reads a CSV with header `s,f`.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        Self::from_csv_reader(&mut rdr)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        Self::from_csv_reader(&mut rdr)
    }

    fn from_csv_reader<R: std::io::Read>(rdr: &mut csv::Reader<R>) -> Result<Self> {
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "s" || &headers[1] != "f" {
            return Err(GelfandError::InvalidInput(format!(
                "expected CSV header `s,f`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let (mut s, mut f) = (Vec::new(), Vec::new());
        for row in rdr.deserialize::<TableRow>() {
            let row = row?;
            s.push(row.s);
            f.push(row.f);
        }
        Self::new(s, f)
    }

    pub fn s_max(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn f_max(&self) -> f64 {
        *self.f.last().unwrap()
    }

    fn segment(&self, s: f64) -> usize {
        let k = self.s.partition_point(|&x| x <= s);
        k.clamp(1, self.s.len() - 1) - 1
    }

    fn hermite(&self, k: usize, s: f64) -> f64 {
        let h = self.s[k + 1] - self.s[k];
        let t = (s - self.s[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.f[k]
            + h10 * h * self.slopes[k]
            + h01 * self.f[k + 1]
            + h11 * h * self.slopes[k + 1]
    }

    fn check(&self, s: f64) -> Result<()> {
        if !(0.0..=self.s_max()).contains(&s) {
            return Err(GelfandError::domain(
                "s",
                s,
                format!("outside the table range [0, {}]", self.s_max()),
            ));
        }
        Ok(())
    }

    fn eval(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.hermite(self.segment(s), s))
    }

    fn antiderivative(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        let k = self.segment(s);
        let a = self.s[k];
        // Simpson is exact on a cubic piece
        let m = 0.5 * (a + s);
        let part = (s - a) / 6.0 * (self.f[k] + 4.0 * self.hermite(k, m) + self.hermite(k, s));
        Ok(self.cumulative[k] + part)
    }

    fn invert(&self, y: f64) -> Result<f64> {
        if y > self.f_max() {
            return Err(GelfandError::domain(
                "y",
                y,
                format!("above the table maximum f = {}", self.f_max()),
            ));
        }
        let k = self
            .f
            .partition_point(|&v| v <= y)
            .clamp(1, self.f.len() - 1)
            - 1;
        if y == self.f[k] {
            return Ok(self.s[k]);
        }
        brent(
            |s| Ok(self.hermite(k, s) - y),
            self.s[k],
            self.s[k + 1],
            RootTol {
                rtol: 2.0 * f64::EPSILON,
                ..RootTol::default()
            },
        )
    }
}

fn fritsch_carlson(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        // weighted harmonic mean keeps the interpolant monotone
        let h0 = x[k] - x[k - 1];
        let h1 = x[k + 1] - x[k];
        let w1 = 2.0 * h1 + h0;
        let w2 = h1 + 2.0 * h0;
        m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    m
}

/// The reaction term `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Nonlinearity {
    /// `f(s) = e^s`.
    Exponential,
    /// `f(s) = (1 + s)^m`, `m > 0`.
    Power { m: f64 },
    /// Tabulated strictly increasing `f`.
    CustomMonotone { table: Arc<MonotoneTable> },
}

/// Maximizer of `F_p(α) = α^{p-1} / f(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpProfile {
    pub p: f64,
    pub alpha_bar: f64,
    pub fp_max: f64,
    /// `|ᾱ f'(ᾱ)/f(ᾱ) - (p-1)|`.
    pub stationarity_residual: f64,
}

impl Nonlinearity {
    pub fn power(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(GelfandError::domain(
                "m",
                m,
                "power exponent must be positive",
            ));
        }
        Ok(Nonlinearity::Power { m })
    }

    pub fn custom(table: MonotoneTable) -> Self {
        Nonlinearity::CustomMonotone {
            table: Arc::new(table),
        }
    }

    /// Parses `exp`, `power:<m>` or `custom:<csv path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if spec == "exp" {
            return Ok(Nonlinearity::Exponential);
        }
        if let Some(m) = spec.strip_prefix("power:") {
            let m: f64 = m
                .parse()
                .map_err(|_| GelfandError::InvalidInput(format!("bad power exponent `{m}`")))?;
            return Self::power(m);
        }
        if let Some(path) = spec.strip_prefix("custom:") {
            return Ok(Self::custom(MonotoneTable::from_csv_path(path)?));
        }
        Err(GelfandError::InvalidInput(format!(
            "unknown nonlinearity `{spec}` (expected exp, power:<m> or custom:<path>)"
        )))
    }

    /// Short identifier used in reports.
    pub fn id(&self) -> String {
        match self {
            Nonlinearity::Exponential => "exp".to_string(),
            Nonlinearity::Power { m } => format!("power:{m}"),
            Nonlinearity::CustomMonotone { .. } => "custom".to_string(),
        }
    }

    pub fn f0(&self) -> f64 {
        match self {
            Nonlinearity::Exponential | Nonlinearity::Power { .. } => 1.0,
            Nonlinearity::CustomMonotone { table } => table.f[0],
        }
    }

    /// Largest `s` where `f` is defined.
    pub fn s_max(&self) -> f64 {
        match self {
            Nonlinearity::CustomMonotone { table } => table.s_max(),
            _ => f64::INFINITY,
        }
    }

    fn check_nonneg(s: f64) -> Result<()> {
        if !(s >= 0.0) {
            return Err(GelfandError::domain(
                "s",
                s,
                "f is only defined on [0, inf)",
            ));
        }
        Ok(())
    }

    pub fn f(&self, s: f64) -> Result<f64> {
        Self::check_nonneg(s)?;
        match self {
            Nonlinearity::Exponential => Ok(s.exp()),
            Nonlinearity::Power { m } => Ok((1.0 + s).powf(*m)),
            Nonlinearity::CustomMonotone { table } => table.eval(s),
        }
    }

    /// `f(max(s, 0))`, the continuous extension used inside trial steps of
    /// the shooting integrator.
    pub(crate) fn f_clamped(&self, s: f64) -> Result<f64> {
        self.f(s.max(0.0))
    }

    /// `F(s) = ∫₀ˢ f`.
    #[allow(non_snake_case)]
    pub fn F(&self, s: f64) -> Result<f64> {
        Self::check_nonneg(s)?;
        match self {
            Nonlinearity::Exponential => Ok(s.exp_m1()),
            Nonlinearity::Power { m } => Ok(((m + 1.0) * s.ln_1p()).exp_m1() / (m + 1.0)),
            Nonlinearity::CustomMonotone { table } => table.antiderivative(s),
        }
    }

    /// `f⁻¹(y)` for `y ≥ f(0)`.
    pub fn f_inv(&self, y: f64) -> Result<f64> {
        let f0 = self.f0();
        if !(y >= f0) {
            return Err(GelfandError::domain(
                "y",
                y,
                format!("f^-1 needs y >= f(0) = {f0}"),
            ));
        }
        if y == f0 {
            return Ok(0.0);
        }
        match self {
            Nonlinearity::Exponential => Ok(y.ln()),
            Nonlinearity::Power { m } => Ok((y.ln() / m).exp_m1()),
            Nonlinearity::CustomMonotone { table } => table.invert(y),
        }
    }

    /// `f'(s)`: analytic for the closed-form families, central difference
    /// with `h = 1e-6` for tables (one-sided at the table ends).
    pub fn f_prime(&self, s: f64) -> Result<f64> {
        Self::check_nonneg(s)?;
        match self {
            Nonlinearity::Exponential => Ok(s.exp()),
            Nonlinearity::Power { m } => Ok(m * (1.0 + s).powf(m - 1.0)),
            Nonlinearity::CustomMonotone { table } => {
                const H: f64 = 1e-6;
                let lo = (s - H).max(0.0);
                let hi = (s + H).min(table.s_max());
                Ok((table.eval(hi)? - table.eval(lo)?) / (hi - lo))
            }
        }
    }

    /// Closed-form `(ᾱ_p, F_p(ᾱ_p))` where one exists.
    pub fn fp_closed_form(&self, p: f64) -> Option<(f64, f64)> {
        match self {
            Nonlinearity::Exponential => {
                Some((p - 1.0, ((p - 1.0) / std::f64::consts::E).powf(p - 1.0)))
            }
            Nonlinearity::Power { m } if *m > p - 1.0 => {
                let a = p - 1.0;
                let b = m - p + 1.0;
                let val = (a * a.ln() + b * b.ln() - m * m.ln()).exp();
                Some((a / b, val))
            }
            _ => None,
        }
    }

    /// Maximizes `F_p(α) = α^{p-1}/f(α)` over `α ≥ 0`: bracket by doubling
    /// (or halving) until `F_p` turns over, then golden-section on `ln F_p`.
    pub fn maximize_fp(&self, p: f64) -> Result<FpProfile> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(GelfandError::domain("p", p, "need p > 1"));
        }
        if let Nonlinearity::Power { m } = self {
            if *m <= p - 1.0 {
                return Err(GelfandError::MaximumNotAttained(format!(
                    "(1+s)^{m} grows too slowly: need m > p - 1 = {}",
                    p - 1.0
                )));
            }
        }
        let s_max = self.s_max();
        let log_fp = |a: f64| -> Result<f64> { Ok((p - 1.0) * a.ln() - self.f(a)?.ln()) };

        let mut x = 1.0f64.min(0.5 * s_max);
        let mut lx = log_fp(x)?;
        let mut grew = false;
        for _ in 0..1100 {
            let up = 2.0 * x;
            if up > s_max {
                break;
            }
            let lu = log_fp(up)?;
            if lu > lx {
                x = up;
                lx = lu;
                grew = true;
            } else {
                break;
            }
        }
        if !grew {
            for _ in 0..1100 {
                let down = 0.5 * x;
                let ld = log_fp(down)?;
                if ld > lx {
                    x = down;
                    lx = ld;
                } else {
                    break;
                }
            }
        }
        let hi = (2.0 * x).min(s_max);
        if hi == s_max && log_fp(s_max)? >= lx {
            return Err(GelfandError::MaximumNotAttained(format!(
                "F_p still increasing at the table end s = {s_max}"
            )));
        }
        let (alpha_bar, lmax) = golden_max(log_fp, 0.5 * x, hi, 1e-10, 0.0, 400)?;
        let fp_max = lmax.exp();
        let stationarity_residual =
            (alpha_bar * self.f_prime(alpha_bar)? / self.f(alpha_bar)? - (p - 1.0)).abs();
        Ok(FpProfile {
            p,
            alpha_bar,
            fp_max,
            stationarity_residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_table() -> Nonlinearity {
        let s: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
        let f: Vec<f64> = s.iter().map(|x| 1.0 + x).collect();
        Nonlinearity::custom(MonotoneTable::new(s, f).unwrap())
    }

    fn exp_table() -> Nonlinearity {
        let s: Vec<f64> = (0..=400).map(|k| k as f64 * 0.05).collect();
        let f: Vec<f64> = s.iter().map(|x| x.exp()).collect();
        Nonlinearity::custom(MonotoneTable::new(s, f).unwrap())
    }

    #[test]
    fn eval_f_examples() {
        let e = Nonlinearity::Exponential;
        assert_eq!(e.f(0.0).unwrap(), 1.0);
        assert!((e.f(2f64.ln()).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(Nonlinearity::power(2.0).unwrap().f(1.0).unwrap(), 4.0);
    }

    #[test]
    fn eval_f_domain_errors() {
        assert!(Nonlinearity::Exponential.f(-0.1).is_err());
        assert!(linear_table().f(10.5).is_err());
        assert!(linear_table().f(-1e-9).is_err());
    }

    #[test]
    fn antiderivative_examples() {
        let e = Nonlinearity::Exponential;
        assert!((e.F(1.0).unwrap() - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert_eq!(Nonlinearity::power(2.0).unwrap().F(0.0).unwrap(), 0.0);
        // quadrature of the table vs s + s^2/2
        assert!((linear_table().F(2.0).unwrap() - 4.0).abs() < 1e-13);
        assert!((linear_table().F(2.1).unwrap() - (2.1 + 2.1 * 2.1 / 2.0)).abs() < 1e-13);
    }

    #[test]
    fn inverse_examples() {
        let e = Nonlinearity::Exponential;
        assert!((e.f_inv(2.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(e.f_inv(1.0).unwrap(), 0.0);
        assert!((Nonlinearity::power(3.0).unwrap().f_inv(8.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(e.f_inv(0.5).is_err());
        assert!((linear_table().f_inv(3.5).unwrap() - 2.5).abs() < 1e-13);
        assert!(linear_table().f_inv(12.0).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(MonotoneTable::new(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(MonotoneTable::new(vec![0.1, 1.0], vec![1.0, 2.0]).is_err());
        assert!(MonotoneTable::new(vec![0.0, 1.0], vec![0.0, 2.0]).is_err());
        assert!(MonotoneTable::new(vec![0.0, 1.0, 0.5], vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn csv_ingest() {
        let t = MonotoneTable::from_csv_str("s,f\n0,1\n1,2\n2,3\n").unwrap();
        assert_eq!(t.s_max(), 2.0);
        assert!(MonotoneTable::from_csv_str("x,y\n0,1\n1,2\n").is_err());
    }

    #[test]
    fn parse_family_specs() {
        assert_eq!(
            Nonlinearity::from_spec("exp").unwrap(),
            Nonlinearity::Exponential
        );
        assert_eq!(
            Nonlinearity::from_spec("power:2.5").unwrap(),
            Nonlinearity::Power { m: 2.5 }
        );
        assert!(Nonlinearity::from_spec("power:-1").is_err());
        assert!(Nonlinearity::from_spec("cubic").is_err());
    }

    #[test]
    fn maximize_fp_examples() {
        let e = Nonlinearity::Exponential;
        let prof = e.maximize_fp(2.0).unwrap();
        assert!((prof.alpha_bar - 1.0).abs() < 1e-6);
        assert!((prof.fp_max - (-1.0f64).exp()).abs() < 1e-12);
        let pw = Nonlinearity::power(2.0).unwrap().maximize_fp(2.0).unwrap();
        assert!((pw.fp_max - 0.25).abs() < 1e-12);
        assert!(Nonlinearity::power(0.4).unwrap().maximize_fp(1.5).is_err());
    }

    #[test]
    fn maximize_fp_golden_oracle_p15() {
        // independent scan: golden section of F_p on [0, 50]
        let fp = |a: f64| a.powf(0.5) / a.exp();
        let (mut a, mut b) = (0.0f64, 50.0f64);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if fp(x1) < fp(x2) {
                a = x1;
            } else {
                b = x2;
            }
        }
        let oracle = fp(0.5 * (a + b));
        let prof = Nonlinearity::Exponential.maximize_fp(1.5).unwrap();
        assert!((prof.fp_max - oracle).abs() < 1e-12);
        assert!((oracle - (0.5f64 / std::f64::consts::E).sqrt()).abs() < 1e-12);
        assert!((prof.fp_max - 0.428_882).abs() < 1e-6);
    }

    #[test]
    fn maximize_fp_on_tables() {
        let prof = exp_table().maximize_fp(2.0).unwrap();
        // monotone cubic slopes are second-order accurate on h = 0.05
        assert!((prof.alpha_bar - 1.0).abs() < 1e-3);
        assert!((prof.fp_max - (-1.0f64).exp()).abs() < 1e-6);
        assert!(prof.stationarity_residual < 1e-4);
        // f = 1 + s with p = 2: F_p = s/(1+s) increases up to the table end
        assert!(linear_table().maximize_fp(2.0).is_err());
    }
}
