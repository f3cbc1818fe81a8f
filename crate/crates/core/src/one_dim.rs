//! 1-Laplacian Gelfand problem on a finite union of disjoint open intervals.
//!
//! Every solution is constant on each interval, and the associated field `z`
//! is affine there. A solution is described by one constant `A_n` and one
//! coefficient `c_n` per interval, with
//! `z(x) = c_n (a_n + b_n - 2x) / (b_n - a_n)` on `(a_n, b_n)`.
//! The critical value is `λ* = 2 / (L f(0))` with `L` the longest length.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{GelfandError, Result};
use crate::nonlinearity::Nonlinearity;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
    #[serde(rename = "L")]
    max_len: f64,
}

#[derive(Deserialize)]
struct IntervalUnionJson {
    intervals: Vec<[f64; 2]>,
}

impl IntervalUnion {
    /// Intervals keep the order given; they must be nonempty and pairwise
    /// disjoint.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(GelfandError::InvalidInput("domain has no intervals".into()));
        }
        for &(a, b) in &intervals {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(GelfandError::InvalidInput(format!(
                    "bad interval ({a}, {b})"
                )));
            }
        }
        let mut sorted = intervals.clone();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in sorted.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(GelfandError::InvalidInput(format!(
                    "intervals ({}, {}) and ({}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let max_len = intervals.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
        Ok(IntervalUnion { intervals, max_len })
    }

    /// Parses `{"intervals": [[a, b], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: IntervalUnionJson = serde_json::from_str(text)?;
        Self::new(raw.intervals.into_iter().map(|[a, b]| (a, b)).collect())
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Longest interval length `L`.
    pub fn max_len(&self) -> f64 {
        self.max_len
    }

    /// Cheeger constant `h = 2/L` of the union.
    pub fn cheeger(&self) -> f64 {
        2.0 / self.max_len
    }

    pub fn lambda_star(&self, model: &Nonlinearity) -> f64 {
        2.0 / (self.max_len * model.f0())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification1D {
    NoSolution,
    TrivialMinimal,
    TrivialMinimalPlusNontrivial,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(GelfandError::domain("lambda", lambda, "need lambda > 0"));
    }
    Ok(())
}

/// Compares `λ L f(0)` with `2`: above means no solution, equality means
/// only the trivial solution survives on the longest intervals.
pub fn classify_1d(
    domain: &IntervalUnion,
    model: &Nonlinearity,
    lambda: f64,
) -> Result<Classification1D> {
    check_lambda(lambda)?;
    let product = lambda * domain.max_len() * model.f0();
    Ok(if product > 2.0 {
        Classification1D::NoSolution
    } else if product == 2.0 {
        Classification1D::TrivialMinimal
    } else {
        Classification1D::TrivialMinimalPlusNontrivial
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionNote {
    /// Built at `λ = λ*` with an active interval strictly shorter than `L`.
    ActiveAtThreshold,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalRecord {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    /// `c_n` in `z(x) = c_n (a + b - 2x)/(b - a)`.
    pub z_coeff: f64,
    /// Slope `z' = -2 c_n / (b - a)`.
    pub z_slope: f64,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval1DSolution {
    pub domain: IntervalUnion,
    pub lambda: f64,
    pub values: Vec<f64>,
    pub z_coeffs: Vec<f64>,
    pub notes: Vec<SolutionNote>,
}

impl Interval1DSolution {
    /// Assembles a candidate from raw parts, e.g. to validate a hand-made
    /// object.
    pub fn from_parts(
        domain: IntervalUnion,
        lambda: f64,
        values: Vec<f64>,
        z_coeffs: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != domain.len() || z_coeffs.len() != domain.len() {
            return Err(GelfandError::InvalidInput(
                "need one value and one z coefficient per interval".into(),
            ));
        }
        Ok(Interval1DSolution {
            domain,
            lambda,
            values,
            z_coeffs,
            notes: Vec::new(),
        })
    }

    pub fn z(&self, n: usize, x: f64) -> f64 {
        let (a, b) = self.domain.intervals()[n];
        self.z_coeffs[n] * (a + b - 2.0 * x) / (b - a)
    }

    pub fn records(&self) -> Vec<IntervalRecord> {
        self.domain
            .intervals()
            .iter()
            .enumerate()
            .map(|(n, &(a, b))| IntervalRecord {
                a,
                b,
                value: self.values[n],
                z_coeff: self.z_coeffs[n],
                z_slope: -2.0 * self.z_coeffs[n] / (b - a),
                active: self.values[n] > 0.0,
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Export<'a> {
            lambda: f64,
            #[serde(rename = "L")]
            max_len: f64,
            notes: &'a [SolutionNote],
            intervals: Vec<IntervalRecord>,
        }
        Ok(serde_json::to_string_pretty(&Export {
            lambda: self.lambda,
            max_len: self.domain.max_len(),
            notes: &self.notes,
            intervals: self.records(),
        })?)
    }
}

/// Builds the solution that is positive exactly on `active`:
/// `A_n = f⁻¹(2/((b_n - a_n)λ))` with the steepest field `c_n = 1` there, and
/// `A_n = 0` with `c_n = λ f(0)(b_n - a_n)/2` elsewhere.
pub fn build_solution_1d(
    domain: &IntervalUnion,
    model: &Nonlinearity,
    lambda: f64,
    active: &BTreeSet<usize>,
) -> Result<Interval1DSolution> {
    check_lambda(lambda)?;
    if let Some(&bad) = active.iter().find(|&&n| n >= domain.len()) {
        return Err(GelfandError::InvalidInput(format!(
            "active index {bad} out of range (domain has {} intervals)",
            domain.len()
        )));
    }
    let class = classify_1d(domain, model, lambda)?;
    if class == Classification1D::NoSolution {
        return Err(GelfandError::NoSolution(format!(
            "lambda = {lambda} exceeds lambda* = {}",
            domain.lambda_star(model)
        )));
    }
    let f0 = model.f0();
    let mut notes = Vec::new();
    let mut values = Vec::with_capacity(domain.len());
    let mut z_coeffs = Vec::with_capacity(domain.len());
    for (n, &(a, b)) in domain.intervals().iter().enumerate() {
        let len = b - a;
        if active.contains(&n) {
            if class == Classification1D::TrivialMinimal {
                if len == domain.max_len() {
                    return Err(GelfandError::NoSolution(format!(
                        "at lambda = lambda* every solution vanishes on interval {n} of maximal length"
                    )));
                }
                if !notes.contains(&SolutionNote::ActiveAtThreshold) {
                    notes.push(SolutionNote::ActiveAtThreshold);
                }
            }
            values.push(model.f_inv(2.0 / (len * lambda))?);
            z_coeffs.push(1.0);
        } else {
            values.push(0.0);
            z_coeffs.push(lambda * f0 * len / 2.0);
        }
    }
    Ok(Interval1DSolution {
        domain: domain.clone(),
        lambda,
        values,
        z_coeffs,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Residual1D {
    /// `max(|z|) - 1` when positive.
    pub z_excess: f64,
    /// `max_n |-z' - λ f(A_n)|`.
    pub equation: f64,
    /// Number of positive intervals where `z(a) ≠ 1` or `z(b) ≠ -1`.
    pub boundary_violations: usize,
    /// `max |c_n - 1|` over positive intervals.
    pub boundary_defect: f64,
}

impl Residual1D {
    pub fn is_solution(&self, tol: f64) -> bool {
        self.z_excess <= tol && self.equation <= tol && self.boundary_violations == 0
    }
}

/// Checks `|z| ≤ 1`, `-z' = λ f(A_n)` and the sign condition at the ends of
/// intervals where the solution is positive.
pub fn validate_solution_1d(sol: &Interval1DSolution, model: &Nonlinearity) -> Result<Residual1D> {
    let mut res = Residual1D::default();
    for (n, &(a, b)) in sol.domain.intervals().iter().enumerate() {
        let c = sol.z_coeffs[n];
        let value = sol.values[n];
        // z is affine: its extreme values sit at the endpoints, where |z| = |c|
        res.z_excess = res.z_excess.max(c.abs() - 1.0);
        let minus_slope = 2.0 * c / (b - a);
        res.equation = res
            .equation
            .max((minus_slope - sol.lambda * model.f(value)?).abs());
        if value > 0.0 {
            let defect = (c - 1.0).abs();
            res.boundary_defect = res.boundary_defect.max(defect);
            if defect > 0.0 {
                res.boundary_violations += 1;
            }
        }
    }
    res.z_excess = res.z_excess.max(0.0);
    Ok(res)
}
