//! The thirteen acceptance criteria, runnable in-process. Each check returns
//! a pass/fail line with a short numeric detail.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use gelfand_core::asymptotics::{clau_selector, radial_candidates, sweep_p, SweepReport};
use gelfand_core::one_dim::{
    build_solution_1d, classify_1d, validate_solution_1d, Classification1D, IntervalUnion,
};
use gelfand_core::pradial::{
    bounds, energy_trace, integral_residual, lambda_of_alpha, lambda_star, shoot_lambda,
    IvpControls, RadialProblem, ShotResult,
};
use gelfand_core::radial1::{
    check_clau, classify_radial, constant_solution, jump_residual, lambda_bar, unbounded_solution,
    BumpFamily, KindTag, RadialClass, RadialKind,
};
use gelfand_core::specfun::{digamma, g_factor, gamma, EULER_GAMMA};
use gelfand_core::Nonlinearity;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Command, RunConfig, SCHEMA_VERSION};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: impl Into<String>, title: &str, passed: bool, detail: String) -> Self {
        Outcome {
            id: id.into(),
            title: title.to_string(),
            passed,
            detail,
        }
    }

    fn failed(id: impl Into<String>, title: &str, err: impl std::fmt::Display) -> Self {
        Self::new(id, title, false, format!("error: {err}"))
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "criterion {}: {verdict}: {} ({})",
            self.id, self.title, self.detail
        )
    }
}

type Check = fn() -> Outcome;
type BatteryShot = (usize, f64, f64, Result<ShotResult, String>);
type SandwichRow = (usize, f64, f64, f64, f64);

pub const CRITERIA: [(u32, Check); 13] = [
    (1, threshold_1d),
    (2, radial_thresholds),
    (3, jump_condition),
    (4, bratu),
    (5, sandwich),
    (6, p_limit),
    (7, minimal_branch_vanishing),
    (8, energy_law),
    (9, integral_equation),
    (10, special_functions),
    (11, oscillation),
    (12, selector),
    (13, determinism),
];

/// Runs every criterion in order.
pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|(_, check)| check()).collect()
}

/// Runs criterion `id` alone.
pub fn run_one(id: u32) -> Option<Outcome> {
    CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, check)| check())
}

fn exp() -> Nonlinearity {
    Nonlinearity::Exponential
}

fn power2() -> Nonlinearity {
    Nonlinearity::power(2.0).expect("m = 2 is valid")
}

fn controls() -> IvpControls {
    IvpControls::default()
}

pub fn threshold_1d() -> Outcome {
    const TITLE: &str = "1-D threshold exactness";
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d7e5);
    let mut mismatches = 0usize;
    let mut bad_builds = 0usize;
    let mut cases = 0usize;
    for _ in 0..100 {
        let count = rng.random_range(1..=6);
        let mut left = rng.random_range(-5.0..5.0);
        let mut pieces = Vec::with_capacity(count);
        for _ in 0..count {
            let len: f64 = rng.random_range(0.05..3.0);
            pieces.push((left, left + len));
            left += len + rng.random_range(0.0..1.0);
        }
        let domain = match IntervalUnion::new(pieces) {
            Ok(d) => d,
            Err(e) => return Outcome::failed(1.to_string(), TITLE, e),
        };
        for model in [exp(), power2()] {
            let star = domain.lambda_star(&model);
            let lambdas = [
                star,
                star.next_up(),
                star.next_down(),
                star * rng.random_range(0.05..0.999),
                star * rng.random_range(1.001..4.0),
            ];
            for lambda in lambdas {
                cases += 1;
                let class = match classify_1d(&domain, &model, lambda) {
                    Ok(c) => c,
                    Err(e) => return Outcome::failed(1.to_string(), TITLE, e),
                };
                let product = lambda * domain.max_len() * model.f0();
                if (class == Classification1D::NoSolution) != (product > 2.0) {
                    mismatches += 1;
                }
                if class == Classification1D::NoSolution {
                    continue;
                }
                // all intervals active below the threshold, none at it
                let active: BTreeSet<usize> = if product < 2.0 {
                    (0..domain.len()).collect()
                } else {
                    BTreeSet::new()
                };
                let ok = build_solution_1d(&domain, &model, lambda, &active)
                    .and_then(|sol| validate_solution_1d(&sol, &model))
                    .map(|r| r.is_solution(1e-12))
                    .unwrap_or(false);
                if !ok {
                    bad_builds += 1;
                }
            }
        }
    }
    Outcome::new(
        "1",
        TITLE,
        mismatches == 0 && bad_builds == 0,
        format!(
            "{cases} cases, {mismatches} classification mismatches, {bad_builds} invalid builds"
        ),
    )
}

pub fn radial_thresholds() -> Outcome {
    const TITLE: &str = "radial thresholds";
    let mut failures = Vec::new();
    let mut cases = 0;
    for dim in [2usize, 3, 5] {
        for model in [exp(), power2()] {
            let star = dim as f64 / model.f0();
            let bar = (dim - 1) as f64 / model.f0();
            let expect = |lambda: f64| -> RadialClass {
                if lambda > star {
                    return RadialClass::NoSolution;
                }
                let mut kinds = vec![KindTag::Trivial];
                if lambda < star {
                    kinds.push(KindTag::Constant);
                }
                if lambda <= bar {
                    kinds.extend([KindTag::Unbounded, KindTag::Discontinuous]);
                }
                RadialClass::Available(kinds)
            };
            if gelfand_core::radial1::lambda_star(dim, &model) != star
                || lambda_bar(dim, &model) != bar
            {
                failures.push(format!("N={dim} {}: thresholds", model.id()));
            }
            for lambda in [
                star,
                star.next_up(),
                star.next_down(),
                bar,
                bar.next_up(),
                bar.next_down(),
                0.5 * bar,
            ] {
                cases += 1;
                match classify_radial(dim, &model, lambda) {
                    Ok(c) if c == expect(lambda) => {}
                    Ok(c) => {
                        failures.push(format!("N={dim} {} lambda={lambda}: {c:?}", model.id()))
                    }
                    Err(e) => failures.push(format!("N={dim} {} lambda={lambda}: {e}", model.id())),
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{cases} cases agree")
    } else {
        failures.join("; ")
    };
    Outcome::new("2", TITLE, failures.is_empty(), detail)
}

pub fn jump_condition() -> Outcome {
    const TITLE: &str = "jump condition";
    let exact = 2.0 * (1.0 - std::f64::consts::LN_2);
    let value = match jump_residual(2, &exp(), 1.0, 0.5) {
        Ok(v) => v,
        Err(e) => return Outcome::failed("3", TITLE, e),
    };
    let value_ok = (value - exact).abs() <= 1e-12;

    let mut min_positive = f64::INFINITY;
    let mut grid_ok = true;
    for dim in 2..=11usize {
        let bar = (dim - 1) as f64;
        for i in 1..=10 {
            let lambda = bar * i as f64 / 10.0;
            for k in 1..=10 {
                let rho = k as f64 / 11.0;
                match jump_residual(dim, &exp(), lambda, rho) {
                    Ok(j) if j > 0.0 => min_positive = min_positive.min(j),
                    _ => grid_ok = false,
                }
            }
        }
    }

    let family = BumpFamily::default();
    let mut worst_clau = 0.0f64;
    for dim in [2usize, 3, 5] {
        for model in [exp(), power2()] {
            let bar = lambda_bar(dim, &model);
            let cands = [
                constant_solution(dim, &model, 0.5 * bar),
                constant_solution(
                    dim,
                    &model,
                    0.9 * gelfand_core::radial1::lambda_star(dim, &model),
                ),
                unbounded_solution(dim, &model, bar),
            ];
            for c in cands {
                let lambda = match &c {
                    Ok(s) => s.lambda(),
                    Err(e) => return Outcome::failed("3", TITLE, e),
                };
                let s = c.expect("checked above");
                match check_clau(&s, dim, &model, lambda, &family) {
                    Ok(r) => worst_clau = worst_clau.max(r.residual),
                    Err(e) => return Outcome::failed("3", TITLE, e),
                }
            }
        }
    }
    let clau_ok = worst_clau <= 1e-10;
    Outcome::new(
        "3",
        TITLE,
        value_ok && grid_ok && clau_ok,
        format!(
            "J(2,exp,1,0.5) = {value:.13} vs {exact:.13}; grid min = {min_positive:.3e}; continuous clau max = {worst_clau:.2e}"
        ),
    )
}

pub fn bratu() -> Outcome {
    const TITLE: &str = "Bratu cross-checks";
    let mut parts = Vec::new();
    let mut passed = true;
    for (dim, oracle) in [(1usize, 0.878_457_679_781_3), (3, 3.321_992_118_340)] {
        let start = Instant::now();
        let value =
            RadialProblem::new(dim, 2.0, exp()).and_then(|pr| lambda_star(&pr, &controls()));
        let secs = start.elapsed().as_secs_f64();
        match value {
            Ok(s) => {
                let rel = (s.lambda_star - oracle).abs() / oracle;
                passed &= rel <= 5e-3 && secs <= 30.0;
                parts.push(format!(
                    "N={dim}: {:.10} (rel {rel:.1e}, {secs:.2}s)",
                    s.lambda_star
                ));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("N={dim}: {e}"));
            }
        }
    }
    Outcome::new("4", TITLE, passed, parts.join("; "))
}

pub fn sandwich() -> Outcome {
    const TITLE: &str = "sandwich property";
    let cases: Vec<(usize, f64)> = [1usize, 2, 3]
        .iter()
        .flat_map(|&n| [1.1, 1.5, 2.0].map(|p| (n, p)))
        .collect();
    let rows: Vec<Result<SandwichRow, String>> = cases
        .par_iter()
        .map(|&(dim, p)| {
            let pr = RadialProblem::new(dim, p, exp()).map_err(|e| e.to_string())?;
            pr.check_window().map_err(|e| e.to_string())?;
            let b = bounds(&pr).map_err(|e| e.to_string())?;
            let s = lambda_star(&pr, &controls()).map_err(|e| e.to_string())?;
            Ok((dim, p, b.lower, s.lambda_star, b.upper))
        })
        .collect();
    let mut passed = true;
    let mut worst_margin = f64::INFINITY;
    let mut errors = Vec::new();
    for row in rows {
        match row {
            Ok((dim, p, lo, val, hi)) => {
                if !(lo <= val && val <= hi) {
                    passed = false;
                    errors.push(format!("N={dim} p={p}: {lo} <= {val} <= {hi} fails"));
                }
                worst_margin = worst_margin.min((val - lo).min(hi - val));
            }
            Err(e) => {
                passed = false;
                errors.push(e);
            }
        }
    }
    let detail = if errors.is_empty() {
        format!("9 cases inside, smallest margin {worst_margin:.3e}")
    } else {
        errors.join("; ")
    };
    Outcome::new("5", TITLE, passed, detail)
}

const P_LIST: [f64; 4] = [1.5, 1.2, 1.1, 1.05];

fn limit_sweep() -> &'static Result<SweepReport, String> {
    static SWEEP: OnceLock<Result<SweepReport, String>> = OnceLock::new();
    SWEEP.get_or_init(|| sweep_p(2, &exp(), &P_LIST, 1.0, &controls()).map_err(|e| e.to_string()))
}

pub fn p_limit() -> Outcome {
    const TITLE: &str = "p -> 1 limit of lambda_p*";
    let report = match limit_sweep() {
        Ok(r) => r,
        Err(e) => return Outcome::failed("6", TITLE, e),
    };
    if let Some(row) = report.rows.iter().find(|r| r.error.is_some()) {
        return Outcome::failed(
            "6",
            TITLE,
            format!("p={}: {}", row.p, row.error.as_deref().unwrap_or("")),
        );
    }
    let gaps: Vec<f64> = report.rows.iter().map(|r| r.gap).collect();
    let last = *gaps.last().unwrap_or(&f64::NAN);
    let in_band = (0.08..=0.10).contains(&last);
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Outcome::new(
        "6",
        TITLE,
        in_band && decreasing && report.rows.len() == P_LIST.len(),
        format!("gaps over p = {P_LIST:?}: {gaps:.6?}"),
    )
}

pub fn minimal_branch_vanishing() -> Outcome {
    const TITLE: &str = "minimal branch vanishing";
    let report = match limit_sweep() {
        Ok(r) => r,
        Err(e) => return Outcome::failed("7", TITLE, e),
    };
    let mut values = Vec::new();
    let mut bounded = true;
    for row in &report.rows {
        match row.alpha_min {
            Some(a) => {
                bounded &= a <= (row.p - 1.0) / row.p;
                values.push(a);
            }
            None => return Outcome::failed("7", TITLE, format!("no alpha_min at p={}", row.p)),
        }
    }
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    Outcome::new(
        "7",
        TITLE,
        bounded && decreasing && values.len() == P_LIST.len(),
        format!(
            "alpha_min over p = {P_LIST:?}: {:?}",
            values
                .iter()
                .map(|a| format!("{a:.4e}"))
                .collect::<Vec<_>>()
        ),
    )
}

const BATTERY_PAIRS: [(usize, f64); 7] = [
    (1, 2.0),
    (2, 2.0),
    (3, 2.0),
    (1, 1.5),
    (2, 1.5),
    (3, 1.1),
    (2, 1.05),
];
const BATTERY_ALPHAS: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

fn battery() -> &'static Vec<BatteryShot> {
    static SHOTS: OnceLock<Vec<BatteryShot>> = OnceLock::new();
    SHOTS.get_or_init(|| {
        let cases: Vec<(usize, f64, f64)> = BATTERY_PAIRS
            .iter()
            .flat_map(|&(n, p)| BATTERY_ALPHAS.map(|a| (n, p, a)))
            .collect();
        cases
            .par_iter()
            .map(|&(dim, p, alpha)| {
                let shot = RadialProblem::new(dim, p, exp())
                    .and_then(|pr| shoot_lambda(&pr, alpha, &controls()))
                    .map_err(|e| e.to_string());
                (dim, p, alpha, shot)
            })
            .collect()
    })
}

pub fn energy_law() -> Outcome {
    const TITLE: &str = "energy law";
    let mut worst_increase = 0.0f64;
    let mut worst_drift_1d = 0.0f64;
    let mut checked = 0;
    let mut problems = Vec::new();
    for (dim, p, alpha, shot) in battery() {
        let shot = match shot {
            Ok(s) => s,
            Err(e) => {
                problems.push(format!("N={dim} p={p} alpha={alpha}: {e}"));
                continue;
            }
        };
        if !shot.accepted {
            continue;
        }
        checked += 1;
        let trace = energy_trace(&shot.profile);
        let e0 = trace.energy[0].abs();
        worst_increase = worst_increase.max(trace.max_increase / e0);
        if *dim == 1 {
            worst_drift_1d = worst_drift_1d.max(trace.max_drift / e0);
        }
    }
    let passed =
        problems.is_empty() && checked > 0 && worst_increase <= 1e-8 && worst_drift_1d <= 1e-8;
    let mut detail = format!(
        "{checked} accepted profiles; max increase {worst_increase:.2e} E(0); N=1 drift {worst_drift_1d:.2e} E(0)"
    );
    if !problems.is_empty() {
        detail.push_str(&format!("; {}", problems.join("; ")));
    }
    Outcome::new("8", TITLE, passed, detail)
}

pub fn integral_equation() -> Outcome {
    const TITLE: &str = "integral-equation residual";
    let mut worst = 0.0f64;
    let mut problems = Vec::new();
    for (dim, p, alpha, shot) in battery() {
        let residual = shot
            .as_ref()
            .map_err(|e| e.clone())
            .and_then(|s| integral_residual(&s.profile, &exp()).map_err(|e| e.to_string()));
        match residual {
            Ok(r) => worst = worst.max(r / alpha),
            Err(e) => problems.push(format!("N={dim} p={p} alpha={alpha}: {e}")),
        }
    }
    let passed = problems.is_empty() && worst <= 1e-6;
    let mut detail = format!(
        "{} profiles; max residual {worst:.2e} alpha",
        battery().len()
    );
    if !problems.is_empty() {
        detail.push_str(&format!("; {}", problems.join("; ")));
    }
    Outcome::new("9", TITLE, passed, detail)
}

pub fn special_functions() -> Outcome {
    const TITLE: &str = "special functions";
    let run = || -> gelfand_core::Result<(f64, f64, f64, Vec<f64>)> {
        let g5 = gamma(5.0)?;
        let ratio = gamma(4.5)? / (gamma(3.0)? * gamma(3.5)?);
        let psi2 = digamma(2.0)?;
        let mut slopes = Vec::new();
        for dim in 1..=5usize {
            let p: f64 = 1.001;
            let h = (p / std::f64::consts::E).powf(p - 1.0) * g_factor(p, dim)?;
            slopes.push((h - 1.0) / (p - 1.0));
        }
        Ok((g5, ratio, psi2, slopes))
    };
    match run() {
        Ok((g5, ratio, psi2, slopes)) => {
            let passed = ((g5 - 24.0) / 24.0).abs() <= 1e-10
                && ((ratio - 1.75) / 1.75).abs() <= 1e-10
                && (psi2 - (1.0 - EULER_GAMMA)).abs() <= 1e-10
                && slopes.iter().all(|s| (s + 1.0).abs() <= 0.1);
            Outcome::new(
                "10",
                TITLE,
                passed,
                format!("gamma(5) = {g5}, ratio = {ratio}, digamma(2) = {psi2:.15}, slopes N=1..5 = {slopes:.4?}"),
            )
        }
        Err(e) => Outcome::failed("10", TITLE, e),
    }
}

pub fn oscillation() -> Outcome {
    const TITLE: &str = "oscillation around the singular level";
    let problem = match RadialProblem::new(3, 2.0, exp()) {
        Ok(p) => p,
        Err(e) => return Outcome::failed("11", TITLE, e),
    };
    let alphas: Vec<f64> = (0..=390).map(|i| 1.0 + 0.1 * i as f64).collect();
    let lambdas: Result<Vec<f64>, _> = alphas
        .par_iter()
        .map(|&a| lambda_of_alpha(&problem, a, &controls()))
        .collect();
    let lambdas = match lambdas {
        Ok(l) => l,
        Err(e) => return Outcome::failed("11", TITLE, e),
    };
    let level = problem.singular_level();
    let diffs: Vec<f64> = lambdas.iter().map(|l| l - level).collect();
    let changes = diffs.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    let far = alphas
        .iter()
        .zip(&diffs)
        .filter(|(a, _)| **a >= 10.0)
        .map(|(_, d)| d.abs())
        .fold(0.0f64, f64::max);
    Outcome::new(
        "11",
        TITLE,
        changes >= 2 && far <= 0.5,
        format!("{changes} sign changes of lambda - {level} on [1, 40]; max |lambda - {level}| for alpha >= 10: {far:.4}"),
    )
}

pub fn selector() -> Outcome {
    const TITLE: &str = "clau selector";
    let rhos: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let run = || -> gelfand_core::Result<_> {
        let cands = radial_candidates(2, &exp(), 0.5, &rhos)?;
        clau_selector(2, &exp(), 0.5, &cands)
    };
    let report = match run() {
        Ok(r) => r,
        Err(e) => return Outcome::failed("12", TITLE, e),
    };
    let accepted: Vec<KindTag> = report.satisfied.iter().map(|e| e.kind.tag()).collect();
    let rejected: Vec<f64> = report
        .violated
        .iter()
        .filter_map(|e| match e.kind {
            RadialKind::Discontinuous { rho } => Some(rho),
            _ => None,
        })
        .collect();
    let passed = accepted == [KindTag::Trivial, KindTag::Constant, KindTag::Unbounded]
        && report.violated.len() == rhos.len()
        && rejected == rhos;
    let smallest = report
        .violated
        .iter()
        .map(|e| e.clau_residual)
        .fold(f64::INFINITY, f64::min);
    Outcome::new(
        "12",
        TITLE,
        passed,
        format!(
            "accepted {accepted:?}; rejected {} discontinuous, smallest residual {smallest:.3e}",
            rejected.len()
        ),
    )
}

fn scratch_dir(tag: &str) -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("gelfand-lab-{}-{tag}-{n}", std::process::id()))
}

/// Every file in `dir` except `resolved_config.json`, sorted by name.
pub fn artifacts(dir: &Path) -> std::io::Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name != "resolved_config.json" {
            files.push((name, std::fs::read(entry.path())?));
        }
    }
    files.sort();
    Ok(files)
}

fn run_in(
    command: Command,
    threads: usize,
    dir: &Path,
) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let config = RunConfig {
        schema_version: SCHEMA_VERSION,
        command,
        json: false,
        out: dir.to_path_buf(),
        threads,
        controls: controls(),
        deterministic: true,
    };
    crate::run::execute(&config)?;
    Ok(artifacts(dir)?)
}

/// Commands compared across thread counts.
pub fn determinism_commands() -> Vec<Command> {
    vec![
        Command::Curve {
            dim: 3,
            p: 2.0,
            f: "exp".into(),
            alpha_grid: "log:0.01:20:120".into(),
        },
        Command::Sweep {
            dim: 2,
            f: "exp".into(),
            p_list: "1.5,1.2,1.1".into(),
            lambda_tilde: 1.0,
        },
    ]
}

pub fn determinism() -> Outcome {
    const TITLE: &str = "determinism across thread counts";
    let mut details = Vec::new();
    let mut passed = true;
    for command in determinism_commands() {
        let name = command.name();
        let (one, four) = (
            scratch_dir(&format!("{name}-t1")),
            scratch_dir(&format!("{name}-t4")),
        );
        let result =
            run_in(command.clone(), 1, &one).and_then(|a| Ok((a, run_in(command, 4, &four)?)));
        let _ = std::fs::remove_dir_all(&one);
        let _ = std::fs::remove_dir_all(&four);
        match result {
            Ok((a, b)) => {
                let same = a == b && !a.is_empty();
                passed &= same;
                details.push(format!(
                    "{name}: {} files {}",
                    a.len(),
                    if same { "identical" } else { "differ" }
                ));
            }
            Err(e) => {
                passed = false;
                details.push(format!("{name}: {e}"));
            }
        }
    }
    Outcome::new("13", TITLE, passed, details.join("; "))
}

/// The documented CLI examples and their expected printed output.
pub const DOC_EXAMPLES: [(&[&str], &str); 3] = [
    (
        &["lambda-star", "--N", "1", "--p", "2", "--f", "exp"],
        "0.8785",
    ),
    (
        &["bounds", "--N", "3", "--p", "2", "--f", "exp"],
        "lower = 2.2073\nupper = 3.8628",
    ),
    (
        &[
            "radial1", "classify", "--N", "2", "--f", "exp", "--lambda", "2.5",
        ],
        "NoSolution",
    ),
];

/// Runs each documented example in-process and compares its printed text
/// against the golden output, rounded to the digits shown.
pub fn doc_examples() -> Vec<Outcome> {
    use clap::Parser;
    DOC_EXAMPLES
        .iter()
        .enumerate()
        .map(|(i, (args, golden))| {
            let id = format!("example {}", i + 1);
            let title = args.join(" ");
            let dir = scratch_dir("example");
            let argv = std::iter::once("gelfand-lab")
                .chain(args.iter().copied())
                .chain(["--threads", "1", "--out"])
                .map(String::from)
                .chain(std::iter::once(dir.to_string_lossy().into_owned()));
            let run = crate::config::Cli::try_parse_from(argv)
                .map_err(|e| CliError::Usage(e.to_string()))
                .and_then(RunConfig::resolve)
                .and_then(|c| crate::run::execute(&c));
            let _ = std::fs::remove_dir_all(&dir);
            match run {
                Ok(out) => {
                    let passed = matches_golden(&out.text, golden);
                    Outcome::new(id, &title, passed, format!("printed {:?}", out.text))
                }
                Err(e) => Outcome::failed(id, &title, e),
            }
        })
        .collect()
}

/// Line-by-line match where a number in the output may differ from the
/// golden one by one unit in the golden's last decimal.
pub fn matches_golden(text: &str, golden: &str) -> bool {
    let lines: Vec<&str> = text.lines().collect();
    let gold: Vec<&str> = golden.lines().collect();
    if lines.len() < gold.len() {
        return false;
    }
    gold.iter().zip(&lines).all(|(g, l)| {
        let gt: Vec<&str> = g.split_whitespace().collect();
        let lt: Vec<&str> = l.split_whitespace().collect();
        gt.len() == lt.len()
            && gt
                .iter()
                .zip(&lt)
                .all(|(a, b)| match (a.parse::<f64>(), b.parse::<f64>()) {
                    (Ok(x), Ok(y)) => {
                        let decimals = a.split_once('.').map_or(0, |(_, d)| d.len()) as i32;
                        (x - y).abs() <= 10f64.powi(-decimals)
                    }
                    _ => a == b,
                })
    })
}
