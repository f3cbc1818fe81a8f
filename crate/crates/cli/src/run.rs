//! Subcommand dispatch and artifact writing.

use std::collections::BTreeSet;
use std::path::Path;

use gelfand_core::asymptotics::{
    clau_selector, diagram, radial_candidates, sweep_p, DiagramParams, FigureKind,
};
use gelfand_core::one_dim::{build_solution_1d, classify_1d, validate_solution_1d, IntervalUnion};
use gelfand_core::pradial::{
    bifurcation_curve, bounds, bounds_csv, energy_trace, integral_residual, lambda_star, log_grid,
    shoot_lambda, shoot_lambda_bracketed, RadialProblem,
};
use gelfand_core::radial1::{
    classify_radial, constant_solution, discontinuous_solution, jump_residual, trivial_solution,
    unbounded_solution, validate_field_radial, RadialClass,
};
use gelfand_core::{GelfandError, Nonlinearity};
use serde_json::{json, Value};

use crate::config::{Command, FigureChoice, Radial1Action, RunConfig, SCHEMA_VERSION};
use crate::{acceptance, CliError};

/// Primary record and a human-readable summary of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: Value,
    pub text: String,
    /// False when the run completed but found a failure (selftest).
    pub success: bool,
}

impl Outcome {
    fn ok(record: Value, text: String) -> Self {
        Outcome {
            record,
            text,
            success: true,
        }
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| crate::config::finite(t).map_err(|e| CliError::Usage(format!("{what}: {e}"))))
        .collect()
}

/// `log:lo:hi:n`, `lin:lo:hi:n` or `a,b,c`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [kind @ ("log" | "lin"), lo, hi, n] => {
            let lo = crate::config::finite(lo).map_err(CliError::Usage)?;
            let hi = crate::config::finite(hi).map_err(CliError::Usage)?;
            let n: usize = n
                .parse()
                .map_err(|_| CliError::Usage(format!("bad point count in {spec:?}")))?;
            if n < 2 || !(lo > 0.0 && hi > lo) {
                return Err(CliError::Usage(format!(
                    "grid {spec:?} needs 0 < lo < hi and n >= 2"
                )));
            }
            if *kind == "log" {
                Ok(log_grid(lo, hi, n))
            } else {
                Ok((0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect())
            }
        }
        [single] => parse_list(single, "alpha grid"),
        _ => Err(CliError::Usage(format!("cannot parse grid {spec:?}"))),
    }
}

fn parse_intervals(s: &str) -> Result<Vec<(f64, f64)>, CliError> {
    s.split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("interval {pair:?} is not a:b")))?;
            Ok((
                crate::config::finite(a).map_err(CliError::Usage)?,
                crate::config::finite(b).map_err(CliError::Usage)?,
            ))
        })
        .collect()
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<(), CliError> {
    write(dir, name, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn model(spec: &str) -> Result<Nonlinearity, CliError> {
    Ok(Nonlinearity::from_spec(spec)?)
}

/// Runs the configured subcommand on the current thread pool.
pub fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    let out = config.out.as_path();
    let ctl = &config.controls;
    match &config.command {
        Command::OneDim {
            intervals,
            domain,
            f,
            lambda,
            active,
        } => {
            let union = match (intervals, domain) {
                (Some(s), None) => IntervalUnion::new(parse_intervals(s)?)?,
                (None, Some(path)) => IntervalUnion::from_json(&std::fs::read_to_string(path)?)?,
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --intervals and --domain".into(),
                    ))
                }
            };
            let m = model(f)?;
            let class = classify_1d(&union, &m, *lambda)?;
            let active: BTreeSet<usize> = active
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad interval index {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            let sol = build_solution_1d(&union, &m, *lambda, &active)?;
            let residual = validate_solution_1d(&sol, &m)?;
            let solution: Value = serde_json::from_str(&sol.to_json()?)?;
            let record = json!({
                "classification": class,
                "lambda_star": union.lambda_star(&m),
                "cheeger": union.cheeger(),
                "solution": solution,
                "residual": residual,
            });
            write_json(out, "one_dim.json", &record)?;
            let text = format!(
                "classification: {class:?}\nlambda* = {}\nvalues: {:?}",
                union.lambda_star(&m),
                sol.values
            );
            Ok(Outcome::ok(record, text))
        }
        Command::Radial1 {
            action,
            dim,
            f,
            lambda,
            rho,
            points,
        } => {
            let m = model(f)?;
            let need_rho = || rho.ok_or_else(|| CliError::Usage("this action needs --rho".into()));
            let sol = match action {
                Radial1Action::Classify => {
                    let class = classify_radial(*dim, &m, *lambda)?;
                    let label = match &class {
                        RadialClass::NoSolution => "NoSolution".to_string(),
                        RadialClass::Available(k) => format!("{k:?}"),
                    };
                    let record = json!({
                        "classification": class,
                        "lambda_star": gelfand_core::radial1::lambda_star(*dim, &m),
                        "lambda_bar": gelfand_core::radial1::lambda_bar(*dim, &m),
                    });
                    write_json(out, "radial1.json", &record)?;
                    return Ok(Outcome::ok(record, label));
                }
                Radial1Action::Jump => {
                    let j = jump_residual(*dim, &m, *lambda, need_rho()?)?;
                    let record = json!({ "jump_residual": j });
                    write_json(out, "radial1.json", &record)?;
                    return Ok(Outcome::ok(record, format!("jump residual = {j}")));
                }
                Radial1Action::Trivial => trivial_solution(*dim, &m, *lambda)?,
                Radial1Action::Constant => constant_solution(*dim, &m, *lambda)?,
                Radial1Action::Unbounded => unbounded_solution(*dim, &m, *lambda)?,
                Radial1Action::Discontinuous => {
                    discontinuous_solution(*dim, &m, *lambda, need_rho()?)?
                }
            };
            let grid = sol.export_grid(*points);
            let mut record: Value = serde_json::from_str(&sol.to_json(&grid)?)?;
            record["residual"] = serde_json::to_value(validate_field_radial(&sol)?)?;
            write_json(out, "radial1.json", &record)?;
            write(out, "radial1.csv", &sol.to_csv(&grid)?)?;
            Ok(Outcome::ok(record, format!("{:?}", sol.kind())))
        }
        Command::Shoot {
            dim,
            p,
            f,
            alpha,
            bracketed,
        } => {
            let problem = RadialProblem::new(*dim, *p, model(f)?)?;
            let shot = if *bracketed {
                shoot_lambda_bracketed(&problem, *alpha, ctl)?
            } else {
                shoot_lambda(&problem, *alpha, ctl)?
            };
            let energy = energy_trace(&shot.profile);
            let record = json!({
                "lambda": shot.lambda,
                "alpha": alpha,
                "v1_residual": shot.v1_residual,
                "continuum_lambda": shot.continuum_lambda,
                "accepted": shot.accepted,
                "integral_residual": integral_residual(&shot.profile, &problem.model)?,
                "energy_max_increase": energy.max_increase,
                "energy_start": energy.energy[0],
                "crossing": shot.profile.crossing,
            });
            write_json(out, "shot.json", &record)?;
            write(out, "profile.csv", &shot.profile.to_csv())?;
            Ok(Outcome::ok(record, format!("lambda = {:.12}", shot.lambda)))
        }
        Command::Curve {
            dim,
            p,
            f,
            alpha_grid,
        } => {
            let problem = RadialProblem::new(*dim, *p, model(f)?)?;
            let curve = bifurcation_curve(&problem, &parse_grid(alpha_grid)?, ctl)?;
            let failed: Vec<Value> = curve
                .samples
                .iter()
                .filter(|s| !s.converged)
                .map(|s| json!({ "alpha": s.alpha, "error": s.error }))
                .collect();
            let record = json!({
                "N": dim,
                "p": p,
                "family": curve.family,
                "lambda_star": curve.lambda_star,
                "alpha_star": curve.alpha_star,
                "samples": curve.samples.len(),
                "failed": failed,
            });
            write_json(out, "curve.json", &record)?;
            write(out, "curve.csv", &curve.to_csv())?;
            Ok(Outcome::ok(
                record,
                format!(
                    "lambda_p* = {:.10} at alpha = {:.6}",
                    curve.lambda_star, curve.alpha_star
                ),
            ))
        }
        Command::LambdaStar { dim, p, f } => {
            let problem = RadialProblem::new(*dim, *p, model(f)?)?;
            let star = lambda_star(&problem, ctl)?;
            let record = json!({
                "N": dim,
                "p": p,
                "family": problem.model.id(),
                "lambda_star": star.lambda_star,
                "alpha_star": star.alpha_star,
                "alpha_max": star.alpha_max,
                "samples": star.samples.len(),
            });
            write_json(out, "lambda_star.json", &record)?;
            Ok(Outcome::ok(record, format!("{:.10}", star.lambda_star)))
        }
        Command::Bounds { dim, p, f, compute } => {
            let problem = RadialProblem::new(*dim, *p, model(f)?)?;
            let mut report = bounds(&problem)?;
            if *compute {
                report = report.with_computed(lambda_star(&problem, ctl)?.lambda_star);
            }
            let mut record = serde_json::to_value(&report)?;
            record["sandwich_holds"] = json!(report.sandwich_holds(0.0));
            write_json(out, "bounds.json", &record)?;
            write(
                out,
                "bounds.csv",
                &bounds_csv(std::slice::from_ref(&report)),
            )?;
            let mut text = format!("lower = {:.6}\nupper = {:.6}", report.lower, report.upper);
            if let Some(c) = report.computed_lambda_star {
                text.push_str(&format!("\ncomputed = {c:.6}"));
            }
            Ok(Outcome::ok(record, text))
        }
        Command::Sweep {
            dim,
            f,
            p_list,
            lambda_tilde,
        } => {
            let report = sweep_p(
                *dim,
                &model(f)?,
                &parse_list(p_list, "p list")?,
                *lambda_tilde,
                ctl,
            )?;
            let mut record = serde_json::to_value(&report)?;
            record["tail_gap_settles"] = json!(report.tail_gap_settles());
            write_json(out, "report.json", &record)?;
            write(out, "sweep.csv", &report.to_csv())?;
            let mut text = String::from("p  lambda_p*  gap  alpha_min\n");
            for r in &report.rows {
                text.push_str(&format!(
                    "{}  {:.6}  {:.6}  {}\n",
                    r.p,
                    r.lambda_star,
                    r.gap,
                    r.alpha_min
                        .map(|a| format!("{a:.6e}"))
                        .unwrap_or_else(|| "n/a".into())
                ));
            }
            Ok(Outcome::ok(record, text.trim_end().to_string()))
        }
        Command::Select {
            dim,
            f,
            lambda,
            rhos,
        } => {
            let m = model(f)?;
            let cands = radial_candidates(*dim, &m, *lambda, &parse_list(rhos, "rho list")?)?;
            let report = clau_selector(*dim, &m, *lambda, &cands)?;
            let record = serde_json::to_value(&report)?;
            write_json(out, "select.json", &record)?;
            let text = format!(
                "satisfied: {:?}\nviolated: {}",
                report.satisfied.iter().map(|e| e.kind).collect::<Vec<_>>(),
                report.violated.len()
            );
            Ok(Outcome::ok(record, text))
        }
        Command::Diagram {
            kind,
            dim,
            p,
            f,
            alpha_lo,
            alpha_hi,
            points,
            ceiling,
        } => {
            let kinds = match kind {
                FigureChoice::Fig1 => vec![FigureKind::Fig1],
                FigureChoice::Fig2 => vec![FigureKind::Fig2],
                FigureChoice::Fig3 => vec![FigureKind::Fig3],
                FigureChoice::Fig4 => vec![FigureKind::Fig4],
                FigureChoice::All => vec![
                    FigureKind::Fig1,
                    FigureKind::Fig2,
                    FigureKind::Fig3,
                    FigureKind::Fig4,
                ],
            };
            let m = model(f)?;
            let mut figures = Vec::new();
            for k in kinds {
                let mut params = DiagramParams::defaults(k);
                params.model = m.clone();
                params.ceiling = *ceiling;
                // fig1 is one-dimensional by definition
                if let (Some(d), false) = (dim, k == FigureKind::Fig1) {
                    params.dim = *d;
                }
                if let Some(v) = p {
                    params.p = *v;
                }
                if let Some(v) = alpha_lo {
                    params.alpha_lo = *v;
                }
                if let Some(v) = alpha_hi {
                    params.alpha_hi = *v;
                }
                if let Some(v) = points {
                    params.points = *v;
                }
                let d = diagram(k, &params, ctl)?;
                d.write(out)?;
                figures.push(json!({
                    "name": d.name,
                    "title": d.title,
                    "annotations": d.annotations,
                    "series": d.series.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
                }));
            }
            let record = json!({ "figures": figures });
            write_json(out, "diagram.json", &record)?;
            let names: Vec<String> = figures
                .iter()
                .map(|f| f["name"].as_str().unwrap_or("").to_string())
                .collect();
            Ok(Outcome::ok(record, format!("wrote {}", names.join(", "))))
        }
        Command::Selftest => {
            let outcomes = acceptance::run_all();
            let examples = acceptance::doc_examples();
            let passed = outcomes.iter().chain(&examples).all(|o| o.passed);
            let lines: Vec<String> = outcomes.iter().chain(&examples).map(|o| o.line()).collect();
            let record = json!({
                "passed": passed,
                "criteria": outcomes,
                "examples": examples,
            });
            write_json(out, "selftest.json", &record)?;
            Ok(Outcome {
                record,
                text: lines.join("\n"),
                success: passed,
            })
        }
    }
}

/// Dispatches on a dedicated pool of `config.threads` workers, then writes
/// `resolved_config.json`. On failure a `report.json` with the diagnostics
/// is written instead of the artifacts.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()?;
    let result = pool.install(|| dispatch(config));
    match result {
        Ok(outcome) => {
            write_json(
                &config.out,
                "resolved_config.json",
                &serde_json::to_value(config)?,
            )?;
            Ok(outcome)
        }
        Err(e) => {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "command": config.command.name(),
                "error": e.to_string(),
                "exit_code": e.exit_code(),
            });
            // diagnostics are best effort; the original error is what matters
            let _ = write_json(&config.out, "report.json", &report);
            Err(e)
        }
    }
}

/// The `--json` record: schema version, command and result.
pub fn json_record(config: &RunConfig, outcome: &Outcome) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": config.command.name(),
        "result": outcome.record,
    })
}

impl From<GelfandError> for Outcome {
    fn from(e: GelfandError) -> Self {
        Outcome {
            record: json!({ "error": e.to_string() }),
            text: e.to_string(),
            success: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        assert_eq!(parse_grid("lin:1:2:3").unwrap(), vec![1.0, 1.5, 2.0]);
        let g = parse_grid("log:0.1:10:3").unwrap();
        assert!((g[1] - 1.0).abs() < 1e-15);
        assert!(parse_grid("log:0:1:3").is_err());
        assert!(parse_grid("cubic:1:2:3").is_err());
    }

    #[test]
    fn intervals() {
        assert_eq!(
            parse_intervals("-1:1,2:4").unwrap(),
            vec![(-1.0, 1.0), (2.0, 4.0)]
        );
        assert!(parse_intervals("1-2").is_err());
    }
}
