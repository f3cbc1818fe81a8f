//! Command-line arguments and the resolved run configuration.
//!
//! The subcommand enum doubles as the serialized form inside
//! `resolved_config.json`, so a written config re-runs the same command.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gelfand_core::pradial::IvpControls;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const OUT_ENV: &str = "GELFAND_LAB_OUT";
pub const DEFAULT_OUT: &str = "gelfand-out";

/// Finite decimal numbers only: rejects `inf`, `nan` and decimal commas.
pub fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gelfand-lab",
    version,
    about = "Gelfand problems for the 1-Laplacian and the p-Laplacian"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Print the primary result record as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Output directory (overrides GELFAND_LAB_OUT).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Re-run a resolved_config.json.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = finite)]
    pub rtol: Option<f64>,
    #[arg(long, global = true, value_parser = finite)]
    pub atol: Option<f64>,
    /// Radius of the series start near the origin.
    #[arg(long, global = true, value_parser = finite)]
    pub r0: Option<f64>,
    #[arg(long, global = true)]
    pub mesh_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Radial1Action {
    Classify,
    Trivial,
    Constant,
    Unbounded,
    Discontinuous,
    Jump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FigureChoice {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    All,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Classify and build 1-Laplacian solutions on a union of intervals.
    OneDim {
        /// Intervals as `a:b,c:d,...`.
        #[arg(long, allow_hyphen_values = true)]
        intervals: Option<String>,
        /// JSON file `{"intervals": [[a, b], ...]}`.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, value_parser = finite)]
        lambda: f64,
        /// Indices of intervals where the solution is positive, e.g. `0,2`.
        #[arg(long, default_value = "")]
        active: String,
    },
    /// Radial 1-Laplacian solutions on the unit ball.
    Radial1 {
        #[arg(value_enum)]
        action: Radial1Action,
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, value_parser = finite)]
        lambda: f64,
        #[arg(long, value_parser = finite)]
        rho: Option<f64>,
        /// Export grid size.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Shoot for lambda at a given sup-norm alpha.
    Shoot {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, value_parser = finite)]
        p: f64,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, value_parser = finite)]
        alpha: f64,
        /// Use the bracketed lambda search instead of rescaling.
        #[arg(long)]
        bracketed: bool,
    },
    /// Bifurcation curve lambda(alpha).
    Curve {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, value_parser = finite)]
        p: f64,
        #[arg(long, default_value = "exp")]
        f: String,
        /// `log:lo:hi:n`, `lin:lo:hi:n` or a list `a,b,c`.
        #[arg(long, default_value = "log:0.01:20:200")]
        alpha_grid: String,
    },
    /// Extremal value lambda_p*.
    LambdaStar {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, value_parser = finite)]
        p: f64,
        #[arg(long, default_value = "exp")]
        f: String,
    },
    /// Analytic lower and upper bounds on lambda_p*.
    Bounds {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, value_parser = finite)]
        p: f64,
        #[arg(long, default_value = "exp")]
        f: String,
        /// Also compute lambda_p* and check it lies between the bounds.
        #[arg(long)]
        compute: bool,
    },
    /// Sweep p toward 1.
    Sweep {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, default_value = "1.5,1.2,1.1,1.05")]
        p_list: String,
        #[arg(long, value_parser = finite, default_value = "1")]
        lambda_tilde: f64,
    },
    /// Split radial 1-Laplacian solutions by the jump condition.
    Select {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: usize,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, value_parser = finite)]
        lambda: f64,
        #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
        rhos: String,
    },
    /// Bifurcation diagrams as CSV and SVG.
    Diagram {
        #[arg(long, value_enum, default_value = "all")]
        kind: FigureChoice,
        #[arg(long = "N")]
        #[serde(rename = "N")]
        dim: Option<usize>,
        #[arg(long, value_parser = finite)]
        p: Option<f64>,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, value_parser = finite)]
        alpha_lo: Option<f64>,
        #[arg(long, value_parser = finite)]
        alpha_hi: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Sup-norm ceiling for unbounded families.
        #[arg(long, value_parser = finite, default_value = "8")]
        ceiling: f64,
    },
    /// Run the acceptance suite and the documented examples.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::OneDim { .. } => "one-dim",
            Command::Radial1 { .. } => "radial1",
            Command::Shoot { .. } => "shoot",
            Command::Curve { .. } => "curve",
            Command::LambdaStar { .. } => "lambda-star",
            Command::Bounds { .. } => "bounds",
            Command::Sweep { .. } => "sweep",
            Command::Select { .. } => "select",
            Command::Diagram { .. } => "diagram",
            Command::Selftest => "selftest",
        }
    }
}

/// Everything a run depends on, with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub command: Command,
    pub json: bool,
    pub out: PathBuf,
    pub threads: usize,
    pub controls: IvpControls,
    /// Results never depend on timing or thread count.
    pub deterministic: bool,
}

fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn apply_controls(ctl: &mut IvpControls, g: &GlobalArgs) {
    if let Some(v) = g.rtol {
        ctl.rtol = v;
    }
    if let Some(v) = g.atol {
        ctl.atol = v;
    }
    if let Some(v) = g.r0 {
        ctl.r0 = v;
    }
    if let Some(v) = g.mesh_points {
        ctl.mesh_points = v;
    }
}

impl RunConfig {
    /// Merges parsed arguments, an optional config file and the environment.
    /// Explicit flags win over the file, which wins over the environment.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let g = cli.global;
        let mut config = match (&g.config, cli.command) {
            (Some(path), None) => Self::load(path)?,
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "--config cannot be combined with a subcommand".into(),
                ));
            }
            (None, Some(command)) => RunConfig {
                schema_version: SCHEMA_VERSION,
                command,
                json: false,
                out: std::env::var_os(OUT_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| DEFAULT_OUT.into()),
                threads: default_threads(),
                controls: IvpControls::default(),
                deterministic: true,
            },
            (None, None) => return Err(CliError::Usage("missing subcommand (see --help)".into())),
        };
        config.json |= g.json;
        if let Some(out) = g.out.clone() {
            config.out = out;
        }
        if let Some(t) = g.threads {
            config.threads = t;
        }
        apply_controls(&mut config.controls, &g);
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text)?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "config schema_version {} is not {SCHEMA_VERSION}",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        self.controls.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("gelfand-lab").chain(args.iter().copied()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        RunConfig::resolve(cli)
    }

    #[test]
    fn long_flags_and_defaults() {
        let c = parse(&[
            "lambda-star",
            "--N",
            "1",
            "--p",
            "2",
            "--f",
            "exp",
            "--threads",
            "2",
        ])
        .unwrap();
        assert_eq!(
            c.command,
            Command::LambdaStar {
                dim: 1,
                p: 2.0,
                f: "exp".into()
            }
        );
        assert_eq!(c.threads, 2);
        assert_eq!(c.controls, IvpControls::default());
    }

    #[test]
    fn rejects_bad_numbers() {
        assert!(parse(&["lambda-star", "--N", "1", "--p", "2,5"]).is_err());
        assert!(parse(&["lambda-star", "--N", "1", "--p", "inf"]).is_err());
        assert!(parse(&["lambda-star", "--N", "1", "--p", "2", "--threads", "0"]).is_err());
        assert!(parse(&["lambda-star", "--n", "1", "--p", "2"]).is_err());
    }

    #[test]
    fn negative_interval_values() {
        let c = parse(&["one-dim", "--intervals", "-1:1,2:4", "--lambda", "0.5"]).unwrap();
        assert!(
            matches!(c.command, Command::OneDim { intervals: Some(ref s), .. } if s == "-1:1,2:4")
        );
    }

    #[test]
    fn config_round_trip() {
        let c = parse(&["curve", "--N", "3", "--p", "2", "--rtol", "1e-9"]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(text.contains("\"N\":3"));
    }
}
