use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gelfand-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("GELFAND_LAB_OUT")
        .output()
        .expect("spawn gelfand-lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lambda_star_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(
        &["lambda-star", "--N", "1", "--p", "2", "--f", "exp"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.8785).abs() < 1e-4);
    assert!(dir.path().join("lambda_star.json").exists());
    assert!(dir.path().join("resolved_config.json").exists());
}

#[test]
fn classify_no_solution() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(
        &[
            "radial1", "classify", "--N", "2", "--f", "exp", "--lambda", "2.5",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "NoSolution");
}

#[test]
fn json_record_is_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(
        &["bounds", "--N", "3", "--p", "2", "--f", "exp", "--json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "bounds");
    assert!((v["result"]["lower"].as_f64().unwrap() - 2.2073).abs() < 1e-4);
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["lambda-star", "--N", "1", "--p", "2", "--frobnicate"][..],
        &["lambda-star", "--N", "1", "--p", "0,5"],
        &["lambda-star", "--N", "1", "--p", "nan"],
        &["shoot", "--N", "2", "--p", "0.5", "--alpha", "1"],
        &["radial1", "constant", "--N", "2", "--lambda", "3"],
        &["one-dim", "--intervals", "0:1,0.5:2", "--lambda", "1"],
        &[],
    ] {
        let o = lab(args, dir.path());
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lab(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn solver_failure_exits_three_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = lab(
        &[
            "shoot", "--N", "2", "--p", "2", "--f", "exp", "--alpha", "1",
        ],
        &first,
    );
    assert_eq!(o.status.code(), Some(0));
    let mut config: Value =
        serde_json::from_str(&std::fs::read_to_string(first.join("resolved_config.json")).unwrap())
            .unwrap();
    config["controls"]["max_steps"] = 5.into();
    let path = dir.path().join("starved.json");
    std::fs::write(&path, config.to_string()).unwrap();
    let failed = dir.path().join("failed");
    let o = Command::new(env!("CARGO_BIN_EXE_gelfand-lab"))
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(&failed)
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(failed.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["exit_code"], 3);
    assert_eq!(report["command"], "shoot");
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_gelfand-lab"))
        .args([
            "radial1", "jump", "--N", "2", "--lambda", "1", "--rho", "0.5",
        ])
        .env("GELFAND_LAB_OUT", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(target.join("radial1.json").exists());
}

#[test]
fn resolved_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let o = lab(
        &[
            "shoot", "--N", "2", "--p", "1.5", "--f", "exp", "--alpha", "3",
        ],
        &first,
    );
    assert_eq!(o.status.code(), Some(0));
    let config = first.join("resolved_config.json");
    let o2 = Command::new(env!("CARGO_BIN_EXE_gelfand-lab"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&second)
        .output()
        .unwrap();
    assert_eq!(
        o2.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o2.stderr)
    );
    assert_eq!(stdout(&o), stdout(&o2));
    for name in ["shot.json", "profile.csv"] {
        assert_eq!(
            std::fs::read(first.join(name)).unwrap(),
            std::fs::read(second.join(name)).unwrap()
        );
    }
}

#[test]
fn diagram_writes_figures() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["diagram", "--kind", "fig4", "--points", "60"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let svg = std::fs::read_to_string(dir.path().join("fig4.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(std::fs::read_to_string(dir.path().join("fig4.csv"))
        .unwrap()
        .starts_with("series,x,y"));
}

#[test]
fn one_dim_domain_file() {
    let dir = tempfile::tempdir().unwrap();
    let domain = dir.path().join("domain.json");
    std::fs::write(&domain, r#"{"intervals": [[0, 1], [2, 4]]}"#).unwrap();
    let o = lab(
        &[
            "one-dim",
            "--domain",
            domain.to_str().unwrap(),
            "--f",
            "exp",
            "--lambda",
            "0.5",
            "--active",
            "0,1",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("one_dim.json")).unwrap())
            .unwrap();
    assert_eq!(v["classification"], "TrivialMinimalPlusNontrivial");
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["selftest"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.contains(": PASS:")).count(),
        16
    );
}
