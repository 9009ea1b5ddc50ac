use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_focpc");

fn focpc(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("FOCPC_LOG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn ml_prints_fifteen_digits() {
    let o = focpc(&["ml", "--alpha", "1", "--beta", "1", "--z", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.71828182845905");

    let o = focpc(&["ml", "--alpha", "0.5", "--beta", "0.5", "--z", "0"]);
    assert_eq!(stdout(&o).trim(), "0.564189583547756");

    let o = focpc(&["ml", "--alpha", "1", "--beta", "1", "--z", "-1"]);
    assert_eq!(stdout(&o).trim(), "0.367879441171442");
}

#[test]
fn ml_geometric_regime_rejects_large_argument() {
    let o = focpc(&["ml", "--alpha", "0", "--beta", "1", "--z", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("diverges"), "{}", stderr(&o));
}

#[test]
fn ml_reports_truncation_failure_as_non_convergence() {
    let o = focpc(&["ml", "--alpha", "1", "--beta", "1", "--z", "40", "--max-terms", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn switch_time_subcommand() {
    let o = focpc(&["switch-time", "--alpha", "0.5", "--T", "2"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - (2.0 - std::f64::consts::PI / 4.0)).abs() < 1e-13);
}

#[test]
fn short_horizon_is_rejected_with_bound() {
    let o = focpc(&["solve", "--problem", "resource", "--alpha", "0.5", "--T", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Γ(α+1)^(1/α)"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(focpc(&["solve", "--nope"]).status.code(), Some(1));
    assert_eq!(focpc(&["solve", "--alpha", "1.5"]).status.code(), Some(1));
    assert_eq!(focpc(&["solve", "--problem", "missing"]).status.code(), Some(1));
    assert_eq!(focpc(&[]).status.code(), Some(1));

    let help = focpc(&["solve", "--help"]);
    assert!(help.status.success());
    let text = stdout(&help);
    for flag in ["--problem", "--alpha", "--alphas", "--T", "--x0", "--n", "--max-iters", "--tol", "--relaxation", "--output", "--config"] {
        assert!(text.contains(flag), "help lacks {flag}");
    }
    assert!(text.contains("time units"));
    assert!(focpc(&["--version"]).status.success());
}

#[test]
fn solve_writes_csv_and_reports_switch() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = focpc(&["solve", "--alpha", "1", "--T", "2", "--x0", "1", "--n", "400", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(report.contains("converged   true"), "{report}");
    assert!(report.contains("analytic t* = 1,"), "{report}");

    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,u,x_1,x_2,p_1,p_2"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 401);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[400][0], 2.0);
    let cost_line = report.lines().find(|l| l.starts_with("cost")).unwrap();
    let cost: f64 = cost_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((cost + std::f64::consts::E).abs() < 0.02);
    // accumulated harvest is the negated cost
    assert!((rows[400][2] + cost).abs() < 1e-12);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("cfg.csv");
    std::fs::write(&cfg, format!(r#"{{"alpha": 0.5, "T": 2.0, "n_steps": 50, "output": {:?}}}"#, out)).unwrap();
    let o = focpc(&["solve", "--config", cfg.to_str().unwrap(), "--n", "60"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("alpha       0.5"));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 62);

    std::fs::write(&cfg, r#"{"alpah": 0.5}"#).unwrap();
    assert_eq!(focpc(&["solve", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn alphas_write_one_file_per_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = focpc(&["solve", "--alphas", "0.5,0.9", "--n", "100", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("sweep_alpha0.5.csv").exists());
    assert!(dir.path().join("sweep_alpha0.9.csv").exists());
    assert!(!out.exists());
}

#[test]
fn iteration_cap_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("capped.csv");
    let o = focpc(&["solve", "--n", "100", "--max-iters", "2", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("converged   false"));
    assert!(out.exists());
}

#[test]
fn validate_runs_whole_suite_or_one_family() {
    let o = focpc(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    for family in ["mittag-leffler", "composition", "integration-by-parts", "gronwall", "mean-value", "taylor"] {
        assert!(text.contains(family), "missing {family}");
    }
    assert!(!text.contains("FAIL"));

    let o = focpc(&["validate", "--only", "gronwall"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains("gronwall")));

    assert_eq!(focpc(&["validate", "--only", "nonsense"]).status.code(), Some(1));
}

#[test]
fn log_level_from_environment() {
    let o = Command::new(BIN)
        .args(["switch-time", "--alpha", "0.5"])
        .env("FOCPC_LOG", "info")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stderr(&o).contains("minimal horizon"));
    assert!(!stderr(&focpc(&["switch-time", "--alpha", "0.5"])).contains("minimal horizon"));
}

#[test]
fn blow_up_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("big.csv");
    let o = focpc(&["solve", "--T", "40", "--n", "200", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("diverged"));
}
