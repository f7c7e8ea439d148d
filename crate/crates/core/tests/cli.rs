//! End-to-end runs of the `biphoton` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biphoton")).args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn probs_prints_the_triple() {
    assert_eq!(stdout_ok(&["probs", "--tau", "0", "--interferometer", "hom"]), "p2=0 p1=1 p0=0\n");
    assert_eq!(stdout_ok(&["probs", "--tau", "0", "--interferometer", "noon"]), "p2=1 p1=0 p0=0\n");
    assert_eq!(
        stdout_ok(&["probs", "--tau", "0", "--interferometer", "hom", "--gamma", "0.4", "--visibility", "0.9"]),
        "p2=0.018 p1=0.822 p0=0.16\n"
    );
}

#[test]
fn invalid_parameters_exit_nonzero() {
    let out = run(&["probs", "--gamma", "1.2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
    assert!(out.stdout.is_empty());
    assert!(!run(&["probs", "--interferometer", "mzi"]).status.success());
    assert!(!run(&["sweep", "--tau-points", "1"]).status.success());
}

#[test]
fn flags_override_config_file() {
    let dir = std::env::temp_dir().join(format!("biphoton-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lossy.cfg");
    std::fs::write(&path, "# lossy channel\ngamma = 0.4\nvisibility = 0.9\n").unwrap();
    let p = path.to_str().unwrap();
    let base = ["probs", "--tau", "0", "--interferometer", "hom", "--config", p];
    assert_eq!(stdout_ok(&base), "p2=0.018 p1=0.822 p0=0.16\n");
    let mut over = base.to_vec();
    over.extend(["--visibility", "1"]);
    assert_eq!(stdout_ok(&over), "p2=0 p1=0.84 p0=0.16\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_resolved_dominates_nonresolved() {
    let csv = stdout_ok(&["sweep", "--preset", "fig1c", "--tau-points", "81"]);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "omega_p_tau");
    assert_eq!(*header.last().unwrap(), "qcrb");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 81);
    for (j, name) in header.iter().enumerate() {
        let Some(label) = name.strip_prefix("fi_nonresolved_") else { continue };
        let k = header.iter().position(|h| *h == format!("fi_resolved_{label}")).unwrap();
        for row in &rows {
            assert!(row[k] >= row[j] * (1.0 - 1e-9), "{label} at {}: {} < {}", row[0], row[k], row[j]);
            assert!(row[k] <= *row.last().unwrap() * (1.0 + 1e-9));
        }
    }
}

#[test]
fn sweep_json_is_parseable() {
    let text = stdout_ok(&["sweep", "--preset", "fig2", "--tau-points", "11", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.is_object());
}

#[test]
fn simulate_degenerate_case_recovers_zero_delay() {
    let text = stdout_ok(&["simulate", "--gamma", "0", "--visibility", "1", "--tau", "0", "--trials", "5", "--pairs", "1000"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mean = v["tau_hat_mean"].as_f64().unwrap();
    let crb = v["crb_std"].as_f64().unwrap();
    assert!(mean.abs() < 1e-6 * crb, "tau_hat_mean = {mean}");
    assert_eq!(v["n_unidentifiable"].as_u64(), Some(0));
    let csv = stdout_ok(&["simulate", "--tau", "0", "--trials", "3", "--pairs", "100", "--format", "csv"]);
    assert!(csv.starts_with("tau_true,"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn recommend_orders_strategies() {
    let args = ["recommend", "--gamma", "0.4", "--visibility", "0.9", "--tau-points", "201"];
    let quiet = stdout_ok(&args);
    assert!(quiet.lines().any(|l| l.starts_with("1,noon_resolved,")), "{quiet}");
    let mut noisy = args.to_vec();
    noisy.extend(["--eta-eps-wp", "3"]);
    let out = stdout_ok(&noisy);
    assert!(out.lines().any(|l| l.starts_with("1,hom_")), "{out}");
    let dark = stdout_ok(&["recommend", "--visibility", "0", "--tau-points", "21"]);
    assert!(dark.contains("no information"));
}
