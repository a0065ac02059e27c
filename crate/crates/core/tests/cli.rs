//! End-to-end runs of the binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ladder_cavity::cli::parse_csv_echo;

const BIN: &str = env!("CARGO_BIN_EXE_ladder-cavity");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL_SWEEP: &str = "g1 = 6\ng2 = 4\ngamma2 = 2\nkappa = 0.1\nomega1 = 100\nomega2 = 150\nphi1 = pi/4\n\
x_param = phi2\nx_start = 0\nx_stop = pi/2\nx_count = 11\ny_param = ratio\ny_start = 1\ny_stop = 2\ny_count = 11\n";

#[test]
fn steady_uncoupled_reports_empty_cavity() {
    let cfg = configs().join("uncoupled.conf");
    let out = run(&["steady", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    assert!(stdout.lines().any(|l| l == "mean_n = 0"), "{stdout}");
    assert!(stdout.lines().any(|l| l == "g2 = UNDEFINED"));
    assert!(stdout.contains("secular = OK"));
    assert!(out.stderr.is_empty());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.conf", "g1 = 1\ng2 = 1\nfoo = 1\n");
    let out = run(&["steady", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = text(&out.stderr);
    assert!(err.contains("line 3") && err.contains("foo"), "{err}");

    assert_eq!(run(&["steady"]).status.code(), Some(1));
    assert_eq!(run(&["steady", "--config", "/nonexistent.conf"]).status.code(), Some(1));
    assert_eq!(run(&["explode", "--config", &bad]).status.code(), Some(1));
    let cfg = configs().join("uncoupled.conf");
    assert_eq!(run(&["steady", "--config", cfg.to_str().unwrap(), "--profile", "slow"]).status.code(), Some(1));
}

#[test]
fn solver_failure_and_non_convergence_codes() {
    let dir = tempfile::tempdir().unwrap();
    let starved = write_config(
        dir.path(),
        "starved.conf",
        "g1 = 6\ng2 = 4\ngamma2 = 2\nkappa = 0.1\nomega1 = 100\nomega2 = 10\nmax_steps = 3\n",
    );
    let out = run(&["evolve", "--config", &starved]);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));

    let capped = write_config(
        dir.path(),
        "capped.conf",
        "g1 = 6\ng2 = 4\ngamma2 = 2\nkappa = 0.001\nomega1 = 100\nomega2 = 10\nn_max_initial = 8\nn_max_cap = 8\n",
    );
    let out = run(&["steady", "--config", &capped]);
    assert_eq!(out.status.code(), Some(3));
    assert!(text(&out.stdout).contains("converged = false"));
    assert!(text(&out.stderr).contains("warning"));
}

#[test]
fn sweep_csv_is_deterministic_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "map.conf", SMALL_SWEEP);
    let mut outputs = Vec::new();
    for workers in ["1", "3", "3"] {
        let path = dir.path().join(format!("map_{workers}_{}.csv", outputs.len()));
        let out = run(&["sweep", "--config", &cfg, "--workers", workers, "--output", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
        outputs.push((fs::read(&path).unwrap(), text(&out.stdout)));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    let csv = text(&outputs[0].0);
    let echoed = parse_csv_echo(&csv).unwrap();
    assert_eq!(echoed.x_axis.count, 11);
    assert_eq!(echoed.params.g1, 6.0);

    let rows: Vec<Vec<&str>> =
        csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 121);
    // x-major order
    assert_eq!((rows[0][0], rows[0][1], rows[1][0], rows[1][1]), ("0", "0", "0", "1"));
    let argmin = rows
        .iter()
        .filter(|r| r[7] == "converged")
        .min_by(|a, b| a[4].parse::<f64>().unwrap().total_cmp(&b[4].parse::<f64>().unwrap()))
        .unwrap();
    let summary = &outputs[0].1;
    assert!(summary.contains(&format!("ix = {}, iy = {}", argmin[0], argmin[1])), "{summary}");
    assert_eq!((argmin[0], argmin[1]), ("5", "5"));
    assert_eq!(argmin[5], "undefined");
}

#[test]
fn evolve_csv_goes_to_stdout_without_output_flag() {
    let cfg = configs().join("uncoupled.conf");
    let a = run(&["evolve", "--config", cfg.to_str().unwrap()]);
    let b = run(&["evolve", "--config", cfg.to_str().unwrap(), "--workers", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = text(&a.stdout);
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 11);
    let last: Vec<&str> = rows[11].split(',').collect();
    assert_eq!(last[0], "5.0");
    let mean: f64 = last[1].parse().unwrap();
    assert!((mean / (5.0 * (-5.0f64).exp()) - 1.0).abs() < 1e-6);
}

#[test]
fn compare_in_secular_regime() {
    let cfg = configs().join("secular.conf");
    let out = run(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let rel: f64 = stdout.lines().find_map(|l| l.strip_prefix("rel_diff_mean_n = ")).unwrap().parse().unwrap();
    assert!(rel < 0.10, "{stdout}");
    assert!(stdout.contains("coupling_ratio = ") && stdout.contains("decay_ratio = "));
}

#[test]
fn oracle_writes_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.csv");
    let cfg = configs().join("secular.conf");
    let out = run(&["oracle", "--config", cfg.to_str().unwrap(), "--nmax", "10", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("n_max = 10"));
    let csv = fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,p_n");
    assert_eq!(rows.len(), 12);
    let total: f64 = rows[1..].iter().map(|r| r.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}
