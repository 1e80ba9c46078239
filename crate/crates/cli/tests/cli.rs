use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn toric(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const GOLDEN_SQUARE_L4: &str = include_str!("golden/square_L4.json");

#[test]
fn square_lattice_matches_golden_file() {
    let dir = tempdir().unwrap();
    for _ in 0..2 {
        let o = toric(dir.path(), &["lattice", "--family", "square", "--L", "4", "--out", "sq.json"]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(fs::read_to_string(dir.path().join("sq.json")).unwrap(), GOLDEN_SQUARE_L4);
    }
    let o = toric(dir.path(), &["lattice", "--family", "square", "--L", "4"]);
    assert_eq!(stdout(&o), GOLDEN_SQUARE_L4);
}

#[test]
fn reduced_square_file_records_exact_degree() {
    let dir = tempdir().unwrap();
    let o = toric(dir.path(), &["lattice", "--family", "reduced_square", "--L", "15", "--out", "r.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(file["meta"]["average_degree"], "32/9");
    assert_eq!(file["meta"]["dual_average_degree"], "32/7");
    assert_eq!(file["L"], 15);

    let o = toric(dir.path(), &["lattice", "--family", "reduced_square", "--L", "15", "--dual"]);
    let dual: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(dual["meta"]["average_degree"], "32/7");
}

#[test]
fn invalid_size_is_rejected() {
    let dir = tempdir().unwrap();
    let o = toric(dir.path(), &["lattice", "--family", "reduced_square", "--L", "14"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("L=14"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn missing_family_is_a_usage_error() {
    let dir = tempdir().unwrap();
    let o = toric(dir.path(), &["threshold", "--sizes", "8,16"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("--family") && err.contains("Usage"), "{err}");
}

#[test]
fn unknown_family_and_bad_grid_exit_with_config_code() {
    let dir = tempdir().unwrap();
    let o = toric(dir.path(), &["lattice", "--family", "pentagonal", "--L", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = toric(dir.path(), &["threshold", "--family", "square", "--p-grid", "0.1,0.7", "--runs", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("0.7"));
}

#[test]
fn no_crossing_has_its_own_exit_code() {
    let dir = tempdir().unwrap();
    let args = ["threshold", "--family", "square", "--sizes", "4,8", "--p-grid", "0.0,0.001", "--runs", "20"];
    let o = toric(dir.path(), &args);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

fn small_threshold(dir: &Path, workers: &str) -> Vec<u8> {
    let args = [
        "threshold", "--family", "square", "--sizes", "6,10", "--p-grid", "0.04:0.2:0.04", "--runs", "60", "--seed", "9",
        "--workers", workers, "--bootstrap", "50",
    ];
    let o = toric(dir, &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(summary["p_c"].as_f64().unwrap() > 0.0);
    fs::read(dir.join("threshold.csv")).unwrap()
}

#[test]
fn fixed_seed_gives_identical_csv_for_any_worker_count() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    let one = small_threshold(a.path(), "1");
    let two = small_threshold(b.path(), "3");
    assert_eq!(one, two);
    let text = String::from_utf8(one).unwrap();
    assert!(text.starts_with("# toric-core "));
    assert!(text.contains("# seed: 9\n") && text.contains("# family: square\n"));
    assert!(text.contains("\nfamily,sector,L,p,n_success,n_total,seed\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("square,primal,")).count(), 10);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), r#"{"family": "square", "L": 6, "seed": 4, "runs": 7}"#).unwrap();
    let o = toric(dir.path(), &["--config", "cfg.json", "lattice", "--L", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let file: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(file["L"], 3);
    assert_eq!(file["family"], "square");

    fs::write(dir.path().join("bad.json"), r#"{"famly": "square"}"#).unwrap();
    let o = toric(dir.path(), &["--config", "bad.json", "lattice", "--L", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn jj_scan_prefers_hexagonal() {
    let dir = tempdir().unwrap();
    let o = toric(dir.path(), &["jj", "--x", "1.01", "--T", "0.002,0.003,0.004", "--q-grid", "3,10/3,4,5,6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["best_q"], 3.0);
    }
    let csv = fs::read_to_string(dir.path().join("jj.csv")).unwrap();
    assert!(csv.contains("x,T,q,q_bar,Jv_over_Ec,Jf_over_Ec,tau_p,tau_d,coherence,simulated_flag"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("1.01,")).count(), 15);

    let o = toric(dir.path(), &["jj", "--x", "0.9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_reads_packaged_data() {
    let dir = tempdir().unwrap();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/degree_thresholds.csv");
    let o = toric(dir.path(), &["fit", "--data", data]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let (mu, nu) = (v["mu"].as_f64().unwrap(), v["nu"].as_f64().unwrap());
    assert!((mu - 0.0231).abs() < 0.01 && (nu - 0.111).abs() < 0.05, "{mu} {nu}");
    let csv = fs::read_to_string(dir.path().join("fit.csv")).unwrap();
    assert!(csv.contains("q,p_c,p_c_err,mu,nu,residual"));
}

#[test]
fn lifetime_and_decay_write_their_tables() {
    let dir = tempdir().unwrap();
    let o = toric(
        dir.path(),
        &["lifetime", "--family", "square", "--L", "6", "--T", "0.5", "--runs", "40", "--t-max", "4", "--out-dir", "out"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["tau"].as_f64().unwrap() > 0.0);
    let csv = fs::read_to_string(dir.path().join("out/lifetime.csv")).unwrap();
    assert!(csv.contains("family,sector,L,T_over_J,tau,tau_err,criterion\nsquare,primal,6,0.5,"));

    let o = toric(
        dir.path(),
        &["decay", "--family", "union", "--sector", "dual", "--sizes", "6", "--runs", "10", "--t-max", "2", "--samples", "5"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("decay.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.starts_with("union,dual,6,0.3,")).count(), 5);
}
