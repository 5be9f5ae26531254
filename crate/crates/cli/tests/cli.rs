use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn renewal(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renewal"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("RENEWAL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn summary(out: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(out.join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn reruns_with_the_same_seed_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["clt", "--seed", "7", "--t", "256", "--replicates", "60"];
    assert_eq!(renewal(a.path(), &args).status.code(), renewal(b.path(), &args).status.code());
    for file in ["clt.csv", "clt.json"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file} differs between runs");
    }
    let s = summary(a.path(), "clt");
    assert_eq!(s["seed"], 7);
    assert_eq!(s["config_hash"].as_str().unwrap().len(), 64);
    assert!(s["runtime_seconds"].is_null());
}

#[test]
fn too_few_clt_replicates_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = renewal(dir.path(), &["clt", "--seed", "1", "--replicates", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let body: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["error"]["kind"], "config");
    assert!(!dir.path().join("clt.json").exists());
}

#[test]
fn statistical_commands_require_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(renewal(dir.path(), &["sector"]).status.code(), Some(2));
    assert_eq!(renewal(dir.path(), &["count", "--distribution", "exponential:1"]).status.code(), Some(2));
}

#[test]
fn unit_field_count_at_three_and_a_half() {
    let dir = tempfile::tempdir().unwrap();
    let out = renewal(dir.path(), &["count", "--distribution", "constant:1", "--dim", "2", "--t", "3.5"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("count.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,n_t,ratio,target,divisor_oracle"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!((row[0], row[1], row[4]), ("3.5", "5", "5"));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = renewal(dir.path(), &["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let s = summary(dir.path(), "selftest");
    assert!(s["criteria"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 5\ndistribution = \"exponential:2\"\nhorizon = 64\n").unwrap();
    let cfg_arg = cfg.to_str().unwrap();

    let out = renewal(dir.path(), &["--config", cfg_arg, "sector", "--horizon", "32"]);
    assert!(matches!(out.status.code(), Some(0) | Some(3)));
    let s = summary(dir.path(), "sector");
    assert_eq!(s["seed"], 5);
    assert_eq!(s["config"]["distribution"], "exponential:2");
    assert_eq!(s["config"]["horizon"], 32);
    let hash = s["config_hash"].clone();

    // The same resolved config without a file hashes identically.
    renewal(dir.path(), &["sector", "--seed", "5", "--distribution", "exponential:2", "--horizon", "32"]);
    assert_eq!(summary(dir.path(), "sector")["config_hash"], hash);

    std::fs::write(&cfg, "seed = 5\nbogus = 1\n").unwrap();
    assert_eq!(renewal(dir.path(), &["--config", cfg_arg, "sector"]).status.code(), Some(2));
}

#[test]
fn lil_table_has_the_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = renewal(
        dir.path(),
        &["lil", "--seed", "3", "--log2-t-min", "6", "--log2-t-max", "10", "--hausdorff-directions", "256", "--assert-from-log2", "30"],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(3)), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("lil.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("t,rho_H,rho_tri,phi_t,ratio_H,ratio_tri,running_sup_H,incl_subset_ok,incl_superset_ok")
    );
    assert_eq!(csv.lines().count(), 6);
}
