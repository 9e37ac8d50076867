//! End-to-end tests of the command-line surface: config validation paths,
//! output files, determinism and the golden regression value.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qvr_cli::config::{config_hash, parse_config};

fn qvr_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qvr"))
}

fn run(args: &[&str]) -> Output {
    qvr_bin().args(args).output().expect("spawn qvr")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const RADIATE_MC: &str = r#"
schema = 1
command = "radiate"

[profile]
variant = "static_anisotropic"
delta_n = 0.01
n0 = 1.0
omega = 1.0

[integrator]
method = "monte_carlo"
max_evaluations = 60000
seed = 42

[radiate]
angular_bins = 8
correlation_bins = 20
"#;

#[test]
fn golden_reference_radiate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "radiate",
        "--config",
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../configs/reference_radiate.toml"
        ),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    let p = report["result"]["total_probability"]["value"]
        .as_f64()
        .unwrap();
    // golden regression value, cross-checked against the Monte-Carlo oracle
    // and the closed-form n0 scaling of the frozen isotropic constant
    let golden = 1.788_929_574_9e-7;
    assert!(
        (p / golden - 1.0).abs() < 0.01,
        "P = {p:e} vs golden {golden:e}"
    );
    assert_eq!(report["tool"], "qvr");
    assert!(report["config_hash"].as_str().unwrap().len() == 64);
    // quadrature runs emit the deterministic correlation histogram only
    assert!(tmp.path().join("pair_correlation.csv").exists());
    assert!(!tmp.path().join("angular_cos_theta.csv").exists());
}

#[test]
fn mc_radiate_writes_histograms_and_is_deterministic_across_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "run.toml", RADIATE_MC);
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");
    let r1 = run(&[
        "radiate",
        "--config",
        &config,
        "--out",
        out1.to_str().unwrap(),
        "--workers",
        "1",
    ]);
    let r2 = run(&[
        "radiate",
        "--config",
        &config,
        "--out",
        out2.to_str().unwrap(),
        "--workers",
        "3",
    ]);
    assert!(r1.status.success() && r2.status.success());
    for file in [
        "report.json",
        "angular_cos_theta.csv",
        "angular_phi.csv",
        "pair_correlation.csv",
    ] {
        let a = fs::read(out1.join(file)).unwrap();
        let b = fs::read(out2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs across worker counts");
    }
}

#[test]
fn seed_flag_overrides_and_changes_results() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "run.toml", RADIATE_MC);
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");
    run(&[
        "radiate",
        "--config",
        &config,
        "--out",
        out1.to_str().unwrap(),
    ]);
    run(&[
        "radiate",
        "--config",
        &config,
        "--out",
        out2.to_str().unwrap(),
        "--seed",
        "43",
    ]);
    let a = fs::read_to_string(out1.join("report.json")).unwrap();
    let b = fs::read_to_string(out2.join("report.json")).unwrap();
    assert_ne!(a, b, "different seeds must change the Monte-Carlo report");
}

#[test]
fn unknown_key_fails_with_schema_error() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "bad.toml",
        &RADIATE_MC.replace("omega = 1.0", "omega = 1.0\nomega4 = 2.0"),
    );
    let out = run(&[
        "radiate",
        "--config",
        &config,
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("omega4"), "stderr: {stderr}");
    assert!(stderr.contains("\"error\""), "stderr: {stderr}");
}

#[test]
fn missing_seed_for_monte_carlo_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "bad.toml",
        &RADIATE_MC.replace("seed = 42\n", ""),
    );
    let out = run(&[
        "radiate",
        "--config",
        &config,
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("integrator.seed"));
}

#[test]
fn command_mismatch_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "run.toml", RADIATE_MC);
    let out = run(&[
        "rate",
        "--config",
        &config,
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("declares command"));
}

#[test]
fn subluminal_rate_report() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(
        tmp.path(),
        "rate.toml",
        r#"
schema = 1
command = "rate"

[profile]
variant = "uniformly_moving"
delta_n = 0.01
n0 = 1.5
omega = 1.0
velocity = [0.6, 0.0, 0.0]   # 0.9 x medium light speed
"#,
    );
    let out = run(&[
        "rate",
        "--config",
        &config,
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["result"]["rate"]["value"].as_f64().unwrap(), 0.0);
    assert_eq!(report["result"]["reason"], "kinematically forbidden");
}

#[test]
fn canonical_config_roundtrips_to_identical_runconfig() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = write_config(tmp.path(), "run.toml", RADIATE_MC);
    let out_dir = tmp.path().join("o");
    let out = run(&[
        "radiate",
        "--config",
        &config_path,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let original = parse_config(RADIATE_MC).unwrap();
    let canonical = fs::read_to_string(out_dir.join("config_canonical.toml")).unwrap();
    let reparsed = parse_config(&canonical).unwrap();
    assert_eq!(original, reparsed);
    assert_eq!(config_hash(&original), config_hash(&reparsed));
}

#[test]
fn out_dir_env_var_is_the_fallback() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "run.toml", RADIATE_MC);
    let env_dir = tmp.path().join("from_env");
    let out = qvr_bin()
        .args(["radiate", "--config", &config])
        .env("QVR_OUT_DIR", env_dir.to_str().unwrap())
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(env_dir.join("report.json").exists());
}

#[test]
fn spectrum_command_writes_binary_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let out = run(&[
        "spectrum",
        "--config",
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../configs/spectrum_small.toml"
        ),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // binary payload round-trips through the documented reader
    let file = fs::File::open(out_dir.join("spectrum.bin")).unwrap();
    let grid = qvr::spectrum::GridSpectrum::read_binary(std::io::BufReader::new(file)).unwrap();
    assert_eq!(grid.total_points(), 48 * 48 * 48 * 48);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert!(report["result"]["parseval_discrepancy"].as_f64().unwrap() < 1e-6);
    assert!(
        report["result"]["closed_form_max_rel_error"]
            .as_f64()
            .unwrap()
            < 1e-6
    );
}

#[test]
fn horizon_and_unruh_commands_produce_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let h_dir = tmp.path().join("h");
    let out = run(&[
        "horizon",
        "--config",
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/horizon.toml"),
        "--out",
        h_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(h_dir.join("report.json")).unwrap()).unwrap();
    let horizons = report["result"]["horizons"].as_array().unwrap();
    assert_eq!(horizons.len(), 2);

    let u_dir = tmp.path().join("u");
    let out = run(&[
        "unruh",
        "--config",
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/unruh.toml"),
        "--out",
        u_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(u_dir.join("report.json")).unwrap()).unwrap();
    assert!(report["result"]["validity"].as_bool().unwrap());
    assert!(report["result"]["t_unruh_kelvin"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_command_produces_passing_verdict() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let out = run(&[
        "sweep",
        "--config",
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../configs/cosmological_sweep.toml"
        ),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let verdict: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["expected"].as_f64().unwrap(), -3.0);
    assert!(verdict["pass"].as_bool().unwrap());
    assert!((verdict["fitted"].as_f64().unwrap() + 3.0).abs() <= 0.1);
    // sweep.csv: stamped comment, header, one row per point
    let csv = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# qvr "));
    assert_eq!(lines.next().unwrap(), "parameter,value,error");
    assert_eq!(lines.count(), 4);
}

#[test]
fn validate_command_runs_the_self_test_suite() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let out = run(&[
        "validate",
        "--config",
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/validate.toml"),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert!(report["result"]["all_pass"].as_bool().unwrap());
    let checks = report["result"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 9, "only {} checks ran", checks.len());
    for check in checks {
        assert!(
            check["pass"].as_bool().unwrap(),
            "check {} failed: {}",
            check["name"],
            check["value"]
        );
    }
}
