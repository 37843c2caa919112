//! End-to-end checks against the compiled binary: exit codes, the JSON
//! report on stdout, configuration layering, environment-variable seeding,
//! and file outputs.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

/// Command for the binary under test, with the seed variable scrubbed so a
/// polluted parent environment cannot leak into the assertions.
fn polyvote() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polyvote"));
    cmd.env_remove("POLYVOTE_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    polyvote().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn estimate(report: &Value, name: &str) -> f64 {
    report["estimates"]
        .as_array()
        .expect("estimates array")
        .iter()
        .find(|e| e["name"] == name)
        .unwrap_or_else(|| panic!("no estimate named {name}"))["value"]
        .as_f64()
        .expect("numeric estimate")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("polyvote-cli-{}-{name}", std::process::id()))
}

// ====================================================================
// Happy paths
// ====================================================================

#[test]
fn roots_reports_the_tabulated_constants() {
    let report = stdout_json(&run(&["roots", "--alpha", "1"]));
    assert!((estimate(&report, "lambda_minus") - 0.5638).abs() < 1e-3);
    assert!((estimate(&report, "lambda_plus") - 2.5111).abs() < 1e-3);
    assert!((estimate(&report, "growth_constant") - 2.0_f64.sqrt()).abs() < 1e-12);
    assert!((estimate(&report, "lambda_plus_improved") - 2.4441).abs() < 1e-3);
    assert!(estimate(&report, "residual_minus").abs() < 1e-9);
}

#[test]
fn identical_invocations_reproduce_the_report() {
    let args = ["simulate", "--reps", "50", "--horizon", "200", "--seed", "5"];
    let (a, b) = (stdout_json(&run(&args)), stdout_json(&run(&args)));
    // Wall-clock time differs between runs; everything else must not.
    assert_eq!(a["estimates"], b["estimates"], "estimates must replay exactly");
    assert_eq!(a["master_seed"], b["master_seed"]);
    assert_eq!(a["config_echo"], b["config_echo"]);
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    for subcommand in ["simulate", "tails", "roots", "phase", "trade", "fluid", "oracle-check"] {
        assert!(text.contains(subcommand), "--help must list `{subcommand}`");
    }
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn oracle_check_passes_with_enough_replications() {
    let out = run(&["oracle-check", "--reps", "60000", "--seed", "9"]);
    let report = stdout_json(&out);
    assert!(estimate(&report, "sampled_tv") < 0.01);
    assert_eq!(estimate(&report, "check[sampler_total_variation]"), 1.0);
}

// ====================================================================
// Configuration layering
// ====================================================================

#[test]
fn config_file_settings_reach_the_run() {
    let path = temp_path("config.json");
    std::fs::write(
        &path,
        r#"{"protocol": {"alpha": 0.0}, "mc": {"replications": 30, "horizon": 100}}"#,
    )
    .expect("write config");

    let report = stdout_json(&run(&["simulate", "--config", path.to_str().unwrap()]));
    // alpha = 0 removes the idle branch, so the volume grows by exactly one
    // per round: the estimate is deterministic.
    assert_eq!(estimate(&report, "mean_final_volume"), 101.0);
    assert_eq!(report["estimates"][0]["std_error"].as_f64().unwrap(), 0.0);
    assert_eq!(report["config_echo"]["protocol"]["alpha"], 0.0);
    assert_eq!(report["replications"], 30);

    let _ = std::fs::remove_file(&path);
}

#[test]
fn dotted_overrides_beat_the_config_file() {
    let path = temp_path("config-override.json");
    std::fs::write(&path, r#"{"protocol": {"alpha": 0.0}}"#).expect("write config");

    let report = stdout_json(&run(&[
        "simulate",
        "--config",
        path.to_str().unwrap(),
        "--protocol.alpha",
        "1.0",
        "--reps",
        "10",
        "--horizon",
        "50",
    ]));
    assert_eq!(report["config_echo"]["protocol"]["alpha"], 1.0);

    let _ = std::fs::remove_file(&path);
}

#[test]
fn seed_env_var_wins_over_the_flag() {
    let args = ["simulate", "--reps", "20", "--horizon", "100", "--seed", "5"];
    let via_env = {
        let out = polyvote()
            .args(args)
            .env("POLYVOTE_SEED", "99")
            .output()
            .expect("binary runs");
        stdout_json(&out)
    };
    let direct = stdout_json(&run(&[
        "simulate", "--reps", "20", "--horizon", "100", "--seed", "99",
    ]));
    assert_eq!(via_env["master_seed"], 99, "environment seed must win");
    assert_eq!(via_env["estimates"], direct["estimates"]);
}

#[test]
fn garbage_env_seed_is_a_configuration_error() {
    let out = polyvote()
        .args(["simulate", "--reps", "5"])
        .env("POLYVOTE_SEED", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("POLYVOTE_SEED"),
        "stderr should name the variable: {stderr}"
    );
}

// ====================================================================
// Failure modes and exit codes
// ====================================================================

#[test]
fn missing_config_file_exits_one_and_names_the_path() {
    let out = run(&["simulate", "--config", "/no/such/polyvote.json"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("/no/such/polyvote.json"),
        "stderr should name the missing file: {stderr}"
    );
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(run(&["simulate", "--bogus"]).status.code(), Some(1));
}

#[test]
fn unknown_config_key_exits_one_and_names_the_key() {
    let out = run(&["simulate", "--protocol.bogus", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bogus"), "stderr should name the key: {stderr}");
}

#[test]
fn out_of_range_roster_index_exits_one() {
    let out = run(&["trade", "--policies.9.delta", "0.5", "--reps", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failed_numerical_check_exits_two() {
    // 200 replications cannot certify a 1e-4 total-variation bound, so the
    // self-check must fail on the numerical family, not the usage one.
    let out = run(&[
        "oracle-check",
        "--reps",
        "200",
        "--mc.tv_threshold",
        "0.0001",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("sampler_total_variation"),
        "stderr should name the failing check: {stderr}"
    );
}

// ====================================================================
// File outputs
// ====================================================================

#[test]
fn csv_and_json_outputs_are_written() {
    let csv = temp_path("sim.csv");
    let json = temp_path("sim.json");
    let report = stdout_json(&run(&[
        "simulate",
        "--reps",
        "10",
        "--horizon",
        "50",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]));

    let csv_text = std::fs::read_to_string(&csv).expect("CSV written");
    let mut lines = csv_text.lines();
    assert_eq!(lines.next(), Some("replication,t,volume,normalized"));
    assert_eq!(lines.count(), 10, "one row per replication at stride 0");

    let json_text = std::fs::read_to_string(&json).expect("JSON written");
    let file_report: Value = serde_json::from_str(&json_text).expect("valid JSON file");
    assert_eq!(file_report["estimates"], report["estimates"]);

    let _ = std::fs::remove_file(&csv);
    let _ = std::fs::remove_file(&json);
}

#[test]
fn trade_ledger_rows_follow_the_documented_schema() {
    let ledger = temp_path("ledger.csv");
    let out = run(&[
        "trade",
        "--protocol.initial_stakes",
        "[10.0,90.0]",
        "--policies",
        r#"[{"strategy": {"kind": "periodic-buy", "amount": 0.3, "period": 2}}]"#,
        "--reps",
        "50",
        "--ledger-csv",
        ledger.to_str().unwrap(),
    ]);
    let report = stdout_json(&out);
    assert!(
        estimate(&report, "utility[periodic-buy]").is_finite(),
        "replaced roster must drive the run"
    );

    let text = std::fs::read_to_string(&ledger).expect("ledger written");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,nu,b,price,cash_flow,stakes,volume"));
    assert!(lines.count() >= 2, "ledger should hold the path of replication 0");

    let _ = std::fs::remove_file(&ledger);
}
