use std::process::{Command, Output};

fn cuntz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuntz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn passing_suite_exits_zero() {
    let o = cuntz(&["verify", "--suite", "spectral", "--n", "2", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[PASS] components_sum_to_x"));
    assert!(text.contains("[PASS] v_eigenvector"));
}

#[test]
fn nogo_report_lists_the_spectrum_check() {
    let o = cuntz(&["report", "--json", "--suite", "nogo", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "nogo");
    assert_eq!(v["n"], 2);
    assert_eq!(v["backend"], "exact");
    assert!(v["elapsed_ms"].is_u64());
    let checks = v["checks"].as_array().unwrap();
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"V_squared_is_minus_identity"));
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(checks.iter().all(|c| c["status"] == "pass" && c["detail"].is_string()));
}

#[test]
fn failing_check_exits_one() {
    let o = cuntz(&["verify", "--suite", "cyclic-fixed", "--n", "3", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] w_powers_as_printed"));
    assert!(stdout(&o).contains("[PASS] w_powers:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cuntz(&["verify", "--suite", "nogo", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cuntz(&["verify", "--suite", "exchange", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cuntz(&["verify", "--suite", "bogus", "--n", "2"]).status.code(), Some(2));
    assert_eq!(cuntz(&["verify", "--n", "2"]).status.code(), Some(2));
    assert_eq!(cuntz(&["eval", "S1 +", "--n", "2"]).status.code(), Some(2));
    assert_eq!(cuntz(&["eval", "S3", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn eval_reduces_to_normal_form() {
    let o = cuntz(&["eval", "S1'*S1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let o = cuntz(&["eval", "S2'*S1", "--n", "2"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = cuntz(&["eq", "-S1 + S2", "S2 - S1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eq_reports_verdict_through_exit_code() {
    let o = cuntz(&["eq", "S1*S1' + S2*S2'", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = cuntz(&["eq", "S1", "S2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = cuntz(&["eq", "sqrt(2)*sqrt(2)", "2", "--n", "2", "--backend", "numeric"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let args = ["report", "--suite", "algebra-laws", "--n", "3", "--seed", "7", "--samples", "5", "--no-timing"];
    let a = cuntz(&args);
    let b = cuntz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_holds_the_json_report() {
    let path = std::env::temp_dir().join(format!("cuntz-report-{}.json", std::process::id()));
    let o = cuntz(&["verify", "--suite", "nogo", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "nogo");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn backends_agree_on_exchange_rank_four() {
    let o = cuntz(&["verify", "--suite", "exchange", "--n", "4", "--samples", "5", "--compare-backends"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("agree"));
}

#[test]
fn normalization_flag_selects_variants() {
    let o = cuntz(&["verify", "--suite", "exchange", "--n", "4", "--samples", "5", "--normalization", "unscaled"]);
    let text = stdout(&o);
    assert!(text.contains("beta_y_unscaled"));
    assert!(!text.contains("beta_y_scaled"));
}
