use std::process::{Command, Output};

use blowup_core::json::tseries_from_str;
use blowup_core::{BlowupSeriesSet, EvalResult, Normalization, Provenance};

fn blowup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Report lines with the wall-clock field removed.
fn without_timing(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("ms");
            v
        })
        .collect()
}

#[test]
fn gen_latex_shows_known_term() {
    let out = blowup(&["gen", "--series", "S", "--order", "7", "--format", "latex"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("(-6x - x^3)"), "{}", stdout(&out));
}

#[test]
fn gen_below_minimum_order_truncates() {
    let out = blowup(&["gen", "--series", "B", "--order", "3"]);
    assert!(out.status.success());
    let series = tseries_from_str(&stdout(&out)).unwrap();
    assert_eq!(series.order(), 3);
    assert!(series.coeff(0).as_constant().unwrap().is_one());
    assert!((1..=3).all(|n| series.coeff(n).is_zero()));
}

#[test]
fn gen_json_round_trips() {
    for norm in ["plain", "factorial"] {
        let out = blowup(&["gen", "--series", "WS1", "--order", "12", "--normalization", norm]);
        assert!(out.status.success());
        let series = tseries_from_str(&stdout(&out)).unwrap();
        let set = BlowupSeriesSet::generate(12).unwrap();
        assert_eq!(&series, set.select("WS1").unwrap());
    }
}

#[test]
fn gen_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let out = blowup(&["gen", "--series", "B", "--order", "8", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(tseries_from_str(&text).unwrap().order(), 8);
}

#[test]
fn gen_rejects_unknown_series() {
    let out = blowup(&["gen", "--series", "Q", "--order", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown series"));
}

#[test]
fn verify_low_order_passes() {
    let out = blowup(&["verify", "--order", "8", "--bivariate-order", "8", "--mirror-order", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for report in without_timing(&stdout(&out)) {
        assert_eq!(report["pass"], true);
        assert!(report["first_mismatch"].is_null());
    }
}

#[test]
fn verify_is_independent_of_jobs() {
    let base = ["verify", "--order", "12", "--bivariate-order", "10", "--mirror-order", "10"];
    let one = blowup(&[&base[..], &["--jobs", "1"]].concat());
    let four = blowup(&[&base[..], &["--jobs", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(without_timing(&stdout(&one)), without_timing(&stdout(&four)));
}

#[test]
fn verify_selects_identities() {
    let out = blowup(&["verify", "--order", "10", "--identity", "bb", "--identity", "ode_e2"]);
    assert!(out.status.success());
    let ids: Vec<String> =
        without_timing(&stdout(&out)).iter().map(|r| r["identity"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["ode_e2", "bb"]);
}

#[test]
fn verify_rejects_small_order() {
    let out = blowup(&["verify", "--order", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_injected_fault() {
    let out = blowup(&["verify", "--order", "10", "--bivariate-order", "10", "--mirror-order", "10", "--inject-fault", "B:6"]);
    assert_eq!(out.status.code(), Some(1));
    let reports = without_timing(&stdout(&out));
    let failed = reports.iter().find(|r| r["pass"] == false).unwrap();
    assert!(failed["first_mismatch"].is_object());
}

#[test]
fn table_default_passes() {
    let out = blowup(&["table"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("sha256"));
    assert_eq!(text.matches("\tok").count(), 6);
}

#[test]
fn table_needs_full_order() {
    let out = blowup(&["table", "--order", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_names_injected_fault() {
    let out = blowup(&["table", "--inject-fault", "S:9"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("diff S (as S) t^9/9!"), "{text}");
}

fn eval_with(request: &str) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("req.json");
    std::fs::write(&path, request).unwrap();
    blowup(&["eval", "--input", path.to_str().unwrap()])
}

#[test]
fn eval_even_and_odd() {
    let even = eval_with(
        r#"{"parity":"even","order":10,"functionals":{
            "D_c":{"moments":["1","2","4","8","16","32"]},
            "D_{c+tau}":{"moments":["0","0","0","0","0","0"]}}}"#,
    );
    assert!(even.status.success(), "{}", stderr(&even));
    let r = EvalResult::from_json(&stdout(&even)).unwrap();
    assert_eq!(r.provenance, Provenance::Maina);
    assert_eq!(r.series.order(), 10);
    // D_c = evaluation at x = 2: B^2 there is e^{-t^2} cosh^2 t = 1 - t^4/6 + ...
    assert!(r.series.is_even());
    assert!(r.series.coeff(2).is_zero());

    let odd = eval_with(
        r#"{"parity":"odd","order":9,"functionals":{
            "D_c":{"moments":["1","0","0","0","0","0"]},
            "D_c tau-inserted":{"moments":["0","1","0","0","0","0"]}}}"#,
    );
    assert!(odd.status.success(), "{}", stderr(&odd));
    let r = EvalResult::from_json(&stdout(&odd)).unwrap();
    assert_eq!(r.provenance, Provenance::Mainb);
    let factorial = r.to_json(Normalization::Factorial).unwrap();
    assert_eq!(EvalResult::from_json(&factorial).unwrap(), r);
}

#[test]
fn eval_zero_functionals() {
    let out = eval_with(
        r#"{"parity":"even","order":6,"functionals":{
            "D_c":{"moments":["0","0","0","0"]},"D_{c+tau}":{"moments":["0","0","0","0"]}}}"#,
    );
    assert!(out.status.success());
    assert!(EvalResult::from_json(&stdout(&out)).unwrap().series.is_zero());
}

#[test]
fn eval_bad_requests() {
    let missing = eval_with(r#"{"parity":"odd","order":6,"functionals":{"D_c":{"moments":["1","0","0","0"]}}}"#);
    assert_eq!(missing.status.code(), Some(2));
    let malformed = eval_with("{ not json");
    assert_eq!(malformed.status.code(), Some(2));
    let short = eval_with(r#"{"parity":"even","order":12,"functionals":{"D_c":{"moments":["1"]},"D_{c+tau}":{"moments":["1"]}}}"#);
    assert_eq!(short.status.code(), Some(2));
    assert!(stderr(&short).to_lowercase().contains("moment"));
}

#[test]
fn bench_rows() {
    let out = blowup(&["bench", "--order", "10", "--bivariate-order", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step\torder\tms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0][0], "generate");
    assert!(rows.len() > 20);
    for row in &rows {
        assert_eq!(row.len(), 3);
        row[1].parse::<i64>().unwrap();
        assert!(row[2].parse::<f64>().unwrap() >= 0.0);
    }
    let json = blowup(&["bench", "--order", "8", "--format", "json"]);
    assert!(json.status.success());
    for line in stdout(&json).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["step"].is_string() && v["order"].is_i64() && v["ms"].is_number());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(blowup(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(blowup(&["gen", "--order", "x"]).status.code(), Some(2));
}
