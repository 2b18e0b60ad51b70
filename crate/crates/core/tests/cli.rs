//! The `qeuler` binary: JSON round trips, determinism, formats, exit codes.

use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;

use qeuler::euler::{twisted_q_euler_poly, EulerParams};
use qeuler::lfunctions::{l_function_direct, ZetaParams};
use qeuler::{EvalConfig, Exponent, QParam, RootOfUnity};

fn qeuler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeuler")).args(args).env_remove("QEULER_CONFIG").output().expect("run the binary")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn value(rec: &Value) -> Complex64 {
    Complex64::new(rec["value_re"].as_f64().unwrap(), rec["value_im"].as_f64().unwrap())
}

#[test]
fn euler_json_round_trips_to_the_library_value() {
    let out = qeuler(&["euler", "--n", "5", "--x", "1/3", "--h", "2", "--q", "0.3", "--w", "4:1"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    let p = EulerParams {
        n: 5,
        x: Exponent::rational(1, 3).unwrap(),
        h: Exponent::Int(2),
        q: QParam::new(Complex64::new(0.3, 0.0)).unwrap(),
        w: RootOfUnity::new(4, 1).unwrap(),
    };
    let expected = twisted_q_euler_poly(&p, &EvalConfig::default()).unwrap();
    assert_eq!(value(&recs[0]), expected, "shortest round-trip formatting is exact");
    assert_eq!(recs[0]["object"], "euler");
    assert_eq!(recs[0]["path"], "closed");
    assert_eq!(recs[0]["params"]["w"], "4:1");
}

#[test]
fn l_json_round_trips_and_paths_agree() {
    let out = qeuler(&["l", "--s", "0.5,2", "--chi", "5;1", "--q", "0.7", "--w", "3:2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let paths: Vec<&str> = recs.iter().map(|r| r["path"].as_str().unwrap()).collect();
    assert_eq!(paths, ["direct", "decomposed", "difference"]);
    let params =
        ZetaParams::new(Complex64::new(0.5, 2.0), Complex64::new(1.0, 0.0), 0.7, RootOfUnity::new(3, 2).unwrap())
            .unwrap()
            .with_chi("5;1".parse().unwrap());
    let expected = l_function_direct(&params, &EvalConfig::default()).unwrap();
    assert_eq!(value(&recs[0]), expected.value);
    assert!(recs[0]["error_bound"].as_f64().unwrap() >= 0.0);
    assert!(value(&recs[2]).norm() < 1e-12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: [&[&str]; 4] = [
        &["euler", "--n", "4", "--q", "0.5", "--x", "1/2", "--mode", "both"],
        &["zeta", "--s", "-3,0", "--x", "0.25", "--q", "0.4", "--w", "2:1", "--h", "1"],
        &["table", "--object", "l", "--n", "0..4", "--chi", "3;1", "--q", "0.6", "--format", "csv"],
        &["padic", "--n", "2", "--p", "3", "--precision", "10", "--target", "6", "--w", "3:1"],
    ];
    for args in cases {
        let a = qeuler(args);
        let b = qeuler(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn near_one_uses_exact_arithmetic() {
    let out = qeuler(&["euler", "--n", "3", "--q", "0.999999"]);
    let recs = records(&out);
    assert_eq!(recs[0]["path"], "closed-exact");
    // E_3(0) = 1/4 in the limit
    assert!((value(&recs[0]).re - 0.25).abs() < 1e-5);
}

#[test]
fn csv_has_a_header_even_when_empty() {
    let out = qeuler(&["table", "--object", "zeta", "--n", "3..2", "--q", "0.5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "object,path,params,value_re,value_im,error_bound,value_padic\n");

    let out = qeuler(&["table", "--object", "euler", "--n", "0..2", "--q", "1/2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn plain_format_is_readable() {
    let out = qeuler(&["zeta", "--s", "-2,0", "--q", "0.5", "--format", "plain"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("zeta [regularized-series]"), "{text}");
    assert!(text.contains("error <="));
}

#[test]
fn padic_records_carry_the_residue_text() {
    let out = qeuler(&["padic", "--object", "moment", "--n", "4", "--p", "5", "--precision", "8", "--target", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert!(recs[0]["value_re"].is_null());
    assert!(recs[0]["value_padic"].as_str().unwrap().starts_with("5^8; 5^0; "));
    // level sums are determined to the target valuation, not to full precision
    let agreement: u32 = recs[0]["params"]["agreement_valuation"].as_str().unwrap().parse().unwrap();
    assert!(agreement >= 6);
}

#[test]
fn exit_codes_follow_the_error_kind() {
    // domain: q outside the unit disk
    let out = qeuler(&["zeta", "--s", "1,0", "--q", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&out)[0]["error"], "domain");
    // non-convergence: the level cap stops the p-adic integral
    let out = qeuler(&["padic", "--n", "1", "--p", "3", "--precision", "12", "--target", "12"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stdout));
    // parse failure of a value
    let out = qeuler(&["euler", "--n", "1", "--q", "abc"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&out)[0]["error"], "parse");
}

#[test]
fn verify_small_grid_passes() {
    let out = qeuler(&["verify", "--suite", "all", "--grid", "small"]);
    assert_eq!(out.status.code(), Some(0));
    for rec in records(&out) {
        assert_eq!(rec["passed"], true, "{rec}");
    }
}

#[test]
fn config_file_sets_the_output_format() {
    let dir = std::env::temp_dir().join(format!("qeuler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("qeuler.conf");
    std::fs::write(&path, "# plain output\noutput = plain\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qeuler"))
        .args(["euler", "--n", "1", "--q", "1/2"])
        .env("QEULER_CONFIG", &path)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("euler [closed-exact]"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}
