use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn csv(text: &str) -> NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn anova(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anova"))
        .args(args)
        .env_remove("ANOVA_FORMAT")
        .output()
        .unwrap()
}

fn run_json(test: &str, input: &Path, extra: &[&str]) -> (Value, i32) {
    let mut args = vec![
        "run",
        "--test",
        test,
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ];
    args.extend_from_slice(extra);
    let out = anova(&args);
    let code = out.status.code().unwrap();
    assert_ne!(code, 2, "{}", String::from_utf8_lossy(&out.stderr));
    (serde_json::from_slice(&out.stdout).unwrap(), code)
}

const ONE_WAY: &str = "group,value\nctl,4.17\nctl,5.58\nctl,5.18\nctl,6.11\ntrt1,4.81\ntrt1,4.17\ntrt1,4.41\ntrt1,3.59\ntrt2,6.31\ntrt2,5.12\ntrt2,5.54\ntrt2,5.50\n";

fn two_way_text() -> String {
    let mut text = String::from("dose,diet,value\n");
    let mut k = 0u32;
    for dose in ["hi", "lo"] {
        for diet in ["a", "b", "c"] {
            for _ in 0..3 {
                k += 1;
                let v = (k * 37 % 17) as f64 / 3.0 + if dose == "hi" { 2.0 } else { 0.0 };
                text += &format!("{dose},{diet},{v}\n");
            }
        }
    }
    text
}

#[test]
fn t_test_not_rejected_at_sample_mean() {
    let f = csv("value\n1\n2\n3\n");
    let (json, code) = run_json("t", f.path(), &["--mu0", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json["reject"], false);
    assert_eq!(json["statistic"].as_f64().unwrap(), 0.0);
    assert!(json["ci"].is_object());
}

#[test]
fn t_test_rejected_far_from_data() {
    let f = csv("value\n1\n2\n3\n");
    let (json, code) = run_json("t", f.path(), &["--mu0", "100", "--alpha", "0.05"]);
    assert_eq!(code, 1);
    assert_eq!(json["reject"], true);
    let stat = json["statistic"].as_f64().unwrap();
    assert!((stat - 3.0 * 98.0 * 98.0).abs() < 1e-6);
    assert_eq!(json["df"], serde_json::json!([1, 2]));
}

#[test]
fn negative_mu0_is_accepted() {
    let f = csv("value\n1\n2\n3\n");
    let (json, _) = run_json("t", f.path(), &["--mu0", "-4"]);
    assert_eq!(json["mu0"].as_f64().unwrap(), -4.0);
}

#[test]
fn json_schema_and_reject_recomputes() {
    let f = csv(ONE_WAY);
    let (json, code) = run_json("oneway", f.path(), &[]);
    for key in [
        "test",
        "alpha",
        "statistic",
        "df",
        "alpha_point",
        "reject",
        "eta",
        "ss_table",
        "p_value",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert!(json.get("ci").is_none());
    assert_eq!(json["test"], "oneway");
    assert_eq!(json["levels"], serde_json::json!([["ctl", "trt1", "trt2"]]));
    let stat = json["statistic"].as_f64().unwrap();
    let point = json["alpha_point"].as_f64().unwrap();
    assert_eq!(json["reject"].as_bool().unwrap(), stat >= point);
    assert_eq!(code, i32::from(stat >= point));
}

#[test]
fn shuffled_rows_give_identical_reports() {
    let lines: Vec<&str> = ONE_WAY.lines().collect();
    let mut body: Vec<&str> = lines[1..].to_vec();
    body.reverse();
    body.rotate_left(5);
    let shuffled = format!("{}\n{}\n", lines[0], body.join("\n"));
    let (a, b) = (csv(ONE_WAY), csv(&shuffled));
    assert_eq!(run_json("oneway", a.path(), &[]), run_json("oneway", b.path(), &[]));

    let text = two_way_text();
    let mut rows: Vec<&str> = text.lines().skip(1).collect();
    rows.reverse();
    let shuffled = format!("dose,diet,value\n{}\n", rows.join("\n"));
    let (a, b) = (csv(&text), csv(&shuffled));
    for test in ["twoway-a", "twoway-b", "interaction"] {
        assert_eq!(run_json(test, a.path(), &[]), run_json(test, b.path(), &[]));
    }
}

#[test]
fn text_and_json_agree() {
    let f = csv(&two_way_text());
    for test in ["twoway-a", "twoway-b", "interaction"] {
        let (json, _) = run_json(test, f.path(), &[]);
        let out = anova(&[
            "run",
            "--test",
            test,
            "--input",
            f.path().to_str().unwrap(),
            "--format",
            "text",
        ]);
        let text = String::from_utf8(out.stdout).unwrap();
        let field = |name: &str| -> f64 {
            let line = text.lines().find(|l| l.starts_with(name)).unwrap();
            line.split_whitespace().nth(1).unwrap().parse().unwrap()
        };
        for key in ["statistic", "alpha_point", "eta", "p_value", "alpha"] {
            assert_eq!(field(key), json[key].as_f64().unwrap(), "{test} {key}");
        }
        for row in json["ss_table"].as_array().unwrap() {
            let source = row["source"].as_str().unwrap();
            let line = text
                .lines()
                .find(|l| l.trim_start().starts_with(source) && l.starts_with("  "))
                .unwrap();
            let ss: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
            assert_eq!(ss, row["ss"].as_f64().unwrap());
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let f = csv(&two_way_text());
    let args = [
        "run",
        "--test",
        "interaction",
        "--input",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ];
    assert_eq!(anova(&args).stdout, anova(&args).stdout);
    let verify = [
        "verify", "--test", "twoway-a", "--seed", "3", "--reps", "5000", "--format", "json",
    ];
    assert_eq!(anova(&verify).stdout, anova(&verify).stdout);
}

#[test]
fn verify_one_way_seed_42() {
    let out = anova(&[
        "verify", "--test", "oneway", "--sizes", "5,5,5", "--seed", "42", "--reps", "100000", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let tail = json["empirical_tail"].as_f64().unwrap();
    assert!((0.047..=0.053).contains(&tail), "{tail}");
    assert_eq!(json["target_law"], "F(2, 12)");
    assert!(json["ks_distance"].as_f64().unwrap() < 0.01);
}

#[test]
fn env_format_is_a_default_only() {
    let f = csv("value\n1\n2\n3\n");
    let path = f.path().to_str().unwrap();
    let base = || {
        let mut c = Command::new(env!("CARGO_BIN_EXE_anova"));
        c.env("ANOVA_FORMAT", "json");
        c
    };
    let out = base()
        .args(["run", "--test", "t", "--mu0", "2", "--input", path])
        .output()
        .unwrap();
    assert!(serde_json::from_slice::<Value>(&out.stdout).is_ok());
    let out = base()
        .args(["run", "--test", "t", "--mu0", "2", "--input", path, "--format", "text"])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("test"));
}

fn expect_error(args: &[&str], code: &str) {
    let out = anova(args);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(code), "expected {code}: {err}");
}

#[test]
fn errors_exit_2_with_stable_codes() {
    let unbalanced = csv("a,b,value\nx,p,1\nx,p,2\nx,q,1\nx,q,2\nx,q,3\ny,p,1\ny,p,2\ny,q,4\ny,q,5\n");
    expect_error(
        &[
            "run",
            "--test",
            "interaction",
            "--input",
            unbalanced.path().to_str().unwrap(),
        ],
        "E_UNBALANCED",
    );
    let bad = csv("group,value\na,1\na,x\n");
    expect_error(
        &["run", "--test", "oneway", "--input", bad.path().to_str().unwrap()],
        "line 3",
    );
    let data = csv("value\n1\n2\n3\n");
    let p = data.path().to_str().unwrap();
    expect_error(&["run", "--test", "t", "--input", p], "E_MU0");
    expect_error(&["run", "--test", "oneway", "--input", p], "E_LAYOUT_MISMATCH");
    expect_error(
        &["run", "--test", "t", "--mu0", "1", "--input", "/nonexistent.csv"],
        "E_IO",
    );
    let flat = csv("group,value\na,1\na,1\nb,2\nb,2\n");
    expect_error(
        &["run", "--test", "oneway", "--input", flat.path().to_str().unwrap()],
        "E_DEGENERATE",
    );
    let out = anova(&["run", "--test", "t", "--alpha", "1.5", "--input", p]);
    assert_eq!(out.status.code(), Some(2));
    let out = anova(&["run", "--test", "anova", "--input", p]);
    assert_eq!(out.status.code(), Some(2));
}
