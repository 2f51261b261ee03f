use std::process::{Command, Output};

use blowup_mcf::oracles;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup-mcf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn validate_reports_and_exit_codes() {
    let ok = bin(&["validate", "--potential", "S"]);
    assert_eq!(ok.status.code(), Some(0));
    let out = text(&ok.stdout);
    assert!(out.starts_with("condition,passed\n"));
    assert_eq!(out.matches(",pass\n").count(), 3);

    let bad = bin(&["validate", "--potential", "S^2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(text(&bad.stderr).contains("g_S(0) = 0: extension condition fails"));

    let neg = bin(&["validate", "--potential", "-log(1+S)", "--format", "json"]);
    assert_eq!(neg.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&neg.stdout).unwrap();
    assert_eq!(v["cond_positive_2"], false);

    let syntax = bin(&["validate", "--potential", "S +"]);
    assert_eq!(syntax.status.code(), Some(2));
    assert!(text(&syntax.stderr).contains("syntax error"));
}

#[test]
fn curvature_record() {
    let o = bin(&["curvature", "--potential", "S", "--m", "2", "--radius", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["R"], 1.0);
    assert!((v["lambda_tan"].as_f64().unwrap() + 0.5).abs() < 1e-15);
    assert!((v["lambda_last"].as_f64().unwrap() + 1.0).abs() < 1e-15);
    assert!((v["H"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-15);
    assert!((v["A_sq"].as_f64().unwrap() - 1.5).abs() < 1e-15);

    let flat = bin(&["curvature", "--flat", "--m", "2", "--radius", "2"]);
    let out = text(&flat.stdout);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("R,lambda_tan,lambda_last,H,A_sq"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(&row[1..4], &[-0.5, -0.5, -0.5]);

    assert_eq!(bin(&["curvature", "--potential", "S", "--radius", "1"]).status.code(), Some(2));
    let degenerate = bin(&["curvature", "--potential", "-2*S", "--m", "2", "--radius", "1"]);
    assert_eq!(degenerate.status.code(), Some(1));
    assert!(text(&degenerate.stderr).contains("not positive"));
}

#[test]
fn flow_writes_trajectory_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("burns.csv");
    let p = path.to_str().unwrap();
    let o = bin(&["flow", "--potential", "S", "--m", "2", "--r0", "1", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let summary = text(&o.stdout);
    assert_eq!(summary.lines().next(), Some("T_sing ≈ 0.962098, Type I, limit ≈ 1.500"));

    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,R,H,A_sq"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(first[1], "1.0000000000000000e0");
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        for f in fields {
            let mantissa = f.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.len(), 18, "{f}");
        }
    }

    let flat = bin(&["flow", "--flat", "--m", "2", "--r0", "1", "--out", p]);
    assert_eq!(flat.status.code(), Some(0));
    assert!(text(&flat.stdout).starts_with("T_sing ≈ 0.500000, Type I"));
}

#[test]
fn flow_output_is_deterministic() {
    let args = ["flow", "--potential", "S + 0.1*S^2", "--m", "3", "--r0", "0.7", "--stride", "0.01"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    // Without --out the summary moves to the diagnostic stream.
    assert!(text(&a.stderr).starts_with("T_sing ≈ "));
}

#[test]
fn flow_rejects_bad_initial_radius() {
    let tiny = bin(&["flow", "--potential", "S", "--m", "2", "--r0", "1e-9"]);
    assert_eq!(tiny.status.code(), Some(2));
    assert!(text(&tiny.stderr).contains("invalid initial radius"));
    // H changes sign at R ≈ 1.33 for g = log(1+S), m = 2.
    let beyond = bin(&["flow", "--potential", "log(1+S)", "--m", "2", "--r0", "2"]);
    assert_eq!(beyond.status.code(), Some(2));
}

#[test]
fn classify_json_schema() {
    let o = bin(&["classify", "--potential", "S", "--m", "2", "--r0", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["potential", "m", "R0", "T_sing", "verdict", "limit", "c"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["potential"], "S");
    assert_eq!(v["verdict"], "TypeI");
    let closed = v["T_sing"]["closed_form"].as_f64().unwrap();
    assert!((closed - oracles::burns_t_sing(1.0)).abs() < 1e-15);
    assert!((v["T_sing"]["quadrature"].as_f64().unwrap() - closed).abs() < 1e-10);
    assert!((v["T_sing"]["trajectory"].as_f64().unwrap() - closed).abs() < 1e-6);
    assert!((v["limit"]["estimate"].as_f64().unwrap() - 1.5).abs() < 1e-3);
    assert_eq!(v["limit"]["predicted"], 1.5);

    // No closed form for a general potential: the field is omitted.
    let o = bin(&["classify", "--potential", "2*S", "--m", "2", "--r0", "1", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["T_sing"].get("closed_form").is_none());
    assert!((v["limit"]["estimate"].as_f64().unwrap() - 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-3);
}

#[test]
fn sweep_rows_match_the_oracle() {
    let o = bin(&["sweep", "--potential", "S", "--m", "2", "--r0-min", "0.5", "--r0-max", "2", "--steps", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o.stdout);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("R0,T_sing,T_sing_quadrature,limit_estimate,verdict,error"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        let r0: f64 = row[0].parse().unwrap();
        assert!((r0 - (0.5 + 0.5 * i as f64)).abs() < 1e-15);
        let t: f64 = row[1].parse().unwrap();
        assert!((t - oracles::burns_t_sing(r0)).abs() < 1e-6);
        let limit: f64 = row[3].parse().unwrap();
        assert!((limit - 1.5).abs() < 1e-3);
        assert_eq!(row[4], "TypeI");
        assert_eq!(row[5], "");
    }

    let one = bin(&["sweep", "--potential", "S", "--m", "2", "--r0-min", "0.5", "--r0-max", "2", "--steps", "1"]);
    assert_eq!(one.status.code(), Some(2));
}

#[test]
fn sweep_records_row_errors() {
    let o = bin(&["sweep", "--potential", "log(1+S)", "--m", "2", "--r0-min", "0.5", "--r0-max", "2", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let out = text(&o.stdout);
    let last = out.lines().last().unwrap();
    assert!(last.contains("invalid initial radius"), "{last}");
}
