use std::path::Path;
use std::process::{Command, Output};

fn cesaro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cesaro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cesaro(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn kernel_of_order_one_is_all_ones() {
    let text = stdout(&["kernel", "--alpha", "1", "--n", "10"]);
    assert_eq!(text.lines().next(), Some("n,re,im"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10);
    for (n, r) in rows.iter().enumerate() {
        assert_eq!(r, &vec![n as f64, 1.0, 0.0]);
    }
}

#[test]
fn unit_order_dual_border_lies_on_circle() {
    let rows = csv_rows(&stdout(&["spectrum", "--beta", "1", "--p", "2", "--side", "dual"]));
    assert!(rows.len() > 100);
    for r in rows {
        let d = ((r[1] - 1.0).powi(2) + r[2].powi(2)).sqrt();
        assert!((d - 1.0).abs() <= 1e-10, "{r:?}");
    }
}

#[test]
fn gamma_identity_reports_meet_tolerance() {
    let text = stdout(&["verify", "--suite", "gamma-identities"]);
    let mut n = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in [
            "identity",
            "params",
            "lhs",
            "rhs",
            "rel_err",
            "tail_bound",
            "terms_used",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["pass"], true, "{line}");
        let tail = v["tail_bound"].as_f64().unwrap();
        if tail == 0.0 {
            assert!(v["rel_err"].as_f64().unwrap() <= 1e-9, "{line}");
        }
        n += 1;
    }
    assert!(n > 100);
}

#[test]
fn verify_records_seeds() {
    let text = stdout(&["verify", "--suite", "semigroups"]);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(first["seed"].as_u64().is_some());
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["spectrum", "--beta", "5", "--p", "2"],
        vec!["verify", "--suite", "weyl"],
        vec![
            "apply", "--op", "cesaro", "--beta", "0.5", "--random", "20", "--seed", "7",
        ],
        vec!["crossings", "--beta", "5", "--p", "2"],
    ] {
        let a = cesaro(&args);
        let b = cesaro(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

fn polyline_point_count(svg: &str) -> usize {
    svg.split("points=\"")
        .skip(1)
        .map(|s| s.split('"').next().unwrap().split_whitespace().count())
        .sum()
}

#[test]
fn every_svg_has_a_matching_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&["figures", "--out-dir", d]);
    let again = tempfile::tempdir().unwrap();
    stdout(&["figures", "--out-dir", again.path().to_str().unwrap()]);
    for i in 1..=7 {
        let svg = std::fs::read_to_string(dir.path().join(format!("fig{i}.svg"))).unwrap();
        let csv = std::fs::read_to_string(dir.path().join(format!("fig{i}.csv"))).unwrap();
        assert_eq!(csv.lines().next(), Some("beta_re,beta_im,t,re,im"));
        assert_eq!(polyline_point_count(&svg), csv.lines().count() - 1, "fig{i}");
        for name in [format!("fig{i}.svg"), format!("fig{i}.csv")] {
            let a = std::fs::read(dir.path().join(&name)).unwrap();
            let b = std::fs::read(again.path().join(&name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }

    let out = dir.path().join("circle.svg");
    stdout(&[
        "spectrum",
        "--beta",
        "1",
        "--p",
        "inf",
        "--format",
        "svg",
        "--out",
        out.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&out).unwrap();
    let csv = std::fs::read_to_string(Path::new(d).join("circle.csv")).unwrap();
    assert_eq!(polyline_point_count(&svg), csv.lines().count() - 1);
}

#[test]
fn input_file_and_inline_values_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    std::fs::write(&path, "re,im\n1,0\n2,-1\n0.5,0\n").unwrap();
    let a = stdout(&["weyl", "--alpha", "0.7", "--input", path.to_str().unwrap()]);
    let b = stdout(&["weyl", "--alpha", "0.7", "--values", "1;2,-1;0.5"]);
    assert_eq!(a, b);
}

#[test]
fn exit_codes_distinguish_usage_and_computation_errors() {
    assert_eq!(cesaro(&["kernel", "--alpha", "x", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cesaro(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        cesaro(&["apply", "--op", "nope", "--values", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cesaro(&["spectrum", "--beta", "1", "--format", "svg"]).status.code(),
        Some(2)
    );
    // the dual symbol has no p = inf version
    assert_eq!(
        cesaro(&["spectrum", "--beta", "1", "--p", "inf", "--side", "dual"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(cesaro(&["norm", "--geometric", "0.5"]).status.code(), Some(1));
}
