use std::path::Path;
use std::process::{Command, Output};

fn hypercover(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercover"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERCOVER_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn asy_prints_positive_radius() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypercover(dir.path(), &["asy", "--n", "1000", "--d", "20", "--target", "0.9"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["r_asy"].as_f64().unwrap() > 0.0);
    assert!(v["V_d"].as_f64().unwrap() > 0.0);
}

#[test]
fn factorial_design_has_512_rows_of_10() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypercover(dir.path(), &["design", "--family", "factorial", "--d", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 512);
    assert!(rows.iter().all(|r| r.split(',').count() == 10));
}

#[test]
fn output_file_gets_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypercover(
        dir.path(),
        &["design", "--family", "uniform_delta", "--d", "3", "--n", "8", "--delta", "0.5", "--seed", "4", "-o", "u.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("u.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 4);
    let digest = &manifest["outputs"][0];
    assert_eq!(digest["path"], "u.csv");
    assert_eq!(digest["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn coverage_quantile_and_cdf_on_a_saved_design() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.csv"), "0.5\n").unwrap();
    let base = ["--design", "d.csv", "--box", "0,1", "--N", "100000", "--seed", "2"];

    let mut args = vec!["coverage", "--r", "0.25"];
    args.extend(base);
    let cov = json(&hypercover(dir.path(), &args));
    assert!(cov["ci_low"].as_f64().unwrap() <= 0.5 && 0.5 <= cov["ci_high"].as_f64().unwrap());
    assert_eq!(cov["N"], 100000);

    let mut args = vec!["quantile", "--gamma", "0.5"];
    args.extend(base);
    let q = json(&hypercover(dir.path(), &args));
    assert!((q["r_quantile"].as_f64().unwrap() - 0.25).abs() < 0.01);

    let mut args = vec!["cdf", "--rmin", "0", "--rmax", "0.5", "--steps", "3"];
    args.extend(base);
    let out = hypercover(dir.path(), &args);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,F_hat,ci_low,ci_high"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn quantize_and_lloyd() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.csv"), "0.5\n").unwrap();
    let out = hypercover(
        dir.path(),
        &["quantize", "--design", "d.csv", "--box", "0,1", "--p", "1,2", "--N", "200000", "--seed", "1"],
    );
    let v = json(&out);
    let theta = v["theta_p"].as_array().unwrap();
    assert!((theta[0].as_f64().unwrap() - 0.25).abs() < 0.005);
    assert!((theta[1].as_f64().unwrap() - 1.0 / 12.0).abs() < 0.005);

    std::fs::write(dir.path().join("two.csv"), "0.1\n0.2\n").unwrap();
    let out = hypercover(
        dir.path(),
        &["lloyd", "--design", "two.csv", "--box", "0,1", "--iters", "30", "--N", "50000", "--seed", "1", "-o", "l.csv"],
    );
    assert!(out.status.success());
    let mut improved: Vec<f64> = std::fs::read_to_string(dir.path().join("l.csv"))
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    improved.sort_by(f64::total_cmp);
    assert!((improved[0] - 0.25).abs() < 0.02 && (improved[1] - 0.75).abs() < 0.02, "{improved:?}");
    let trace = std::fs::read_to_string(dir.path().join("l.csv.trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,objective\n"));
}

#[test]
fn bad_inputs_exit_2_and_name_the_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "0.1,0.2\n0.3,oops\n").unwrap();
    std::fs::write(dir.path().join("ok.csv"), "0.1,0.2\n").unwrap();
    std::fs::write(dir.path().join("box.csv"), "0,1\n0,1\n0,1\n").unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["coverage", "--design", "bad.csv", "--box", "0,1", "--r", "0.1", "--N", "10", "--seed", "1"], "bad.csv"),
        (&["coverage", "--design", "ok.csv", "--box", "box.csv", "--r", "0.1", "--N", "10", "--seed", "1"], "--box"),
        (&["coverage", "--design", "missing.csv", "--box", "0,1", "--r", "0.1", "--N", "10", "--seed", "1"], "missing.csv"),
        (&["asy", "--n", "10", "--d", "2", "--target", "0.9", "--bogus"], "--bogus"),
        (&["coverage", "--design", "ok.csv", "--box", "0,1", "--r", "0.1", "--N", "10"], "--seed"),
    ];
    for (args, needle) in cases {
        let out = hypercover(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn fig_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["fig1", "--dims", "1,4", "--n", "50", "--target", "0.9", "--N", "20000", "--seed", "3", "--replicates", "2"],
        &["fig2", "--d", "5", "--n", "50", "--rmin", "0", "--rmax", "1", "--steps", "5", "--N", "20000", "--seed", "3"],
        &["fig3", "--d", "8", "--n", "30", "--deltas", "0.5,1", "--target", "0.5", "--N", "20000", "--seed", "3"],
        &["fig4", "--d", "8", "--gammas", "0.1,0.01", "--N", "50000", "--seed", "3", "--steps", "5"],
    ];
    for args in runs {
        let mut a = args.to_vec();
        a.extend(["-o", "a.csv"]);
        let mut b = args.to_vec();
        b.extend(["-o", "b.csv"]);
        assert!(hypercover(dir.path(), &a).status.success(), "{args:?}");
        assert!(hypercover(dir.path(), &b).status.success(), "{args:?}");
        let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
        assert_eq!(read("a.csv"), read("b.csv"), "{args:?}");
    }
}

#[test]
fn json_mirror_matches_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fig2", "--d", "3", "--n", "20", "--rmin", "0", "--rmax", "0.6", "--steps", "4", "--N", "5000", "--seed", "9"];
    let csv = stdout(&hypercover(dir.path(), &args));
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let rows = json(&hypercover(dir.path(), &with_json));
    let rows = rows.as_array().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,coverage,ci_low,ci_high,approx");
    assert_eq!(rows.len(), lines.len() - 1);
    for (row, line) in rows.iter().zip(&lines[1..]) {
        let r: f64 = line.split(',').next().unwrap().parse().unwrap();
        assert_eq!(row["r"].as_f64().unwrap(), r);
    }
}
