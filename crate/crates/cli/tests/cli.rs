use std::fs;
use std::process::{Command, Output};

const LAPLACE_EXACT: [f64; 7] = [1.500, 0.850, 0.150, -0.450, 0.900, 0.300, 0.0];

fn bkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bkm"))
        .args(args)
        .env_remove("BKM_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["x", "y", "exact", "computed", "rel_err_pct"]
    );
    rdr.records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn laplace_csv_matches_printed_exact_values() {
    let o = bkm(&["run", "laplace", "--boundary-knots", "5", "--rbf", "mq", "--shape", "25", "--output", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 7);
    for (row, exact) in rows.iter().zip(LAPLACE_EXACT) {
        let computed: f64 = row[3].parse().unwrap();
        assert!((computed - exact).abs() < 5e-4, "{row:?}");
    }
    // The exact value at the origin is zero, so no relative error is defined.
    assert_eq!(rows[6][4], "");
}

#[test]
fn helmholtz_first_row() {
    let o = bkm(&["run", "helmholtz", "--boundary-knots", "11", "--output", "csv"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(line.starts_with("1.5,0,0.997"), "{line}");
    let computed: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
    assert!((computed - 0.997).abs() < 5e-3);
}

#[test]
fn nonlinear_case_rejects_interior_knots() {
    let o = bkm(&["run", "burger", "--interior-knots", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("boundary knots only"));
}

#[test]
fn validation_reports_every_violation() {
    let o = bkm(&["run", "burger", "--interior-knots", "3", "--boundary-knots", "0", "--rbf", "tps", "--shape", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.matches("\n  - ").count(), 3, "{err}");
}

#[test]
fn unknown_case_lists_names() {
    let o = bkm(&["run", "poisson"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("convdiff_xy"));
}

#[test]
fn singular_layout_exits_three_with_condition_estimate() {
    for n in ["1", "2"] {
        let o = bkm(&["run", "laplace", "--boundary-knots", n]);
        assert_eq!(o.status.code(), Some(3), "n = {n}: {}", stderr(&o));
        assert!(stderr(&o).contains("condition estimate"));
    }
}

#[test]
fn json_schema() {
    let o = bkm(&["run", "convdiff_x", "--output", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for key in ["x", "y", "exact", "computed", "rel_err_pct"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
    let summary = &v["summary"];
    assert!(summary["avg_abs_rel_err_pct"].as_f64().unwrap() <= 1.0);
    assert!(summary["condition_estimate_drm"].as_f64().unwrap() > 1.0);
    assert!(summary["condition_estimate_bkm"].as_f64().unwrap() > 1.0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# Laplace run\ncase = laplace\nboundary_knots = 3\nshape = 25\noutput = csv\n").unwrap();
    let o = bkm(&["run", "--config", cfg.to_str().unwrap(), "--boundary-knots", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_rows(&stdout(&o)).len(), 7);

    fs::write(&cfg, "case = laplace\nunknown_key = 1\nshape = wide\n").unwrap();
    let o = bkm(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).matches("\n  - ").count(), 2);
}

#[test]
fn eval_points_and_knot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("points.csv");
    fs::write(&pts, "x,y\n0.5,0.25\n-1.0,0.1\n").unwrap();
    let knots = dir.path().join("knots.csv");
    let first = bkm(&[
        "run",
        "laplace",
        "--eval-points",
        pts.to_str().unwrap(),
        "--knots-out",
        knots.to_str().unwrap(),
        "--output",
        "csv",
    ]);
    assert!(first.status.success(), "{}", stderr(&first));
    let rows = csv_rows(&stdout(&first));
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][..2], ["0.5", "0.25"]);
    assert!(fs::read_to_string(&knots).unwrap().starts_with("x,y,kind,nx,ny\n"));

    let second = bkm(&["run", "laplace", "--eval-points", pts.to_str().unwrap(), "--knots", knots.to_str().unwrap(), "--output", "csv"]);
    assert!(second.status.success(), "{}", stderr(&second));
    assert_eq!(stdout(&first), stdout(&second));

    let clash = bkm(&["run", "laplace", "--knots", knots.to_str().unwrap(), "--boundary-knots", "4"]);
    assert_eq!(clash.status.code(), Some(2));
}

fn table_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(3)
        .take_while(|l| !l.starts_with("avg"))
        .map(|l| l.split("  ").map(str::trim).filter(|c| !c.is_empty()).map(String::from).collect())
        .collect()
}

#[test]
fn table_two_is_within_tolerance() {
    let o = bkm(&["table", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().contains("paper: BEM (16)"));
    let rows = table_rows(&text);
    assert_eq!(rows.len(), 7);
    for row in rows {
        let exact: f64 = row[2].parse().unwrap();
        let bkm: f64 = row[3].parse().unwrap();
        assert!((exact - bkm).abs() <= 5e-3, "{row:?}");
    }
}

#[test]
fn table_one_origin_is_zero() {
    let o = bkm(&["table", "1"]);
    let rows = table_rows(&stdout(&o));
    let origin = rows.iter().find(|r| r[0] == "0.00" && r[1] == "0.00").unwrap();
    assert_eq!(origin[3], "0.000");
    assert!(!stdout(&o).contains("-0.000"));
}

#[test]
fn table_six_summary_line() {
    let o = bkm(&["table", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().contains("Relative error %"));
    let line = text.lines().find(|l| l.starts_with("avg |rel err|")).unwrap();
    let value: f64 = line
        .trim_start_matches("avg |rel err|: ")
        .split('%')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(value <= 8.0, "{line}");
    assert!(line.contains("paper: 3.97%"));
}

#[test]
fn precision_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_bkm"))
        .args(["table", "2"])
        .env("BKM_PRECISION", "5")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("1.50000"));
    let bad = Command::new(env!("CARGO_BIN_EXE_bkm"))
        .args(["table", "2"])
        .env("BKM_PRECISION", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn invalid_table_index() {
    assert_eq!(bkm(&["table", "0"]).status.code(), Some(2));
    assert_eq!(bkm(&["table", "7"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_states_the_convention() {
    let o = bkm(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("pair identity PairedTPS"));
    assert!(text.contains("adopted"));
    for line in text.lines().filter(|l| l.contains("residual Helmholtz") || l.contains("residual ModifiedHelmholtz")) {
        assert!(line.starts_with("PASS"), "{line}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = bkm(&["run", "convdiff_xy", "--output", "json"]);
    let b = bkm(&["run", "convdiff_xy", "--output", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
