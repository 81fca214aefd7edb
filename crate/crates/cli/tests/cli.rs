use std::path::Path;
use std::process::{Command, Output};

use deit::output::{parse_grid_csv, parse_spectrum_csv};
use deit::TripodParams;

fn deit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn meta_params(meta: &[(String, String)]) -> TripodParams {
    let (_, json) = meta.iter().find(|(k, _)| k == "params").expect("params header");
    TripodParams::from_json(json).unwrap()
}

#[test]
fn spectrum_to_stdout() {
    let o = deit(&["spectrum", "--gc", "5", "--delta", "5", "--alpha", "0.001", "--beta", "0.666", "--evaluator", "analytic-full"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let parsed = parse_spectrum_csv(&stdout(&o)).unwrap();
    assert_eq!(parsed.points.len(), 601);
    assert_eq!(parsed.points[0].delta_c, -15.0);
    assert_eq!(parsed.points[600].delta_c, 15.0);
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["spectrum", "--gc", "-1"][..],
        &["spectrum", "--beta", "0"],
        &["spectrum", "--points", "1"],
        &["spectrum", "--evaluator", "magic"],
        &["spectrum", "--model", "thermal", "--evaluator", "numeric-tripod"],
        &["spectrum", "--format", "png"],
        &["reproduce", "--figure", "fig9"],
        &["scan", "--axis", "beta"],
        &["bfield", "--splitting-mhz", "-3"],
        &["spectrum", "--gc", "abc"],
    ] {
        let o = deit(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn degenerate_steady_state_exits_3() {
    let o = deit(&["spectrum", "--evaluator", "numeric-tripod", "--gc", "0", "--alpha", "0", "--delta", "0", "--points", "5"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("steady state"), "{}", stderr(&o));
}

#[test]
fn unwritable_output_exits_1_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = deit(&["spectrum", "--points", "3", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(blocker.to_str().unwrap()), "{}", stderr(&o));
}

#[test]
fn reproduce_fig7_writes_four_panels() {
    let dir = tempfile::tempdir().unwrap();
    let o = deit(&["reproduce", "--figure", "fig7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut deltas = Vec::new();
    for letter in ['a', 'b', 'c', 'd'] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig7_{letter}.csv"))).unwrap();
        let parsed = parse_spectrum_csv(&text).unwrap();
        assert_eq!(parsed.points.len(), 601);
        assert!(parsed.metadata.iter().any(|(k, v)| k == "version" && v.starts_with("deit ")));
        deltas.push(meta_params(&parsed.metadata).delta);
    }
    assert_eq!(deltas, [0.0, 2.5, 5.0, 7.5]);
    let svg = std::fs::read_to_string(dir.path().join("fig7.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 8);
}

#[test]
fn scan_writes_long_csv_and_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = deit(&[
        "scan",
        "--axis",
        "delta",
        "--axis-min",
        "0",
        "--axis-max",
        "4",
        "--axis-points",
        "5",
        "--points",
        "21",
        "--out",
        out,
        "--format",
        "csv,svg,json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let grid = parse_grid_csv(&std::fs::read_to_string(dir.path().join("scan.csv")).unwrap()).unwrap();
    assert_eq!(grid.rows.len(), 5 * 21);
    assert_eq!(grid.rows[21].0, 1.0);
    let svg = std::fs::read_to_string(dir.path().join("scan.svg")).unwrap();
    assert!(svg.contains("#ffd700"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan.json")).unwrap()).unwrap();
    assert_eq!(json["absorption"].as_array().unwrap().len(), 5);
}

#[test]
fn several_formats_need_an_output_directory() {
    let o = deit(&["spectrum", "--points", "3", "--format", "csv,json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = deit(&[
            "spectrum",
            "--evaluator",
            "numeric-tripod",
            "--points",
            "41",
            "--format",
            "csv,json,svg",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        ["csv", "json", "svg"].map(|ext| std::fs::read(out.join(format!("spectrum.{ext}"))).unwrap())
    };
    assert_eq!(run("one"), run("two"));
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"params":{"g_c":2,"alpha":0.01},"sweep":{"min":-3,"max":3,"points":7},"evaluator":"analytic-two-lambda"}"#,
    );
    let from_cfg = parse_spectrum_csv(&stdout(&deit(&["spectrum", "--config", &cfg]))).unwrap();
    assert_eq!(from_cfg.points.len(), 7);
    let p = meta_params(&from_cfg.metadata);
    assert_eq!((p.g_c, p.alpha), (2.0, 0.01));
    assert!(from_cfg.metadata.iter().any(|(k, v)| k == "evaluator" && v == "analytic-two-lambda"));

    let overridden = parse_spectrum_csv(&stdout(&deit(&["spectrum", "--config", &cfg, "--gc", "3", "--points", "9"]))).unwrap();
    assert_eq!(overridden.points.len(), 9);
    let p = meta_params(&overridden.metadata);
    assert_eq!((p.g_c, p.alpha), (3.0, 0.01));
}

#[test]
fn bad_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for body in [r#"{"command":"scan"}"#, r#"{"params":{"gc":1}}"#, "not json", r#"{"params":{"g_c":-1}}"#] {
        let cfg = write_config(dir.path(), body);
        let o = deit(&["spectrum", "--points", "3", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(2), "{body}: {}", stderr(&o));
    }
    let o = deit(&["spectrum", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eigen_reports_dark_states() {
    let o = deit(&["eigen", "--gc", "5", "--gp", "1", "--delta", "0", "--deltac", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dark = json["dark_states"].as_array().unwrap();
    assert_eq!(dark.len(), 1);
    assert!((dark[0]["eigenvalue"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(json["eigenvalues"].as_array().unwrap().len(), 4);

    let text = stdout(&deit(&["eigen", "--gc", "5", "--gp", "1", "--delta", "3", "--deltac", "0.5"]));
    assert!(text.contains("dark states: 0"), "{text}");
}

#[test]
fn compare_reports_each_model() {
    let o = deit(&["compare", "--gc", "5", "--delta", "2.5", "--gp", "0.001", "--alpha", "0.1", "--points", "61"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "model,sup_abs_dev,at_delta_c,sup_im_dev,at_delta_c_im,peak_im,relative_im_dev");
    let models: Vec<&str> = rows[1..].iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(models, ["exchange", "dephasing", "bloch"]);
}

#[test]
fn bfield_prints_gauss() {
    let o = deit(&["bfield", "--splitting-mhz", "10", "--lande-g", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3.572386 G\n");
}
