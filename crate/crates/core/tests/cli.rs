use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiard-knot")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn spec(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn realize(dir: &Path, preset: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let s = spec(dir, &format!("{preset}.json"), &format!(r#"{{"preset": "{preset}"}}"#));
    let out = dir.join(format!("{preset}-out"));
    let mut args = vec!["realize", s.as_str(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (bin(&args), out)
}

#[test]
fn presets_listing() {
    let o = bin(&["presets"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains("figure-eight: (3,2) padded to (3,8)"));
    assert!(text.contains("star-9-3: 3-component link"));
}

#[test]
fn trefoil_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = realize(dir.path(), "trefoil", &["--seed", "42"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in ["report.json", "trajectory.json", "table.json", "prism.obj", "diagram.svg", "star.json", "polygon.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["certificate"]["pass"], Value::Bool(true));
    assert_eq!(report["delta"], Value::String("1/1000".into()));
    let certify = report["stages"].as_array().unwrap().iter().find(|s| s["name"] == "certify").unwrap();
    assert_eq!(certify["status"], "pass");
    assert!(report["timings"].is_object());

    let v = bin(&["verify", out.join("report.json").to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", stderr(&v));

    let table: Value = serde_json::from_str(&fs::read_to_string(out.join("table.json")).unwrap()).unwrap();
    let edges = table["floor"].as_array().unwrap().len();
    let obj = fs::read_to_string(out.join("prism.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 2 * edges);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), edges + 2);
}

#[test]
fn star_10_3_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = realize(dir.path(), "star-10-3", &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let svg = fs::read_to_string(out.join("diagram.svg")).unwrap();
    assert_eq!(svg.matches("<circle id=\"vertex-").count(), 10);
    assert_eq!(svg.matches("<circle id=\"crossing-").count(), 20);
}

#[test]
fn one_strand_is_a_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(dir.path(), "bad.json", r#"{"pattern": {"strands": 1, "repetitions": 3, "signs": [[], [], []]}}"#);
    let o = bin(&["realize", &s, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("strands must be ≥ 2"));
}

#[test]
fn spec_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    for text in [r#"{"preset": "#, r#"{"preset": "granny"}"#, r#"{"preset": "hopf", "delta": "0"}"#, "{}"] {
        let s = spec(dir.path(), "s.json", text);
        assert_eq!(code(&bin(&["realize", &s, "--out", out])), 3, "{text}");
    }
    let s = spec(dir.path(), "s.json", r#"{"preset": "hopf"}"#);
    assert_eq!(code(&bin(&["realize", &s])), 3, "missing output directory");
    assert_eq!(code(&bin(&["realize", dir.path().join("missing.json").to_str().unwrap(), "--out", out])), 3);
}

#[test]
fn exhausted_search_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = realize(dir.path(), "figure-eight", &["--fmax", "3"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("height search exhausted"));
}

#[test]
fn edited_height_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = realize(dir.path(), "torus-2-5", &[]);
    assert_eq!(code(&o), 0);
    let path = out.join("trajectory.json");
    let mut traj: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let points = traj["components"][0]["points"].as_array_mut().unwrap();
    let k = points.iter().position(|p| p["kind"] == "wall").unwrap();
    let z = points[k]["xyz"][2].as_f64().unwrap();
    points[k]["xyz"][2] = Value::from(z + 0.02);
    fs::write(&path, serde_json::to_string(&traj).unwrap()).unwrap();

    let v = bin(&["verify", out.join("report.json").to_str().unwrap()]);
    assert_eq!(code(&v), 4);
    assert!(stderr(&v).contains("reflection law violated at vertex"), "{}", stderr(&v));
}

#[test]
fn truncated_json_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = realize(dir.path(), "unknot", &[]);
    assert_eq!(code(&o), 0);
    let traj = fs::read_to_string(out.join("trajectory.json")).unwrap();
    fs::write(out.join("short.json"), &traj[..traj.len() / 2]).unwrap();
    let report = out.join("report.json");
    let v = bin(&["verify", report.to_str().unwrap(), "--trajectory", out.join("short.json").to_str().unwrap()]);
    assert_eq!(code(&v), 3);

    let text = fs::read_to_string(&report).unwrap();
    fs::write(&report, &text[..text.len() / 3]).unwrap();
    assert_eq!(code(&bin(&["verify", report.to_str().unwrap()])), 3);
}

#[test]
fn canonical_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(dir.path(), "s.json", r#"{"preset": "star-10-2", "seed": 9}"#);
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = bin(&["realize", &s, "--out", out.to_str().unwrap(), "--canonical"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        reports.push(fs::read(out.join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert!(!String::from_utf8_lossy(&reports[0]).contains("timings"));
}

#[test]
fn flags_override_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec-out");
    let s = spec(
        dir.path(),
        "s.json",
        &format!(r#"{{"preset": "hopf", "seed": 1, "out": {:?}}}"#, out.to_str().unwrap()),
    );
    let o = bin(&["realize", &s, "--seed", "5", "--margin", "0.002", "--precision", "160", "--canonical"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 5);
    assert_eq!(report["margin"], 0.002);
    assert_eq!(report["precision_bits"], 160);
}
