use std::path::{Path, PathBuf};
use std::process::Command;

use parabolic::coeffs::GaussianRational as G;
use parabolic::parser::parse_poly;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_parabolic")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

fn error_kind(r: &Run) -> String {
    let last = r.stderr.lines().last().expect("an error line");
    let v = json(last);
    assert!(v["detail"].is_string());
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn certify_symmetric_map() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "f.json", r#"{"format": 1, "map": {"x": "x + y^2", "y": "y + x^2"}}"#);
    let r = run(&["certify", f.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["status"], "Certified");
    assert_eq!(v["curve_count"], 1);
    assert_eq!(v["chain"].as_array().unwrap().len(), 1);
    assert_eq!(v["direction"], json(r#"[["1","1","0","1"],["1","1","0","1"]]"#));
    assert_eq!(v["format"], 1);
}

#[test]
fn exact_output_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "f.json", r#"{"map": {"x": "x + y^2 - x*y", "y": "y + x^2 + 1/2 y^3"}}"#);
    let a = run(&["certify", f.to_str().unwrap()]);
    let b = run(&["certify", f.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.code, b.code);
}

#[test]
fn log_exp_round_trip_is_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    for (i, (x, y)) in [("x + y^2", "y + x^2"), ("x + x^2 - 3/2 x y + i y^3", "y + x y - y^2 + x^4"), ("x + x^3", "y + y^3 + 2x^2 y")]
        .iter()
        .enumerate()
    {
        let f = write(d.path(), &format!("f{i}.json"), &format!(r#"{{"map": {{"x": "{x}", "y": "{y}"}}}}"#));
        let g = d.path().join(format!("g{i}.json"));
        let h = d.path().join(format!("h{i}.json"));
        assert_eq!(run(&["log", f.to_str().unwrap(), "--out", g.to_str().unwrap()]).code, 0);
        assert_eq!(run(&["exp", g.to_str().unwrap(), "--out", h.to_str().unwrap()]).code, 0);
        let g2 = run(&["log", h.to_str().unwrap()]);
        assert_eq!(g2.stdout, std::fs::read_to_string(&g).unwrap());
        let h2 = run(&["exp", g.to_str().unwrap()]);
        assert_eq!(h2.stdout, std::fs::read_to_string(&h).unwrap());
        // canonical spelling differs from the input, the polynomial does not
        let emitted = json(&h2.stdout);
        for (given, key) in [(x, "x"), (y, "y")] {
            let back = emitted["map"][key].as_str().unwrap();
            assert_eq!(parse_poly::<G>(back, ("x", "y"), 12).unwrap().jet, parse_poly::<G>(given, ("x", "y"), 12).unwrap().jet);
        }
    }
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let not_isolated = write(d.path(), "a.json", r#"{"map": {"x": "x + y^2", "y": "y"}}"#);
    let r = run(&["certify", not_isolated.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (3, "NotIsolated"));

    let linear = write(d.path(), "b.json", r#"{"map": {"x": "2x", "y": "y + x^2"}}"#);
    let r = run(&["certify", linear.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (3, "NotTangentToIdentity"));

    let radial = write(d.path(), "c.json", r#"{"vf": {"dx": "x^2 + x y", "dy": "x y + y^2"}}"#);
    let r = run(&["resolve", radial.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (4, "Dicritical"));
    assert_eq!(json(&r.stdout)["status"], "Dicritical");

    let irrational = write(d.path(), "d.json", r#"{"map": {"x": "x + y^2", "y": "y + 2x^2"}}"#);
    let r = run(&["certify", irrational.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (4, "NonRationalBlocked"));
    let r = run(&["certify", irrational.to_str().unwrap(), "--backend", "float"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r.stdout)["backend"], "float");

    let deep = write(d.path(), "e.json", r#"{"map": {"x": "x + y^2", "y": "y + x^2"}}"#);
    let r = run(&["certify", deep.to_str().unwrap(), "--max-blowups", "0"]);
    assert_eq!((r.code, error_kind(&r).as_str()), (4, "DepthExceeded"));

    let bad = write(d.path(), "f.json", r#"{"map": {"x": "x + y^^2", "y": "y"}}"#);
    let r = run(&["certify", bad.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (2, "SyntaxError"));

    let unknown = write(d.path(), "g.json", r#"{"map": {"x": "x + z^2", "y": "y"}}"#);
    assert_eq!(error_kind(&run(&["log", unknown.to_str().unwrap()])), "UnknownVariable");
    let extra = write(d.path(), "h.json", r#"{"map": {"x": "x", "y": "y"}, "colour": 1}"#);
    assert_eq!(run(&["log", extra.to_str().unwrap()]).code, 2);
}

#[test]
fn verify_writes_report_and_csv() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "f.json", r#"{"map": {"x": "x + y^2", "y": "y + x^2"}}"#);
    let csv = d.path().join("orbits");
    let out = d.path().join("report.json");
    let r = run(&["verify", f.to_str().unwrap(), "--n-max", "20000", "--csv-dir", csv.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&std::fs::read_to_string(out).unwrap());
    assert_eq!(v["certificate"]["status"], "Certified");
    assert_eq!(v["verification"]["fraction"], 1.0);
    let files: Vec<_> = std::fs::read_dir(&csv).unwrap().collect();
    assert_eq!(files.len(), 6);
    let first = std::fs::read_to_string(csv.join("orbit_attracting_0_0.csv")).unwrap();
    assert!(first.starts_with("n,re_x,im_x,re_y,im_y,abs,dir_error\n"));
}

#[test]
fn verify_below_threshold() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "f.json", r#"{"map": {"x": "x + y^2", "y": "y + x^2"}}"#);
    // too short for |p_n| < 1e-4
    let r = run(&["verify", f.to_str().unwrap(), "--n-max", "50"]);
    assert_eq!((r.code, error_kind(&r).as_str()), (5, "VerificationBelowThreshold"));
}

#[test]
fn chardirs_reports_indices() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "f.json", r#"{"map": {"x": "x + y^2", "y": "y + x^2"}}"#);
    let r = run(&["chardirs", f.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let v = json(&r.stdout);
    assert_eq!(v["directions"][0]["index"], json(r#"["-1","3","0","1"]"#));
    assert_eq!(v["directions"][0]["class"], "NotInQGe0");
    assert_eq!(v["unresolved"], "v^2 + v + 1");
    let r = run(&["chardirs", f.to_str().unwrap(), "--backend", "float"]);
    let v = json(&r.stdout);
    assert_eq!(v["directions"].as_array().unwrap().len(), 3);
    let sum = v["sum"].as_array().unwrap();
    assert!((sum[0].as_f64().unwrap() + 1.0).abs() < 1e-6);
}
