use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rectsurf"));
    c.env_remove("RECTSURF_TOLERANCES");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn tb_of_the_minimal_square() {
    let o = run(&["tb", fixture("minimal_square").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "tb+=-1 tb-=-1");
    let v = json(&["tb", fixture("trefoil_staircase").to_str().unwrap()]);
    assert_eq!((v["outputs"]["tb_plus"].as_i64(), v["outputs"]["tb_minus"].as_i64()), (Some(-6), Some(1)));
    assert_eq!(v["command"], "tb");
    assert!(v.get("timings").is_none());
}

#[test]
fn json_reports_are_reproducible() {
    let f = fixture("chain4");
    let a = run(&["--json", "classify", f.to_str().unwrap()]);
    let b = run(&["--json", "classify", f.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn classify_chain_annulus() {
    let v = json(&["classify", fixture("chain4").to_str().unwrap()]);
    let out = &v["outputs"];
    assert_eq!(out["euler_characteristic"], 0);
    assert_eq!(out["boundary"].as_array().unwrap().len(), 2);
    for b in out["boundary"].as_array().unwrap() {
        assert_eq!((b["tb_plus_rel"].as_i64(), b["tb_minus_rel"].as_i64()), (Some(0), Some(-2)));
    }
    assert_eq!(out["components"][0]["name"], "annulus");
    let text = stdout(&run(&["classify", fixture("chain3").to_str().unwrap()]));
    assert!(text.contains("non-orientable"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["tb"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices":[{"theta":"0","phi":"0"},{"theta":"0","phi":"1/2"},{"theta":"1/3","phi":"0"}]}"#).unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("validation error"));
    assert_eq!(run(&["tb", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(1));
    let sq = fixture("minimal_square");
    assert_eq!(run(&["stabilize", sq.to_str().unwrap(), "--vertex", "9", "--type", "I"]).status.code(), Some(2));
    assert_eq!(run(&["mesh", fixture("chain4").to_str().unwrap(), "--res", "4", "--out", "x.obj"]).status.code(), Some(2));
}

#[test]
fn stabilize_then_destabilize() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    let sq = fixture("minimal_square_generic");
    let o = run(&["stabilize", sq.to_str().unwrap(), "--vertex", "0", "--type", "II"]);
    assert!(o.status.success());
    std::fs::write(&s, &o.stdout).unwrap();
    assert_eq!(stdout(&run(&["tb", s.to_str().unwrap()])).trim(), "tb+=-2 tb-=-1");
    let d = json(&["destabilize", s.to_str().unwrap()]);
    assert_eq!((d["outputs"]["tb_plus"].as_i64(), d["outputs"]["tb_minus"].as_i64()), (Some(-1), Some(-1)));
    assert_eq!(d["outputs"]["diagram"]["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn moves_and_exploration() {
    let f = fixture("unknot_with_exchange");
    let m = json(&["moves", "--list", f.to_str().unwrap()]);
    assert!(!m["outputs"]["exchanges"].as_array().unwrap().is_empty());
    let e = json(&["exchange", f.to_str().unwrap(), "--index", "0"]);
    assert_eq!((e["outputs"]["tb_plus"].as_i64(), e["outputs"]["tb_minus"].as_i64()), (Some(-1), Some(-4)));
    let x = json(&["explore", f.to_str().unwrap(), "--max-nodes", "1000"]);
    assert!(x["outputs"]["visited"].as_u64().unwrap() >= 2);
    assert_eq!(x["outputs"]["status"], "Exhausted");
}

#[test]
fn boundary_framing_and_representability() {
    let dir = tempfile::tempdir().unwrap();
    let (b, f) = (dir.path().join("b.json"), dir.path().join("f.json"));
    let o = run(&["boundary", fixture("single_rect").to_str().unwrap(), "--framing-out", f.to_str().unwrap()]);
    assert!(o.status.success());
    std::fs::write(&b, &o.stdout).unwrap();
    let v = json(&["framing-value", b.to_str().unwrap(), f.to_str().unwrap()]);
    // Boundary of a single rectangle: tb+ = -1 and the surface framing has lk = -1.
    assert_eq!(v["outputs"]["total"], 0);
    let ok = json(&["check-representable", b.to_str().unwrap(), "--lk", "-1"]);
    assert_eq!(ok["outputs"]["pass"], true);
    let no = json(&["check-representable", b.to_str().unwrap(), "--lk", "-3"]);
    assert_eq!(no["outputs"]["pass"], false);
}

#[test]
fn mesh_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("s.obj");
    let v = json(&["mesh", fixture("sphere_pair").to_str().unwrap(), "--kappa", "0.25", "--res", "16", "--out", obj.to_str().unwrap()]);
    assert_eq!(v["outputs"]["euler_characteristic"], 2);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("o tile_")).count(), 2);
    assert!(rectsurf::acceptance::obj_warnings(&text).is_empty());
    let svg = dir.path().join("p.svg");
    let o = run(&["plot", fixture("chain4").to_str().unwrap(), "--layers", "giroux,dividing", "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<?xml") || s.starts_with("<svg"));
    assert_eq!(s.matches(r#"class="dividing-curve""#).count(), 1);
    assert_eq!(run(&["plot", fixture("chain4").to_str().unwrap(), "--layers", "nope", "--out", "x.svg"]).status.code(), Some(2));
}

#[test]
fn fixtures_and_random_generators() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["fixtures", "--out", dir.path().to_str().unwrap()]).status.success());
    assert!(dir.path().join("trefoil_staircase.expected.json").exists());
    let a = run(&["fixtures", "--random-surface", "7", "--budget", "6"]);
    let b = run(&["fixtures", "--random-surface", "7", "--budget", "6"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["rectangles"].as_array().unwrap().len(), 6);
    let l = run(&["fixtures", "--random-link", "3"]);
    assert!(l.status.success());
}

#[test]
fn tolerance_override_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("tol.json");
    std::fs::write(&t, r#"{"fd_oracle": 0.001}"#).unwrap();
    let o = bin().env("RECTSURF_TOLERANCES", &t).args(["--json", "tb", fixture("minimal_square").to_str().unwrap()]).output().unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tolerances"]["fd_oracle"], 0.001);
    std::fs::write(&t, r#"{"unknown": 1}"#).unwrap();
    let o = bin().env("RECTSURF_TOLERANCES", &t).args(["tb", fixture("minimal_square").to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_passes_with_the_fixture_directory() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let o = run(&["selftest", "--fixtures", dir.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}\n{}", String::from_utf8_lossy(&o.stderr));
    assert!(text.contains("[fixtures] PASS"), "{text}");
    assert!(text.contains("0 unexpected failures"), "{text}");
}
