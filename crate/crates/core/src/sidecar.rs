//! Expected-value sidecars for the fixture directory.
//!
//! A fixture `name.json` is accompanied by `name.expected.json`. Integers,
//! booleans and strings are compared exactly, reals with a tolerance.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::framing::framing_range;
use crate::io::{parse_diagram, parse_surface, print_diagram, print_surface, to_json};
use crate::link::LinkDiagram;
use crate::linking::{component_tbs, tb_minus, tb_plus};
use crate::surface::SurfaceDiagram;
use crate::tile::HarmonicTile;

/// Bumped whenever the fixture set or the sidecar layout changes.
pub const FIXTURE_VERSION: u32 = 1;

pub fn link_expected(r: &LinkDiagram) -> Result<Value> {
    let generic = r.genericity().generic;
    Ok(json!({
        "version": FIXTURE_VERSION,
        "kind": "link",
        "vertices": r.len(),
        "components": r.components().len(),
        "generic": generic,
        "tb_plus": tb_plus(r)?,
        "tb_minus": tb_minus(r)?,
        "component_tb": component_tbs(r)?,
        "framing_range": if generic { json!(framing_range(r)?) } else { Value::Null },
    }))
}

pub fn surface_expected(d: &SurfaceDiagram, term_tol: f64) -> Result<Value> {
    let rep = d.classify()?;
    let r0 = d.rectangles()[0];
    let t = HarmonicTile::new(&r0, term_tol);
    let (x, y) = (t.a * 0.25, t.b * 0.5);
    Ok(json!({
        "version": FIXTURE_VERSION,
        "kind": "surface",
        "rectangles": d.len(),
        "euler_characteristic": rep.euler_characteristic,
        "orientable": rep.orientable,
        "names": rep.components.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
        "boundary_components": rep.boundary.len(),
        "relative_tb": rep.boundary.iter().map(|b| (b.tb_plus_rel, b.tb_minus_rel)).collect::<Vec<_>>(),
        "dividing_curves": rep.dividing_set.len(),
        "closed_dividing_curves": rep.dividing_set.iter().filter(|c| c.closed).count(),
        "giroux_edges": rep.giroux_edges.len(),
        "first_tile_height_at_quarter": t.h(x, y)?,
    }))
}

/// Differences between two sidecar values, as JSON-pointer-like paths.
pub fn compare(expected: &Value, actual: &Value, real_tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    walk("", expected, actual, real_tol, &mut out);
    out
}

fn walk(path: &str, e: &Value, a: &Value, tol: f64, out: &mut Vec<String>) {
    match (e, a) {
        (Value::Number(x), Value::Number(y)) if x.is_f64() || y.is_f64() => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if !((x - y).abs() <= tol) {
                out.push(format!("{path}: expected {x}, got {y} (tolerance {tol:e})"));
            }
        }
        (Value::Object(m), Value::Object(n)) => {
            for (k, v) in m {
                match n.get(k) {
                    Some(w) => walk(&format!("{path}/{k}"), v, w, tol, out),
                    None => out.push(format!("{path}/{k}: missing")),
                }
            }
            for k in n.keys().filter(|k| !m.contains_key(*k)) {
                out.push(format!("{path}/{k}: unexpected"));
            }
        }
        (Value::Array(m), Value::Array(n)) if m.len() == n.len() => {
            for (i, (v, w)) in m.iter().zip(n).enumerate() {
                walk(&format!("{path}/{i}"), v, w, tol, out);
            }
        }
        _ if e == a => {}
        _ => out.push(format!("{path}: expected {e}, got {a}")),
    }
}

/// Write every fixture and its sidecar into `dir`; returns the file names.
pub fn write_fixture_dir(dir: &Path, term_tol: f64) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    let mut put = |name: &str, body: String, expected: Value| -> Result<()> {
        std::fs::write(dir.join(format!("{name}.json")), body + "\n")?;
        std::fs::write(dir.join(format!("{name}.expected.json")), to_json(&expected) + "\n")?;
        names.push(name.to_string());
        Ok(())
    };
    for (name, r) in fixtures::link_fixtures() {
        put(name, print_diagram(&r, None), link_expected(&r)?)?;
    }
    for (name, d) in fixtures::surface_fixtures() {
        put(name, print_surface(&d), surface_expected(&d, term_tol)?)?;
    }
    Ok(names)
}

/// Recompute every sidecar found in `dir` and compare. Returns
/// `(fixtures checked, mismatches)`.
pub fn check_fixture_dir(dir: &Path, real_tol: f64, term_tol: f64) -> Result<(usize, Vec<String>)> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.to_string_lossy().ends_with(".expected.json"))
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(Error::Validation(format!("no sidecar files in {}", dir.display())));
    }
    let mut problems = Vec::new();
    for side in &entries {
        let stem = side.file_name().unwrap().to_string_lossy().trim_end_matches(".expected.json").to_string();
        let expected: Value = serde_json::from_str(&std::fs::read_to_string(side)?)?;
        let text = std::fs::read_to_string(dir.join(format!("{stem}.json")))?;
        let actual = match expected.get("kind").and_then(Value::as_str) {
            Some("link") => link_expected(&parse_diagram(&text)?.0)?,
            Some("surface") => surface_expected(&parse_surface(&text)?, term_tol)?,
            _ => return Err(Error::Validation(format!("{}: unknown kind", side.display()))),
        };
        problems.extend(compare(&expected, &actual, real_tol).into_iter().map(|p| format!("{stem}{p}")));
    }
    Ok((entries.len(), problems))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_is_exact_for_integers_and_tolerant_for_reals() {
        let e = json!({"a": 1, "b": [1.0, 2], "c": "x"});
        assert!(compare(&e, &json!({"a": 1, "b": [1.0 + 1e-12, 2], "c": "x"}), 1e-9).is_empty());
        assert_eq!(compare(&e, &json!({"a": 2, "b": [1.0, 2], "c": "x"}), 1e-9).len(), 1);
        assert_eq!(compare(&e, &json!({"a": 1, "b": [1.1, 2], "c": "x"}), 1e-9).len(), 1);
        assert_eq!(compare(&e, &json!({"a": 1, "b": [1.0], "c": "x", "d": 0}), 1e-9).len(), 2);
    }

    #[test]
    fn fixture_dir_round_trip() {
        let dir = std::env::temp_dir().join(format!("rectsurf-sidecar-{}", std::process::id()));
        let names = write_fixture_dir(&dir, 1e-15).unwrap();
        let (n, problems) = check_fixture_dir(&dir, 1e-9, 1e-15).unwrap();
        assert_eq!(n, names.len());
        assert!(problems.is_empty(), "{problems:?}");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
