//! The acceptance suite: one result line per criterion, shared by the
//! `acceptance` test target and `rectsurf selftest`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufReader;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::framing::{extremal_counts, framing_value, Framing};
use crate::link::{LinkDiagram, Orientation};
use crate::linking::{linking_number, tb_minus, tb_minus_oriented, tb_plus, tb_plus_oriented, writhe, Cut};
use crate::moves::{destabilization_sites, destabilize_oriented, stabilization_sites, stabilize_oriented, StabilizationType};
use crate::oracles::{fd_probe_values, laplacian5, laplacian9, mesh_euler_characteristic, tb_from_corners};
use crate::random::{random_link_diagram, random_surface_diagram, rng};
use crate::surface::{Corner, Rectangle, SurfaceDiagram};
use crate::tile::checks::{contact_field_check, crossing_separation, tangency_check, Profile};
use crate::tile::embed::Stereographic;
use crate::tile::foliation::{foliation_streamlines, slope};
use crate::tile::mesh::{default_pole, surface_mesh, SurfaceMesh};
use crate::tile::{zeta, zeta_inverse, HarmonicTile, Tile};
use crate::tolerances::Tolerances;
use crate::torus::{CircleCoord, TorusPoint};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub pass: bool,
    /// Failure recorded in the decisions ledger as not attainable.
    pub known_failure: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    fn new(id: &str, name: &str, pass: bool, detail: String) -> Self {
        CriterionResult { id: id.into(), name: name.into(), pass, known_failure: false, detail, seconds: 0.0 }
    }

    /// Acceptable outcome: a pass, or a documented failure that still fails.
    pub fn ok(&self) -> bool {
        self.pass != self.known_failure
    }

    pub fn line(&self) -> String {
        let verdict = match (self.pass, self.known_failure) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
            (true, true) => "PASS (expected failure)",
        };
        format!("[{}] {} {}: {}", self.id, verdict, self.name, self.detail)
    }
}

type Criterion = fn(&Tolerances) -> Vec<CriterionResult>;

const CRITERIA: [Criterion; 12] = [
    tb_identity,
    cut_invariance,
    stabilization_calculus,
    framing_range,
    boundary_admissibility,
    topology_fixtures,
    dividing_structure,
    harmonic_numerics,
    tile_geometry,
    contact_witness,
    foliation,
    mesh_integrity,
];

/// Run every criterion; results are in criterion order.
pub fn run(tol: &Tolerances) -> Vec<CriterionResult> {
    CRITERIA
        .par_iter()
        .map(|c| {
            let t0 = Instant::now();
            let mut out = c(tol);
            let dt = t0.elapsed().as_secs_f64();
            for r in &mut out {
                r.seconds = dt;
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn error_line(id: &str, name: &str, e: Error) -> Vec<CriterionResult> {
    vec![CriterionResult::new(id, name, false, format!("error: {e}"))]
}

fn link_corpus(seeds: std::ops::Range<u64>) -> Vec<(String, LinkDiagram)> {
    let mut v: Vec<(String, LinkDiagram)> = fixtures::link_fixtures().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    v.extend(seeds.map(|s| (format!("seed {s}"), random_link_diagram(s, 4, 40))));
    v
}

fn tb_identity(_: &Tolerances) -> Vec<CriterionResult> {
    let corpus = link_corpus(0..200);
    let bad: Vec<String> = corpus
        .par_iter()
        .filter_map(|(name, r)| {
            let check = || -> Result<bool> {
                let (p, m) = (tb_plus(r)?, tb_minus(r)?);
                let corners = tb_from_corners(r, &r.canonical_orientation(), Cut::default_for(r))?;
                Ok(p + m == -(r.len() as i64) / 2 && corners == (p, m))
            };
            match check() {
                Ok(true) => None,
                Ok(false) => Some(name.clone()),
                Err(e) => Some(format!("{name}: {e}")),
            }
        })
        .collect();
    vec![CriterionResult::new(
        "1",
        "tb+ + tb- = -|R|/2",
        bad.is_empty(),
        format!(
            "{} diagrams ({} fixtures, 200 random with 4-40 vertices); corner-count route agrees; failures: {:?}",
            corpus.len(),
            corpus.len() - 200,
            bad
        ),
    )]
}

#[derive(PartialEq, Eq, Debug)]
struct CutValues {
    tb: (i64, i64),
    lk: Option<i64>,
    writhe: i64,
    corner_tb: (i64, i64),
}

fn values_at(r: &LinkDiagram, o: &Orientation, cut: Cut) -> Result<CutValues> {
    let ncomp = r.components().len();
    let lk = if ncomp > 1 {
        let split: Vec<bool> = (0..ncomp).map(|k| k == 0).collect();
        Some(linking_number(r, o, &split, cut)?)
    } else {
        None
    };
    Ok(CutValues {
        tb: (tb_plus_oriented(r, o, Some(cut))?, tb_minus_oriented(r, o, Some(cut))?),
        lk,
        writhe: writhe(r, o, cut)?,
        corner_tb: tb_from_corners(r, o, cut)?,
    })
}

fn cut_invariance(_: &Tolerances) -> Vec<CriterionResult> {
    let corpus = link_corpus(0..200);
    let results: Vec<Result<(bool, bool, bool, bool)>> = corpus
        .par_iter()
        .enumerate()
        .map(|(k, (_, r))| {
            let o = r.canonical_orientation();
            let mut g = rng(10_000 + k as u64);
            let vals: Vec<CutValues> =
                (0..5).map(|_| values_at(r, &o, Cut::random_for(r, &mut g))).collect::<Result<_>>()?;
            let same = |f: &dyn Fn(&CutValues) -> (i64, i64, Option<i64>)| vals.iter().all(|v| f(v) == f(&vals[0]));
            let inv = same(&|v| (v.tb.0, v.tb.1, v.lk));
            let w_inv = same(&|v| (v.writhe, 0, None));
            let corner = vals.iter().all(|v| v.corner_tb == v.tb);
            let has_lk = vals[0].lk.is_some();
            Ok((inv, w_inv, corner, has_lk))
        })
        .collect();
    let mut errors = Vec::new();
    let (mut inv_fail, mut w_var, mut corner_fail, mut links) = (0, 0, 0, 0);
    for (res, (name, _)) in results.into_iter().zip(&corpus) {
        match res {
            Ok((inv, w_inv, corner, has_lk)) => {
                inv_fail += !inv as usize;
                w_var += !w_inv as usize;
                corner_fail += !corner as usize;
                links += has_lk as usize;
            }
            Err(e) => errors.push(format!("{name}: {e}")),
        }
    }
    let n = corpus.len();
    let mut a = CriterionResult::new(
        "2a",
        "cut invariance of tb+, tb-, lk",
        inv_fail == 0 && errors.is_empty(),
        format!("{n} diagrams x 5 random admissible cuts ({links} with several components); {inv_fail} varied; errors {errors:?}"),
    );
    a.pass &= corner_fail == 0;
    let mut b = CriterionResult::new(
        "2b",
        "cut invariance of the writhe",
        w_var == 0,
        format!(
            "writhe of the planar drawing changed with the cut on {w_var}/{n} diagrams; tb+ = w - (#nw + #se)/2 held at every cut \
             ({corner_fail} exceptions), so the corner counts move with the writhe"
        ),
    );
    b.known_failure = true;
    vec![a, b]
}

fn same_oriented(a: &LinkDiagram, oa: &Orientation, b: &LinkDiagram, ob: &Orientation) -> bool {
    a.same_points(b)
        && (0..a.len()).all(|i| b.index_of(&a.vertex(i)).map(|j| ob.signs[j] == oa.signs[i]).unwrap_or(false))
}

fn stabilization_calculus(_: &Tolerances) -> Vec<CriterionResult> {
    let outcomes: Vec<Result<(usize, usize, usize, Vec<String>)>> = (0..50u64)
        .into_par_iter()
        .map(|s| {
            let r = random_link_diagram(500 + s, 4, 20);
            let o = r.canonical_orientation();
            let base = (tb_plus_oriented(&r, &o, None)?, tb_minus_oriented(&r, &o, None)?);
            let (mut n1, mut n2, mut skipped, mut bad) = (0, 0, 0, Vec::new());
            for site in stabilization_sites(&r) {
                let Ok((d, od)) = stabilize_oriented(&r, &o, &site) else {
                    skipped += 1;
                    continue;
                };
                let kind = site.kind().expect("site vertex is a square corner");
                let after = (tb_plus_oriented(&d, &od, None)?, tb_minus_oriented(&d, &od, None)?);
                let delta = (after.0 - base.0, after.1 - base.1);
                let expected = match kind {
                    StabilizationType::I => {
                        n1 += 1;
                        (0, -1)
                    }
                    StabilizationType::II => {
                        n2 += 1;
                        (-1, 0)
                    }
                };
                let far = site.square.corner(site.corner().unwrap().opposite());
                let back = destabilization_sites(&d).into_iter().find(|x| x.far_corner == far);
                let round_trip = match back {
                    Some(x) if x.kind() == kind => {
                        let (e, oe) = destabilize_oriented(&d, &od, &x)?;
                        same_oriented(&e, &oe, &r, &o)
                    }
                    _ => false,
                };
                if delta != expected || !round_trip {
                    bad.push(format!("seed {} at {:?}: delta {delta:?}, round trip {round_trip}", 500 + s, site.vertex));
                }
            }
            Ok((n1, n2, skipped, bad))
        })
        .collect();
    let (mut n1, mut n2, mut skipped, mut bad) = (0, 0, 0, Vec::new());
    for o in outcomes {
        match o {
            Ok((a, b, c, d)) => {
                n1 += a;
                n2 += b;
                skipped += c;
                bad.extend(d);
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    vec![CriterionResult::new(
        "3",
        "stabilization deltas and destabilization inverse",
        bad.is_empty() && n1 > 0 && n2 > 0,
        format!("50 diagrams: {n1} type I sites (0,-1), {n2} type II sites (-1,0), {skipped} illegal sites skipped; failures {bad:?}"),
    )]
}

/// All grid diagrams with `n` columns on the odd lattice `(2i+1)/(2n+1)`:
/// two permutations with no common value.
fn all_grid_diagrams(n: usize) -> Vec<LinkDiagram> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let den = 2 * n as i128 + 1;
    let c = |i: usize| CircleCoord::from_ratio(2 * i as i128 + 1, den);
    let ps = perms(n);
    let mut out = Vec::new();
    for s in &ps {
        for p in &ps {
            if s.iter().zip(p).any(|(a, b)| a == b) {
                continue;
            }
            let v = (0..n).flat_map(|i| [TorusPoint::new(c(i), c(s[i])), TorusPoint::new(c(i), c(p[i]))]).collect();
            out.push(LinkDiagram::new(v).expect("permutation pair"));
        }
    }
    out
}

fn framing_range(_: &Tolerances) -> Vec<CriterionResult> {
    let mut diagrams: Vec<LinkDiagram> = (2..=5).flat_map(all_grid_diagrams).collect();
    let n_grid = diagrams.len();
    diagrams.extend(fixtures::link_fixtures().into_iter().map(|(_, d)| d).filter(|d| d.genericity().generic && d.len() <= 10));
    let outcomes: Vec<Result<(u64, u64, bool)>> = diagrams
        .par_iter()
        .enumerate()
        .map(|(k, r)| {
            let tbs = crate::linking::component_tbs(r)?;
            let mut seen: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); tbs.len()];
            let (mut total, mut odd) = (0u64, 0u64);
            for (j, f) in Framing::all(r).enumerate() {
                let counts = extremal_counts(r, &f);
                total += 1;
                for (c, (&n, &(tp, _))) in counts.iter().zip(&tbs).enumerate() {
                    odd += (n % 2) as u64;
                    seen[c].insert(tp + n as i64 / 2);
                }
                // The library's framing value on a thinned subset.
                if (j + k) % 97 == 0 {
                    let v = framing_value(r, &f)?;
                    let direct: Vec<i64> = counts.iter().zip(&tbs).map(|(&n, &(tp, _))| tp + n as i64 / 2).collect();
                    if v.per_component != direct {
                        return Ok((total, odd, false));
                    }
                }
            }
            let exact = seen.iter().zip(&tbs).all(|(s, &(p, m))| s.iter().copied().eq(p..=-m));
            Ok((total, odd, exact))
        })
        .collect();
    let (mut framings, mut odd, mut bad, mut errors) = (0u64, 0u64, 0usize, Vec::new());
    for o in outcomes {
        match o {
            Ok((t, d, exact)) => {
                framings += t;
                odd += d;
                bad += !exact as usize;
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    vec![CriterionResult::new(
        "4",
        "framing values fill [tb+, -tb-] exactly",
        bad == 0 && odd == 0 && errors.is_empty(),
        format!(
            "{} diagrams ({n_grid} = every grid diagram with 4-10 vertices, plus generic fixtures), {framings} framings; \
             {bad} range mismatches; odd extremal counts {odd}; errors {errors:?}",
            diagrams.len()
        ),
    )]
}

fn boundary_admissibility(_: &Tolerances) -> Vec<CriterionResult> {
    let outcomes: Vec<Result<(usize, Vec<String>)>> = (0..100u64)
        .into_par_iter()
        .map(|s| {
            let d = random_surface_diagram(s, 1 + (s % 8) as usize).diagram;
            let rep = d.classify()?;
            let mut bad = Vec::new();
            for b in &rep.boundary {
                if b.tb_plus_rel > 0 || b.tb_minus_rel > 0 || b.tb_plus_rel + b.tb_minus_rel != -(b.length as i64) / 2 {
                    bad.push(format!("seed {s}: ({}, {}) on {} vertices", b.tb_plus_rel, b.tb_minus_rel, b.length));
                }
            }
            if d.lengthbound_check()?.iter().any(|l| !l.pass) {
                bad.push(format!("seed {s}: length bound"));
            }
            if d.relative_tb_closed_form()? != d.relative_tb_from_framing()? {
                bad.push(format!("seed {s}: closed form and framing route disagree"));
            }
            Ok((rep.boundary.len(), bad))
        })
        .collect();
    let (mut comps, mut bad) = (0, Vec::new());
    for o in outcomes {
        match o {
            Ok((c, b)) => {
                comps += c;
                bad.extend(b);
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    vec![CriterionResult::new(
        "5",
        "relative tb of boundaries, length bound",
        bad.is_empty(),
        format!("100 random surfaces, {comps} boundary components; both relative tb <= 0, sum = -|K|/2, |S| >= -2 tb+, framing route agrees; failures {bad:?}"),
    )]
}

fn topology_fixtures(_: &Tolerances) -> Vec<CriterionResult> {
    let check = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        let cases: [(&str, SurfaceDiagram, i64, usize, bool); 4] = [
            ("single_rect", fixtures::single_rect(), 1, 1, true),
            ("sphere_pair", fixtures::sphere_pair(), 2, 0, true),
            ("chain4", fixtures::chain(4), 0, 2, true),
            ("chain3", fixtures::chain(3), 0, 1, false),
        ];
        for (name, d, chi, nb, orientable) in cases {
            let rep = d.classify()?;
            let mesh_chi = mesh_euler_characteristic(&d)?;
            let mut this = rep.euler_characteristic == chi
                && mesh_chi == chi
                && rep.boundary.len() == nb
                && rep.orientable == orientable
                && rep.components.len() == 1;
            if name == "chain4" {
                this &= rep.boundary.iter().all(|b| (b.tb_plus_rel, b.tb_minus_rel) == (0, -2));
                this &= rep.dividing_set.len() == 1 && rep.dividing_set[0].closed;
            }
            ok &= this;
            parts.push(format!(
                "{name}: {} chi={} (mesh {mesh_chi}) boundary={} orientable={}",
                rep.components[0].name,
                rep.euler_characteristic,
                rep.boundary.len(),
                rep.orientable
            ));
        }
        Ok((ok, parts.join("; ")))
    };
    match check() {
        Ok((ok, detail)) => vec![CriterionResult::new("6", "topology of the fixtures", ok, detail)],
        Err(e) => error_line("6", "topology of the fixtures", e),
    }
}

fn dividing_structure(_: &Tolerances) -> Vec<CriterionResult> {
    let bad: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|s| {
            let d = random_surface_diagram(1000 + s, 1 + (s % 8) as usize).diagram;
            let mut count = vec![0usize; d.len()];
            for c in d.dividing_set() {
                for r in c.rectangles {
                    count[r] += 1;
                }
            }
            let max_deg = d.dividing_degrees().values().copied().max().unwrap_or(0);
            (count.iter().any(|&c| c != 1) || max_deg > 2).then(|| format!("seed {}: edges {count:?}, degree {max_deg}", 1000 + s))
        })
        .collect();
    vec![CriterionResult::new(
        "7",
        "one dividing edge per rectangle, node degree <= 2",
        bad.is_empty(),
        format!("100 random surfaces; failures {bad:?}"),
    )]
}

const SHAPES: [(usize, usize); 5] = [(1, 1), (2, 1), (1, 2), (4, 1), (1, 4)];
const PROBES: usize = 66;

fn probe_grid(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    (1..PROBES).flat_map(move |i| (1..PROBES).map(move |j| (a * i as f64 / PROBES as f64, b * j as f64 / PROBES as f64)))
}

fn harmonic_numerics(tol: &Tolerances) -> Vec<CriterionResult> {
    let tt = tol.series_term;
    let mut out = Vec::new();

    // Centre values: squares of several sizes, and the rotation identity for rectangles.
    let mut centre = 0.0f64;
    for s in [1.0, 0.25, 1.0 / 3.0, 0.01] {
        centre = centre.max((HarmonicTile::with_spans(s, s, tt).h(s / 2.0, s / 2.0).unwrap() - 0.5).abs());
    }
    let mut rotation = 0.0f64;
    let mut sample = String::new();
    for (a, b) in [(2.0, 1.0), (4.0, 1.0), (0.3, 0.7)] {
        let h1 = HarmonicTile::with_spans(a, b, tt).h(a / 2.0, b / 2.0).unwrap();
        let h2 = HarmonicTile::with_spans(b, a, tt).h(b / 2.0, a / 2.0).unwrap();
        rotation = rotation.max((h1 + h2 - 1.0).abs());
        if a == 4.0 {
            sample = format!("{h1:.3e}");
        }
    }
    out.push(CriterionResult::new(
        "8a",
        "centre value",
        centre <= tol.center_value && rotation <= tol.center_value,
        format!(
            "squares: max |h - 1/2| = {centre:.2e}; other rectangles: h(a,b) + h(b,a) - 1 <= {rotation:.2e} at the centre (4:1 centre value {sample}; 1/2 holds for squares only)"
        ),
    ));

    let mut comp = 0.0f64;
    for (a, b) in SHAPES {
        let t = HarmonicTile::with_spans(a as f64, b as f64, tt);
        for (x, y) in probe_grid(a as f64, b as f64) {
            comp = comp.max((t.s_vert(x, y).value + t.s_horiz(x, y).value - 1.0).abs());
        }
    }
    out.push(CriterionResult::new(
        "8b",
        "dual-series complementarity",
        comp <= tol.complementarity,
        format!("max |S_vert + S_horiz - 1| = {comp:.2e} on 65x65 grids, 5 shapes"),
    ));

    let t0 = Instant::now();
    let fd: Vec<(usize, usize, f64)> = SHAPES
        .par_iter()
        .map(|&(a, b)| {
            let vals = fd_probe_values((a, b), PROBES, tol.fd_residual);
            let t = HarmonicTile::with_spans(a as f64, b as f64, tt);
            let err = probe_grid(a as f64, b as f64).zip(vals).map(|((x, y), u)| (t.h(x, y).unwrap() - u).abs()).fold(0.0, f64::max);
            (a, b, err)
        })
        .collect();
    let worst = fd.iter().map(|x| x.2).fold(0.0, f64::max);
    out.push(CriterionResult::new(
        "8c",
        "series vs finite differences",
        worst <= tol.fd_oracle,
        format!(
            "max abs diff {worst:.2e} on 65x65 interior grids ({}); SOR + Richardson, {:.1}s",
            fd.iter().map(|(a, b, e)| format!("{a}:{b} {e:.1e}")).collect::<Vec<_>>().join(", "),
            t0.elapsed().as_secs_f64()
        ),
    ));

    let mut inv = 0.0f64;
    let mut monotone = true;
    for kappa in [0.0, 0.25, 0.5, 1.0] {
        let mut prev = -1.0;
        for i in 0..=1000 {
            let h = i as f64 / 1000.0;
            let z = zeta(h, kappa);
            inv = inv.max((zeta_inverse(z, kappa) - h).abs()).max((z + zeta(1.0 - h, kappa) - 1.0).abs());
            monotone &= z > prev || (i == 0);
            prev = z;
        }
    }
    out.push(CriterionResult::new(
        "8d",
        "height map involution",
        inv <= tol.zeta_involution && monotone,
        format!("max |zeta^-1(zeta(h)) - h|, |zeta(h) + zeta(1-h) - 1| = {inv:.2e} for kappa in 0, 0.25, 0.5, 1; increasing: {monotone}"),
    ));

    let (mut r5, mut r9, mut r5_all, mut r9_all) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (a, b) in SHAPES {
        let (a, b) = (a as f64, b as f64);
        let t = HarmonicTile::with_spans(a, b, tt);
        let f = |x: f64, y: f64| t.h(x, y).unwrap();
        let short = a.min(b);
        let d = short / 256.0;
        for (x, y) in probe_grid(a, b) {
            let (l5, l9) = (laplacian5(&f, x, y, d).abs(), laplacian9(&f, x, y, d).abs());
            let dist = x.min(a - x).min(y).min(b - y);
            r5_all = r5_all.max(l5);
            r9_all = r9_all.max(l9);
            if dist >= short / 4.0 {
                r5 = r5.max(l5);
            }
            if dist >= short / 32.0 {
                r9 = r9.max(l9);
            }
        }
    }
    out.push(CriterionResult::new(
        "8e",
        "harmonicity residual",
        r5 <= tol.harmonicity && r9 <= tol.harmonicity,
        format!(
            "spacing 1/256 of the short side, 65x65 grids, 5 shapes: 5-point {r5:.2e} at distance >= 1/4 of the short side from the sides, \
             9-point {r9:.2e} at distance >= 1/32; next to the corners (truncation error of the stencils) 5-point {r5_all:.1e}, 9-point {r9_all:.1e}"
        ),
    ));
    out
}

fn rect(t: [(i128, i128); 2], p: [(i128, i128); 2]) -> Rectangle {
    Rectangle::from_ratios(t, p).expect("valid rectangle")
}

fn tile_geometry(tol: &Tolerances) -> Vec<CriterionResult> {
    let taus: Vec<f64> = (0..=6).map(|k| 0.2 + 0.1 * k as f64).collect();
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut parts = Vec::new();
    for kappa in [0.0, 0.5] {
        for (label, r) in [("square", rect([(1, 8), (3, 8)], [(1, 8), (3, 8)])), ("2:1", rect([(0, 1), (1, 2)], [(1, 2), (3, 4)]))] {
            match tangency_check(&Tile::new(r, kappa, tol.series_term), &taus, 1e-4, tol.tangency_angle) {
                Ok(rep) => {
                    worst = worst.max(rep.max_defect);
                    failures += rep.failures;
                    parts.push(format!("{label} kappa {kappa}: {:.1e}", rep.max_defect));
                }
                Err(e) => {
                    failures += 1;
                    parts.push(e.to_string());
                }
            }
        }
    }
    out.push(CriterionResult::new(
        "9a",
        "tangency along corner arcs",
        failures == 0 && worst <= tol.tangency_angle,
        format!("max angle {worst:.2e} rad at tau in [0.2, 0.8], 4 arcs each ({})", parts.join(", ")),
    ));
    let cp = fixtures::crossing_pair();
    let rs = cp.rectangles();
    let (over, under) = if rs[0].theta.inside_open(&rs[1].theta) { (rs[0], rs[1]) } else { (rs[1], rs[0]) };
    let mut ok = true;
    let mut parts = Vec::new();
    for kappa in [0.0, 0.5] {
        match crossing_separation(&over, &under, kappa, 200, tol.series_term) {
            Ok(s) => {
                ok &= s.consistent && s.min_gap > 0.0;
                parts.push(format!("kappa {kappa}: min gap {:.3e} over {} samples, over tile higher: {}", s.min_gap, s.samples, s.consistent));
            }
            Err(e) => {
                ok = false;
                parts.push(e.to_string());
            }
        }
    }
    out.push(CriterionResult::new("9b", "crossing pair tiles separated", ok, parts.join("; ")));
    out
}

fn contact_witness(tol: &Tolerances) -> Vec<CriterionResult> {
    let run = || -> Result<(bool, String)> {
        let profile = Profile::smooth_step(0.05)?;
        let mut ok = true;
        let mut parts = Vec::new();
        for r in [rect([(1, 8), (3, 8)], [(1, 8), (3, 8)]), rect([(0, 1), (1, 2)], [(1, 2), (3, 4)])] {
            let rep = contact_field_check(&Tile::new(r, 0.0, tol.series_term), &profile, 32)?;
            ok &= rep.transversality_failures == 0
                && rep.max_lie_residual <= tol.lie_residual
                && rep.max_boundary_angle <= tol.boundary_parallel;
            parts.push(format!(
                "{} samples, {} transversality failures (min cosine {:.2e}), Lie residual {:.2e}, binding angle {:.2e}",
                rep.samples, rep.transversality_failures, rep.min_transversality, rep.max_lie_residual, rep.max_boundary_angle
            ));
        }
        Ok((ok, parts.join("; ")))
    };
    match run() {
        Ok((ok, d)) => vec![CriterionResult::new("10", "contact line element field", ok, d)],
        Err(e) => error_line("10", "contact line element field", e),
    }
}

fn foliation(tol: &Tolerances) -> Vec<CriterionResult> {
    let run = || -> Result<(bool, String)> {
        let (mut max_slope, mut lines, mut pts, mut truncated) = (f64::NEG_INFINITY, 0, 0, 0);
        for kappa in [0.0, 0.5] {
            for r in [rect([(1, 8), (3, 8)], [(1, 8), (3, 8)]), rect([(0, 1), (1, 2)], [(1, 2), (3, 4)])] {
                for s in foliation_streamlines(&Tile::new(r, kappa, tol.series_term), 6)? {
                    lines += 1;
                    truncated += s.truncated as usize;
                    pts += s.slopes.len();
                    for v in s.slopes.iter().chain(&s.segment_slopes()) {
                        max_slope = max_slope.max(*v);
                    }
                }
            }
        }
        let sq = Tile::new(rect([(1, 8), (3, 8)], [(1, 8), (3, 8)]), 0.0, tol.series_term);
        let centre = slope(&sq, 0.125, 0.125)?;
        let side = slope(&sq, 0.125, 1e-3)?.abs().max(slope(&sq, 0.125, 0.25 - 1e-3)?.abs());
        let ok = max_slope < 0.0 && (centre + 1.0).abs() <= tol.center_slope && side < tol.side_slope;
        Ok((
            ok,
            format!(
                "{lines} streamlines, {pts} points ({truncated} stopped near a corner), max slope {max_slope:.3e}; square centre slope {centre:.12}; |slope| {side:.2e} at 1e-3 from a horizontal side"
            ),
        ))
    };
    match run() {
        Ok((ok, d)) => vec![CriterionResult::new("11", "leaves have negative slope", ok, d)],
        Err(e) => error_line("11", "leaves have negative slope", e),
    }
}

/// Problems found in an OBJ document beyond what the loader accepts:
/// unknown records, bad indices, degenerate faces, unused vertices,
/// empty objects and edges shared by more than two faces.
pub fn obj_warnings(text: &str) -> Vec<String> {
    let mut warnings = Vec::new();
    let mut nv = 0usize;
    let mut used = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let mut current: Option<(String, usize)> = None;
    let close = |cur: &mut Option<(String, usize)>, w: &mut Vec<String>| {
        if let Some((name, 0)) = cur.take() {
            w.push(format!("object {name} has no faces"));
        }
    };
    for (ln, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            None => {}
            Some("v") => {
                let c: Vec<f64> = it.filter_map(|t| t.parse().ok()).collect();
                if c.len() != 3 || c.iter().any(|x| !x.is_finite()) {
                    warnings.push(format!("line {}: malformed vertex", ln + 1));
                }
                nv += 1;
                used.push(false);
            }
            Some("o") => {
                close(&mut current, &mut warnings);
                current = Some((it.collect::<Vec<_>>().join(" "), 0));
            }
            Some("f") => {
                let idx: Vec<Option<usize>> = it.map(|t| t.parse::<usize>().ok()).collect();
                if idx.len() != 3 || idx.iter().any(|i| !matches!(i, Some(k) if *k >= 1 && *k <= nv)) {
                    warnings.push(format!("line {}: bad face indices", ln + 1));
                    continue;
                }
                let f: Vec<usize> = idx.into_iter().map(|i| i.unwrap() - 1).collect();
                if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                    warnings.push(format!("line {}: degenerate face", ln + 1));
                }
                for k in 0..3 {
                    used[f[k]] = true;
                    let (a, b) = (f[k], f[(k + 1) % 3]);
                    *edges.entry((a.min(b), a.max(b))).or_default() += 1;
                }
                match &mut current {
                    Some((_, n)) => *n += 1,
                    None => warnings.push(format!("line {}: face outside an object", ln + 1)),
                }
            }
            Some(tag) if tag.starts_with('#') => {}
            Some(tag) => warnings.push(format!("line {}: unknown record {tag:?}", ln + 1)),
        }
    }
    close(&mut current, &mut warnings);
    let unused = used.iter().filter(|u| !**u).count();
    if unused > 0 {
        warnings.push(format!("{unused} unused vertices"));
    }
    let over = edges.values().filter(|&&c| c > 2).count();
    if over > 0 {
        warnings.push(format!("{over} edges shared by more than two faces"));
    }
    warnings
}

/// Load with `tobj` and compare model and face counts with the mesh.
pub fn obj_loads(text: &str, mesh: &SurfaceMesh) -> Result<()> {
    let opts = tobj::LoadOptions { single_index: false, triangulate: false, ignore_points: true, ignore_lines: true };
    let (models, _) = tobj::load_obj_buf(&mut BufReader::new(text.as_bytes()), &opts, |_| Err(tobj::LoadError::OpenFileFailed))
        .map_err(|e| Error::Validation(format!("OBJ loader: {e}")))?;
    if models.len() != mesh.tiles.len() {
        return Err(Error::Validation(format!("{} models for {} tiles", models.len(), mesh.tiles.len())));
    }
    for (m, t) in models.iter().zip(&mesh.tiles) {
        if m.mesh.indices.len() != 3 * t.faces.len() {
            return Err(Error::Validation(format!("model {} has {} indices", m.name, m.mesh.indices.len())));
        }
    }
    Ok(())
}

fn shared_arcs_equal(d: &SurfaceDiagram, m: &SurfaceMesh) -> (usize, usize) {
    let pos = |c: Corner| Corner::ALL.iter().position(|&x| x == c).unwrap();
    let (mut shared, mut equal) = (0, 0);
    for users in d.corner_map().values() {
        for w in users.windows(2) {
            shared += 1;
            let ((i, ci), (j, cj)) = (w[0], w[1]);
            equal += (m.tiles[i].arcs[pos(ci)] == m.tiles[j].arcs[pos(cj)]) as usize;
        }
    }
    (shared, equal)
}

fn mesh_integrity(tol: &Tolerances) -> Vec<CriterionResult> {
    let cases = [
        ("single_rect", fixtures::single_rect()),
        ("sphere_pair", fixtures::sphere_pair()),
        ("chain4", fixtures::chain(4)),
        ("chain3", fixtures::chain(3)),
    ];
    let outcomes: Vec<(String, Result<(f64, usize, usize, Vec<String>)>)> = cases
        .par_iter()
        .map(|(name, d)| {
            let r = (|| {
                let m = surface_mesh(d, 0.25, 24, tol.series_term)?;
                let (shared, equal) = shared_arcs_equal(d, &m);
                let pole = default_pole(d);
                let obj = m.to_obj(&Stereographic::new(pole)?, tol.pole_clearance)?;
                obj_loads(&obj, &m)?;
                Ok((m.max_norm_defect(), shared, equal, obj_warnings(&obj)))
            })();
            (name.to_string(), r)
        })
        .collect();
    let (mut norm, mut shared, mut equal, mut warnings, mut errors) = (0.0f64, 0, 0, BTreeMap::new(), Vec::new());
    for (name, r) in outcomes {
        match r {
            Ok((n, s, e, w)) => {
                norm = norm.max(n);
                shared += s;
                equal += e;
                if !w.is_empty() {
                    warnings.insert(name, w);
                }
            }
            Err(e) => errors.push(format!("{name}: {e}")),
        }
    }
    vec![CriterionResult::new(
        "12",
        "mesh integrity",
        errors.is_empty() && norm <= tol.unit_norm && shared == equal && warnings.is_empty(),
        format!(
            "4 topology fixtures at kappa 0.25, resolution 24: max | |r4| - 1 | = {norm:.1e}; {equal}/{shared} shared corner arcs bit-identical; tobj loads all, validator warnings {warnings:?}; errors {errors:?}"
        ),
    )]
}
