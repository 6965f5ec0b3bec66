use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rectsurf::acceptance;
use rectsurf::fixtures;
use rectsurf::framing::{framing_value_oriented, representability_check};
use rectsurf::io::{
    parse_diagram, parse_framing, parse_surface, print_diagram, print_framing, print_surface, to_json, DiagramFile, FramingFile,
    RunReport,
};
use rectsurf::link::{LinkDiagram, Orientation};
use rectsurf::linking::{tb_minus_oriented, tb_plus_oriented, tb_report};
use rectsurf::moves::{
    apply_exchange_oriented, destabilization_sites, destabilize_oriented, exchange_candidates, explore_exchange_class, stabilization_sites,
    stabilize_oriented, SearchLimits, StabilizationSite, StabilizationType,
};
use rectsurf::random::{random_link_diagram, random_surface_diagram};
use rectsurf::sidecar;
use rectsurf::surface::{Corner, SurfaceDiagram};
use rectsurf::tile::embed::Stereographic;
use rectsurf::tile::mesh::{check_pole, default_pole, pole_at_phi, surface_mesh};
use rectsurf::tile::svg::{torus_projection_svg, Layer};
use rectsurf::tolerances::Tolerances;
use rectsurf::torus::parse_rational;

#[derive(Parser)]
#[command(name = "rectsurf", version, about = "Rectangular diagrams of links and surfaces on the torus")]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timings in the JSON report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StabType {
    I,
    II,
}

#[derive(Clone, Copy, ValueEnum)]
enum CornerArg {
    Bl,
    Br,
    Tl,
    Tr,
}

impl CornerArg {
    fn corner(self) -> Corner {
        match self {
            CornerArg::Bl => Corner::BL,
            CornerArg::Br => Corner::BR,
            CornerArg::Tl => Corner::TL,
            CornerArg::Tr => Corner::TR,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a link or surface diagram file.
    Validate { file: PathBuf },
    /// Boundary link of a surface diagram, with the induced framing.
    Boundary {
        file: PathBuf,
        /// Write the framing file here.
        #[arg(long)]
        framing_out: Option<PathBuf>,
    },
    /// Thurston-Bennequin numbers of a link diagram.
    Tb { file: PathBuf },
    /// Value <f> of a framing, per component and in total.
    FramingValue { link: PathBuf, framing: PathBuf },
    /// Check whether relative tb numbers are non-positive for given linking numbers.
    CheckRepresentable {
        file: PathBuf,
        /// Linking number with the framing surface, one per component.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lk: Vec<i64>,
    },
    /// Topology of the surface, relative tb of its boundary, dividing set.
    Classify { file: PathBuf },
    /// Giroux edges and dividing curves of a surface diagram.
    Giroux { file: PathBuf },
    /// Replace a vertex by three corners of a small square.
    Stabilize {
        file: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long = "type", value_enum, ignore_case = true)]
        kind: Option<StabType>,
        #[arg(long, value_enum, ignore_case = true)]
        corner: Option<CornerArg>,
    },
    /// Inverse of a stabilization; `--vertex` is the far corner of the square.
    Destabilize {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Apply the exchange move with the given index (see `moves --list`).
    Exchange {
        file: PathBuf,
        #[arg(long)]
        index: usize,
    },
    /// List the moves available on a link diagram.
    Moves {
        file: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Breadth-first search of the exchange class.
    Explore {
        file: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 30.0)]
        max_seconds: f64,
    },
    /// Triangulate the surface in S3 and write an OBJ file (stereographic projection).
    Mesh {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        #[arg(long, default_value_t = 32)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
        /// Projection pole on the circle tau = 0, by its phi coordinate in turns.
        #[arg(long)]
        pole: Option<String>,
    },
    /// SVG of the torus projection.
    Plot {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        layers: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
    },
    /// Write the fixture library, or print a seeded random diagram.
    Fixtures {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["random_surface", "out"])]
        random_link: Option<u64>,
        #[arg(long, conflicts_with = "out")]
        random_surface: Option<u64>,
        #[arg(long, default_value_t = 6)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        min_vertices: usize,
        #[arg(long, default_value_t = 20)]
        max_vertices: usize,
    },
    /// Run the acceptance suite, and compare fixture sidecars if a directory is given.
    Selftest {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// Bad arguments detected after parsing, reported like usage errors.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: String) -> anyhow::Error {
    anyhow::Error::new(Usage(msg))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_link(path: &Path) -> Result<(LinkDiagram, Orientation)> {
    let (r, o) = parse_diagram(&read(path)?).with_context(|| path.display().to_string())?;
    let o = o.unwrap_or_else(|| r.canonical_orientation());
    Ok((r, o))
}

fn load_surface(path: &Path) -> Result<SurfaceDiagram> {
    Ok(parse_surface(&read(path)?).with_context(|| path.display().to_string())?)
}

/// What a command produced: text for people and a JSON value for reports.
struct Output {
    text: String,
    value: Value,
    /// Command failed in a way that should exit with status 1.
    failed: bool,
}

impl Output {
    fn ok(text: String, value: Value) -> Self {
        Output { text, value, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let tol = Tolerances::load()?;
    let t0 = Instant::now();
    let (name, inputs) = describe(&cli.command);
    let out = execute(&cli.command, &tol)?;
    if cli.json {
        let mut report = RunReport::new(name, inputs, out.value, &tol);
        if cli.timings {
            report.timings.push(("total".into(), t0.elapsed().as_secs_f64()));
        }
        emit(&to_json(&report));
    } else if !out.text.is_empty() {
        emit(out.text.trim_end());
    }
    Ok(!out.failed)
}

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut lock = std::io::stdout().lock();
    let _ = writeln!(lock, "{text}").and_then(|_| lock.flush());
}

fn path_value(p: &Path) -> Value {
    json!(p.display().to_string())
}

fn describe(c: &Command) -> (&'static str, Value) {
    match c {
        Command::Validate { file } => ("validate", json!({ "file": path_value(file) })),
        Command::Boundary { file, .. } => ("boundary", json!({ "file": path_value(file) })),
        Command::Tb { file } => ("tb", json!({ "file": path_value(file) })),
        Command::FramingValue { link, framing } => {
            ("framing-value", json!({ "link": path_value(link), "framing": path_value(framing) }))
        }
        Command::CheckRepresentable { file, lk } => ("check-representable", json!({ "file": path_value(file), "lk": lk })),
        Command::Classify { file } => ("classify", json!({ "file": path_value(file) })),
        Command::Giroux { file } => ("giroux", json!({ "file": path_value(file) })),
        Command::Stabilize { file, vertex, kind, corner } => (
            "stabilize",
            json!({
                "file": path_value(file),
                "vertex": vertex,
                "type": kind.map(|k| match k { StabType::I => "I", StabType::II => "II" }),
                "corner": corner.map(|c| format!("{:?}", c.corner())),
            }),
        ),
        Command::Destabilize { file, vertex } => ("destabilize", json!({ "file": path_value(file), "vertex": vertex })),
        Command::Exchange { file, index } => ("exchange", json!({ "file": path_value(file), "index": index })),
        Command::Moves { file, .. } => ("moves", json!({ "file": path_value(file) })),
        Command::Explore { file, target, max_nodes, max_seconds } => (
            "explore",
            json!({ "file": path_value(file), "target": target.as_deref().map(path_value), "max_nodes": max_nodes, "max_seconds": max_seconds }),
        ),
        Command::Mesh { file, kappa, res, out, pole } => (
            "mesh",
            json!({ "file": path_value(file), "kappa": kappa, "res": res, "out": path_value(out), "pole": pole }),
        ),
        Command::Plot { file, layers, out, kappa } => {
            ("plot", json!({ "file": path_value(file), "layers": layers, "out": path_value(out), "kappa": kappa }))
        }
        Command::Fixtures { out, random_link, random_surface, budget, min_vertices, max_vertices } => (
            "fixtures",
            json!({
                "out": out.as_deref().map(path_value),
                "random_link": random_link,
                "random_surface": random_surface,
                "budget": budget,
                "min_vertices": min_vertices,
                "max_vertices": max_vertices,
            }),
        ),
        Command::Selftest { fixtures } => ("selftest", json!({ "fixtures": fixtures.as_deref().map(path_value) })),
    }
}

fn diagram_output(r: &LinkDiagram, o: &Orientation, note: String) -> Result<Output> {
    let tb = (tb_plus_oriented(r, o, None)?, tb_minus_oriented(r, o, None)?);
    Ok(Output {
        text: print_diagram(r, Some(o)),
        value: json!({ "note": note, "diagram": DiagramFile::from_diagram(r, Some(o)), "tb_plus": tb.0, "tb_minus": tb.1 }),
        failed: false,
    })
}

fn execute(c: &Command, tol: &Tolerances) -> Result<Output> {
    match c {
        Command::Validate { file } => {
            let text = read(file)?;
            let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", file.display()))?;
            if v.get("rectangles").is_some() {
                let d = parse_surface(&text)?;
                Ok(Output::ok(
                    format!("valid surface diagram: {} rectangles, {} free vertices", d.len(), d.free_vertices().len()),
                    json!({ "kind": "surface", "rectangles": d.len(), "free_vertices": d.free_vertices().len() }),
                ))
            } else {
                let (r, _) = parse_diagram(&text)?;
                let g = r.genericity();
                Ok(Output::ok(
                    format!(
                        "valid link diagram: {} vertices, {} components{}",
                        r.len(),
                        r.components().len(),
                        if g.generic { "" } else { ", not generic (an edge has length 1/2)" }
                    ),
                    json!({ "kind": "link", "vertices": r.len(), "components": r.components().len(), "generic": g.generic }),
                ))
            }
        }
        Command::Boundary { file, framing_out } => {
            let d = load_surface(file)?;
            let r = d.boundary()?;
            let framing = if r.is_empty() { None } else { Some(d.boundary_framing()?.1) };
            if let (Some(path), Some(f)) = (framing_out, &framing) {
                std::fs::write(path, print_framing(&r, f) + "\n")?;
            }
            Ok(Output::ok(
                print_diagram(&r, None),
                json!({
                    "diagram": DiagramFile::from_diagram(&r, None),
                    "framing": framing.as_ref().map(|f| FramingFile::from_framing(&r, f)),
                }),
            ))
        }
        Command::Tb { file } => {
            let (r, o) = load_link(file)?;
            let (p, m) = (tb_plus_oriented(&r, &o, None)?, tb_minus_oriented(&r, &o, None)?);
            let rep = tb_report(&r)?;
            let mut text = format!("tb+={p} tb-={m}\n");
            if rep.components.len() > 1 {
                for (k, c) in rep.components.iter().enumerate() {
                    text += &format!("component {k}: tb+={} tb-={}\n", c.tb_plus, c.tb_minus);
                }
            }
            Ok(Output::ok(text, json!({ "tb_plus": p, "tb_minus": m, "vertices": r.len(), "report": rep })))
        }
        Command::FramingValue { link, framing } => {
            let (r, o) = load_link(link)?;
            let f = parse_framing(&r, &read(framing)?)?;
            let v = framing_value_oriented(&r, &o, &f)?;
            Ok(Output::ok(format!("<f>={} per component {:?}", v.total, v.per_component), json!(v)))
        }
        Command::CheckRepresentable { file, lk } => {
            let (r, o) = load_link(file)?;
            let v = representability_check(&r, &o, lk)?;
            let mut text = String::new();
            for (k, c) in v.components.iter().enumerate() {
                text += &format!("component {k}: lk={} rel tb {}/{} {}\n", c.lk, c.tb_plus_rel, c.tb_minus_rel, if c.pass { "ok" } else { "positive" });
            }
            text += if v.pass { "representable" } else { "not representable" };
            Ok(Output::ok(text, json!(v)))
        }
        Command::Classify { file } => {
            let d = load_surface(file)?;
            let rep = d.classify()?;
            let mut text = format!(
                "{} rectangles, chi={}, {}, {} boundary components\n",
                rep.rectangles,
                rep.euler_characteristic,
                if rep.orientable { "orientable" } else { "non-orientable" },
                rep.boundary.len()
            );
            for c in &rep.components {
                text += &format!("component {:?}: {} chi={} boundary={}\n", c.rectangles, c.name, c.euler_characteristic, c.boundary_components);
            }
            for (k, b) in rep.boundary.iter().enumerate() {
                text += &format!("boundary {k}: {} vertices, rel tb {}/{}\n", b.length, b.tb_plus_rel, b.tb_minus_rel);
            }
            text += &format!(
                "dividing curves: {} ({} closed)",
                rep.dividing_set.len(),
                rep.dividing_set.iter().filter(|c| c.closed).count()
            );
            Ok(Output::ok(text, json!(rep)))
        }
        Command::Giroux { file } => {
            let d = load_surface(file)?;
            let (g, dv) = (d.giroux_edges(), d.dividing_set());
            let mut text = String::new();
            for e in &g {
                text += &format!("giroux edge over {:?}: rectangles {:?}{}\n", e.vertex, e.rectangles, if e.free { " (free)" } else { "" });
            }
            for (k, c) in dv.iter().enumerate() {
                text += &format!("dividing curve {k}: rectangles {:?}, {}\n", c.rectangles, if c.closed { "closed" } else { "arc" });
            }
            Ok(Output::ok(text, json!({ "giroux_edges": g, "dividing_set": dv })))
        }
        Command::Stabilize { file, vertex, kind, corner } => {
            let (r, o) = load_link(file)?;
            if *vertex >= r.len() {
                return Err(usage(format!("vertex {vertex} out of range (diagram has {} vertices)", r.len())));
            }
            let corners: Vec<Corner> = match (kind, corner) {
                (_, Some(c)) => vec![c.corner()],
                (Some(StabType::I), None) => StabilizationType::I.corners().to_vec(),
                (Some(StabType::II), None) => StabilizationType::II.corners().to_vec(),
                (None, None) => return Err(usage("give --type or --corner".into())),
            };
            if let (Some(k), Some(c)) = (kind, corner) {
                let want = match k {
                    StabType::I => StabilizationType::I,
                    StabType::II => StabilizationType::II,
                };
                if StabilizationType::of_corner(c.corner()) != want {
                    return Err(usage(format!("corner {:?} gives the other stabilization type", c.corner())));
                }
            }
            let mut last_err = None;
            for c in corners {
                let site = StabilizationSite::at(&r, *vertex, c);
                match stabilize_oriented(&r, &o, &site) {
                    Ok((d, od)) => {
                        return diagram_output(&d, &od, format!("type {:?} stabilization at {:?}, corner {c:?}", site.kind().unwrap(), site.vertex));
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            Err(last_err.unwrap().into())
        }
        Command::Destabilize { file, vertex } => {
            let (r, o) = load_link(file)?;
            let sites = destabilization_sites(&r);
            let site = match vertex {
                Some(v) => {
                    if *v >= r.len() {
                        return Err(usage(format!("vertex {v} out of range (diagram has {} vertices)", r.len())));
                    }
                    let p = r.vertex(*v);
                    sites.into_iter().find(|s| s.far_corner == p).ok_or_else(|| anyhow!("no destabilization with far corner {p:?}"))?
                }
                None => sites.into_iter().next().ok_or_else(|| anyhow!("the diagram has no destabilization"))?,
            };
            let (d, od) = destabilize_oriented(&r, &o, &site)?;
            diagram_output(&d, &od, format!("type {:?} destabilization restoring {:?}", site.kind(), site.restored))
        }
        Command::Exchange { file, index } => {
            let (r, o) = load_link(file)?;
            let cands = exchange_candidates(&r);
            let site = cands
                .get(*index)
                .ok_or_else(|| usage(format!("exchange index {index} out of range ({} available)", cands.len())))?;
            let (d, od) = apply_exchange_oriented(&r, &o, site)?;
            diagram_output(&d, &od, format!("exchange {:?} {} <-> {}", site.kind, site.first, site.second))
        }
        Command::Moves { file, list: _ } => {
            let (r, o) = load_link(file)?;
            let stab: Vec<Value> = stabilization_sites(&r)
                .into_iter()
                .filter(|s| stabilize_oriented(&r, &o, s).is_ok())
                .map(|s| json!({ "vertex": r.index_of(&s.vertex), "corner": s.corner(), "type": s.kind() }))
                .collect();
            let destab: Vec<Value> = destabilization_sites(&r)
                .into_iter()
                .map(|s| json!({ "vertex": r.index_of(&s.far_corner), "restored": s.restored, "type": s.kind() }))
                .collect();
            let exch = exchange_candidates(&r);
            let mut text = format!("{} stabilization sites\n", stab.len());
            text += &format!("{} destabilizations:\n", destab.len());
            for d in &destab {
                text += &format!("  --vertex {} (type {})\n", d["vertex"], d["type"].as_str().unwrap_or("?"));
            }
            text += &format!("{} exchanges:\n", exch.len());
            for (k, e) in exch.iter().enumerate() {
                text += &format!("  --index {k}: {:?} {} <-> {}\n", e.kind, e.first, e.second);
            }
            Ok(Output::ok(text, json!({ "stabilizations": stab, "destabilizations": destab, "exchanges": exch })))
        }
        Command::Explore { file, target, max_nodes, max_seconds } => {
            let (r, _) = load_link(file)?;
            let t = match target {
                Some(p) => Some(load_link(p)?.0),
                None => None,
            };
            if !(*max_seconds >= 0.0) {
                return Err(usage("--max-seconds must be non-negative".into()));
            }
            let limits = SearchLimits { max_nodes: *max_nodes, max_time: Duration::from_secs_f64(*max_seconds) };
            let rep = explore_exchange_class(&r, t.as_ref(), limits);
            let mut text = format!("visited {} diagrams, depth {}, {:?}, rigid: {}", rep.visited, rep.depth, rep.status, rep.is_rigid);
            if t.is_some() {
                text += &match rep.target_depth {
                    Some(d) => format!("\ntarget reached at depth {d}"),
                    None => "\ntarget not reached".to_string(),
                };
            }
            Ok(Output::ok(text, json!(rep)))
        }
        Command::Mesh { file, kappa, res, out, pole } => {
            let d = load_surface(file)?;
            if *res < 8 {
                return Err(usage(format!("--res must be at least 8, got {res}")));
            }
            if !(*kappa >= 0.0) {
                return Err(usage(format!("--kappa must be non-negative, got {kappa}")));
            }
            let m = surface_mesh(&d, *kappa, *res, tol.series_term)?;
            let p = match pole {
                Some(s) => {
                    let q = parse_rational(s).map_err(|e| usage(e.to_string()))?;
                    pole_at_phi(*q.numer() as f64 / *q.denom() as f64)
                }
                None => default_pole(&d),
            };
            check_pole(&m, &p, tol.pole_clearance)?;
            let obj = m.to_obj(&Stereographic::new(p)?, tol.pole_clearance)?;
            std::fs::write(out, &obj).with_context(|| format!("cannot write {}", out.display()))?;
            let info = json!({
                "vertices": m.vertex_count(),
                "faces": m.face_count(),
                "euler_characteristic": m.euler_characteristic(),
                "max_norm_defect": m.max_norm_defect(),
                "tiles": m.tiles.len(),
            });
            Ok(Output::ok(
                format!(
                    "wrote {}: {} vertices, {} faces, {} tiles, chi={}",
                    out.display(),
                    m.vertex_count(),
                    m.face_count(),
                    m.tiles.len(),
                    m.euler_characteristic()
                ),
                info,
            ))
        }
        Command::Plot { file, layers, out, kappa } => {
            let d = load_surface(file)?;
            let layers = Layer::parse_list(layers).map_err(|e| usage(e.to_string()))?;
            let svg = torus_projection_svg(&d, &layers, *kappa, tol.series_term)?;
            std::fs::write(out, &svg).with_context(|| format!("cannot write {}", out.display()))?;
            Ok(Output::ok(
                format!("wrote {} ({} layers)", out.display(), layers.len()),
                json!({ "layers": layers.iter().map(|l| l.name()).collect::<Vec<_>>(), "bytes": svg.len() }),
            ))
        }
        Command::Fixtures { out, random_link, random_surface, budget, min_vertices, max_vertices } => {
            if let Some(seed) = random_link {
                if *min_vertices < 4 || max_vertices < min_vertices {
                    return Err(usage("need 4 <= --min-vertices <= --max-vertices".into()));
                }
                let r = random_link_diagram(*seed, *min_vertices, *max_vertices);
                return Ok(Output::ok(print_diagram(&r, None), json!({ "diagram": DiagramFile::from_diagram(&r, None) })));
            }
            if let Some(seed) = random_surface {
                if *budget == 0 {
                    return Err(usage("--budget must be at least 1".into()));
                }
                let g = random_surface_diagram(*seed, *budget);
                if let Some(n) = &g.notice {
                    eprintln!("note: {n}");
                }
                return Ok(Output::ok(
                    print_surface(&g.diagram),
                    json!({ "surface": rectsurf::io::SurfaceFile::from_surface(&g.diagram), "notice": g.notice }),
                ));
            }
            match out {
                Some(dir) => {
                    let names = sidecar::write_fixture_dir(dir, tol.series_term)?;
                    Ok(Output::ok(format!("wrote {} fixtures to {}", names.len(), dir.display()), json!({ "fixtures": names })))
                }
                None => {
                    let links: Vec<&str> = fixtures::link_fixtures().into_iter().map(|(n, _)| n).collect();
                    let surfaces: Vec<&str> = fixtures::surface_fixtures().into_iter().map(|(n, _)| n).collect();
                    Ok(Output::ok(
                        format!("links: {}\nsurfaces: {}", links.join(", "), surfaces.join(", ")),
                        json!({ "links": links, "surfaces": surfaces }),
                    ))
                }
            }
        }
        Command::Selftest { fixtures } => {
            let results = acceptance::run(tol);
            let mut text: Vec<String> = results.iter().map(|r| r.line()).collect();
            let mut failed = results.iter().any(|r| !r.ok());
            let mut sidecars = Value::Null;
            if let Some(dir) = fixtures {
                let (n, problems) = sidecar::check_fixture_dir(dir, tol.center_value, tol.series_term)?;
                failed |= !problems.is_empty();
                text.push(format!(
                    "[fixtures] {} {n} sidecars in {}: {problems:?}",
                    if problems.is_empty() { "PASS" } else { "FAIL" },
                    dir.display()
                ));
                sidecars = json!({ "checked": n, "mismatches": problems });
            }
            let known = results.iter().filter(|r| r.known_failure && !r.pass).count();
            text.push(format!(
                "{} criteria lines, {} unexpected failures, {known} known failures",
                results.len(),
                results.iter().filter(|r| !r.ok()).count()
            ));
            Ok(Output { text: text.join("\n"), value: json!({ "criteria": results, "fixtures": sidecars }), failed })
        }
    }
}
