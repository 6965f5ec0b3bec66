//! SVG rendering of a surface diagram on the unit square `[0,1)^2`
//! (theta to the right, phi upwards).

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::surface::{Corner, SurfaceDiagram};
use crate::tile::foliation::foliation_streamlines;
use crate::tile::geometry::Tile;

const SIZE: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    Rectangles,
    Vertices,
    Framing,
    Giroux,
    Dividing,
    Foliation,
}

impl Layer {
    pub const ALL: [Layer; 6] = [Layer::Rectangles, Layer::Vertices, Layer::Framing, Layer::Giroux, Layer::Dividing, Layer::Foliation];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Rectangles => "rectangles",
            Layer::Vertices => "vertices",
            Layer::Framing => "framing",
            Layer::Giroux => "giroux",
            Layer::Dividing => "dividing",
            Layer::Foliation => "foliation",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Layer>> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                Layer::ALL
                    .into_iter()
                    .find(|l| l.name() == t.trim())
                    .ok_or_else(|| Error::Parse(format!("unknown layer {t:?}; expected one of rectangles, vertices, framing, giroux, dividing, foliation")))
            })
            .collect()
    }
}

fn px(theta: f64) -> f64 {
    theta * SIZE
}

fn py(phi: f64) -> f64 {
    (1.0 - phi) * SIZE
}

/// Translates of an unwrapped shape whose lower-left lies in `[0,1)^2`.
const SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (-1.0, 0.0), (0.0, -1.0), (-1.0, -1.0)];

fn polyline_path(points: &[(f64, f64)], dx: f64, dy: f64) -> String {
    let mut d = String::new();
    for (k, (t, p)) in points.iter().enumerate() {
        write!(d, "{}{:.3},{:.3}", if k == 0 { "M" } else { " L" }, px(t + dx), py(p + dy)).unwrap();
    }
    d
}

/// SVG 1.1 document with the requested layers; rectangles are always drawn.
pub fn torus_projection_svg(d: &SurfaceDiagram, layers: &[Layer], kappa: f64, term_tol: f64) -> Result<String> {
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<defs><clipPath id="torus"><rect x="0" y="0" width="{SIZE}" height="{SIZE}"/></clipPath></defs>"#).unwrap();
    writeln!(s, r##"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="#888"/>"##).unwrap();
    writeln!(s, r#"<g clip-path="url(#torus)">"#).unwrap();

    // A rectangle passing over another has the shorter theta span, so
    // drawing in order of decreasing theta span puts it on top.
    let rects = d.rectangles();
    let mut order: Vec<usize> = (0..rects.len()).collect();
    order.sort_by(|&i, &j| rects[j].theta.length().cmp(&rects[i].theta.length()).then(i.cmp(&j)));
    writeln!(s, r#"<g class="rectangles">"#).unwrap();
    for i in order {
        let r = rects[i];
        let (t0, p0) = (r.theta.start.to_f64(), r.phi.start.to_f64());
        let (w, h) = (r.theta.length_f64(), r.phi.length_f64());
        writeln!(s, r#"<g class="rectangle" data-index="{i}">"#).unwrap();
        for (dx, dy) in SHIFTS {
            let (x, y) = (px(t0 + dx), py(p0 + h + dy));
            writeln!(
                s,
                r##"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="#9ecae1" fill-opacity="0.8" stroke="white" stroke-width="5"/><rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#08519c" stroke-width="1.5"/>"##,
                w * SIZE,
                h * SIZE,
                w * SIZE,
                h * SIZE
            )
            .unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</g>").unwrap();

    if layers.contains(&Layer::Foliation) {
        writeln!(s, r#"<g class="foliation">"#).unwrap();
        for r in rects {
            let tile = Tile::new(*r, kappa, term_tol);
            let (t0, p0) = (r.theta.start.to_f64(), r.phi.start.to_f64());
            for line in foliation_streamlines(&tile, 5)? {
                let pts: Vec<(f64, f64)> = line.points.iter().map(|&(x, y)| (t0 + x, p0 + y)).collect();
                for (dx, dy) in SHIFTS {
                    writeln!(s, r##"<path d="{}" fill="none" stroke="#636363" stroke-width="0.7"/>"##, polyline_path(&pts, dx, dy)).unwrap();
                }
            }
        }
        writeln!(s, "</g>").unwrap();
    }

    if layers.contains(&Layer::Dividing) {
        writeln!(s, r#"<g class="dividing">"#).unwrap();
        for (n, c) in d.dividing_set().iter().enumerate() {
            // Unwrap the curve by following each rectangle's diagonal.
            let start = c.nodes[0];
            let mut pts = vec![(start.theta.to_f64(), start.phi.to_f64())];
            let mut node = start;
            for &i in &c.rectangles {
                let r = rects[i];
                let (w, h) = (r.theta.length_f64(), r.phi.length_f64());
                let (t, p) = *pts.last().unwrap();
                if r.corner(Corner::BL) == node {
                    pts.push((t + w, p + h));
                    node = r.corner(Corner::TR);
                } else {
                    pts.push((t - w, p - h));
                    node = r.corner(Corner::BL);
                }
            }
            writeln!(s, r#"<g class="dividing-curve" data-curve="{n}" data-closed="{}">"#, c.closed).unwrap();
            for dx in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                for dy in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                    writeln!(s, r##"<path d="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##, polyline_path(&pts, dx, dy)).unwrap();
                }
            }
            writeln!(s, "</g>").unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }

    if layers.contains(&Layer::Framing) {
        writeln!(s, r#"<g class="framing">"#).unwrap();
        for v in d.free_vertices() {
            let (i, c) = d.corner_map()[&v][0];
            let r = rects[i];
            let q = 0.025_f64.min(r.theta.length_f64() / 3.0).min(r.phi.length_f64() / 3.0);
            let sx = if c.at_theta_start() { 1.0 } else { -1.0 };
            let sy = if c.at_phi_start() { 1.0 } else { -1.0 };
            let (t, p) = (v.theta.to_f64(), v.phi.to_f64());
            for (dx, dy) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
                let (x, y) = (px(t + dx), py(p + dy));
                let sweep = if sx * sy > 0.0 { 0 } else { 1 };
                writeln!(
                    s,
                    r##"<path d="M{x:.3},{y:.3} L{:.3},{y:.3} A{r:.3},{r:.3} 0 0 {sweep} {x:.3},{:.3} Z" fill="#fdae6b" stroke="#e6550d"/>"##,
                    x + sx * q * SIZE,
                    y - sy * q * SIZE,
                    r = q * SIZE
                )
                .unwrap();
            }
        }
        writeln!(s, "</g>").unwrap();
    }

    if layers.contains(&Layer::Giroux) {
        writeln!(s, r#"<g class="giroux">"#).unwrap();
        for e in d.giroux_edges() {
            let (t, p) = (e.vertex.theta.to_f64(), e.vertex.phi.to_f64());
            for (dx, dy) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
                let (x, y) = (px(t + dx), py(p + dy));
                writeln!(s, r##"<path d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}" stroke="#31a354" stroke-width="2.5"/>"##, x - 6.0, y - 6.0, x + 6.0, y + 6.0, x - 6.0, y + 6.0, x + 6.0, y - 6.0).unwrap();
            }
        }
        writeln!(s, "</g>").unwrap();
    }

    if layers.contains(&Layer::Vertices) {
        writeln!(s, r#"<g class="vertices">"#).unwrap();
        for v in d.free_vertices() {
            writeln!(s, r#"<circle class="vertex" cx="{:.3}" cy="{:.3}" r="4" fill="black"/>"#, px(v.theta.to_f64()), py(v.phi.to_f64())).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</g>\n</svg>").unwrap();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_rectangle() {
        let s = torus_projection_svg(&fixtures::single_rect(), &Layer::ALL, 0.0, 1e-16).unwrap();
        assert_eq!(s.matches(r#"class="rectangle""#).count(), 1);
        assert_eq!(s.matches(r#"class="vertex""#).count(), 4);
    }

    #[test]
    fn chain_has_one_closed_dividing_curve() {
        let s = torus_projection_svg(&fixtures::chain(4), &[Layer::Dividing], 0.0, 1e-16).unwrap();
        assert_eq!(s.matches(r#"class="dividing-curve""#).count(), 1);
        assert!(s.contains(r#"data-closed="true""#));
    }

    #[test]
    fn over_rectangle_drawn_last() {
        let d = fixtures::crossing_pair();
        let s = torus_projection_svg(&d, &[], 0.0, 1e-16).unwrap();
        let first = s.find(r#"data-index="1""#).unwrap();
        let second = s.find(r#"data-index="0""#).unwrap();
        assert!(first < second, "rectangle 0 passes over rectangle 1");
    }

    #[test]
    fn layer_names() {
        assert_eq!(Layer::parse_list("giroux,dividing").unwrap(), vec![Layer::Giroux, Layer::Dividing]);
        assert!(Layer::parse_list("nope").is_err());
    }
}
