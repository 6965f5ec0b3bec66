//! JSON file formats for diagrams, surfaces, framings and run reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framing::Framing;
use crate::link::{LinkDiagram, Orientation, Sign};
use crate::surface::{Rectangle, SurfaceDiagram};
use crate::tolerances::Tolerances;
use crate::torus::{CircleCoord, TorusPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub vertices: Vec<TorusPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<String>>,
}

impl DiagramFile {
    pub fn from_diagram(r: &LinkDiagram, o: Option<&Orientation>) -> Self {
        DiagramFile {
            vertices: r.vertices().to_vec(),
            signs: o.map(|o| o.signs.iter().map(|s| s.symbol().to_string()).collect()),
        }
    }

    /// Validated diagram and, when signs are present, the checked orientation.
    pub fn into_diagram(self) -> Result<(LinkDiagram, Option<Orientation>)> {
        let r = LinkDiagram::new(self.vertices)?;
        let o = match self.signs {
            None => None,
            Some(s) => {
                let o = Orientation { signs: s.iter().map(|x| Sign::parse(x)).collect::<Result<_>>()? };
                o.check(&r)?;
                Some(o)
            }
        };
        Ok((r, o))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectangleEntry {
    pub theta: [CircleCoord; 2],
    pub phi: [CircleCoord; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub rectangles: Vec<RectangleEntry>,
}

impl SurfaceFile {
    pub fn from_surface(s: &SurfaceDiagram) -> Self {
        SurfaceFile {
            rectangles: s
                .rectangles()
                .iter()
                .map(|r| RectangleEntry { theta: [r.theta.start, r.theta.end], phi: [r.phi.start, r.phi.end] })
                .collect(),
        }
    }

    pub fn into_surface(self) -> Result<SurfaceDiagram> {
        let rects = self
            .rectangles
            .iter()
            .map(|e| Rectangle::new(e.theta[0], e.theta[1], e.phi[0], e.phi[1]))
            .collect::<Result<Vec<_>>>()?;
        SurfaceDiagram::new(rects)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramingEdge {
    pub from: TorusPoint,
    pub to: TorusPoint,
}

/// Each edge listed as smaller -> greater.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramingFile {
    pub edges: Vec<FramingEdge>,
}

impl FramingFile {
    pub fn from_framing(r: &LinkDiagram, f: &Framing) -> Self {
        FramingFile { edges: f.to_pairs(r).into_iter().map(|(from, to)| FramingEdge { from, to }).collect() }
    }

    pub fn into_framing(self, r: &LinkDiagram) -> Result<Framing> {
        let pairs: Vec<_> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        Framing::from_pairs(r, &pairs)
    }
}

/// Record of one command run. Timings are only present when requested,
/// so that reports are otherwise byte-for-byte reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub inputs: serde_json::Value,
    pub outputs: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<(String, f64)>,
    pub tolerances: Tolerances,
}

impl RunReport {
    pub fn new(command: &str, inputs: serde_json::Value, outputs: serde_json::Value, tolerances: &Tolerances) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            outputs,
            timings: Vec::new(),
            tolerances: tolerances.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("plain data serializes")
}

pub fn parse_diagram(text: &str) -> Result<(LinkDiagram, Option<Orientation>)> {
    serde_json::from_str::<DiagramFile>(text)
        .map_err(|e| Error::Parse(format!("diagram file: {e}")))?
        .into_diagram()
}

pub fn print_diagram(r: &LinkDiagram, o: Option<&Orientation>) -> String {
    to_json(&DiagramFile::from_diagram(r, o))
}

pub fn parse_surface(text: &str) -> Result<SurfaceDiagram> {
    serde_json::from_str::<SurfaceFile>(text)
        .map_err(|e| Error::Parse(format!("surface file: {e}")))?
        .into_surface()
}

pub fn print_surface(s: &SurfaceDiagram) -> String {
    to_json(&SurfaceFile::from_surface(s))
}

pub fn parse_framing(r: &LinkDiagram, text: &str) -> Result<Framing> {
    serde_json::from_str::<FramingFile>(text)
        .map_err(|e| Error::Parse(format!("framing file: {e}")))?
        .into_framing(r)
}

pub fn print_framing(r: &LinkDiagram, f: &Framing) -> String {
    to_json(&FramingFile::from_framing(r, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn diagram_file_example() {
        let text = r#"{"vertices":[{"theta":"0","phi":"0"},{"theta":"0","phi":"1/2"},
            {"theta":"1/2","phi":"0"},{"theta":"1/2","phi":"1/2"}],"signs":["+","-","-","+"]}"#;
        let (r, o) = parse_diagram(text).unwrap();
        assert_eq!(r, fixtures::minimal_square());
        assert_eq!(parse_diagram(&print_diagram(&r, o.as_ref())).unwrap(), (r, o));
    }

    #[test]
    fn bad_signs_rejected() {
        let text = r#"{"vertices":[{"theta":"0","phi":"0"},{"theta":"0","phi":"1/2"},
            {"theta":"1/2","phi":"0"},{"theta":"1/2","phi":"1/2"}],"signs":["+","+","-","-"]}"#;
        assert!(parse_diagram(text).is_err());
    }

    #[test]
    fn surface_round_trip() {
        let s = fixtures::chain(4);
        let text = print_surface(&s);
        assert!(text.contains("\"theta\""));
        assert_eq!(parse_surface(&text).unwrap().rectangles(), s.rectangles());
    }

    #[test]
    fn framing_round_trip() {
        let r = fixtures::minimal_square_generic();
        for f in Framing::all(&r) {
            assert_eq!(parse_framing(&r, &print_framing(&r, &f)).unwrap(), f);
        }
    }
}
