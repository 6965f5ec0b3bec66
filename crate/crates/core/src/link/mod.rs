//! Rectangular diagrams of links on the torus.
//!
//! A diagram is a finite set of torus points such that every meridian
//! (`theta = const`) and every longitude (`phi = const`) holds zero or two
//! of them. Two points on a common meridian form a vertical edge, two on a
//! common longitude a horizontal edge.

mod staircase;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::{CircleCoord, Rational, TorusPoint};

pub use staircase::{approximate_staircase, Staircase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Vertical,
    Horizontal,
}

/// An edge between vertex indices `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("bad sign {other:?}"))),
        }
    }
}

/// A sign per vertex, alternating along every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub signs: Vec<Sign>,
}

impl Orientation {
    pub fn check(&self, r: &LinkDiagram) -> Result<()> {
        if self.signs.len() != r.len() {
            return Err(Error::Validation(format!(
                "orientation has {} signs for {} vertices",
                self.signs.len(),
                r.len()
            )));
        }
        for e in r.edges() {
            if self.signs[e.a] == self.signs[e.b] {
                return Err(Error::Validation(format!(
                    "edge {:?}-{:?} has equal signs at both ends",
                    r.vertex(e.a),
                    r.vertex(e.b)
                )));
            }
        }
        Ok(())
    }

    pub fn reversed(&self) -> Orientation {
        Orientation { signs: self.signs.iter().map(|s| s.flip()).collect() }
    }
}

/// Edges whose two arcs are both of length exactly 1/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub half_length_edges: Vec<(TorusPoint, TorusPoint)>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    vertices: Vec<TorusPoint>,
    vpartner: Vec<usize>,
    hpartner: Vec<usize>,
    edges: Vec<Edge>,
    vedge: Vec<usize>,
    hedge: Vec<usize>,
}

impl fmt::Debug for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices.iter()).finish()
    }
}

fn pair_up(
    vertices: &[TorusPoint],
    key: impl Fn(&TorusPoint) -> CircleCoord,
    line: &str,
) -> Result<Vec<usize>> {
    let mut groups: BTreeMap<CircleCoord, Vec<usize>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        groups.entry(key(v)).or_default().push(i);
    }
    let mut partner = vec![usize::MAX; vertices.len()];
    for (c, idx) in groups {
        if idx.len() != 2 {
            return Err(Error::Validation(format!("{line} {c} has {} point(s)", idx.len())));
        }
        partner[idx[0]] = idx[1];
        partner[idx[1]] = idx[0];
    }
    Ok(partner)
}

impl LinkDiagram {
    /// Validate a point set; vertex order is preserved.
    pub fn new(vertices: Vec<TorusPoint>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("repeated vertex {:?}", w[0])));
        }
        let vpartner = pair_up(&vertices, |p| p.theta, "meridian theta =")?;
        let hpartner = pair_up(&vertices, |p| p.phi, "longitude phi =")?;
        let n = vertices.len();
        let mut edges = Vec::with_capacity(n);
        let mut vedge = vec![0; n];
        let mut hedge = vec![0; n];
        for i in 0..n {
            if i < vpartner[i] {
                vedge[i] = edges.len();
                vedge[vpartner[i]] = edges.len();
                edges.push(Edge { a: i, b: vpartner[i], kind: EdgeKind::Vertical });
            }
        }
        for i in 0..n {
            if i < hpartner[i] {
                hedge[i] = edges.len();
                hedge[hpartner[i]] = edges.len();
                edges.push(Edge { a: i, b: hpartner[i], kind: EdgeKind::Horizontal });
            }
        }
        Ok(LinkDiagram { vertices, vpartner, hpartner, edges, vedge, hedge })
    }

    pub fn empty() -> Self {
        LinkDiagram::new(Vec::new()).expect("empty diagram is valid")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[TorusPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> TorusPoint {
        self.vertices[i]
    }

    pub fn index_of(&self, p: &TorusPoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn vertical_partner(&self, i: usize) -> usize {
        self.vpartner[i]
    }

    pub fn horizontal_partner(&self, i: usize) -> usize {
        self.hpartner[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertical_edge_of(&self, i: usize) -> usize {
        self.vedge[i]
    }

    pub fn horizontal_edge_of(&self, i: usize) -> usize {
        self.hedge[i]
    }

    pub fn thetas(&self) -> Vec<CircleCoord> {
        let mut v: Vec<_> = self.vertices.iter().map(|p| p.theta).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn phis(&self) -> Vec<CircleCoord> {
        let mut v: Vec<_> = self.vertices.iter().map(|p| p.phi).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Components as vertex cycles: start at the smallest index, leave along
    /// the horizontal edge, then alternate.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut cycle = vec![s];
            seen[s] = true;
            let mut cur = self.hpartner[s];
            let mut vertical_next = true;
            while cur != s {
                cycle.push(cur);
                seen[cur] = true;
                cur = if vertical_next { self.vpartner[cur] } else { self.hpartner[cur] };
                vertical_next = !vertical_next;
            }
            out.push(cycle);
        }
        out
    }

    /// Component index of every vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.len()];
        for (k, c) in self.components().iter().enumerate() {
            for &v in c {
                lab[v] = k;
            }
        }
        lab
    }

    /// The sub-diagram on the given vertices (must be a union of components).
    pub fn sub_diagram(&self, idx: &[usize]) -> Result<LinkDiagram> {
        LinkDiagram::new(idx.iter().map(|&i| self.vertices[i]).collect())
    }

    /// The canonical orientation: the first vertex of every component is positive.
    pub fn canonical_orientation(&self) -> Orientation {
        self.orientation_from_choices(&vec![false; self.components().len()])
    }

    /// Orientation with component `k` reversed iff `flip[k]`.
    pub fn orientation_from_choices(&self, flip: &[bool]) -> Orientation {
        let mut signs = vec![Sign::Plus; self.len()];
        for (k, c) in self.components().iter().enumerate() {
            for (j, &v) in c.iter().enumerate() {
                let s = if j % 2 == 0 { Sign::Plus } else { Sign::Minus };
                signs[v] = if flip[k] { s.flip() } else { s };
            }
        }
        Orientation { signs }
    }

    /// All `2^c` orientations.
    pub fn orientations(&self) -> Vec<Orientation> {
        let c = self.components().len();
        (0u64..(1u64 << c))
            .map(|mask| {
                let flip: Vec<bool> = (0..c).map(|k| mask >> k & 1 == 1).collect();
                self.orientation_from_choices(&flip)
            })
            .collect()
    }

    pub fn genericity(&self) -> GenericityReport {
        let half = Rational::new(1, 2);
        let bad: Vec<_> = self
            .edges
            .iter()
            .filter(|e| {
                let (p, q) = (self.vertices[e.a], self.vertices[e.b]);
                let d = match e.kind {
                    EdgeKind::Vertical => p.phi.forward_to(q.phi),
                    EdgeKind::Horizontal => p.theta.forward_to(q.theta),
                };
                d == half
            })
            .map(|e| (self.vertices[e.a], self.vertices[e.b]))
            .collect();
        GenericityReport { generic: bad.is_empty(), half_length_edges: bad }
    }

    pub fn translated(&self, dt: Rational, dp: Rational) -> LinkDiagram {
        LinkDiagram::new(self.vertices.iter().map(|v| v.translated(dt, dp)).collect())
            .expect("translation preserves validity")
    }

    /// Union with a diagram on disjoint lines.
    pub fn union(&self, other: &LinkDiagram) -> Result<LinkDiagram> {
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices);
        LinkDiagram::new(v)
    }

    /// The same point set, compared without regard to vertex order.
    pub fn same_points(&self, other: &LinkDiagram) -> bool {
        let mut a = self.vertices.clone();
        let mut b = other.vertices.clone();
        a.sort();
        b.sort();
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sq() -> LinkDiagram {
        LinkDiagram::new(vec![
            TorusPoint::from_ratios((0, 1), (0, 1)),
            TorusPoint::from_ratios((0, 1), (1, 2)),
            TorusPoint::from_ratios((1, 2), (0, 1)),
            TorusPoint::from_ratios((1, 2), (1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn minimal_square() {
        let r = sq();
        assert_eq!(r.edges().len(), 4);
        assert_eq!(r.components().len(), 1);
        assert_eq!(r.orientations().len(), 2);
        assert!(!r.genericity().generic);
    }

    #[test]
    fn missing_point_names_the_line() {
        let e = LinkDiagram::new(vec![
            TorusPoint::from_ratios((0, 1), (0, 1)),
            TorusPoint::from_ratios((0, 1), (1, 2)),
            TorusPoint::from_ratios((1, 2), (0, 1)),
        ])
        .unwrap_err();
        assert!(e.to_string().contains("1/2"), "{e}");
    }

    #[test]
    fn empty_has_one_orientation() {
        let r = LinkDiagram::empty();
        assert_eq!(r.orientations().len(), 1);
        assert!(r.components().is_empty());
    }

    #[test]
    fn two_squares_two_components() {
        let a = sq();
        let b = LinkDiagram::new(
            a.vertices().iter().map(|p| p.translated(Rational::new(1, 4), Rational::new(1, 4))).collect(),
        )
        .unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.components().len(), 2);
        assert_eq!(u.orientations().len(), 4);
        for o in u.orientations() {
            o.check(&u).unwrap();
        }
    }
}
