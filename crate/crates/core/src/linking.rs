//! Crossing-based invariants of the planar drawing of a link diagram.
//!
//! The torus is cut along a meridian and a longitude that avoid every
//! vertex; edges become straight segments in the unit square and vertical
//! segments pass over horizontal ones. Horizontal edges run from the
//! negative to the positive vertex, vertical edges from positive to negative.

use rand::Rng;

use crate::error::{Error, Result};
use crate::link::{EdgeKind, LinkDiagram, Orientation, Sign};
use crate::torus::{largest_gap_midpoint, min_cyclic_gap, CircleCoord, Rational, TorusPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cut {
    pub theta: CircleCoord,
    pub phi: CircleCoord,
}

impl Cut {
    pub fn admissible_for(&self, r: &LinkDiagram) -> bool {
        r.vertices().iter().all(|v| v.theta != self.theta && v.phi != self.phi)
    }

    /// Cut through the middle of the largest gaps.
    pub fn default_for(r: &LinkDiagram) -> Cut {
        Cut { theta: largest_gap_midpoint(&r.thetas()), phi: largest_gap_midpoint(&r.phis()) }
    }

    /// A random admissible cut on a fine rational grid.
    pub fn random_for(r: &LinkDiagram, rng: &mut impl Rng) -> Cut {
        loop {
            let den: i128 = 1_000_003;
            let c = Cut {
                theta: CircleCoord::from_ratio(rng.gen_range(0..den), den),
                phi: CircleCoord::from_ratio(rng.gen_range(0..den), den),
            };
            if c.admissible_for(r) {
                return c;
            }
        }
    }
}

/// A drawn edge in unwrapped coordinates `(0,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub kind: EdgeKind,
    /// Unwrapped fixed coordinate (theta for vertical, phi for horizontal).
    pub fixed: Rational,
    /// Unwrapped moving coordinate at the start and end of traversal.
    pub from: Rational,
    pub to: Rational,
    pub group: usize,
    pub start_vertex: usize,
    pub end_vertex: usize,
}

impl Segment {
    fn spans(&self, x: Rational) -> bool {
        let (lo, hi) = if self.from < self.to { (self.from, self.to) } else { (self.to, self.from) };
        lo < x && x < hi
    }

    fn dir(&self) -> i64 {
        if self.to > self.from {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub over: usize,
    pub under: usize,
    pub sign: i64,
}

#[derive(Clone, Debug)]
pub struct PlanarDrawing {
    pub cut: Cut,
    pub segments: Vec<Segment>,
    pub crossings: Vec<Crossing>,
}

impl PlanarDrawing {
    /// `groups[v]` labels vertices for linking-number bookkeeping.
    pub fn new(r: &LinkDiagram, o: &Orientation, groups: &[usize], cut: Cut) -> Result<Self> {
        o.check(r)?;
        if !cut.admissible_for(r) {
            return Err(Error::Validation(format!(
                "cut ({}, {}) meets a vertex line",
                cut.theta, cut.phi
            )));
        }
        let ut = |p: &TorusPoint| cut.theta.forward_to(p.theta);
        let up = |p: &TorusPoint| cut.phi.forward_to(p.phi);
        let mut segments = Vec::with_capacity(r.edges().len());
        for e in r.edges() {
            let (s, t) = match (e.kind, o.signs[e.a]) {
                (EdgeKind::Vertical, Sign::Plus) | (EdgeKind::Horizontal, Sign::Minus) => (e.a, e.b),
                _ => (e.b, e.a),
            };
            let (ps, pt) = (r.vertex(s), r.vertex(t));
            let seg = match e.kind {
                EdgeKind::Vertical => Segment {
                    kind: e.kind,
                    fixed: ut(&ps),
                    from: up(&ps),
                    to: up(&pt),
                    group: groups[s],
                    start_vertex: s,
                    end_vertex: t,
                },
                EdgeKind::Horizontal => Segment {
                    kind: e.kind,
                    fixed: up(&ps),
                    from: ut(&ps),
                    to: ut(&pt),
                    group: groups[s],
                    start_vertex: s,
                    end_vertex: t,
                },
            };
            segments.push(seg);
        }
        let mut crossings = Vec::new();
        for (i, v) in segments.iter().enumerate().filter(|(_, s)| s.kind == EdgeKind::Vertical) {
            for (j, h) in segments.iter().enumerate().filter(|(_, s)| s.kind == EdgeKind::Horizontal) {
                if h.spans(v.fixed) && v.spans(h.fixed) {
                    // over = (0, vy), under = (hx, 0): cross product is -vy*hx
                    crossings.push(Crossing { over: i, under: j, sign: -v.dir() * h.dir() });
                }
            }
        }
        Ok(PlanarDrawing { cut, segments, crossings })
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign).sum()
    }

    /// Half the signed count of crossings between different groups `a` and `b`.
    pub fn linking_between(&self, a: usize, b: usize) -> Result<i64> {
        let s: i64 = self
            .crossings
            .iter()
            .filter(|c| {
                let (g, h) = (self.segments[c.over].group, self.segments[c.under].group);
                (g == a && h == b) || (g == b && h == a)
            })
            .map(|c| c.sign)
            .sum();
        if s % 2 != 0 {
            return Err(Error::Numeric(format!("odd inter-group crossing sum {s}")));
        }
        Ok(s / 2)
    }
}

/// Sum of crossing signs of the drawing with itself.
pub fn writhe(r: &LinkDiagram, o: &Orientation, cut: Cut) -> Result<i64> {
    Ok(PlanarDrawing::new(r, o, &vec![0; r.len()], cut)?.writhe())
}

/// Linking number between two groups of components; `split[k]` is the group
/// (0 or 1) of component `k` in `r.components()` order.
pub fn linking_number(r: &LinkDiagram, o: &Orientation, split: &[bool], cut: Cut) -> Result<i64> {
    let comps = r.components();
    if split.len() != comps.len() || split.iter().all(|&s| s) || split.iter().all(|&s| !s) {
        return Err(Error::Validation("split must be a bipartition of the components".into()));
    }
    let mut groups = vec![0; r.len()];
    for (k, c) in comps.iter().enumerate() {
        for &v in c {
            groups[v] = split[k] as usize;
        }
    }
    PlanarDrawing::new(r, o, &groups, cut)?.linking_between(0, 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// Shift by `(+eps, +eps)`.
    NorthEast,
    /// Shift by `(-eps, +eps)`.
    NorthWest,
}

/// A copy of a diagram moved by a small diagonal shift.
#[derive(Clone, Debug)]
pub struct ShiftedDiagram {
    pub base: LinkDiagram,
    pub direction: ShiftDirection,
    pub epsilon: Rational,
}

impl ShiftedDiagram {
    pub fn new(base: &LinkDiagram, direction: ShiftDirection) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::Validation("cannot shift the empty diagram".into()));
        }
        let gt = min_cyclic_gap(&base.thetas()).expect("nonempty diagram has two meridians");
        let gp = min_cyclic_gap(&base.phis()).expect("nonempty diagram has two longitudes");
        let epsilon = std::cmp::min(gt, gp) / Rational::from_integer(2);
        Ok(ShiftedDiagram { base: base.clone(), direction, epsilon })
    }

    pub fn shifted(&self) -> LinkDiagram {
        let dt = match self.direction {
            ShiftDirection::NorthEast => self.epsilon,
            ShiftDirection::NorthWest => -self.epsilon,
        };
        self.base.translated(dt, self.epsilon)
    }

    /// `lk(base, shifted)` with the orientation carried over.
    pub fn linking(&self, o: &Orientation, cut: Option<Cut>) -> Result<i64> {
        let n = self.base.len();
        let union = self.base.union(&self.shifted())?;
        let mut signs = o.signs.clone();
        signs.extend_from_slice(&o.signs);
        let groups: Vec<usize> = (0..2 * n).map(|i| (i >= n) as usize).collect();
        let cut = cut.unwrap_or_else(|| Cut::default_for(&union));
        PlanarDrawing::new(&union, &Orientation { signs }, &groups, cut)?.linking_between(0, 1)
    }
}

/// `tb+` for a given orientation and optional cut.
pub fn tb_plus_oriented(r: &LinkDiagram, o: &Orientation, cut: Option<Cut>) -> Result<i64> {
    ShiftedDiagram::new(r, ShiftDirection::NorthEast)?.linking(o, cut)
}

/// `tb-` for a given orientation and optional cut.
pub fn tb_minus_oriented(r: &LinkDiagram, o: &Orientation, cut: Option<Cut>) -> Result<i64> {
    Ok(-ShiftedDiagram::new(r, ShiftDirection::NorthWest)?.linking(o, cut)?)
}

/// `tb+` with the canonical orientation. For links with several components
/// the value can depend on the relative orientation of the components.
pub fn tb_plus(r: &LinkDiagram) -> Result<i64> {
    tb_plus_oriented(r, &r.canonical_orientation(), None)
}

pub fn tb_minus(r: &LinkDiagram) -> Result<i64> {
    tb_minus_oriented(r, &r.canonical_orientation(), None)
}

/// Per-component `(tb+, tb-)` in `r.components()` order.
pub fn component_tbs(r: &LinkDiagram) -> Result<Vec<(i64, i64)>> {
    r.components()
        .iter()
        .map(|c| {
            let k = r.sub_diagram(c)?;
            Ok((tb_plus(&k)?, tb_minus(&k)?))
        })
        .collect()
}

/// All values needed by the `tb` report of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TbReport {
    pub vertices: usize,
    pub tb_plus: i64,
    pub tb_minus: i64,
    pub components: Vec<ComponentTb>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ComponentTb {
    pub vertices: usize,
    pub tb_plus: i64,
    pub tb_minus: i64,
}

pub fn tb_report(r: &LinkDiagram) -> Result<TbReport> {
    let comps = r.components();
    let per = component_tbs(r)?;
    Ok(TbReport {
        vertices: r.len(),
        tb_plus: tb_plus(r)?,
        tb_minus: tb_minus(r)?,
        components: comps
            .iter()
            .zip(per)
            .map(|(c, (p, m))| ComponentTb { vertices: c.len(), tb_plus: p, tb_minus: m })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> LinkDiagram {
        LinkDiagram::new(vec![
            TorusPoint::from_ratios((0, 1), (0, 1)),
            TorusPoint::from_ratios((0, 1), (1, 2)),
            TorusPoint::from_ratios((1, 2), (0, 1)),
            TorusPoint::from_ratios((1, 2), (1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn minimal_square_tb() {
        let r = sq();
        assert_eq!(tb_plus(&r).unwrap(), -1);
        assert_eq!(tb_minus(&r).unwrap(), -1);
        let o = r.canonical_orientation();
        assert_eq!(writhe(&r, &o, Cut::default_for(&r)).unwrap(), 0);
    }

    #[test]
    fn empty_diagram_has_no_tb() {
        assert!(tb_plus(&LinkDiagram::empty()).is_err());
        let r = LinkDiagram::empty();
        assert_eq!(writhe(&r, &r.canonical_orientation(), Cut::default_for(&r)).unwrap(), 0);
    }

    #[test]
    fn cut_on_a_vertex_line_is_rejected() {
        let r = sq();
        let cut = Cut { theta: CircleCoord::zero(), phi: CircleCoord::from_ratio(1, 4) };
        assert!(writhe(&r, &r.canonical_orientation(), cut).is_err());
    }

    #[test]
    fn non_bipartition_rejected() {
        let r = sq();
        assert!(linking_number(&r, &r.canonical_orientation(), &[true], Cut::default_for(&r)).is_err());
    }
}
