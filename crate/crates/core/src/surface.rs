//! Rectangular diagrams of surfaces.
//!
//! A surface diagram is a collection of pairwise compatible rectangles with
//! at most two free vertices (corners of exactly one rectangle) on every
//! meridian and longitude. The free vertices form the boundary link diagram.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framing::{framing_value, relative_tb, Framing};
use crate::link::{EdgeKind, LinkDiagram, Sign};
use crate::torus::{Arc, ArcPiece, CircleCoord, Rational, TorusPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    BL,
    BR,
    TL,
    TR,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::BL, Corner::BR, Corner::TL, Corner::TR];

    /// Bottom-left and top-right corners: extremal in the boundary framing.
    pub fn is_diagonal(self) -> bool {
        matches!(self, Corner::BL | Corner::TR)
    }

    /// The corner at the start of the theta span.
    pub fn at_theta_start(self) -> bool {
        matches!(self, Corner::BL | Corner::TL)
    }

    pub fn at_phi_start(self) -> bool {
        matches!(self, Corner::BL | Corner::BR)
    }

    pub fn opposite(self) -> Corner {
        match self {
            Corner::BL => Corner::TR,
            Corner::TR => Corner::BL,
            Corner::BR => Corner::TL,
            Corner::TL => Corner::BR,
        }
    }
}

/// `[theta.start, theta.end] x [phi.start, phi.end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rectangle {
    pub theta: Arc,
    pub phi: Arc,
}

impl Rectangle {
    pub fn new(t1: CircleCoord, t2: CircleCoord, p1: CircleCoord, p2: CircleCoord) -> Result<Self> {
        Ok(Rectangle { theta: Arc::new(t1, t2)?, phi: Arc::new(p1, p2)? })
    }

    pub fn from_ratios(t: [(i128, i128); 2], p: [(i128, i128); 2]) -> Result<Self> {
        let c = |x: (i128, i128)| CircleCoord::from_ratio(x.0, x.1);
        Rectangle::new(c(t[0]), c(t[1]), c(p[0]), c(p[1]))
    }

    pub fn corner(&self, c: Corner) -> TorusPoint {
        let t = if c.at_theta_start() { self.theta.start } else { self.theta.end };
        let p = if c.at_phi_start() { self.phi.start } else { self.phi.end };
        TorusPoint::new(t, p)
    }

    pub fn corners(&self) -> [(Corner, TorusPoint); 4] {
        Corner::ALL.map(|c| (c, self.corner(c)))
    }

    pub fn corner_at(&self, p: &TorusPoint) -> Option<Corner> {
        Corner::ALL.into_iter().find(|&c| self.corner(c) == *p)
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        self.theta.contains(p.theta) && self.phi.contains(p.phi)
    }

    pub fn translated(&self, dt: Rational, dp: Rational) -> Rectangle {
        Rectangle {
            theta: Arc { start: self.theta.start.shifted(dt), end: self.theta.end.shifted(dt) },
            phi: Arc { start: self.phi.start.shifted(dp), end: self.phi.end.shifted(dp) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    Disjoint,
    SharedVertices(Vec<TorusPoint>),
    /// Nested spans; `over` is 0 or 1, the rectangle whose theta span lies
    /// inside the other's.
    Crossing { over: usize },
    Incompatible(String),
}

/// Exact intersection of the two closed rectangles, then clause matching.
pub fn classify_pair(r1: &Rectangle, r2: &Rectangle) -> PairClass {
    let tp = r1.theta.intersect(&r2.theta);
    let pp = r1.phi.intersect(&r2.phi);
    if tp.is_empty() || pp.is_empty() {
        return PairClass::Disjoint;
    }
    let all_points = tp.iter().chain(&pp).all(|p| matches!(p, ArcPiece::Point(_)));
    if all_points {
        let mut pts = Vec::new();
        for t in &tp {
            for p in &pp {
                if let (ArcPiece::Point(t), ArcPiece::Point(p)) = (t, p) {
                    pts.push(TorusPoint::new(*t, *p));
                }
            }
        }
        pts.sort();
        if let Some(p) = pts.iter().find(|p| r1.corner_at(p).is_none() || r2.corner_at(p).is_none()) {
            return PairClass::Incompatible(format!("intersection point {p:?} is not a common vertex"));
        }
        return PairClass::SharedVertices(pts);
    }
    if tp.len() == 1 && pp.len() == 1 {
        if let (ArcPiece::Arc(ta), ArcPiece::Arc(pa)) = (tp[0], pp[0]) {
            let piece = Rectangle { theta: ta, phi: pa };
            let hit = r1.corners().iter().chain(r2.corners().iter()).find(|(_, v)| piece.contains(v)).map(|x| x.1);
            return match hit {
                Some(v) => PairClass::Incompatible(format!("overlap contains the vertex {v:?}")),
                None if r1.theta.inside_open(&r2.theta) => PairClass::Crossing { over: 0 },
                None => PairClass::Crossing { over: 1 },
            };
        }
    }
    PairClass::Incompatible(format!(
        "intersection of {:?}x{:?} and {:?}x{:?} is neither vertices nor a clean overlap",
        r1.theta, r1.phi, r2.theta, r2.phi
    ))
}

/// Where a corner point of the diagram sits: `(rectangle, corner)` pairs.
type CornerMap = BTreeMap<TorusPoint, Vec<(usize, Corner)>>;

#[derive(Clone, Debug)]
pub struct SurfaceDiagram {
    rects: Vec<Rectangle>,
    corners: CornerMap,
}

impl SurfaceDiagram {
    pub fn new(rects: Vec<Rectangle>) -> Result<Self> {
        for i in 0..rects.len() {
            for j in i + 1..rects.len() {
                if let PairClass::Incompatible(why) = classify_pair(&rects[i], &rects[j]) {
                    return Err(Error::Validation(format!("rectangles {i} and {j} are incompatible: {why}")));
                }
            }
        }
        let mut corners: CornerMap = BTreeMap::new();
        for (i, r) in rects.iter().enumerate() {
            for (c, p) in r.corners() {
                corners.entry(p).or_default().push((i, c));
            }
        }
        let d = SurfaceDiagram { rects, corners };
        let free = d.free_vertices();
        for (what, key) in [
            ("meridian theta =", Box::new(|p: &TorusPoint| p.theta) as Box<dyn Fn(&TorusPoint) -> CircleCoord>),
            ("longitude phi =", Box::new(|p: &TorusPoint| p.phi)),
        ] {
            let mut count: BTreeMap<CircleCoord, usize> = BTreeMap::new();
            for p in &free {
                *count.entry(key(p)).or_default() += 1;
            }
            if let Some((c, n)) = count.iter().find(|(_, &n)| n > 2) {
                return Err(Error::Validation(format!("{what} {c} carries {n} free vertices")));
            }
        }
        Ok(d)
    }

    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Every corner point with the rectangles it belongs to.
    pub fn corner_map(&self) -> &BTreeMap<TorusPoint, Vec<(usize, Corner)>> {
        &self.corners
    }

    pub fn free_vertices(&self) -> Vec<TorusPoint> {
        self.corners.iter().filter(|(_, v)| v.len() == 1).map(|(p, _)| *p).collect()
    }

    /// Corner role of a free vertex.
    pub fn free_role(&self, p: &TorusPoint) -> Option<Corner> {
        match self.corners.get(p).map(|v| v.as_slice()) {
            Some([(_, c)]) => Some(*c),
            _ => None,
        }
    }

    pub fn boundary(&self) -> Result<LinkDiagram> {
        LinkDiagram::new(self.free_vertices())
            .map_err(|e| Error::Validation(format!("boundary is not a link diagram (internal): {e}")))
    }

    /// The boundary together with the framing induced by the surface.
    pub fn boundary_framing(&self) -> Result<(LinkDiagram, Framing)> {
        let r = self.boundary()?;
        if r.is_empty() {
            return Err(Error::Unsupported("surface has no boundary".into()));
        }
        let mut greater = Vec::with_capacity(r.edges().len());
        for e in r.edges() {
            let (ca, cb) = (self.free_role(&r.vertex(e.a)).unwrap(), self.free_role(&r.vertex(e.b)).unwrap());
            let start = |c: Corner| match e.kind {
                EdgeKind::Horizontal => c.at_theta_start(),
                EdgeKind::Vertical => c.at_phi_start(),
            };
            if start(ca) == start(cb) {
                return Err(Error::Validation(format!(
                    "boundary edge {:?}-{:?} has inconsistent corner roles {ca:?}/{cb:?}",
                    r.vertex(e.a),
                    r.vertex(e.b)
                )));
            }
            greater.push(if start(ca) { e.b } else { e.a });
        }
        let f = Framing::new(&r, greater)?;
        Ok((r, f))
    }

    /// Rectangle pairs sharing at least one corner.
    pub fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.rects.len()];
        for owners in self.corners.values() {
            if let [(a, _), (b, _)] = owners.as_slice() {
                adj[*a].insert(*b);
                adj[*b].insert(*a);
            }
        }
        adj
    }

    /// Connected components of the 2-complex: rectangles sharing a corner
    /// or a binding point.
    pub fn surface_components(&self) -> Vec<Vec<usize>> {
        let n = self.rects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        for (i, nb) in self.adjacency().iter().enumerate() {
            for &j in nb {
                union(&mut parent, i, j);
            }
        }
        let mut by_theta: BTreeMap<CircleCoord, usize> = BTreeMap::new();
        let mut by_phi: BTreeMap<CircleCoord, usize> = BTreeMap::new();
        for (i, r) in self.rects.iter().enumerate() {
            for t in [r.theta.start, r.theta.end] {
                let first = *by_theta.entry(t).or_insert(i);
                union(&mut parent, first, i);
            }
            for p in [r.phi.start, r.phi.end] {
                let first = *by_phi.entry(p).or_insert(i);
                union(&mut parent, first, i);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// A 2-colouring of the adjacency graph, or `None` if it has an odd cycle.
    pub fn orientation(&self) -> Option<Vec<Sign>> {
        let adj = self.adjacency();
        let mut col: Vec<Option<Sign>> = vec![None; self.rects.len()];
        for s in 0..self.rects.len() {
            if col[s].is_some() {
                continue;
            }
            col[s] = Some(Sign::Plus);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = col[u].unwrap();
                for &w in &adj[u] {
                    match col[w] {
                        None => {
                            col[w] = Some(cu.flip());
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(col.into_iter().map(|c| c.unwrap()).collect())
    }

    /// All orientations (one sign flip per adjacency component), or empty
    /// if the surface is not orientable.
    pub fn orientations(&self) -> Vec<Vec<Sign>> {
        let Some(base) = self.orientation() else { return vec![] };
        let comps = adjacency_components(&self.adjacency());
        assert!(comps.len() < 24, "too many components to list orientations");
        (0u32..(1u32 << comps.len()))
            .map(|mask| {
                let mut s = base.clone();
                for (k, c) in comps.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        for &i in c {
                            s[i] = s[i].flip();
                        }
                    }
                }
                s
            })
            .collect()
    }

    pub fn cell_complex(&self) -> CellComplex {
        CellComplex::new(self)
    }

    /// Closed-form relative tb per boundary component, in `boundary().components()` order.
    pub fn relative_tb_closed_form(&self) -> Result<Vec<(i64, i64)>> {
        let r = self.boundary()?;
        r.components()
            .iter()
            .map(|c| {
                let diag = c.iter().filter(|&&v| self.free_role(&r.vertex(v)).unwrap().is_diagonal()).count();
                let anti = c.len() - diag;
                if diag % 2 != 0 || anti % 2 != 0 {
                    return Err(Error::Numeric(format!("odd corner count on a boundary component: {diag}/{anti}")));
                }
                Ok((-(diag as i64) / 2, -(anti as i64) / 2))
            })
            .collect()
    }

    /// Relative tb from the definition: crossing-count tb and the boundary framing value.
    pub fn relative_tb_from_framing(&self) -> Result<Vec<(i64, i64)>> {
        let (r, f) = self.boundary_framing()?;
        let lk = framing_value(&r, &f)?.per_component;
        relative_tb(&r, &r.canonical_orientation(), &lk)
    }

    /// Dividing curves: nodes are BL/TR corner points, each rectangle joins its BL to its TR.
    pub fn dividing_set(&self) -> Vec<DividingCurve> {
        let mut inc: BTreeMap<TorusPoint, Vec<usize>> = BTreeMap::new();
        for (i, r) in self.rects.iter().enumerate() {
            inc.entry(r.corner(Corner::BL)).or_default().push(i);
            inc.entry(r.corner(Corner::TR)).or_default().push(i);
        }
        let mut used = vec![false; self.rects.len()];
        let mut out = Vec::new();
        // Start paths at degree-one nodes first so that open curves are traced end to end.
        let starts: Vec<TorusPoint> = inc
            .iter()
            .filter(|(_, v)| v.len() == 1)
            .map(|(p, _)| *p)
            .chain(inc.iter().filter(|(_, v)| v.len() != 1).map(|(p, _)| *p))
            .collect();
        for s in starts {
            let mut node = s;
            let mut nodes = vec![s];
            let mut rects = Vec::new();
            while let Some(&i) = inc[&node].iter().find(|&&i| !used[i]) {
                used[i] = true;
                rects.push(i);
                let r = &self.rects[i];
                node = if r.corner(Corner::BL) == node { r.corner(Corner::TR) } else { r.corner(Corner::BL) };
                nodes.push(node);
            }
            if rects.is_empty() {
                continue;
            }
            let closed = node == s && inc[&s].len() == 2;
            if closed {
                nodes.pop();
            }
            out.push(DividingCurve { rectangles: rects, nodes, closed });
        }
        out
    }

    pub fn dividing_degrees(&self) -> BTreeMap<TorusPoint, usize> {
        let mut deg = BTreeMap::new();
        for r in &self.rects {
            *deg.entry(r.corner(Corner::BL)).or_insert(0) += 1;
            *deg.entry(r.corner(Corner::TR)).or_insert(0) += 1;
        }
        deg
    }

    /// Corner arcs over TL/BR corners.
    pub fn giroux_edges(&self) -> Vec<GirouxEdge> {
        self.corners
            .iter()
            .filter(|(_, owners)| !owners[0].1.is_diagonal())
            .map(|(p, owners)| GirouxEdge {
                vertex: *p,
                rectangles: owners.iter().map(|x| x.0).collect(),
                free: owners.len() == 1,
            })
            .collect()
    }

    /// `|S| >= -2 tb+(S; surface)` with its slack, per boundary component.
    pub fn lengthbound_check(&self) -> Result<Vec<LengthBound>> {
        let r = self.boundary()?;
        let rel = self.relative_tb_closed_form()?;
        Ok(r.components()
            .iter()
            .zip(rel)
            .map(|(c, (tp, _))| {
                let slack = c.len() as i64 + 2 * tp;
                LengthBound { length: c.len(), tb_plus_rel: tp, slack, pass: slack >= 0 }
            })
            .collect())
    }

    pub fn classify(&self) -> Result<SurfaceReport> {
        SurfaceReport::new(self)
    }
}

fn adjacency_components(adj: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            for &w in &adj[comp[k]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        comp.sort();
        out.push(comp);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividingCurve {
    pub rectangles: Vec<usize>,
    pub nodes: Vec<TorusPoint>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirouxEdge {
    pub vertex: TorusPoint,
    pub rectangles: Vec<usize>,
    pub free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBound {
    pub length: usize,
    pub tb_plus_rel: i64,
    pub slack: i64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BindingPoint {
    /// Point `theta` of the circle `tau = 1`.
    Theta(CircleCoord),
    /// Point `phi` of the circle `tau = 0`.
    Phi(CircleCoord),
}

/// Corner arc from its `tau = 1` end to its `tau = 0` end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneCell {
    pub vertex: TorusPoint,
    pub theta_end: usize,
    pub phi_end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplex {
    pub zero_cells: Vec<BindingPoint>,
    pub one_cells: Vec<OneCell>,
    /// Per rectangle, its four corner arcs in BL, BR, TL, TR order.
    pub two_cells: Vec<[usize; 4]>,
}

impl CellComplex {
    fn new(d: &SurfaceDiagram) -> Self {
        let mut zero: BTreeSet<BindingPoint> = BTreeSet::new();
        for p in d.corners.keys() {
            zero.insert(BindingPoint::Theta(p.theta));
            zero.insert(BindingPoint::Phi(p.phi));
        }
        let zero_cells: Vec<_> = zero.into_iter().collect();
        let zidx = |b: BindingPoint| zero_cells.binary_search(&b).unwrap();
        let one_cells: Vec<OneCell> = d
            .corners
            .keys()
            .map(|p| OneCell {
                vertex: *p,
                theta_end: zidx(BindingPoint::Theta(p.theta)),
                phi_end: zidx(BindingPoint::Phi(p.phi)),
            })
            .collect();
        let keys: Vec<TorusPoint> = d.corners.keys().copied().collect();
        let two_cells = d
            .rects
            .iter()
            .map(|r| Corner::ALL.map(|c| keys.binary_search(&r.corner(c)).unwrap()))
            .collect();
        CellComplex { zero_cells, one_cells, two_cells }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.zero_cells.len() as i64 - self.one_cells.len() as i64 + self.two_cells.len() as i64
    }

    /// Euler characteristic of the subcomplex spanned by some rectangles.
    pub fn euler_characteristic_of(&self, rects: &[usize]) -> i64 {
        let mut e = BTreeSet::new();
        let mut v = BTreeSet::new();
        for &i in rects {
            for k in self.two_cells[i] {
                e.insert(k);
                v.insert(self.one_cells[k].theta_end);
                v.insert(self.one_cells[k].phi_end);
            }
        }
        v.len() as i64 - e.len() as i64 + rects.len() as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponentReport {
    pub vertices: Vec<TorusPoint>,
    pub length: usize,
    pub tb_plus_rel: i64,
    pub tb_minus_rel: i64,
    pub surface_component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceComponentReport {
    pub rectangles: Vec<usize>,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub boundary_components: usize,
    /// Genus if orientable, number of crosscaps otherwise.
    pub genus: Option<i64>,
    pub crosscaps: Option<i64>,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub rectangles: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub components: Vec<SurfaceComponentReport>,
    pub boundary: Vec<BoundaryComponentReport>,
    pub dividing_set: Vec<DividingCurve>,
    pub giroux_edges: Vec<GirouxEdge>,
}

fn surface_name(chi: i64, orientable: bool, b: usize) -> String {
    match (orientable, chi, b) {
        (true, 2, 0) => "sphere".into(),
        (true, 1, 1) => "disc".into(),
        (true, 0, 2) => "annulus".into(),
        (true, 0, 0) => "torus".into(),
        (false, 1, 0) => "projective plane".into(),
        (false, 0, 1) => "Moebius band".into(),
        (false, 0, 0) => "Klein bottle".into(),
        (true, _, _) => format!("orientable genus {} with {b} boundary components", (2 - chi - b as i64) / 2),
        (false, _, _) => format!("non-orientable with {} crosscaps and {b} boundary components", 2 - chi - b as i64),
    }
}

impl SurfaceReport {
    fn new(d: &SurfaceDiagram) -> Result<Self> {
        let cx = d.cell_complex();
        let comps = d.surface_components();
        let mut comp_of = vec![0; d.len()];
        for (k, c) in comps.iter().enumerate() {
            for &i in c {
                comp_of[i] = k;
            }
        }
        let r = d.boundary()?;
        let rel = d.relative_tb_closed_form()?;
        let boundary: Vec<BoundaryComponentReport> = r
            .components()
            .iter()
            .zip(rel)
            .map(|(c, (tp, tm))| {
                let first = r.vertex(c[0]);
                let owner = d.corners[&first][0].0;
                BoundaryComponentReport {
                    vertices: c.iter().map(|&v| r.vertex(v)).collect(),
                    length: c.len(),
                    tb_plus_rel: tp,
                    tb_minus_rel: tm,
                    surface_component: comp_of[owner],
                }
            })
            .collect();
        let adj = d.adjacency();
        let components = comps
            .iter()
            .enumerate()
            .map(|(k, rects)| {
                let orientable = two_colourable(&adj, rects);
                let chi = cx.euler_characteristic_of(rects);
                let b = boundary.iter().filter(|x| x.surface_component == k).count();
                let (genus, crosscaps) = if orientable {
                    (Some((2 - chi - b as i64) / 2), None)
                } else {
                    (None, Some(2 - chi - b as i64))
                };
                SurfaceComponentReport {
                    rectangles: rects.clone(),
                    euler_characteristic: chi,
                    orientable,
                    boundary_components: b,
                    genus,
                    crosscaps,
                    name: surface_name(chi, orientable, b),
                }
            })
            .collect();
        Ok(SurfaceReport {
            rectangles: d.len(),
            euler_characteristic: cx.euler_characteristic(),
            orientable: d.orientation().is_some(),
            components,
            boundary,
            dividing_set: d.dividing_set(),
            giroux_edges: d.giroux_edges(),
        })
    }
}

fn two_colourable(adj: &[BTreeSet<usize>], rects: &[usize]) -> bool {
    let mut col: BTreeMap<usize, bool> = BTreeMap::new();
    for &s in rects {
        if col.contains_key(&s) {
            continue;
        }
        col.insert(s, false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let cu = col[&u];
            for &w in &adj[u] {
                match col.get(&w) {
                    None => {
                        col.insert(w, !cu);
                        stack.push(w);
                    }
                    Some(&cw) if cw == cu => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Cyclic chain of `k` rectangles, `r_i = [t_i, t_{i+1}] x [p_i, p_{i+1}]`.
///
/// Without explicit coordinates `t_i = p_i = i/(2k)`. Consecutive
/// rectangles share one corner, TR of `r_{i-1}` and BL of `r_i`.
pub fn make_chain_annulus(k: usize, coords: Option<(Vec<CircleCoord>, Vec<CircleCoord>)>) -> Result<SurfaceDiagram> {
    if k <= 2 {
        return Err(Error::Validation(format!(
            "a chain needs k >= 3 rectangles; k = {k} forces corners to coincide (k = 2 is the complementary pair)"
        )));
    }
    let (ts, ps) = match coords {
        Some((t, p)) => {
            if t.len() != k || p.len() != k {
                return Err(Error::Validation(format!("need {k} theta and {k} phi values")));
            }
            (t, p)
        }
        None => {
            let c: Vec<_> = (0..k).map(|i| CircleCoord::from_ratio(i as i128, 2 * k as i128)).collect();
            (c.clone(), c)
        }
    };
    let rects = (0..k)
        .map(|i| Rectangle::new(ts[i], ts[(i + 1) % k], ps[i], ps[(i + 1) % k]))
        .collect::<Result<Vec<_>>>()?;
    SurfaceDiagram::new(rects)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(t: [(i128, i128); 2], p: [(i128, i128); 2]) -> Rectangle {
        Rectangle::from_ratios(t, p).unwrap()
    }

    #[test]
    fn pair_classes() {
        let a = rect([(0, 1), (1, 2)], [(0, 1), (1, 2)]);
        let b = rect([(1, 2), (0, 1)], [(1, 2), (0, 1)]);
        assert!(matches!(classify_pair(&a, &b), PairClass::SharedVertices(v) if v.len() == 4));
        let c = rect([(0, 1), (1, 8)], [(0, 1), (1, 8)]);
        let d = rect([(1, 8), (2, 8)], [(1, 8), (2, 8)]);
        assert_eq!(
            classify_pair(&c, &d),
            PairClass::SharedVertices(vec![TorusPoint::from_ratios((1, 8), (1, 8))])
        );
        let e = rect([(1, 4), (3, 8)], [(0, 1), (1, 2)]);
        let f = rect([(0, 1), (1, 2)], [(1, 8), (3, 8)]);
        assert_eq!(classify_pair(&e, &f), PairClass::Crossing { over: 0 });
        assert_eq!(classify_pair(&f, &e), PairClass::Crossing { over: 1 });
        assert_eq!(classify_pair(&c, &e), PairClass::Disjoint);
        let g = rect([(1, 16), (3, 16)], [(1, 16), (3, 16)]);
        assert!(matches!(classify_pair(&c, &g), PairClass::Incompatible(_)));
        // corner of one on a side of the other
        let h = rect([(1, 8), (2, 8)], [(1, 16), (2, 8)]);
        assert!(matches!(classify_pair(&c, &h), PairClass::Incompatible(_)));
    }

    #[test]
    fn single_rectangle() {
        let d = SurfaceDiagram::new(vec![rect([(0, 1), (1, 3)], [(0, 1), (1, 3)])]).unwrap();
        let rep = d.classify().unwrap();
        assert_eq!(rep.euler_characteristic, 1);
        assert_eq!(rep.components[0].name, "disc");
        assert_eq!((rep.boundary[0].tb_plus_rel, rep.boundary[0].tb_minus_rel), (-1, -1));
        assert_eq!(d.orientations().len(), 2);
        assert_eq!(d.dividing_set().len(), 1);
        assert_eq!(d.lengthbound_check().unwrap()[0].slack, 2);
        assert_eq!(d.relative_tb_from_framing().unwrap(), vec![(-1, -1)]);
    }

    #[test]
    fn sphere_pair() {
        let a = rect([(0, 1), (1, 2)], [(0, 1), (1, 2)]);
        let b = rect([(1, 2), (0, 1)], [(1, 2), (0, 1)]);
        let d = SurfaceDiagram::new(vec![a, b]).unwrap();
        let rep = d.classify().unwrap();
        assert_eq!(rep.euler_characteristic, 2);
        assert!(rep.orientable && rep.boundary.is_empty());
        assert_eq!(rep.components[0].name, "sphere");
        assert_eq!(rep.dividing_set.len(), 1);
        assert!(rep.dividing_set[0].closed);
        assert!(d.boundary_framing().is_err());
    }

    #[test]
    fn chain_four_is_annulus() {
        let d = make_chain_annulus(4, None).unwrap();
        let rep = d.classify().unwrap();
        assert_eq!(rep.euler_characteristic, 0);
        assert!(rep.orientable);
        assert_eq!(rep.boundary.len(), 2);
        assert_eq!(rep.components[0].name, "annulus");
        for b in &rep.boundary {
            assert_eq!(b.length, 4);
            assert_eq!((b.tb_plus_rel, b.tb_minus_rel), (0, -2));
        }
        assert_eq!(rep.dividing_set.len(), 1);
        assert!(rep.dividing_set[0].closed);
        assert_eq!(rep.dividing_set[0].rectangles.len(), 4);
        assert_eq!(d.orientations().len(), 2);
    }

    #[test]
    fn chain_three_is_moebius() {
        let d = make_chain_annulus(3, None).unwrap();
        let rep = d.classify().unwrap();
        assert_eq!(rep.euler_characteristic, 0);
        assert!(!rep.orientable);
        assert_eq!(rep.boundary.len(), 1);
        assert_eq!(rep.boundary[0].length, 6);
        assert_eq!(rep.components[0].name, "Moebius band");
        assert!(d.orientations().is_empty());
    }

    #[test]
    fn chain_two_rejected() {
        let e = make_chain_annulus(2, None).unwrap_err();
        assert!(e.to_string().contains("k >= 3"));
    }

    #[test]
    fn crowded_line_rejected() {
        let rs = vec![
            rect([(0, 1), (1, 9)], [(0, 1), (1, 9)]),
            rect([(0, 1), (1, 9)], [(2, 9), (3, 9)]),
        ];
        let e = SurfaceDiagram::new(rs).unwrap_err();
        assert!(e.to_string().contains("free vertices"), "{e}");
    }
}
