//! Framings of link diagrams and the framing value `<f>`.
//!
//! A framing orders the two endpoints of every edge. A vertex is *extremal*
//! when it is the minimum of both its edges or the maximum of both, and
//! *mixed* otherwise. With `n-` extremal vertices on a component `K`,
//! `<f|K> = tb+(K) + n-/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::LinkDiagram;
use crate::linking::{component_tbs, tb_plus_oriented};
use crate::link::Orientation;
use crate::torus::TorusPoint;

/// For every edge (in `LinkDiagram::edges` order) the index of its greater endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Framing {
    greater: Vec<usize>,
}

impl Framing {
    pub fn new(r: &LinkDiagram, greater: Vec<usize>) -> Result<Self> {
        if greater.len() != r.edges().len() {
            return Err(Error::Validation(format!(
                "framing orders {} edges, diagram has {}",
                greater.len(),
                r.edges().len()
            )));
        }
        for (e, &g) in r.edges().iter().zip(&greater) {
            if g != e.a && g != e.b {
                return Err(Error::Validation(format!("vertex {g} is not an endpoint of edge {e:?}")));
            }
        }
        Ok(Framing { greater })
    }

    /// Build from `(smaller, greater)` point pairs, one per edge.
    pub fn from_pairs(r: &LinkDiagram, pairs: &[(TorusPoint, TorusPoint)]) -> Result<Self> {
        let mut greater = vec![usize::MAX; r.edges().len()];
        for (lo, hi) in pairs {
            let (a, b) = match (r.index_of(lo), r.index_of(hi)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Validation(format!("{lo:?}->{hi:?} is not a pair of vertices"))),
            };
            let e = r
                .edges()
                .iter()
                .position(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
                .ok_or_else(|| Error::Validation(format!("{lo:?} and {hi:?} do not form an edge")))?;
            if greater[e] != usize::MAX {
                return Err(Error::Validation(format!("edge {lo:?}-{hi:?} ordered twice")));
            }
            greater[e] = b;
        }
        if let Some(e) = greater.iter().position(|&g| g == usize::MAX) {
            let ed = r.edges()[e];
            return Err(Error::Validation(format!(
                "edge {:?}-{:?} has no ordering",
                r.vertex(ed.a),
                r.vertex(ed.b)
            )));
        }
        Ok(Framing { greater })
    }

    pub fn to_pairs(&self, r: &LinkDiagram) -> Vec<(TorusPoint, TorusPoint)> {
        r.edges()
            .iter()
            .zip(&self.greater)
            .map(|(e, &g)| (r.vertex(e.other(g)), r.vertex(g)))
            .collect()
    }

    pub fn greater_of(&self, edge: usize) -> usize {
        self.greater[edge]
    }

    /// Every framing of `r`; `2^|edges|` of them.
    pub fn all(r: &LinkDiagram) -> impl Iterator<Item = Framing> + '_ {
        let m = r.edges().len();
        assert!(m < 63, "too many edges to enumerate framings");
        (0u64..(1u64 << m)).map(move |mask| Framing {
            greater: r
                .edges()
                .iter()
                .enumerate()
                .map(|(k, e)| if mask >> k & 1 == 1 { e.b } else { e.a })
                .collect(),
        })
    }

    /// Reverse the ordering of one edge.
    pub fn flipped(&self, r: &LinkDiagram, edge: usize) -> Framing {
        let mut g = self.greater.clone();
        g[edge] = r.edges()[edge].other(g[edge]);
        Framing { greater: g }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerRole {
    pub max_of_horizontal: bool,
    pub max_of_vertical: bool,
}

impl CornerRole {
    /// Min/min or max/max.
    pub fn extremal(&self) -> bool {
        self.max_of_horizontal == self.max_of_vertical
    }
}

pub fn corner_roles(r: &LinkDiagram, f: &Framing) -> Vec<CornerRole> {
    (0..r.len())
        .map(|v| CornerRole {
            max_of_horizontal: f.greater_of(r.horizontal_edge_of(v)) == v,
            max_of_vertical: f.greater_of(r.vertical_edge_of(v)) == v,
        })
        .collect()
}

/// Number of extremal vertices on each component.
pub fn extremal_counts(r: &LinkDiagram, f: &Framing) -> Vec<usize> {
    let roles = corner_roles(r, f);
    r.components().iter().map(|c| c.iter().filter(|&&v| roles[v].extremal()).count()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramingValue {
    pub per_component: Vec<i64>,
    pub total: i64,
}

fn require_generic(r: &LinkDiagram) -> Result<()> {
    let g = r.genericity();
    if !g.generic {
        let (p, q) = g.half_length_edges[0];
        return Err(Error::Unsupported(format!(
            "diagram is not generic: edge {p:?}-{q:?} has length 1/2"
        )));
    }
    Ok(())
}

/// `<f|K>` per component and the total for the canonical orientation.
pub fn framing_value(r: &LinkDiagram, f: &Framing) -> Result<FramingValue> {
    framing_value_oriented(r, &r.canonical_orientation(), f)
}

pub fn framing_value_oriented(r: &LinkDiagram, o: &Orientation, f: &Framing) -> Result<FramingValue> {
    require_generic(r)?;
    if r.is_empty() {
        return Ok(FramingValue { per_component: vec![], total: 0 });
    }
    let counts = extremal_counts(r, f);
    let tbs = component_tbs(r)?;
    let mut per_component = Vec::with_capacity(counts.len());
    for (n, (tp, _)) in counts.iter().zip(&tbs) {
        if n % 2 != 0 {
            return Err(Error::Numeric(format!("odd extremal count {n}")));
        }
        per_component.push(tp + *n as i64 / 2);
    }
    let n_total: usize = counts.iter().sum();
    let total = tb_plus_oriented(r, o, None)? + n_total as i64 / 2;
    Ok(FramingValue { per_component, total })
}

/// `[tb+(K), -tb-(K)]` per component.
pub fn framing_range(r: &LinkDiagram) -> Result<Vec<(i64, i64)>> {
    Ok(component_tbs(r)?.into_iter().map(|(p, m)| (p, -m)).collect())
}

/// `(tb+(K;F), tb-(K;F)) = (tb+(K) - lk, tb-(K) + lk)` per component.
pub fn relative_tb(r: &LinkDiagram, o: &Orientation, surface_lk: &[i64]) -> Result<Vec<(i64, i64)>> {
    o.check(r)?;
    let tbs = component_tbs(r)?;
    if surface_lk.len() != tbs.len() {
        return Err(Error::Validation(format!(
            "{} linking numbers supplied for {} components",
            surface_lk.len(),
            tbs.len()
        )));
    }
    Ok(tbs.iter().zip(surface_lk).map(|(&(p, m), &lk)| (p - lk, m + lk)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub lk: i64,
    pub tb_plus_rel: i64,
    pub tb_minus_rel: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentabilityVerdict {
    pub components: Vec<ComponentVerdict>,
    pub pass: bool,
}

/// Both relative numbers must be non-positive on every component.
pub fn representability_check(
    r: &LinkDiagram,
    o: &Orientation,
    surface_lk: &[i64],
) -> Result<RepresentabilityVerdict> {
    let rel = relative_tb(r, o, surface_lk)?;
    let components: Vec<_> = rel
        .iter()
        .zip(surface_lk)
        .map(|(&(p, m), &lk)| ComponentVerdict { lk, tb_plus_rel: p, tb_minus_rel: m, pass: p <= 0 && m <= 0 })
        .collect();
    let pass = components.iter().all(|c| c.pass);
    Ok(RepresentabilityVerdict { components, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::TorusPoint;

    /// A generic square: edges of length 1/3 and 2/3.
    fn sq3() -> LinkDiagram {
        LinkDiagram::new(vec![
            TorusPoint::from_ratios((0, 1), (0, 1)),
            TorusPoint::from_ratios((0, 1), (1, 3)),
            TorusPoint::from_ratios((1, 3), (0, 1)),
            TorusPoint::from_ratios((1, 3), (1, 3)),
        ])
        .unwrap()
    }

    #[test]
    fn square_framing_values() {
        let r = sq3();
        let mut seen = std::collections::BTreeSet::new();
        for f in Framing::all(&r) {
            let n: usize = extremal_counts(&r, &f).iter().sum();
            let v = framing_value(&r, &f).unwrap();
            assert_eq!(v.total, -1 + n as i64 / 2);
            seen.insert(v.total);
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![-1, 0, 1]);
        assert_eq!(framing_range(&r).unwrap(), vec![(-1, 1)]);
    }

    #[test]
    fn non_generic_rejected() {
        let r = LinkDiagram::new(vec![
            TorusPoint::from_ratios((0, 1), (0, 1)),
            TorusPoint::from_ratios((0, 1), (1, 2)),
            TorusPoint::from_ratios((1, 2), (0, 1)),
            TorusPoint::from_ratios((1, 2), (1, 2)),
        ])
        .unwrap();
        let f = Framing::all(&r).next().unwrap();
        assert!(matches!(framing_value(&r, &f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn representability_examples() {
        let r = sq3();
        let o = r.canonical_orientation();
        assert_eq!(relative_tb(&r, &o, &[-1]).unwrap(), vec![(0, -2)]);
        assert_eq!(relative_tb(&r, &o, &[0]).unwrap(), vec![(-1, -1)]);
        assert!(representability_check(&r, &o, &[-1]).unwrap().pass);
        let v = representability_check(&r, &o, &[2]).unwrap();
        assert!(!v.pass);
        assert_eq!((v.components[0].tb_plus_rel, v.components[0].tb_minus_rel), (-3, 1));
        assert!(relative_tb(&r, &o, &[]).is_err());
    }

    #[test]
    fn pair_round_trip() {
        let r = sq3();
        for f in Framing::all(&r) {
            assert_eq!(Framing::from_pairs(&r, &f.to_pairs(&r)).unwrap(), f);
        }
    }
}
