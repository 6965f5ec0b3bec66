//! Staircase approximation of a closed polyline on the torus.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::framing::Framing;
use crate::link::{EdgeKind, LinkDiagram};
use crate::torus::{min_cyclic_gap, CircleCoord, Rational, TorusPoint};

/// A diagram together with the framing that draws it as a staircase.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub diagram: LinkDiagram,
    pub framing: Framing,
    /// Vertex indices in traversal order.
    pub cycle: Vec<usize>,
}

fn wrap_step(a: CircleCoord, b: CircleCoord) -> Result<Rational> {
    let d = a.forward_to(b);
    let half = Rational::new(1, 2);
    if d.is_zero() {
        return Err(Error::Validation(format!("axis-parallel or repeated step {a} -> {b}")));
    }
    if d == half {
        return Err(Error::Validation(format!("step {a} -> {b} of length exactly 1/2 is ambiguous")));
    }
    Ok(if d > half { d - Rational::from_integer(1) } else { d })
}

/// Replace a closed generic polyline by a staircase through its samples.
///
/// Every polyline segment is split into `resolution` pieces; the samples are
/// perturbed so that all meridians and longitudes are distinct and avoid the
/// forbidden ones.
pub fn approximate_staircase(
    polyline: &[TorusPoint],
    resolution: usize,
    forbidden_thetas: &[CircleCoord],
    forbidden_phis: &[CircleCoord],
) -> Result<Staircase> {
    if polyline.len() < 2 {
        return Err(Error::Validation("polyline needs at least two points".into()));
    }
    if resolution == 0 {
        return Err(Error::Validation("resolution must be positive".into()));
    }
    let n = polyline.len();
    let m = Rational::from_integer(resolution as i128);
    let mut samples: Vec<(Rational, Rational)> = Vec::with_capacity(n * resolution);
    for i in 0..n {
        let (p, q) = (polyline[i], polyline[(i + 1) % n]);
        let dt = wrap_step(p.theta, q.theta)?;
        let dp = wrap_step(p.phi, q.phi)?;
        for k in 0..resolution {
            let s = Rational::from_integer(k as i128) / m;
            samples.push((p.theta.value() + s * dt, p.phi.value() + s * dp));
        }
    }
    let big_n = samples.len();
    let perturb = |vals: Vec<CircleCoord>, forbidden: &[CircleCoord]| -> Vec<CircleCoord> {
        let mut all = vals.clone();
        all.extend_from_slice(forbidden);
        let gap = min_cyclic_gap(&all).unwrap_or(Rational::from_integer(1));
        let eta = gap / Rational::from_integer(4 * big_n as i128 + 4);
        vals.iter()
            .enumerate()
            .map(|(j, v)| v.shifted(eta * Rational::from_integer(j as i128 + 1)))
            .collect()
    };
    let xs = perturb(samples.iter().map(|s| CircleCoord::new(s.0)).collect(), forbidden_thetas);
    let ys = perturb(samples.iter().map(|s| CircleCoord::new(s.1)).collect(), forbidden_phis);
    // c_j = (X_j, Y_j) at index 2j, q_j = (X_{j-1}, Y_j) at index 2j+1
    let mut vertices = Vec::with_capacity(2 * big_n);
    for j in 0..big_n {
        vertices.push(TorusPoint::new(xs[j], ys[j]));
        vertices.push(TorusPoint::new(xs[(j + big_n - 1) % big_n], ys[j]));
    }
    let diagram = LinkDiagram::new(vertices)?;
    // traversal c_{j-1} -> q_j -> c_j
    let mut cycle = Vec::with_capacity(2 * big_n);
    for j in 0..big_n {
        cycle.push(2 * j + 1);
        cycle.push(2 * j);
    }
    let mut greater = vec![usize::MAX; diagram.edges().len()];
    for k in 0..cycle.len() {
        let (u, w) = (cycle[(k + cycle.len() - 1) % cycle.len()], cycle[k]);
        let (pu, pw) = (diagram.vertex(u), diagram.vertex(w));
        let (e, step) = if pu.theta == pw.theta {
            (diagram.vertical_edge_of(u), wrap_step(pu.phi, pw.phi)?)
        } else {
            (diagram.horizontal_edge_of(u), wrap_step(pu.theta, pw.theta)?)
        };
        greater[e] = if step > Rational::zero() { w } else { u };
    }
    let framing = Framing::new(&diagram, greater)?;
    Ok(Staircase { diagram, framing, cycle })
}

impl Staircase {
    /// Homology class of the drawn cycle: signed sums of the framing arcs.
    pub fn homology(&self) -> (i128, i128) {
        let r = &self.diagram;
        let mut sum = (Rational::zero(), Rational::zero());
        for k in 0..self.cycle.len() {
            let (u, w) = (self.cycle[k], self.cycle[(k + 1) % self.cycle.len()]);
            let (pu, pw) = (r.vertex(u), r.vertex(w));
            let vertical = pu.theta == pw.theta;
            let e = if vertical { r.vertical_edge_of(u) } else { r.horizontal_edge_of(u) };
            debug_assert_eq!(r.edges()[e].kind == EdgeKind::Vertical, vertical);
            let (cu, cw) = if vertical { (pu.phi, pw.phi) } else { (pu.theta, pw.theta) };
            let d = if self.framing.greater_of(e) == w { cu.forward_to(cw) } else { -cw.forward_to(cu) };
            if vertical {
                sum.1 += d;
            } else {
                sum.0 += d;
            }
        }
        assert!(sum.0.is_integer() && sum.1.is_integer());
        (sum.0.to_integer(), sum.1.to_integer())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: (i128, i128), p: (i128, i128)) -> TorusPoint {
        TorusPoint::from_ratios(t, p)
    }

    #[test]
    fn empty_polyline_rejected() {
        assert!(approximate_staircase(&[], 4, &[], &[]).is_err());
    }

    #[test]
    fn axis_parallel_rejected() {
        let poly = [pt((1, 10), (1, 10)), pt((1, 10), (3, 10)), pt((3, 10), (2, 10))];
        assert!(approximate_staircase(&poly, 2, &[], &[]).is_err());
    }

    #[test]
    fn triangle_is_contractible_knot() {
        let poly = [pt((1, 10), (1, 10)), pt((3, 10), (2, 10)), pt((2, 10), (4, 10))];
        let s = approximate_staircase(&poly, 3, &[CircleCoord::from_ratio(1, 5)], &[]).unwrap();
        assert_eq!(s.diagram.components().len(), 1);
        assert_eq!(s.homology(), (0, 0));
        assert!(s.diagram.thetas().iter().all(|&t| t != CircleCoord::from_ratio(1, 5)));
    }

    #[test]
    fn diagonal_winding() {
        let poly: Vec<_> = (0..5).map(|k| pt((2 * k + 1, 10), (-2 * k + 1, 10))).collect();
        let s = approximate_staircase(&poly, 2, &[], &[]).unwrap();
        assert_eq!(s.homology(), (1, -1));
    }
}
