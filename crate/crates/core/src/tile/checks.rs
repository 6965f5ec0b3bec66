//! Numerical checks of the tile geometry: tangency to the plane fields
//! along corner arcs, transversality and contact property of the line
//! element field, and separation of tiles over crossing rectangles.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{Corner, Rectangle};
use crate::tile::embed::{combine, dot, embed_r4, jacobian, norm, sub, R4};
use crate::tile::geometry::Tile;
use crate::tile::harmonic::zeta_inverse;

/// Largest principal angle between the planes spanned by `p` and `q`.
pub fn plane_angle(p: [R4; 2], q: [R4; 2]) -> f64 {
    let a = orthonormal(p);
    let b = orthonormal(q);
    // Columns of b with their components along a removed.
    let r: Vec<R4> = b.iter().map(|v| sub(v, &combine(&[a[0], a[1], [0.0; 4]], [dot(v, &a[0]), dot(v, &a[1]), 0.0]))).collect();
    let (p11, p12, p22) = (dot(&r[0], &r[0]), dot(&r[0], &r[1]), dot(&r[1], &r[1]));
    let lmax = (p11 + p22) / 2.0 + (((p11 - p22) / 2.0).powi(2) + p12 * p12).sqrt();
    lmax.sqrt().min(1.0).asin()
}

fn orthonormal(p: [R4; 2]) -> [R4; 2] {
    let e0 = p[0].map(|x| x / norm(&p[0]));
    let d = dot(&p[1], &e0);
    let v = sub(&p[1], &e0.map(|x| x * d));
    [e0, v.map(|x| x / norm(&v))]
}

/// The plane field `ker(cos^(2+k)(pi tau/2) dphi + sign sin^(2+k)(pi tau/2) dtheta)`
/// at a point, as two vectors of `R^4`.
pub fn contact_plane(theta: f64, phi: f64, tau: f64, kappa: f64, sign: f64) -> [R4; 2] {
    let e = 2.0 + kappa;
    let (s, c) = (PI * tau / 2.0).sin_cos();
    let (w_theta, w_phi) = (sign * s.powf(e), c.powf(e));
    let j = jacobian(theta, phi, tau);
    [j[2], combine(&j, [w_phi, -w_theta, 0.0])]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencySample {
    pub corner: Corner,
    pub tau: f64,
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub kappa: f64,
    pub samples: Vec<TangencySample>,
    pub max_defect: f64,
    pub failures: usize,
}

/// Tangent plane of the tile near the arc over a corner, at the point whose
/// limiting height is `tau`, estimated by central differences of the
/// embedding in polar coordinates `(rho, alpha)` about the corner.
pub fn tangent_plane_near_corner(tile: &Tile, c: Corner, tau: f64, rho: f64) -> Result<([R4; 2], (f64, f64, f64))> {
    let ((x0, y0), e0, e1) = tile.corner_frame(c);
    let at = |r: f64, al: f64| {
        let (x, y) = (x0 + r * (al.cos() * e0.0 + al.sin() * e1.0), y0 + r * (al.cos() * e0.1 + al.sin() * e1.1));
        tile.point(x, y)
    };
    let alpha = PI / 2.0 * zeta_inverse(tau, tile.kappa);
    let da = 1e-4;
    let d_rho = sub(&at(1.5 * rho, alpha)?.r4, &at(0.5 * rho, alpha)?.r4);
    let d_alpha = sub(&at(rho, alpha + da)?.r4, &at(rho, alpha - da)?.r4);
    let p = at(rho, alpha)?;
    Ok(([d_rho, d_alpha], (p.theta, p.phi, p.tau)))
}

/// Tangency of a tile to the plane fields along its corner arcs: the
/// negative field along BL and TR, the positive one along TL and BR.
pub fn tangency_check(tile: &Tile, taus: &[f64], rho_rel: f64, tol: f64) -> Result<TangencyReport> {
    let (a, b) = tile.spans();
    let rho = rho_rel * a.min(b);
    let mut samples = Vec::new();
    for c in Corner::ALL {
        for &tau in taus {
            let (plane, (t, p, s)) = tangent_plane_near_corner(tile, c, tau, rho)?;
            let sign = if c.is_diagonal() { -1.0 } else { 1.0 };
            let defect = plane_angle(plane, contact_plane(t, p, s, tile.kappa, sign));
            samples.push(TangencySample { corner: c, tau, defect: if defect.is_finite() { defect } else { f64::INFINITY } });
        }
    }
    let max_defect = samples.iter().map(|s| s.defect).fold(0.0, f64::max);
    let failures = samples.iter().filter(|s| !(s.defect <= tol)).count();
    Ok(TangencyReport { kappa: tile.kappa, samples, max_defect, failures })
}

type Func = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Profile functions `a`, `b` of the line element field, as functions of the
/// normalized coordinate `u in [-margin, 1 + margin]` across the rectangle,
/// with their derivatives in `u`.
pub struct Profile {
    pub margin: f64,
    pub a: Func,
    pub da: Func,
    pub b: Func,
    pub db: Func,
}

fn flat(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

fn flat_d(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        flat(x) / (x * x)
    }
}

/// Smooth step, 0 for `x <= 0`, 1 for `x >= 1`.
pub fn smooth_step(x: f64) -> f64 {
    let (p, q) = (flat(x), flat(1.0 - x));
    p / (p + q)
}

pub fn smooth_step_d(x: f64) -> f64 {
    let (p, q) = (flat(x), flat(1.0 - x));
    (flat_d(x) * q + p * flat_d(1.0 - x)) / ((p + q) * (p + q))
}

impl Profile {
    /// `a = 1 - 2 S((u - m)/(1 - 2m))`, `b = -a`.
    pub fn smooth_step(margin: f64) -> Result<Self> {
        if !(margin > 0.0 && margin < 0.5) {
            return Err(Error::Validation(format!("profile margin {margin} not in (0, 1/2)")));
        }
        let w = 1.0 - 2.0 * margin;
        let a = move |u: f64| 1.0 - 2.0 * smooth_step((u - margin) / w);
        let da = move |u: f64| -2.0 * smooth_step_d((u - margin) / w) / w;
        Ok(Profile { margin, a: Box::new(a), da: Box::new(da), b: Box::new(move |u| -a(u)), db: Box::new(move |u| -da(u)) })
    }

    /// Conditions on the profile: `a = 1`, `b = -1` on `[-m, m]`; `a` and
    /// `b` odd about `u = 1/2`; `a' < 0 < b'` on `(m, 1 - m)`; values in `[-1, 1]`.
    pub fn validate(&self) -> Result<()> {
        let m = self.margin;
        let n = 2000;
        for i in 0..=n {
            let u = -m + (1.0 + 2.0 * m) * i as f64 / n as f64;
            let (a, b) = ((self.a)(u), (self.b)(u));
            let bad = |what: &str| Err(Error::Validation(format!("profile violates {what} at u = {u}")));
            if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) {
                return bad("the range [-1, 1]");
            }
            if u <= m && (a != 1.0 || b != -1.0) {
                return bad("flatness near the first side");
            }
            if (a + (self.a)(1.0 - u)).abs() > 1e-12 || (b + (self.b)(1.0 - u)).abs() > 1e-12 {
                return bad("the antisymmetry");
            }
            // Strictly monotone inside; the flat function underflows to a
            // zero derivative right next to the margins.
            let (da, db) = ((self.da)(u), (self.db)(u));
            if u > m && u < 1.0 - m && (da > 0.0 || db < 0.0) {
                return bad("monotonicity");
            }
            if u > m + 0.01 && u < 1.0 - m - 0.01 && !(da < 0.0 && db > 0.0) {
                return bad("strict monotonicity");
            }
        }
        Ok(())
    }
}

/// The line element field in coordinates `(theta, phi, tau)`, angles in
/// radians, at a point given in local turns `(x, y)`.
pub struct LineField<'a> {
    pub profile: &'a Profile,
    pub a_span: f64,
    pub b_span: f64,
    /// Multiplier of the `d/dtau` component; 1 for the contact field.
    pub tau_factor: f64,
}

impl LineField<'_> {
    pub fn vector(&self, x: f64, y: f64, tau: f64) -> [f64; 3] {
        let (u, v) = (x / self.a_span, y / self.b_span);
        let p = self.profile;
        let da = (p.da)(u) / (TAU * self.a_span);
        let db = (p.db)(v) / (TAU * self.b_span);
        [(p.a)(u), (p.b)(v), self.tau_factor * (PI * tau).sin() / TAU * (db - da)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub samples: usize,
    pub transversality_failures: usize,
    /// Smallest `|n(l)| / (|n| |l|)` over the tile samples.
    pub min_transversality: f64,
    pub max_lie_residual: f64,
    pub max_boundary_angle: f64,
}

fn alpha_form(tau: f64) -> [f64; 3] {
    let (s, c) = (PI * tau / 2.0).sin_cos();
    [s * s, c * c, 0.0]
}

/// Component of `L_X alpha` normal to `alpha`, relative to
/// `|X| |D alpha| + |alpha| |DX|`, by central differences in radians.
fn lie_residual(field: &LineField, q: [f64; 3]) -> f64 {
    let h = 1e-5;
    let to_local = |q: [f64; 3]| (q[0] / TAU, q[1] / TAU, q[2]);
    let x_at = |q: [f64; 3]| {
        let (x, y, t) = to_local(q);
        field.vector(x, y, t)
    };
    let x0 = x_at(q);
    let al = alpha_form(q[2]);
    let mut dx = [[0.0; 3]; 3];
    let mut dal = [[0.0; 3]; 3];
    for j in 0..3 {
        let (mut qp, mut qm) = (q, q);
        qp[j] += h;
        qm[j] -= h;
        let (xp, xm) = (x_at(qp), x_at(qm));
        let (ap, am) = (alpha_form(qp[2]), alpha_form(qm[2]));
        for k in 0..3 {
            dx[j][k] = (xp[k] - xm[k]) / (2.0 * h);
            dal[j][k] = (ap[k] - am[k]) / (2.0 * h);
        }
    }
    let mut lie = [0.0; 3];
    for k in 0..3 {
        for j in 0..3 {
            lie[k] += x0[j] * dal[j][k] + al[j] * dx[k][j];
        }
    }
    let fro = |m: &[[f64; 3]; 3]| m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let len = |v: &[f64; 3]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let scale = len(&x0) * fro(&dal) + len(&al) * fro(&dx);
    let aa = len(&al).powi(2);
    let mu = lie.iter().zip(&al).map(|(l, a)| l * a).sum::<f64>() / aa;
    let res: f64 = lie.iter().zip(&al).map(|(l, a)| (l - mu * a).powi(2)).sum::<f64>().sqrt();
    if scale == 0.0 {
        0.0
    } else {
        res / scale
    }
}

/// Transversality of the line element field to the tile on an
/// `n x n` grid, the contact property at sampled points of the domain, and
/// the directions on the binding circles.
pub fn contact_field_check(tile: &Tile, profile: &Profile, n: usize) -> Result<ContactReport> {
    profile.validate()?;
    let (a, b) = tile.spans();
    let field = LineField { profile, a_span: a, b_span: b, tau_factor: 1.0 };
    let mut failures = 0;
    let mut min_t = f64::INFINITY;
    let mut max_res = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a * (i as f64 + 0.5) / n as f64, b * (j as f64 + 0.5) / n as f64);
            let hj = tile.height_jet(x, y)?;
            let l = field.vector(x, y, hj.tau);
            let nrm = [-hj.dx / TAU, -hj.dy / TAU, 1.0];
            let d = l.iter().zip(&nrm).map(|(p, q)| p * q).sum::<f64>();
            let size = l.iter().map(|v| v * v).sum::<f64>().sqrt() * nrm.iter().map(|v| v * v).sum::<f64>().sqrt();
            let cosine = d / size;
            if !(cosine > 0.0) {
                failures += 1;
            }
            min_t = min_t.min(cosine.abs());
            // Contact residual on a shifted lattice of the whole domain.
            let m = profile.margin;
            let u = -m + (1.0 + 2.0 * m) * (i as f64 + 0.37) / n as f64;
            let v = -m + (1.0 + 2.0 * m) * (j as f64 + 0.61) / n as f64;
            let tau = 0.05 + 0.9 * ((i * 7 + j * 13) % n) as f64 / n as f64;
            max_res = max_res.max(lie_residual(&field, [TAU * u * a, TAU * v * b, tau]));
        }
    }
    Ok(ContactReport {
        samples: n * n,
        transversality_failures: failures,
        min_transversality: min_t,
        max_lie_residual: max_res,
        max_boundary_angle: boundary_directions(tile, &field, n),
    })
}

/// Angle between the pushed-forward field and `d/dphi` on `tau = 0`, and
/// `d/dtheta` on `tau = 1`, where the field does not vanish.
fn boundary_directions(tile: &Tile, field: &LineField, n: usize) -> f64 {
    let (a, b) = tile.spans();
    let m = field.profile.margin;
    let mut worst = 0.0f64;
    for i in 0..=n {
        for j in 0..=n {
            let u = -m + (1.0 + 2.0 * m) * i as f64 / n as f64;
            let v = -m + (1.0 + 2.0 * m) * j as f64 / n as f64;
            let (x, y) = (u * a, v * b);
            let (t, p) = tile.torus(x, y);
            for (tau, axis) in [(0.0, 1), (1e-9, 1), (1.0, 0), (1.0 - 1e-9, 0)] {
                let l = field.vector(x, y, tau);
                if l[axis].abs() < 1e-3 {
                    continue;
                }
                let jac = jacobian(t, p, tau);
                let w = combine(&jac, l);
                let e = jac[axis].map(|c| c / norm(&jac[axis]));
                let along = dot(&w, &e);
                let perp = norm(&sub(&w, &e.map(|c| c * along)));
                worst = worst.max(perp.atan2(along.abs()));
            }
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub samples: usize,
    pub min_gap: f64,
    /// The over rectangle's tile is higher at every sample.
    pub consistent: bool,
}

/// Heights of two tiles over the overlap of a crossing pair, on an
/// `n x n` grid graded towards the overlap's sides.
pub fn crossing_separation(over: &Rectangle, under: &Rectangle, kappa: f64, n: usize, term_tol: f64) -> Result<SeparationReport> {
    let (t_over, t_under) = (Tile::new(*over, kappa, term_tol), Tile::new(*under, kappa, term_tol));
    let (ta, tb) = (over.theta.start.to_f64(), over.theta.length_f64());
    let (pa, pb) = (under.phi.start.to_f64(), under.phi.length_f64());
    let mut min_gap = f64::INFINITY;
    let mut consistent = true;
    for i in 1..n {
        for j in 1..n {
            let (u, v) = (crate::tile::mesh::graded(i as f64 / n as f64), crate::tile::mesh::graded(j as f64 / n as f64));
            let (theta, phi) = (ta + tb * u, pa + pb * v);
            let (x1, y1) = t_over.harmonic.local(theta, phi);
            let (x2, y2) = t_under.harmonic.local(theta, phi);
            let gap = t_over.height(x1, y1)? - t_under.height(x2, y2)?;
            consistent &= gap > 0.0;
            min_gap = min_gap.min(gap);
        }
    }
    Ok(SeparationReport { samples: (n - 1) * (n - 1), min_gap, consistent })
}

/// Unit norm defect of `embed` at seeded pseudo-random join coordinates.
pub fn embedding_norm_defect(samples: &[(f64, f64, f64)]) -> f64 {
    samples.iter().map(|&(t, p, s)| (norm(&embed_r4(t, p, s)) - 1.0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect() -> Rectangle {
        Rectangle::from_ratios([(1, 10), (4, 10)], [(7, 10), (1, 10)]).unwrap()
    }

    #[test]
    fn plane_angle_basics() {
        let e = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            v
        };
        assert!(plane_angle([e(0), e(1)], [e(1), e(0)]) < 1e-15);
        assert!((plane_angle([e(0), e(1)], [e(0), e(2)]) - PI / 2.0).abs() < 1e-12);
        let t: f64 = 1e-3;
        assert!((plane_angle([e(0), e(1)], [e(0), [0.0, t.cos(), t.sin(), 0.0]]) - t).abs() < 1e-12);
    }

    #[test]
    fn tile_is_tangent_along_corner_arcs() {
        for kappa in [0.0, 0.5] {
            let tile = Tile::new(rect(), kappa, 1e-16);
            let r = tangency_check(&tile, &[0.2, 0.35, 0.5, 0.65, 0.8], 1e-4, 1e-2).unwrap();
            assert_eq!(r.failures, 0, "{r:?}");
        }
    }

    #[test]
    fn tangency_detects_the_wrong_field() {
        let tile = Tile::new(rect(), 0.0, 1e-16);
        let (plane, (t, p, s)) = tangent_plane_near_corner(&tile, Corner::BL, 0.5, 1e-4 * 0.3).unwrap();
        assert!(plane_angle(plane, contact_plane(t, p, s, 0.0, 1.0)) > 0.1);
    }

    #[test]
    fn profile_conditions() {
        Profile::smooth_step(0.05).unwrap().validate().unwrap();
        assert!(Profile::smooth_step(0.6).is_err());
        let linear = Profile {
            margin: 0.05,
            a: Box::new(|u| 1.0 - 2.0 * u.clamp(0.0, 1.0)),
            da: Box::new(|_| -2.0),
            b: Box::new(|u| 2.0 * u.clamp(0.0, 1.0) - 1.0),
            db: Box::new(|_| 2.0),
        };
        assert!(linear.validate().is_err());
    }

    #[test]
    fn contact_field() {
        let tile = Tile::new(rect(), 0.0, 1e-16);
        let r = contact_field_check(&tile, &Profile::smooth_step(0.05).unwrap(), 32).unwrap();
        assert_eq!(r.transversality_failures, 0, "{r:?}");
        assert!(r.max_lie_residual < 1e-3, "{r:?}");
        assert!(r.max_boundary_angle < 1e-6, "{r:?}");
    }

    #[test]
    fn lie_residual_detects_a_non_contact_field() {
        let p = Profile::smooth_step(0.05).unwrap();
        let q = [TAU * 0.1, TAU * 0.13, 0.4];
        let good = LineField { profile: &p, a_span: 0.3, b_span: 0.4, tau_factor: 1.0 };
        let bad = LineField { profile: &p, a_span: 0.3, b_span: 0.4, tau_factor: 0.5 };
        assert!(lie_residual(&good, q) < 1e-8);
        assert!(lie_residual(&bad, q) > 1e-2);
    }

    #[test]
    fn crossing_tiles_are_separated() {
        let over = Rectangle::from_ratios([(1, 4), (3, 8)], [(0, 1), (1, 2)]).unwrap();
        let under = Rectangle::from_ratios([(0, 1), (1, 2)], [(1, 8), (3, 8)]).unwrap();
        let r = crossing_separation(&over, &under, 0.0, 64, 1e-16).unwrap();
        assert!(r.consistent && r.min_gap > 0.0, "{r:?}");
    }
}
