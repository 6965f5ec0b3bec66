//! Join coordinates `(theta, phi, tau)` on the unit sphere of `R^4`, and
//! stereographic projection.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

pub type R4 = [f64; 4];

/// Point of the sphere with its join coordinates (angles in turns).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddedPoint {
    pub theta: f64,
    pub phi: f64,
    pub tau: f64,
    pub r4: R4,
}

/// `(cos(pi tau/2) cos phi, cos(pi tau/2) sin phi, sin(pi tau/2) cos theta, sin(pi tau/2) sin theta)`
/// with `theta`, `phi` in turns.
pub fn embed(theta: f64, phi: f64, tau: f64) -> EmbeddedPoint {
    EmbeddedPoint { theta, phi, tau, r4: embed_r4(theta, phi, tau) }
}

pub fn embed_r4(theta: f64, phi: f64, tau: f64) -> R4 {
    let (s, c) = (PI * tau / 2.0).sin_cos();
    let (st, ct) = (TAU * theta).sin_cos();
    let (sp, cp) = (TAU * phi).sin_cos();
    [c * cp, c * sp, s * ct, s * st]
}

/// Columns `d/dtheta`, `d/dphi`, `d/dtau` of the embedding, with the
/// angles measured in radians.
pub fn jacobian(theta: f64, phi: f64, tau: f64) -> [R4; 3] {
    let (s, c) = (PI * tau / 2.0).sin_cos();
    let (st, ct) = (TAU * theta).sin_cos();
    let (sp, cp) = (TAU * phi).sin_cos();
    let h = PI / 2.0;
    [[0.0, 0.0, -s * st, s * ct], [-c * sp, c * cp, 0.0, 0.0], [-h * s * cp, -h * s * sp, h * c * ct, h * c * st]]
}

pub fn dot(a: &R4, b: &R4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &R4) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &R4, b: &R4) -> R4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn combine(vs: &[R4; 3], w: [f64; 3]) -> R4 {
    let mut out = [0.0; 4];
    for (v, c) in vs.iter().zip(w) {
        for i in 0..4 {
            out[i] += c * v[i];
        }
    }
    out
}

/// Stereographic projection from a unit vector `pole`.
#[derive(Clone, Copy, Debug)]
pub struct Stereographic {
    pub pole: R4,
    basis: [R4; 3],
}

impl Stereographic {
    pub fn new(pole: R4) -> Result<Self> {
        let n = norm(&pole);
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!("pole has norm {n}, expected 1")));
        }
        let mut basis: Vec<R4> = Vec::new();
        for i in 0..4 {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            for b in std::iter::once(&pole).chain(basis.iter()) {
                let d = dot(&e, b);
                for k in 0..4 {
                    e[k] -= d * b[k];
                }
            }
            let l = norm(&e);
            if l > 1e-6 {
                basis.push(e.map(|x| x / l));
            }
            if basis.len() == 3 {
                break;
            }
        }
        Ok(Stereographic { pole, basis: [basis[0], basis[1], basis[2]] })
    }

    /// Image in `R^3`; points within `clearance` of the pole are rejected.
    pub fn project(&self, x: &R4, clearance: f64) -> Result<[f64; 3]> {
        if norm(&sub(x, &self.pole)) <= clearance {
            return Err(Error::Numeric(format!("point {x:?} is at the projection pole; choose another pole")));
        }
        let d = 1.0 - dot(x, &self.pole);
        Ok(self.basis.map(|b| dot(x, &b) / d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binding_circles() {
        let p = embed_r4(0.3, 0.1, 0.0);
        let q = embed_r4(0.7, 0.1, 0.0);
        assert_eq!(p, q);
        assert!((p[0] - (TAU * 0.1).cos()).abs() < 1e-15 && p[2] == 0.0 && p[3] == 0.0);
        let p = embed_r4(0.2, 0.1, 1.0);
        let q = embed_r4(0.2, 0.9, 1.0);
        assert!(norm(&sub(&p, &q)) < 1e-15);
        assert!((p[2] - (TAU * 0.2).cos()).abs() < 1e-15);
    }

    #[test]
    fn jacobian_matches_differences() {
        let (t, p, s, d) = (0.13, 0.71, 0.37, 1e-6);
        let j = jacobian(t, p, s);
        let fd = [
            sub(&embed_r4(t + d / TAU, p, s), &embed_r4(t - d / TAU, p, s)),
            sub(&embed_r4(t, p + d / TAU, s), &embed_r4(t, p - d / TAU, s)),
            sub(&embed_r4(t, p, s + d), &embed_r4(t, p, s - d)),
        ];
        for k in 0..3 {
            for i in 0..4 {
                assert!((fd[k][i] / (2.0 * d) - j[k][i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn projection_is_inverse_of_standard_formula() {
        let pole = embed_r4(0.0, 0.25, 0.0);
        let st = Stereographic::new(pole).unwrap();
        let x = embed_r4(0.4, 0.6, 0.3);
        let y = st.project(&x, 1e-6).unwrap();
        // Inverse stereographic map.
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let mut back = pole.map(|p| p * (r2 - 1.0) / (r2 + 1.0));
        for k in 0..3 {
            for i in 0..4 {
                back[i] += 2.0 * y[k] * st.basis[k][i] / (r2 + 1.0);
            }
        }
        assert!(norm(&sub(&back, &x)) < 1e-12);
        assert!(st.project(&pole, 1e-6).is_err());
    }
}
