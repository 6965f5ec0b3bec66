//! The bounded harmonic function on a rectangle with boundary values 1 on
//! the vertical sides and 0 on the horizontal sides.
//!
//! On `[0,a] x [0,b]` the solution is the series
//! `S_vert(x,y) = sum_{n odd} 4/(n pi) sin(n pi y/b) cosh(n pi (x - a/2)/b) / cosh(n pi a/(2b))`.
//! Expanding the cosh ratio as a geometric series and summing over `n` in
//! closed form gives an alternating sum of images
//! `sum_k (-1)^k [G(pi (x + k a)/b) + G(pi ((k+1) a - x)/b)]`, with
//! `G(s) = (2/pi) atan2(sin(pi y/b), sinh s)`. Its terms decay like
//! `exp(-k pi a/b)` uniformly up to the corners. The dual series `S_horiz`
//! exchanges the roles of the two sides, and `h = S_vert = 1 - S_horiz`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::surface::Rectangle;

const MAX_IMAGES: usize = 100_000;

/// Value and gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
}

/// `G(s, Y)` and its partial derivatives.
fn kernel(s: f64, y: f64) -> (f64, f64, f64) {
    let (sy, cy) = y.sin_cos();
    if s > 30.0 {
        let e = (-s).exp() * 4.0 / PI;
        return (e * sy, -e * sy, e * cy);
    }
    let (sh, ch) = (s.sinh(), s.cosh());
    let den = sy * sy + sh * sh;
    (2.0 / PI * sy.atan2(sh), -2.0 / PI * sy * ch / den, 2.0 / PI * sh * cy / den)
}

/// Image sum for the solution on `[0,a] x [0,b]` equal to 1 on `x = 0, a`.
/// Returns the jet and the number of image pairs used.
pub fn image_series(a: f64, b: f64, x: f64, y: f64, term_tol: f64) -> (Jet, usize) {
    let k0 = PI / b;
    let yy = k0 * y;
    let mut jet = Jet { value: 0.0, dx: 0.0, dy: 0.0 };
    let mut k = 0;
    while k < MAX_IMAGES {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let (g1, g1s, g1y) = kernel(k0 * (x + k as f64 * a), yy);
        let (g2, g2s, g2y) = kernel(k0 * ((k + 1) as f64 * a - x), yy);
        jet.value += sign * (g1 + g2);
        jet.dx += sign * k0 * (g1s - g2s);
        jet.dy += sign * k0 * (g1y + g2y);
        k += 1;
        if g1.abs() + g2.abs() + g1s.abs() + g2s.abs() + g1y.abs() + g2y.abs() < term_tol {
            break;
        }
    }
    (jet, k)
}

/// Plain partial sum of the Fourier series over odd `n`, stopped when the
/// term bound falls below `term_tol`.
pub fn fourier_series(a: f64, b: f64, x: f64, y: f64, term_tol: f64, max_terms: usize) -> (f64, usize) {
    let mut sum = 0.0;
    let mut used = 0;
    let mut n = 1usize;
    while used < max_terms {
        let nf = n as f64;
        let c = nf * PI / b;
        let ratio = ((-c * x).exp() + (-c * (a - x)).exp()) / (1.0 + (-c * a).exp());
        let bound = 4.0 / (nf * PI) * ratio;
        sum += bound * (c * y).sin();
        used += 1;
        if bound < term_tol {
            break;
        }
        n += 2;
    }
    (sum, used)
}

/// The harmonic function of a rectangle, in local coordinates `x in (0, a)`
/// along theta and `y in (0, b)` along phi, measured in turns from the
/// bottom-left corner `origin`.
#[derive(Clone, Copy, Debug)]
pub struct HarmonicTile {
    pub origin: (f64, f64),
    pub a: f64,
    pub b: f64,
    pub term_tol: f64,
}

impl HarmonicTile {
    pub fn new(rect: &Rectangle, term_tol: f64) -> Self {
        HarmonicTile {
            origin: (rect.theta.start.to_f64(), rect.phi.start.to_f64()),
            a: rect.theta.length_f64(),
            b: rect.phi.length_f64(),
            term_tol,
        }
    }

    /// A tile with the given spans and its corner at the origin.
    pub fn with_spans(a: f64, b: f64, term_tol: f64) -> Self {
        HarmonicTile { origin: (0.0, 0.0), a, b, term_tol }
    }

    fn check_interior(&self, x: f64, y: f64) -> Result<()> {
        if x > 0.0 && x < self.a && y > 0.0 && y < self.b {
            Ok(())
        } else {
            Err(Error::Numeric(format!("point ({x}, {y}) is not interior to [0,{}] x [0,{}]", self.a, self.b)))
        }
    }

    /// `S_vert`, equal to 1 on the vertical sides.
    pub fn s_vert(&self, x: f64, y: f64) -> Jet {
        image_series(self.a, self.b, x, y, self.term_tol).0
    }

    /// `S_horiz`, equal to 1 on the horizontal sides.
    pub fn s_horiz(&self, x: f64, y: f64) -> Jet {
        let j = image_series(self.b, self.a, y, x, self.term_tol).0;
        Jet { value: j.value, dx: j.dy, dy: j.dx }
    }

    /// `h` with gradient, from whichever series has the faster image decay.
    pub fn jet(&self, x: f64, y: f64) -> Result<Jet> {
        self.check_interior(x, y)?;
        Ok(if self.a >= self.b {
            self.s_vert(x, y)
        } else {
            let j = self.s_horiz(x, y);
            Jet { value: 1.0 - j.value, dx: -j.dx, dy: -j.dy }
        })
    }

    pub fn h(&self, x: f64, y: f64) -> Result<f64> {
        self.jet(x, y).map(|j| j.value)
    }

    /// Local coordinates of a torus point given in turns.
    pub fn local(&self, theta: f64, phi: f64) -> (f64, f64) {
        ((theta - self.origin.0).rem_euclid(1.0), (phi - self.origin.1).rem_euclid(1.0))
    }
}

/// Reparametrized height `zeta_kappa(h) = (2/pi) atan(tan(pi h/2)^(1/(2+kappa)))`,
/// evaluated in a form that is exactly odd about `h = 1/2`.
pub fn zeta(h: f64, kappa: f64) -> f64 {
    power_about_half(h, 1.0 / (2.0 + kappa))
}

/// Inverse of [`zeta`].
pub fn zeta_inverse(t: f64, kappa: f64) -> f64 {
    power_about_half(t, 2.0 + kappa)
}

/// `d zeta / dh`.
pub fn zeta_derivative(h: f64, kappa: f64) -> f64 {
    let q = 1.0 / (2.0 + kappa);
    let u = (PI * h / 2.0).tan();
    q * u.powf(q - 1.0) * (1.0 + u * u) / (1.0 + u.powf(2.0 * q))
}

/// `(2/pi) atan(tan(pi x/2)^q)`. With `tan(pi x/2) = (1+t)/(1-t)`,
/// `t = tan(pi (x - 1/2)/2)`, this is `1/2 + (2/pi) atan(tanh(q artanh t))`.
fn power_about_half(x: f64, q: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let t = (PI * (x - 0.5) / 2.0).tan();
    (0.5 + 2.0 / PI * (q * t.atanh()).tanh().atan()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tile(a: f64, b: f64) -> HarmonicTile {
        HarmonicTile::with_spans(a, b, 1e-16)
    }

    #[test]
    fn centre_values() {
        for a in [1.0, 0.25, 1.0 / 3.0] {
            assert!((tile(a, a).h(a / 2.0, a / 2.0).unwrap() - 0.5).abs() < 1e-12, "{a}");
        }
        for (a, b) in [(0.25, 1.0), (0.3, 0.7)] {
            let h1 = tile(a, b).h(a / 2.0, b / 2.0).unwrap();
            let h2 = tile(b, a).h(b / 2.0, a / 2.0).unwrap();
            assert!((h1 + h2 - 1.0).abs() < 1e-12);
            assert!(h1 > 0.5, "narrow rectangles favour the vertical sides");
        }
    }

    #[test]
    fn boundary_limits() {
        let t = tile(1.0, 0.5);
        assert!(t.h(1e-9, 0.25).unwrap() > 1.0 - 1e-6);
        assert!(t.h(0.5, 1e-9).unwrap() < 1e-6);
        assert!(t.h(0.0, 0.25).is_err());
        assert!(t.h(0.5, 0.6).is_err());
    }

    #[test]
    fn image_sum_matches_fourier_sum_in_the_bulk() {
        for (a, b) in [(1.0, 1.0), (1.0, 0.25), (0.25, 1.0)] {
            for &(fx, fy) in &[(0.3, 0.4), (0.5, 0.2), (0.7, 0.9)] {
                let (x, y) = (fx * a, fy * b);
                let (img, _) = image_series(a, b, x, y, 1e-17);
                let (fou, _) = fourier_series(a, b, x, y, 1e-17, 1_000_000);
                assert!((img.value - fou).abs() < 1e-10, "{a} {b} {x} {y}: {} {}", img.value, fou);
            }
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let t = tile(0.3, 0.5);
        let (x, y, d) = (0.07, 0.41, 1e-6);
        let j = t.jet(x, y).unwrap();
        let gx = (t.h(x + d, y).unwrap() - t.h(x - d, y).unwrap()) / (2.0 * d);
        let gy = (t.h(x, y + d).unwrap() - t.h(x, y - d).unwrap()) / (2.0 * d);
        assert!((j.dx - gx).abs() < 1e-6 && (j.dy - gy).abs() < 1e-6, "{j:?} {gx} {gy}");
    }

    #[test]
    fn zeta_identities() {
        for kappa in [0.0, 0.25, 1.0] {
            assert_eq!(zeta(0.5, kappa), 0.5);
            for i in 1..10 {
                let x = i as f64 / 10.0;
                assert!((zeta(x, kappa) + zeta(1.0 - x, kappa) - 1.0).abs() < 1e-12);
                assert!((zeta_inverse(zeta(x, kappa), kappa) - x).abs() < 1e-12);
            }
        }
        let direct = |x: f64| 2.0 / PI * ((PI * x / 2.0).tan().sqrt()).atan();
        for x in [0.01, 0.2, 0.6, 0.99] {
            assert!((zeta(x, 0.0) - direct(x)).abs() < 1e-14);
        }
        let d = 1e-6;
        let num = (zeta(0.3 + d, 0.5) - zeta(0.3 - d, 0.5)) / (2.0 * d);
        assert!((num - zeta_derivative(0.3, 0.5)).abs() < 1e-7);
    }
}
