//! A rectangle's tile: the graph `tau = zeta_kappa(h)` over its interior.

use crate::error::Result;
use crate::surface::{Corner, Rectangle};
use crate::tile::embed::{embed, EmbeddedPoint};
use crate::tile::harmonic::{zeta, zeta_derivative, HarmonicTile};

#[derive(Clone, Copy, Debug)]
pub struct Tile {
    pub rect: Rectangle,
    pub harmonic: HarmonicTile,
    pub kappa: f64,
}

/// Height with its partial derivatives in local coordinates (turns).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightJet {
    pub h: f64,
    pub tau: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Tile {
    pub fn new(rect: Rectangle, kappa: f64, term_tol: f64) -> Self {
        Tile { rect, harmonic: HarmonicTile::new(&rect, term_tol), kappa }
    }

    pub fn spans(&self) -> (f64, f64) {
        (self.harmonic.a, self.harmonic.b)
    }

    pub fn height(&self, x: f64, y: f64) -> Result<f64> {
        Ok(zeta(self.harmonic.h(x, y)?, self.kappa))
    }

    pub fn height_jet(&self, x: f64, y: f64) -> Result<HeightJet> {
        let j = self.harmonic.jet(x, y)?;
        let d = zeta_derivative(j.value, self.kappa);
        Ok(HeightJet { h: j.value, tau: zeta(j.value, self.kappa), dx: d * j.dx, dy: d * j.dy })
    }

    /// Torus coordinates (turns) of a local point.
    pub fn torus(&self, x: f64, y: f64) -> (f64, f64) {
        ((self.harmonic.origin.0 + x).rem_euclid(1.0), (self.harmonic.origin.1 + y).rem_euclid(1.0))
    }

    pub fn point(&self, x: f64, y: f64) -> Result<EmbeddedPoint> {
        let tau = self.height(x, y)?;
        let (t, p) = self.torus(x, y);
        Ok(embed(t, p, tau))
    }

    /// Local position of a corner, and the unit vectors along the two sides
    /// leaving it, pointing into the rectangle: first along phi = const
    /// (where `h -> 0`), then along theta = const (where `h -> 1`).
    pub fn corner_frame(&self, c: Corner) -> ((f64, f64), (f64, f64), (f64, f64)) {
        let (a, b) = self.spans();
        let (x, sx) = if c.at_theta_start() { (0.0, 1.0) } else { (a, -1.0) };
        let (y, sy) = if c.at_phi_start() { (0.0, 1.0) } else { (b, -1.0) };
        ((x, y), (sx, 0.0), (0.0, sy))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_matches_differences() {
        let r = Rectangle::from_ratios([(3, 4), (1, 8)], [(1, 5), (1, 2)]).unwrap();
        let t = Tile::new(r, 0.5, 1e-16);
        let (x, y, d) = (0.1, 0.2, 1e-6);
        let j = t.height_jet(x, y).unwrap();
        let gx = (t.height(x + d, y).unwrap() - t.height(x - d, y).unwrap()) / (2.0 * d);
        let gy = (t.height(x, y + d).unwrap() - t.height(x, y - d).unwrap()) / (2.0 * d);
        assert!((j.dx - gx).abs() < 1e-6 && (j.dy - gy).abs() < 1e-6);
        let (th, ph) = t.torus(0.3, 0.1);
        assert!((th - 0.05).abs() < 1e-15 && (ph - 0.3).abs() < 1e-15);
    }
}
