//! Torus projection of the characteristic foliation of a tile: the line
//! field `cos^p(w) dphi + sin^p(w) dtheta = 0`, `w = pi h/2`, `p = 2/(2+kappa)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tile::geometry::Tile;

/// `dphi/dtheta` of the leaf through a local point.
pub fn slope(tile: &Tile, x: f64, y: f64) -> Result<f64> {
    let w = PI * tile.harmonic.h(x, y)? / 2.0;
    let p = 2.0 / (2.0 + tile.kappa);
    Ok(-(w.sin().powf(p) / w.cos().powf(p)))
}

fn direction(tile: &Tile, x: f64, y: f64) -> Result<(f64, f64)> {
    let w = PI * tile.harmonic.h(x, y)? / 2.0;
    let p = 2.0 / (2.0 + tile.kappa);
    let (dx, dy) = (w.cos().powf(p), -w.sin().powf(p));
    let n = dx.hypot(dy);
    Ok((dx / n, dy / n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Streamline {
    /// Local coordinates, in order of increasing theta.
    pub points: Vec<(f64, f64)>,
    pub slopes: Vec<f64>,
    /// An integration step left the rectangle before reaching the margin.
    pub truncated: bool,
}

impl Streamline {
    /// Slopes of the polyline segments.
    pub fn segment_slopes(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect()
    }
}

/// RK4 from `seed` in both directions until within `margin` (relative to the
/// smaller span) of the boundary, with step `step` (relative as well).
pub fn streamline(tile: &Tile, seed: (f64, f64), step: f64, margin: f64, max_steps: usize) -> Result<Streamline> {
    let (a, b) = tile.spans();
    let s = a.min(b);
    let (hs, m) = (step * s, margin * s);
    let inside = |x: f64, y: f64| x > m && x < a - m && y > m && y < b - m;
    let strictly = |x: f64, y: f64| x > 0.0 && x < a && y > 0.0 && y < b;
    let mut truncated = false;
    let mut halves: Vec<Vec<(f64, f64)>> = Vec::new();
    for sign in [1.0, -1.0] {
        let mut pts = vec![seed];
        let (mut x, mut y) = seed;
        for _ in 0..max_steps {
            let f = |x: f64, y: f64| -> Option<(f64, f64)> {
                if !strictly(x, y) {
                    return None;
                }
                direction(tile, x, y).ok().map(|(u, v)| (sign * u, sign * v))
            };
            let Some(k1) = f(x, y) else { break };
            let Some(k2) = f(x + hs / 2.0 * k1.0, y + hs / 2.0 * k1.1) else { truncated = true; break };
            let Some(k3) = f(x + hs / 2.0 * k2.0, y + hs / 2.0 * k2.1) else { truncated = true; break };
            let Some(k4) = f(x + hs * k3.0, y + hs * k3.1) else { truncated = true; break };
            let nx = x + hs / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            let ny = y + hs / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            if !strictly(nx, ny) {
                truncated = true;
                break;
            }
            x = nx;
            y = ny;
            pts.push((x, y));
            if !inside(x, y) {
                break;
            }
        }
        halves.push(pts);
    }
    let mut points: Vec<(f64, f64)> = halves[1].iter().rev().copied().collect();
    points.extend_from_slice(&halves[0][1..]);
    let slopes = points.iter().map(|&(x, y)| slope(tile, x, y)).collect::<Result<_>>()?;
    Ok(Streamline { points, slopes, truncated })
}

/// Streamlines from a `k x k` lattice of seeds.
pub fn foliation_streamlines(tile: &Tile, k: usize) -> Result<Vec<Streamline>> {
    let (a, b) = tile.spans();
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let seed = (a * (i as f64 + 0.5) / k as f64, b * (j as f64 + 0.5) / k as f64);
            out.push(streamline(tile, seed, 5e-3, 1e-3, 4000)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Rectangle;

    fn tile(kappa: f64) -> Tile {
        Tile::new(Rectangle::from_ratios([(0, 1), (1, 4)], [(1, 2), (3, 4)]).unwrap(), kappa, 1e-16)
    }

    #[test]
    fn centre_slope_of_a_square() {
        assert!((slope(&tile(0.0), 0.125, 0.125).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn leaves_have_negative_slope() {
        for kappa in [0.0, 0.5] {
            for s in foliation_streamlines(&tile(kappa), 4).unwrap() {
                assert!(s.points.len() > 10);
                assert!(s.slopes.iter().all(|&v| v < 0.0));
                assert!(s.segment_slopes().iter().all(|&v| v < 0.0));
            }
        }
    }

    #[test]
    fn flat_near_horizontal_sides() {
        let t = tile(0.0);
        for i in 1..10 {
            let x = 0.25 * i as f64 / 10.0;
            assert!(slope(&t, x, 1e-3).unwrap().abs() < 0.05);
            assert!(slope(&t, x, 0.25 - 1e-3).unwrap().abs() < 0.05);
        }
    }
}
