//! Independent reference computations used by the tests and the self-test:
//! a finite-difference Laplace solver, the corner-count formula for
//! Thurston–Bennequin numbers, and the Euler characteristic of a mesh.

use rayon::prelude::*;

use crate::error::Result;
use crate::link::{LinkDiagram, Orientation};
use crate::linking::{writhe, Cut};
use crate::surface::SurfaceDiagram;
use crate::tile::mesh::surface_mesh;

/// Finite-difference solution of the tile problem on `[0, A] x [0, B]`
/// (integer aspect, square cells of size `1/n`), value 1 on `x = 0, A`.
pub struct FdGrid {
    pub nx: usize,
    pub ny: usize,
    pub u: Vec<f64>,
    pub sweeps: usize,
}

impl FdGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.u[i * (self.ny + 1) + j]
    }
}

/// Red-black SOR until the largest scaled residual is below `tol`.
pub fn sor_solve(nx: usize, ny: usize, tol: f64, max_sweeps: usize) -> FdGrid {
    let w = ny + 1;
    let mut u = vec![0.0; (nx + 1) * w];
    for j in 1..ny {
        u[j] = 1.0;
        u[nx * w + j] = 1.0;
    }
    let rho = ((std::f64::consts::PI / nx as f64).cos() + (std::f64::consts::PI / ny as f64).cos()) / 2.0;
    let omega = 2.0 / (1.0 + (1.0 - rho * rho).sqrt());
    let mut sweeps = 0;
    loop {
        for colour in 0..2 {
            for i in 1..nx {
                let start = 1 + (i + 1 + colour) % 2;
                let mut j = start;
                while j < ny {
                    let k = i * w + j;
                    let gs = 0.25 * (u[k - w] + u[k + w] + u[k - 1] + u[k + 1]);
                    u[k] += omega * (gs - u[k]);
                    j += 2;
                }
            }
        }
        sweeps += 1;
        if sweeps % 10 == 0 || sweeps >= max_sweeps {
            let mut res = 0.0f64;
            for i in 1..nx {
                for j in 1..ny {
                    let k = i * w + j;
                    res = res.max((0.25 * (u[k - w] + u[k + w] + u[k - 1] + u[k + 1]) - u[k]).abs());
                }
            }
            if res <= tol || sweeps >= max_sweeps {
                break;
            }
        }
    }
    FdGrid { nx, ny, u, sweeps }
}

/// Richardson-extrapolated finite-difference values on the `(p-1) x (p-1)`
/// interior probe lattice `(I A/p, J B/p)`, from grids with `2p` and `4p`
/// cells per unit length. Row-major in `I`.
pub fn fd_probe_values(aspect: (usize, usize), p: usize, tol: f64) -> Vec<f64> {
    let (a, b) = aspect;
    let grids: Vec<FdGrid> = [2usize, 4].par_iter().map(|&m| sor_solve(a * p * m, b * p * m, tol, 200_000)).collect();
    let mut out = Vec::with_capacity((p - 1) * (p - 1));
    for i in 1..p {
        for j in 1..p {
            let coarse = grids[0].at(i * 2 * a, j * 2 * b);
            let fine = grids[1].at(i * 4 * a, j * 4 * b);
            out.push((4.0 * fine - coarse) / 3.0);
        }
    }
    out
}

/// Counts of vertices by the position of their neighbours, relative to a
/// cut: `[sw, nw, se, ne]`, where a vertex is `s` when its vertical
/// neighbour lies above it and `w` when its horizontal neighbour lies to
/// its right.
pub fn corner_counts(r: &LinkDiagram, cut: Cut) -> [i64; 4] {
    let mut c = [0i64; 4];
    for (i, p) in r.vertices().iter().enumerate() {
        let ut = cut.theta.forward_to(p.theta);
        let up = cut.phi.forward_to(p.phi);
        let h = r.vertex(r.horizontal_partner(i));
        let v = r.vertex(r.vertical_partner(i));
        let right = cut.theta.forward_to(h.theta) > ut;
        let up_n = cut.phi.forward_to(v.phi) > up;
        let k = match (up_n, right) {
            (true, true) => 0,
            (false, true) => 1,
            (true, false) => 2,
            (false, false) => 3,
        };
        c[k] += 1;
    }
    c
}

/// `tb+ = w - (#nw + #se)/2` and `tb- = -w - (#ne + #sw)/2`.
pub fn tb_from_corners(r: &LinkDiagram, o: &Orientation, cut: Cut) -> Result<(i64, i64)> {
    let w = writhe(r, o, cut)?;
    let [sw, nw, se, ne] = corner_counts(r, cut);
    Ok((w - (nw + se) / 2, -w - (ne + sw) / 2))
}

/// Undivided 5-point Laplacian `sum of 4 neighbours - 4 f` at spacing `d`.
pub fn laplacian5(f: &impl Fn(f64, f64) -> f64, x: f64, y: f64, d: f64) -> f64 {
    f(x + d, y) + f(x - d, y) + f(x, y + d) + f(x, y - d) - 4.0 * f(x, y)
}

/// Undivided compact 9-point Laplacian `(4 edges + diagonals - 20 f) / 6`,
/// fourth-order accurate on harmonic functions.
pub fn laplacian9(f: &impl Fn(f64, f64) -> f64, x: f64, y: f64, d: f64) -> f64 {
    let edges = f(x + d, y) + f(x - d, y) + f(x, y + d) + f(x, y - d);
    let diag = f(x + d, y + d) + f(x - d, y + d) + f(x + d, y - d) + f(x - d, y - d);
    (4.0 * edges + diag - 20.0 * f(x, y)) / 6.0
}

/// Euler characteristic of the triangulated surface at a low resolution.
pub fn mesh_euler_characteristic(d: &SurfaceDiagram) -> Result<i64> {
    Ok(surface_mesh(d, 0.0, 8, 1e-16)?.euler_characteristic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tile::HarmonicTile;

    #[test]
    fn sor_matches_series_on_a_coarse_grid() {
        let g = sor_solve(32, 32, 1e-12, 100_000);
        let t = HarmonicTile::with_spans(1.0, 1.0, 1e-16);
        let err = (t.h(0.5, 0.25).unwrap() - g.at(16, 8)).abs();
        assert!(err < 5e-3, "{err}");
        assert!((g.at(16, 16) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn corner_formula_on_the_minimal_square() {
        let r = crate::fixtures::minimal_square();
        let o = r.canonical_orientation();
        assert_eq!(tb_from_corners(&r, &o, Cut::default_for(&r)).unwrap(), (-1, -1));
    }
}
