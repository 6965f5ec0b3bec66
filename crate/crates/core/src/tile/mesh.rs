//! Triangle meshes of tiles and surfaces, and OBJ export.
//!
//! Each tile is a graded grid over the open rectangle. The sides of the
//! rectangle collapse to binding points (`tau = 0` over horizontal sides,
//! `tau = 1` over vertical ones) and the corners open up into the corner
//! arcs, sampled at `tau = k/M`. Arc and binding vertices are keyed by
//! exact coordinates, so tiles meeting along an arc share its vertices.

use std::collections::HashMap;
use std::fmt::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::surface::{BindingPoint, Corner, SurfaceDiagram};
use crate::tile::embed::{embed_r4, norm, sub, Stereographic, R4};
use crate::tile::geometry::Tile;
use crate::torus::{CircleCoord, Rational, TorusPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKey {
    Binding(BindingPoint),
    Arc(TorusPoint, u32),
    Interior(u32, u32, u32),
}

/// Mesh of one tile, with faces in global vertex indices.
#[derive(Clone, Debug)]
pub struct TileMesh {
    pub faces: Vec<[usize; 3]>,
    /// Corner arcs in `Corner::ALL` order, from `tau = 0` to `tau = 1`.
    pub arcs: [Vec<R4>; 4],
}

#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    pub keys: Vec<VertexKey>,
    pub r4: Vec<R4>,
    pub tiles: Vec<TileMesh>,
}

/// Grid parameter graded cubically towards both ends.
pub fn graded(u: f64) -> f64 {
    let (p, q) = (u * u * u, (1.0 - u) * (1.0 - u) * (1.0 - u));
    p / (p + q)
}

fn binding_r4(b: BindingPoint) -> R4 {
    match b {
        BindingPoint::Theta(t) => embed_r4(t.to_f64(), 0.0, 1.0),
        BindingPoint::Phi(p) => embed_r4(0.0, p.to_f64(), 0.0),
    }
}

fn arc_key(v: TorusPoint, k: usize, m: usize) -> VertexKey {
    if k == 0 {
        VertexKey::Binding(BindingPoint::Phi(v.phi))
    } else if k == m {
        VertexKey::Binding(BindingPoint::Theta(v.theta))
    } else {
        VertexKey::Arc(v, k as u32)
    }
}

/// Sampled corner arc over `v`, `tau = k/m` for `k = 0..=m`.
pub fn corner_arc(v: TorusPoint, m: usize) -> Vec<R4> {
    (0..=m)
        .map(|k| match arc_key(v, k, m) {
            VertexKey::Binding(b) => binding_r4(b),
            _ => embed_r4(v.theta.to_f64(), v.phi.to_f64(), k as f64 / m as f64),
        })
        .collect()
}

struct LocalTile {
    verts: Vec<(VertexKey, R4)>,
    faces: Vec<[usize; 3]>,
    arcs: [Vec<R4>; 4],
}

fn local_tile(index: usize, tile: &Tile, n: usize) -> Result<LocalTile> {
    let m = n;
    let rect = tile.rect;
    let (a, b) = tile.spans();
    let mut verts: Vec<(VertexKey, R4)> = Vec::new();
    let mut lookup: HashMap<VertexKey, usize> = HashMap::new();
    let mut add = |key: VertexKey, x: R4, verts: &mut Vec<(VertexKey, R4)>| -> usize {
        *lookup.entry(key).or_insert_with(|| {
            verts.push((key, x));
            verts.len() - 1
        })
    };
    let mut grid = vec![vec![usize::MAX; n]; n];
    for (i, row) in grid.iter_mut().enumerate().take(n).skip(1) {
        for (j, slot) in row.iter_mut().enumerate().take(n).skip(1) {
            let (x, y) = (a * graded(i as f64 / n as f64), b * graded(j as f64 / n as f64));
            let p = tile.point(x, y)?;
            *slot = add(VertexKey::Interior(index as u32, i as u32, j as u32), p.r4, &mut verts);
        }
    }
    let bind = |b: BindingPoint, verts: &mut Vec<(VertexKey, R4)>, add: &mut dyn FnMut(VertexKey, R4, &mut Vec<(VertexKey, R4)>) -> usize| {
        add(VertexKey::Binding(b), binding_r4(b), verts)
    };
    let t1 = bind(BindingPoint::Theta(rect.theta.start), &mut verts, &mut add);
    let t2 = bind(BindingPoint::Theta(rect.theta.end), &mut verts, &mut add);
    let p1 = bind(BindingPoint::Phi(rect.phi.start), &mut verts, &mut add);
    let p2 = bind(BindingPoint::Phi(rect.phi.end), &mut verts, &mut add);
    let mut faces = Vec::new();
    let last = n - 1;
    for i in 1..last {
        for j in 1..last {
            let (q00, q10, q01, q11) = (grid[i][j], grid[i + 1][j], grid[i][j + 1], grid[i + 1][j + 1]);
            faces.push([q00, q10, q11]);
            faces.push([q00, q11, q01]);
        }
    }
    for j in 1..last {
        faces.push([t1, grid[1][j], grid[1][j + 1]]);
        faces.push([t2, grid[last][j + 1], grid[last][j]]);
    }
    for i in 1..last {
        faces.push([p1, grid[i + 1][1], grid[i][1]]);
        faces.push([p2, grid[i][last], grid[i + 1][last]]);
    }
    let mut arcs: [Vec<R4>; 4] = Default::default();
    for (slot, c) in Corner::ALL.into_iter().enumerate() {
        let v = rect.corner(c);
        let samples = corner_arc(v, m);
        let ids: Vec<usize> = samples.iter().enumerate().map(|(k, x)| add(arc_key(v, k, m), *x, &mut verts)).collect();
        let node = grid[if c.at_theta_start() { 1 } else { last }][if c.at_phi_start() { 1 } else { last }];
        for k in 0..m {
            faces.push(if c.is_diagonal() { [node, ids[k + 1], ids[k]] } else { [node, ids[k], ids[k + 1]] });
        }
        arcs[slot] = samples;
    }
    Ok(LocalTile { verts, faces, arcs })
}

/// Mesh of all tiles of a surface diagram, `resolution >= 8`.
pub fn surface_mesh(d: &SurfaceDiagram, kappa: f64, resolution: usize, term_tol: f64) -> Result<SurfaceMesh> {
    if resolution < 8 {
        return Err(Error::Validation(format!("resolution {resolution} is below the minimum of 8")));
    }
    if kappa.is_nan() || kappa < 0.0 {
        return Err(Error::Validation(format!("kappa must be >= 0, got {kappa}")));
    }
    let locals: Vec<LocalTile> = d
        .rectangles()
        .par_iter()
        .enumerate()
        .map(|(i, r)| local_tile(i, &Tile::new(*r, kappa, term_tol), resolution))
        .collect::<Result<_>>()?;
    let mut index: HashMap<VertexKey, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut r4 = Vec::new();
    let mut tiles = Vec::new();
    for lt in locals {
        let map: Vec<usize> = lt
            .verts
            .iter()
            .map(|(k, x)| {
                *index.entry(*k).or_insert_with(|| {
                    keys.push(*k);
                    r4.push(*x);
                    keys.len() - 1
                })
            })
            .collect();
        tiles.push(TileMesh { faces: lt.faces.iter().map(|f| f.map(|i| map[i])).collect(), arcs: lt.arcs });
    }
    Ok(SurfaceMesh { keys, r4, tiles })
}

impl SurfaceMesh {
    pub fn vertex_count(&self) -> usize {
        self.r4.len()
    }

    pub fn face_count(&self) -> usize {
        self.tiles.iter().map(|t| t.faces.len()).sum()
    }

    pub fn edge_count(&self) -> usize {
        let mut edges = std::collections::HashSet::new();
        for t in &self.tiles {
            for f in &t.faces {
                for k in 0..3 {
                    let (u, v) = (f[k], f[(k + 1) % 3]);
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
        edges.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn max_norm_defect(&self) -> f64 {
        self.r4.iter().map(|x| (norm(x) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Vertices on the circle `tau = 0` (`phi_points`) and `tau = 1`.
    pub fn binding_counts(&self) -> (usize, usize) {
        let phi = self.keys.iter().filter(|k| matches!(k, VertexKey::Binding(BindingPoint::Phi(_)))).count();
        let theta = self.keys.iter().filter(|k| matches!(k, VertexKey::Binding(BindingPoint::Theta(_)))).count();
        (phi, theta)
    }

    pub fn min_distance_to(&self, p: &R4) -> f64 {
        self.r4.iter().map(|x| norm(&sub(x, p))).fold(f64::INFINITY, f64::min)
    }

    /// OBJ document: `v x y z` lines, then one `o tile_<n>` object per tile.
    pub fn to_obj(&self, proj: &Stereographic, clearance: f64) -> Result<String> {
        let mut s = String::new();
        for x in &self.r4 {
            let y = proj.project(x, clearance)?;
            writeln!(s, "v {} {} {}", y[0], y[1], y[2]).unwrap();
        }
        for (n, t) in self.tiles.iter().enumerate() {
            writeln!(s, "o tile_{n}").unwrap();
            for f in &t.faces {
                writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
            }
        }
        Ok(s)
    }
}

/// Default pole: the point of `tau = 0` at the middle of the widest gap
/// between the phi values used by `d`, preferring gaps not covered by any
/// rectangle.
pub fn default_pole(d: &SurfaceDiagram) -> R4 {
    let mut phis: Vec<CircleCoord> = d.rectangles().iter().flat_map(|r| [r.phi.start, r.phi.end]).collect();
    phis.sort();
    phis.dedup();
    if phis.is_empty() {
        return embed_r4(0.0, 0.0, 0.0);
    }
    let mut best: Option<(bool, Rational, CircleCoord)> = None;
    for i in 0..phis.len() {
        let (lo, hi) = (phis[i], phis[(i + 1) % phis.len()]);
        let gap = if phis.len() == 1 { Rational::from_integer(1) } else { lo.forward_to(hi) };
        let mid = lo.shifted(gap / 2);
        let uncovered = !d.rectangles().iter().any(|r| r.phi.contains(mid));
        if best.as_ref().map_or(true, |(u, g, _)| (uncovered, gap) > (*u, *g)) {
            best = Some((uncovered, gap, mid));
        }
    }
    embed_r4(0.0, best.unwrap().2.to_f64(), 0.0)
}

/// Pole given by its phi coordinate (turns) on the circle `tau = 0`.
pub fn pole_at_phi(phi: f64) -> R4 {
    embed_r4(0.0, phi, 0.0)
}

/// Check that no vertex is within `clearance` of `pole`.
pub fn check_pole(mesh: &SurfaceMesh, pole: &R4, clearance: f64) -> Result<()> {
    let d = mesh.min_distance_to(pole);
    if d <= clearance {
        return Err(Error::Numeric(format!("projection pole lies on the surface (distance {d:e}); choose another pole")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_rectangle() {
        let m = surface_mesh(&fixtures::single_rect(), 0.0, 32, 1e-16).unwrap();
        assert!(m.max_norm_defect() <= 1e-12);
        assert_eq!(m.binding_counts(), (2, 2));
        assert_eq!(m.euler_characteristic(), 1);
        assert_eq!(m.tiles[0].faces.len(), 2 * 30 * 30 + 4 * 30 + 4 * 32);
    }

    #[test]
    fn euler_characteristic_of_fixtures() {
        for (d, chi) in [(fixtures::sphere_pair(), 2), (fixtures::chain(4), 0), (fixtures::chain(3), 0), (fixtures::crossing_pair(), 2)] {
            assert_eq!(surface_mesh(&d, 0.25, 8, 1e-16).unwrap().euler_characteristic(), chi);
        }
    }

    #[test]
    fn shared_corner_arc() {
        let d = fixtures::corner_pair();
        let m = surface_mesh(&d, 0.0, 16, 1e-16).unwrap();
        let ci = Corner::ALL.iter().position(|&c| c == Corner::TR).unwrap();
        let cj = Corner::ALL.iter().position(|&c| c == Corner::BL).unwrap();
        assert_eq!(m.tiles[0].arcs[ci], m.tiles[1].arcs[cj]);
    }

    #[test]
    fn pole_and_obj() {
        let d = fixtures::chain(4);
        let m = surface_mesh(&d, 0.0, 8, 1e-16).unwrap();
        let pole = default_pole(&d);
        check_pole(&m, &pole, 1e-6).unwrap();
        let obj = m.to_obj(&Stereographic::new(pole).unwrap(), 1e-6).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("o tile_")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), m.vertex_count());
        let bad = m.r4[0];
        assert!(check_pole(&m, &bad, 1e-6).is_err());
    }
}
