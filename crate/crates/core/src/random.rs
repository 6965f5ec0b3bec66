//! Seeded generators for link and surface diagrams (ChaCha8).

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::link::LinkDiagram;
use crate::surface::{Corner, Rectangle, SurfaceDiagram};
use crate::torus::{CircleCoord, TorusPoint};

/// Odd prime denominator: no two grid values are exactly 1/2 apart.
pub const GRID: i128 = 997;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn distinct_values(rng: &mut impl Rng, k: usize) -> Vec<CircleCoord> {
    let mut v: Vec<i128> = rand::seq::index::sample(rng, GRID as usize, k).into_iter().map(|x| x as i128).collect();
    v.sort();
    v.into_iter().map(|x| CircleCoord::from_ratio(x, GRID)).collect()
}

/// A random grid diagram with `2m` vertices: two permutations with no common value.
pub fn random_link_diagram_with(rng: &mut impl Rng, m: usize) -> LinkDiagram {
    assert!(m >= 2);
    let (sigma, pi) = loop {
        let mut s: Vec<usize> = (0..m).collect();
        let mut p: Vec<usize> = (0..m).collect();
        s.shuffle(rng);
        p.shuffle(rng);
        if s.iter().zip(&p).all(|(a, b)| a != b) {
            break (s, p);
        }
    };
    let ts = distinct_values(rng, m);
    let ps = distinct_values(rng, m);
    let mut v = Vec::with_capacity(2 * m);
    for i in 0..m {
        v.push(TorusPoint::new(ts[i], ps[sigma[i]]));
        v.push(TorusPoint::new(ts[i], ps[pi[i]]));
    }
    LinkDiagram::new(v).expect("two permutations give a valid diagram")
}

/// Seeded diagram with between `min_vertices` and `max_vertices` vertices.
pub fn random_link_diagram(seed: u64, min_vertices: usize, max_vertices: usize) -> LinkDiagram {
    let mut r = rng(seed);
    let m = r.gen_range(min_vertices.max(4) / 2..=max_vertices / 2);
    random_link_diagram_with(&mut r, m)
}

/// Result of the surface generator; `notice` is set when the budget was not reached.
#[derive(Clone, Debug)]
pub struct GeneratedSurface {
    pub diagram: SurfaceDiagram,
    pub notice: Option<String>,
}

/// Rejection sampling of compatible rectangles on a fresh rational grid.
///
/// Most proposals attach a new rectangle at a corner of an existing
/// one (opposite quadrant), so that shared vertices are common.
pub fn random_surface_diagram(seed: u64, budget: usize) -> GeneratedSurface {
    assert!(budget >= 1);
    let mut rng = rng(seed);
    let grid = 4 * budget + 8;
    let vals = distinct_values(&mut rng, grid);
    let mut rects: Vec<Rectangle> = Vec::new();
    let mut attempts = 0;
    while rects.len() < budget && attempts < 400 * budget {
        attempts += 1;
        let cand = if !rects.is_empty() && rng.gen_bool(0.6) {
            let base = rects[rng.gen_range(0..rects.len())];
            let c = Corner::ALL[rng.gen_range(0..4)];
            let v = base.corner(c);
            let (ti, pi) = (vals.binary_search(&v.theta).unwrap(), vals.binary_search(&v.phi).unwrap());
            let (dt, dp) = (rng.gen_range(1..grid / 3), rng.gen_range(1..grid / 3));
            // The new rectangle sits in the quadrant opposite to `base` at v.
            let (t1, t2) = if c.at_theta_start() {
                (vals[(ti + grid - dt) % grid], v.theta)
            } else {
                (v.theta, vals[(ti + dt) % grid])
            };
            let (p1, p2) = if c.at_phi_start() {
                (vals[(pi + grid - dp) % grid], v.phi)
            } else {
                (v.phi, vals[(pi + dp) % grid])
            };
            match Rectangle::new(t1, t2, p1, p2) {
                Ok(r) => r,
                Err(_) => continue,
            }
        } else {
            let i = rng.gen_range(0..grid);
            let j = rng.gen_range(0..grid);
            let a = vals[i];
            let b = vals[(i + rng.gen_range(1..grid / 2)) % grid];
            let c = vals[j];
            let d = vals[(j + rng.gen_range(1..grid / 2)) % grid];
            Rectangle::new(a, b, c, d).expect("distinct grid values")
        };
        let mut trial = rects.clone();
        trial.push(cand);
        if SurfaceDiagram::new(trial.clone()).is_ok() {
            rects = trial;
        }
    }
    let notice = (rects.len() < budget).then(|| format!("budget {budget} not reached, returning {} rectangles", rects.len()));
    GeneratedSurface { diagram: SurfaceDiagram::new(rects).expect("kept only valid diagrams"), notice }
}
