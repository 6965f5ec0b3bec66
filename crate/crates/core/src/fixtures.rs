//! Named diagrams used by tests, the self-test and the `fixtures` command.

use crate::link::LinkDiagram;
use crate::moves::{apply_exchange, canonical_form, exchange_candidates, stabilization_sites, stabilize};
use crate::surface::{make_chain_annulus, Rectangle, SurfaceDiagram};
use crate::torus::TorusPoint;

fn square(lo: (i128, i128), hi: (i128, i128)) -> Vec<TorusPoint> {
    vec![
        TorusPoint::from_ratios(lo, lo),
        TorusPoint::from_ratios(lo, hi),
        TorusPoint::from_ratios(hi, lo),
        TorusPoint::from_ratios(hi, hi),
    ]
}

/// `{(0,0), (0,1/2), (1/2,0), (1/2,1/2)}`; not generic (edges of length 1/2).
pub fn minimal_square() -> LinkDiagram {
    LinkDiagram::new(square((0, 1), (1, 2))).unwrap()
}

/// The minimal square on `{0, 1/3}`, generic.
pub fn minimal_square_generic() -> LinkDiagram {
    LinkDiagram::new(square((0, 1), (1, 3))).unwrap()
}

/// Two interleaved squares on the lines `k/5`.
pub fn hopf_pair() -> LinkDiagram {
    let mut v = square((0, 5), (2, 5));
    v.extend(square((1, 5), (3, 5)));
    LinkDiagram::new(v).unwrap()
}

/// Two squares that can be separated.
pub fn unlinked_pair() -> LinkDiagram {
    let mut v = square((0, 5), (1, 5));
    v.extend(square((2, 5), (3, 5)));
    LinkDiagram::new(v).unwrap()
}

/// Grid of size 5 with markings in column `i` at rows `i` and `i+2`.
pub fn trefoil_staircase() -> LinkDiagram {
    let c = |i: i128| (2 * i + 1, 11);
    let mut v = Vec::new();
    for i in 0..5 {
        v.push(TorusPoint::from_ratios(c(i), c(i)));
        v.push(TorusPoint::from_ratios(c(i), c((i + 2) % 5)));
    }
    LinkDiagram::new(v).unwrap()
}

/// First diagram, in a fixed search order, obtained from the generic square
/// by three stabilizations that admits an exchange move changing its
/// canonical form. No 8-vertex knot diagram has such a move.
pub fn unknot_with_exchange() -> LinkDiagram {
    fn search(r: &LinkDiagram, depth: usize) -> Option<LinkDiagram> {
        if depth == 0 {
            let cf = canonical_form(r);
            let moves = exchange_candidates(r);
            return moves.iter().any(|e| canonical_form(&apply_exchange(r, e).unwrap()) != cf).then(|| r.clone());
        }
        stabilization_sites(r).iter().find_map(|s| search(&stabilize(r, s).unwrap(), depth - 1))
    }
    search(&minimal_square_generic(), 3).expect("some triple stabilization of the square admits an exchange")
}

pub fn single_rect() -> SurfaceDiagram {
    SurfaceDiagram::new(vec![Rectangle::from_ratios([(0, 1), (1, 3)], [(0, 1), (1, 3)]).unwrap()]).unwrap()
}

/// `[0,1/2]^2` and its complement `[1/2,0]^2`; a sphere.
pub fn sphere_pair() -> SurfaceDiagram {
    SurfaceDiagram::new(vec![
        Rectangle::from_ratios([(0, 1), (1, 2)], [(0, 1), (1, 2)]).unwrap(),
        Rectangle::from_ratios([(1, 2), (0, 1)], [(1, 2), (0, 1)]).unwrap(),
    ])
    .unwrap()
}

pub fn chain(k: usize) -> SurfaceDiagram {
    make_chain_annulus(k, None).unwrap()
}

/// Nested spans: the first rectangle passes over the second.
pub fn crossing_pair() -> SurfaceDiagram {
    SurfaceDiagram::new(vec![
        Rectangle::from_ratios([(1, 4), (3, 8)], [(0, 1), (1, 2)]).unwrap(),
        Rectangle::from_ratios([(0, 1), (1, 2)], [(1, 8), (3, 8)]).unwrap(),
    ])
    .unwrap()
}

/// Two rectangles sharing the corner `(1/8, 1/8)`.
pub fn corner_pair() -> SurfaceDiagram {
    SurfaceDiagram::new(vec![
        Rectangle::from_ratios([(0, 1), (1, 8)], [(0, 1), (1, 8)]).unwrap(),
        Rectangle::from_ratios([(1, 8), (2, 8)], [(1, 8), (2, 8)]).unwrap(),
    ])
    .unwrap()
}

pub fn link_fixtures() -> Vec<(&'static str, LinkDiagram)> {
    vec![
        ("minimal_square", minimal_square()),
        ("minimal_square_generic", minimal_square_generic()),
        ("hopf_pair", hopf_pair()),
        ("unlinked_pair", unlinked_pair()),
        ("trefoil_staircase", trefoil_staircase()),
        ("unknot_with_exchange", unknot_with_exchange()),
    ]
}

pub fn surface_fixtures() -> Vec<(&'static str, SurfaceDiagram)> {
    vec![
        ("single_rect", single_rect()),
        ("sphere_pair", sphere_pair()),
        ("chain3", chain(3)),
        ("chain4", chain(4)),
        ("chain6", chain(6)),
        ("crossing_pair", crossing_pair()),
        ("corner_pair", corner_pair()),
    ]
}
