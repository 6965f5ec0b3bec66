//! Worked examples, each checked against a second route where one exists.

use rectsurf::fixtures;
use rectsurf::link::LinkDiagram;
use rectsurf::linking::{component_tbs, linking_number, tb_minus, tb_plus, Cut};
use rectsurf::moves::{canonical_form, explore_exchange_class, SearchLimits, SearchStatus};
use rectsurf::oracles::tb_from_corners;
use rectsurf::random::{random_link_diagram, random_surface_diagram};
use rectsurf::tile::mesh::surface_mesh;

fn both_routes(r: &LinkDiagram) -> (i64, i64) {
    let lib = (tb_plus(r).unwrap(), tb_minus(r).unwrap());
    let oracle = tb_from_corners(r, &r.canonical_orientation(), Cut::default_for(r)).unwrap();
    assert_eq!(lib, oracle);
    lib
}

#[test]
fn minimal_square() {
    assert_eq!(both_routes(&fixtures::minimal_square()), (-1, -1));
    assert_eq!(both_routes(&fixtures::minimal_square_generic()), (-1, -1));
}

#[test]
fn trefoil_staircase() {
    let r = fixtures::trefoil_staircase();
    assert_eq!(r.len(), 10);
    assert_eq!(r.components().len(), 1);
    assert_eq!(both_routes(&r), (-6, 1));
}

/// `tb+(L) = sum of tb+(K_i) + 2 lk(K_0, rest)` for two-component links.
fn check_two_component_split(r: &LinkDiagram) {
    let comps = component_tbs(r).unwrap();
    assert_eq!(comps.len(), 2);
    let o = r.canonical_orientation();
    let lk = linking_number(r, &o, &[true, false], Cut::default_for(r)).unwrap();
    let (p, m) = both_routes(r);
    assert_eq!(p, comps[0].0 + comps[1].0 + 2 * lk);
    assert_eq!(m, comps[0].1 + comps[1].1 - 2 * lk);
}

#[test]
fn hopf_pair_links_once() {
    let r = fixtures::hopf_pair();
    let lk = linking_number(&r, &r.canonical_orientation(), &[true, false], Cut::default_for(&r)).unwrap();
    assert_eq!(lk.abs(), 1);
    assert_eq!(component_tbs(&r).unwrap(), vec![(-1, -1), (-1, -1)]);
    check_two_component_split(&r);
    let u = fixtures::unlinked_pair();
    assert_eq!(linking_number(&u, &u.canonical_orientation(), &[true, false], Cut::default_for(&u)).unwrap(), 0);
    check_two_component_split(&u);
}

#[test]
fn tb_splits_over_components() {
    let mut seen = 0;
    for seed in 0..400 {
        let r = random_link_diagram(seed, 4, 24);
        if r.components().len() == 2 {
            check_two_component_split(&r);
            seen += 1;
        }
    }
    assert!(seen > 20, "only {seen} two-component diagrams");
}

#[test]
fn exchange_class_search() {
    let square = fixtures::minimal_square_generic();
    let rep = explore_exchange_class(&square, None, SearchLimits::default());
    assert!(rep.is_rigid);
    assert_eq!((rep.visited, rep.status), (1, SearchStatus::Exhausted));

    let r = fixtures::unknot_with_exchange();
    let rep = explore_exchange_class(&r, None, SearchLimits::default());
    assert!(!rep.is_rigid);
    assert!(rep.visited >= 2);
    assert_eq!(rep.status, SearchStatus::Exhausted);
    // A translated copy is in the same class at depth 0.
    let t = r.translated(rectsurf::torus::Rational::new(1, 7), rectsurf::torus::Rational::new(2, 9));
    assert_eq!(canonical_form(&t), canonical_form(&r));
    assert_eq!(explore_exchange_class(&r, Some(&t), SearchLimits::default()).target_depth, Some(0));
}

#[test]
fn seeded_surface_generator() {
    let one = random_surface_diagram(1, 1);
    assert_eq!(one.diagram.len(), 1);
    assert!(one.notice.is_none());
    let six = random_surface_diagram(7, 6);
    assert_eq!(six.diagram.len(), 6);
    let back = rectsurf::surface::SurfaceDiagram::new(six.diagram.rectangles().to_vec());
    assert!(back.is_ok());
}

#[test]
fn single_rectangle_mesh_meets_each_binding_circle_twice() {
    let m = surface_mesh(&fixtures::single_rect(), 0.0, 32, 1e-15).unwrap();
    assert_eq!(m.binding_counts(), (2, 2));
    assert!(m.max_norm_defect() <= 1e-12);
}
