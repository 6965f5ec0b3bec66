use proptest::prelude::*;

use rectsurf::framing::{framing_value, Framing};
use rectsurf::io::{parse_diagram, parse_framing, parse_surface, print_diagram, print_framing, print_surface, RunReport};
use rectsurf::linking::{component_tbs, tb_minus, tb_minus_oriented, tb_plus, tb_plus_oriented, Cut};
use rectsurf::moves::{apply_exchange_oriented, canonical_form, exchange_candidates, stabilization_sites, stabilize_oriented, StabilizationType};
use rectsurf::oracles::{mesh_euler_characteristic, tb_from_corners};
use rectsurf::random::{random_link_diagram, random_surface_diagram, rng};
use rectsurf::tile::embed::embed_r4;
use rectsurf::tile::{zeta, zeta_inverse, HarmonicTile};
use rectsurf::tolerances::Tolerances;
use rectsurf::torus::Rational;

fn shift() -> impl Strategy<Value = Rational> {
    (0i128..1000, 1i128..1000).prop_map(|(p, q)| Rational::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagram_file_round_trip(seed in any::<u64>(), flips in proptest::collection::vec(any::<bool>(), 20)) {
        let r = random_link_diagram(seed, 4, 30);
        let o = r.orientation_from_choices(&flips[..r.components().len()]);
        let (r2, o2) = parse_diagram(&print_diagram(&r, Some(&o))).unwrap();
        prop_assert_eq!(r2.vertices(), r.vertices());
        prop_assert_eq!(o2.unwrap(), o);
    }

    #[test]
    fn surface_file_round_trip(seed in 0u64..5000, budget in 1usize..8) {
        let d = random_surface_diagram(seed, budget).diagram;
        let back = parse_surface(&print_surface(&d)).unwrap();
        prop_assert_eq!(back.rectangles(), d.rectangles());
    }

    #[test]
    fn framing_file_round_trip(seed in any::<u64>(), mask in any::<u64>()) {
        let r = random_link_diagram(seed, 4, 24);
        let f = Framing::all(&r).nth((mask % (1u64 << r.edges().len().min(20))) as usize).unwrap();
        prop_assert_eq!(parse_framing(&r, &print_framing(&r, &f)).unwrap(), f);
    }

    #[test]
    fn report_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite()), n in any::<i64>()) {
        let t = Tolerances { fd_oracle: x.abs(), ..Tolerances::default() };
        let rep = RunReport::new("tb", serde_json::json!({ "n": n }), serde_json::json!({ "x": x }), &t);
        let text = serde_json::to_string(&rep).unwrap();
        prop_assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), rep);
    }

    #[test]
    fn tb_identity_and_corner_route(seed in any::<u64>()) {
        let r = random_link_diagram(seed, 4, 40);
        let (p, m) = (tb_plus(&r).unwrap(), tb_minus(&r).unwrap());
        prop_assert_eq!(p + m, -(r.len() as i64) / 2);
        let cut = Cut::random_for(&r, &mut rng(seed ^ 0x5eed));
        prop_assert_eq!(tb_from_corners(&r, &r.canonical_orientation(), cut).unwrap(), (p, m));
        let per: i64 = component_tbs(&r).unwrap().iter().map(|c| c.0 + c.1).sum();
        prop_assert_eq!(per, p + m);
    }

    #[test]
    fn tb_and_canonical_form_are_translation_invariant(seed in any::<u64>(), dt in shift(), dp in shift()) {
        let r = random_link_diagram(seed, 4, 30);
        let s = r.translated(dt, dp);
        prop_assert_eq!((tb_plus(&s).unwrap(), tb_minus(&s).unwrap()), (tb_plus(&r).unwrap(), tb_minus(&r).unwrap()));
        prop_assert_eq!(canonical_form(&s), canonical_form(&r));
    }

    #[test]
    fn stabilization_changes_one_tb(seed in any::<u64>(), pick in any::<usize>()) {
        let r = random_link_diagram(seed, 4, 20);
        let o = r.canonical_orientation();
        let sites = stabilization_sites(&r);
        let site = sites[pick % sites.len()];
        let (d, od) = stabilize_oriented(&r, &o, &site).unwrap();
        let before = (tb_plus_oriented(&r, &o, None).unwrap(), tb_minus_oriented(&r, &o, None).unwrap());
        let after = (tb_plus_oriented(&d, &od, None).unwrap(), tb_minus_oriented(&d, &od, None).unwrap());
        let expected = match site.kind().unwrap() {
            StabilizationType::I => (0, -1),
            StabilizationType::II => (-1, 0),
        };
        prop_assert_eq!((after.0 - before.0, after.1 - before.1), expected);
        prop_assert_eq!(d.len(), r.len() + 2);
    }

    #[test]
    fn exchanges_preserve_tb(seed in any::<u64>()) {
        let r = random_link_diagram(seed, 6, 30);
        let o = r.canonical_orientation();
        let base = (tb_plus_oriented(&r, &o, None).unwrap(), tb_minus_oriented(&r, &o, None).unwrap());
        for site in exchange_candidates(&r) {
            let (d, od) = apply_exchange_oriented(&r, &o, &site).unwrap();
            prop_assert_eq!((tb_plus_oriented(&d, &od, None).unwrap(), tb_minus_oriented(&d, &od, None).unwrap()), base);
            prop_assert_eq!(d.components().len(), r.components().len());
        }
    }

    #[test]
    fn framing_values_lie_in_the_tb_interval(seed in any::<u64>(), mask in any::<u64>()) {
        let r = random_link_diagram(seed, 4, 16);
        prop_assume!(r.genericity().generic);
        let f = Framing::all(&r).nth((mask % (1u64 << r.edges().len())) as usize).unwrap();
        let v = framing_value(&r, &f).unwrap();
        for (x, (p, m)) in v.per_component.iter().zip(component_tbs(&r).unwrap()) {
            prop_assert!(p <= *x && *x <= -m);
        }
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>()) {
        let (r1, r2) = (random_link_diagram(seed, 4, 40), random_link_diagram(seed, 4, 40));
        prop_assert_eq!(r1.vertices(), r2.vertices());
        let (s1, s2) = (random_surface_diagram(seed, 4).diagram, random_surface_diagram(seed, 4).diagram);
        prop_assert_eq!(s1.rectangles(), s2.rectangles());
    }

    #[test]
    fn random_surfaces_are_admissible(seed in any::<u64>(), budget in 1usize..9) {
        let d = random_surface_diagram(seed, budget).diagram;
        let rep = d.classify().unwrap();
        for b in &rep.boundary {
            prop_assert!(b.tb_plus_rel <= 0 && b.tb_minus_rel <= 0);
            prop_assert_eq!(b.tb_plus_rel + b.tb_minus_rel, -(b.length as i64) / 2);
        }
        prop_assert!(d.lengthbound_check().unwrap().iter().all(|l| l.pass));
        prop_assert_eq!(d.relative_tb_closed_form().unwrap(), d.relative_tb_from_framing().unwrap());
        prop_assert!(d.dividing_degrees().values().all(|&k| k <= 2));
    }

    #[test]
    fn harmonic_tile_is_between_its_boundary_values(a in 0.05f64..1.0, b in 0.05f64..1.0, u in 0.001f64..0.999, v in 0.001f64..0.999) {
        let t = HarmonicTile::with_spans(a, b, 1e-15);
        let h = t.h(u * a, v * b).unwrap();
        prop_assert!(h > 0.0 && h < 1.0);
        // Mirror symmetries of the boundary data.
        prop_assert!((t.h((1.0 - u) * a, v * b).unwrap() - h).abs() < 1e-12);
        prop_assert!((t.h(u * a, (1.0 - v) * b).unwrap() - h).abs() < 1e-12);
        // Dual series: the rotated tile carries the complementary data.
        let r = HarmonicTile::with_spans(b, a, 1e-15);
        prop_assert!((r.h(v * b, u * a).unwrap() + h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn height_map_is_an_increasing_involution(kappa in 0.0f64..2.0, h in 0.0f64..1.0, dh in 1e-6f64..0.1) {
        let z = zeta(h, kappa);
        prop_assert!((zeta_inverse(z, kappa) - h).abs() <= 1e-12);
        prop_assert!((z + zeta(1.0 - h, kappa) - 1.0).abs() <= 1e-12);
        prop_assert!(zeta((h + dh).min(1.0), kappa) >= z);
    }

    #[test]
    fn embedding_is_on_the_unit_sphere(t in -2.0f64..2.0, p in -2.0f64..2.0, s in 0.0f64..1.0) {
        let x = embed_r4(t, p, s);
        prop_assert!((x.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mesh_euler_characteristic_matches_the_cell_complex(seed in any::<u64>(), budget in 1usize..6) {
        let d = random_surface_diagram(seed, budget).diagram;
        prop_assert_eq!(mesh_euler_characteristic(&d).unwrap(), d.cell_complex().euler_characteristic());
    }
}
