use ggk_core::gentle::GentlePair;
use ggk_core::homalg::is_closed;
use ggk_core::homalg::{hom_dims, FieldKind, DEFAULT_PRIME};
use ggk_core::intersect::{
    boundary_intersections, int_table, int_with_dual_simple, interior_intersections,
    morphism_from_intersection,
};
use ggk_core::koszul::{
    decomposition_thread, half_rotate, koszul_object, resolution_family, smooth_thread,
    strong_formality_check,
};
use ggk_core::random::{random_pair, random_string, rng, Rng64};
use ggk_core::string::{build_x_module, canonical_form, check_string, GradedString};
use proptest::prelude::*;

fn setup(seed: u64, max_vertices: usize) -> (Rng64, GentlePair) {
    let mut r = rng(seed);
    let p = random_pair(&mut r, max_vertices);
    (r, p)
}

fn two_arcs(r: &mut Rng64, p: &GentlePair) -> Option<(GradedString, GradedString)> {
    for _ in 0..20 {
        let s = random_string(r, p, 4).unwrap();
        let t = random_string(r, p, 4).unwrap();
        if !s.same_arc(&t) {
            return Some((s, t));
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadratic_dual_is_an_involution(seed in any::<u64>()) {
        let (_, p) = setup(seed, 9);
        let d = p.quadratic_dual().unwrap();
        prop_assert!(d.is_gentle());
        prop_assert_eq!(d.quadratic_dual().unwrap(), p);
    }

    #[test]
    fn string_modules_square_to_zero(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 8);
        let s = random_string(&mut r, &p, 6).unwrap();
        prop_assert!(check_string(&p, &s).is_ok());
        build_x_module(&p, &s).unwrap().check(&p).unwrap();
    }

    #[test]
    fn canonical_form_is_idempotent_and_ignores_reversal(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 8);
        let s = random_string(&mut r, &p, 6).unwrap();
        let c = canonical_form(&s);
        prop_assert_eq!(canonical_form(&c), c.clone());
        prop_assert_eq!(canonical_form(&s.reversed()), c);
    }

    #[test]
    fn intersection_counts_equal_hom_dimensions(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 6);
        if let Some((s, t)) = two_arcs(&mut r, &p) {
            let xs = build_x_module(&p, &s).unwrap();
            let xt = build_x_module(&p, &t).unwrap();
            prop_assert_eq!(int_table(&p, &s, &t).unwrap(), hom_dims(&p, &xs, &xt, FieldKind::Rational).unwrap());
        }
    }

    #[test]
    fn both_fields_give_the_same_hom_dimensions(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 6);
        if let Some((s, t)) = two_arcs(&mut r, &p) {
            let xs = build_x_module(&p, &s).unwrap();
            let xt = build_x_module(&p, &t).unwrap();
            prop_assert_eq!(
                hom_dims(&p, &xs, &xt, FieldKind::Rational).unwrap(),
                hom_dims(&p, &xs, &xt, FieldKind::Prime(DEFAULT_PRIME)).unwrap()
            );
        }
    }

    #[test]
    fn shifts_move_intersection_indices(seed in any::<u64>(), m in -3i64..=3, n in -3i64..=3) {
        let (mut r, p) = setup(seed, 7);
        if let Some((s, t)) = two_arcs(&mut r, &p) {
            let base = int_table(&p, &s, &t).unwrap();
            let moved: std::collections::BTreeMap<i64, usize> = base.iter().map(|(k, c)| (k + m - n, *c)).collect();
            prop_assert_eq!(int_table(&p, &s.shifted(m), &t.shifted(n)).unwrap(), moved);
        }
    }

    #[test]
    fn interior_records_come_in_pairs(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 7);
        if let Some((s, t)) = two_arcs(&mut r, &p) {
            let recs = interior_intersections(&p, &s, &t).unwrap();
            for x in recs.iter().filter(|x| x.forward) {
                let partner = recs.iter().find(|y| !y.forward && y.site == x.site);
                prop_assert_eq!(partner.map(|y| x.index + y.index), Some(1));
            }
            prop_assert_eq!(2 * recs.iter().filter(|x| x.forward).count(), recs.len());
        }
    }

    #[test]
    fn boundary_morphisms_are_closed(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 7);
        if let Some((s, t)) = two_arcs(&mut r, &p) {
            let xs = build_x_module(&p, &s).unwrap();
            let xt = build_x_module(&p, &t).unwrap();
            for rec in boundary_intersections(&p, &s, &t).unwrap() {
                let f = morphism_from_intersection(&p, &s, &t, &rec).unwrap();
                let closed = if rec.forward { is_closed(&p, &xs, &xt, &f) } else { is_closed(&p, &xt, &xs, &f) };
                prop_assert!(closed.unwrap());
            }
        }
    }

    #[test]
    fn decomposition_threads_smooth_back(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 8);
        let s = random_string(&mut r, &p, 6).unwrap();
        let t = decomposition_thread(&p, &s).unwrap();
        prop_assert!(smooth_thread(&p, &t).unwrap().same_arc(&s));
    }

    #[test]
    fn half_rotation_commutes_with_shifts(seed in any::<u64>(), n in -3i64..=3) {
        let (mut r, p) = setup(seed, 7);
        let d = p.quadratic_dual().unwrap();
        let eta = random_string(&mut r, &d, 3).unwrap();
        prop_assert_eq!(half_rotate(&p, &eta.shifted(n)).unwrap(), half_rotate(&p, &eta).unwrap().shifted(n));
        prop_assert_eq!(koszul_object(&p, &eta.shifted(n)).unwrap(), koszul_object(&p, &eta).unwrap().shifted(n));
    }

    #[test]
    fn dual_simple_probes_match_generators(seed in any::<u64>()) {
        let (mut r, p) = setup(seed, 7);
        let s = random_string(&mut r, &p, 5).unwrap();
        let i = s.vertices[0];
        let eta = GradedString::generator(i, 0);
        let xs = build_x_module(&p, &s).unwrap();
        let k = koszul_object(&p, &eta).unwrap();
        prop_assert_eq!(int_with_dual_simple(&s, i), hom_dims(&p, &xs, &k, FieldKind::Rational).unwrap());
    }

    #[test]
    fn resolution_families_are_strongly_formal(seed in any::<u64>()) {
        let (_, p) = setup(seed, 8);
        let (strings, pairs) = resolution_family(&p).unwrap();
        prop_assert!(strong_formality_check(&p, &strings, &pairs).unwrap());
    }
}
