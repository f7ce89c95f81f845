mod common;

use common::{fixture, generator, ps4, shift_keys, table, v};
use ggk_core::homalg::{hom_dims, is_closed, FieldKind};
use ggk_core::intersect::{
    boundary_intersections, compose_intersections, int_table, int_with_dual_simple,
    interior_intersections, intersections, morphism_from_intersection, BoundaryCase, Site,
};
use ggk_core::koszul::simple_resolution;
use ggk_core::string::{build_x_module, End, GradedString};

#[test]
fn generator_two_meets_generator_one_at_the_a1_angle() {
    let f = fixture();
    let g2 = generator(&f, "g2", 0);
    let g1 = generator(&f, "g1", 0);
    let recs = boundary_intersections(&f, &g2, &g1).unwrap();
    assert_eq!(recs.len(), 1);
    let r = &recs[0];
    assert!(r.forward);
    assert_eq!(r.index, 0);
    match &r.site {
        Site::Boundary {
            overlap,
            case,
            junction,
            ..
        } => {
            assert_eq!(*overlap, 0);
            assert_eq!(*case, BoundaryCase::Angle);
            assert_eq!(junction, &vec![common::a(&f, "a1")]);
        }
        other => panic!("unexpected site {other:?}"),
    }
    assert_eq!(int_table(&f, &g2, &g1).unwrap(), table(&[(0, 1)]));
}

#[test]
fn resolutions_of_s2_and_s1_meet_in_index_one() {
    let f = fixture();
    let p2 = simple_resolution(&f, v(&f, "g2")).unwrap();
    let p1 = simple_resolution(&f, v(&f, "g1")).unwrap();
    let recs = boundary_intersections(&f, &p2, &p1).unwrap();
    assert!(recs.iter().any(|r| r.index == 1), "{recs:?}");
}

#[test]
fn disjoint_generators_do_not_meet() {
    let f = fixture();
    let g4 = generator(&f, "g4", 0);
    let g1 = generator(&f, "g1", 0);
    assert!(intersections(&f, &g4, &g1).unwrap().is_empty());
    assert!(int_table(&f, &g4, &g1).unwrap().is_empty());
}

#[test]
fn generators_never_cross_in_the_interior() {
    let f = fixture();
    for i in 0..f.n_vertices() {
        for j in 0..f.n_vertices() {
            if i != j {
                let (gi, gj) = (GradedString::generator(i, 0), GradedString::generator(j, 0));
                assert!(interior_intersections(&f, &gi, &gj).unwrap().is_empty());
            }
        }
    }
}

#[test]
fn crossings_with_dual_arcs() {
    let f = fixture();
    let g4 = generator(&f, "g4", 0);
    for i in 0..f.n_vertices() {
        let expected = if i == v(&f, "g4") {
            table(&[(0, 1)])
        } else {
            table(&[])
        };
        assert_eq!(int_with_dual_simple(&g4, i), expected);
    }
    let s = ps4(&f);
    assert_eq!(int_with_dual_simple(&s, v(&f, "g6")), table(&[(1, 1)]));
    assert_eq!(
        int_with_dual_simple(&s.shifted(3), v(&f, "g6")),
        table(&[(4, 1)])
    );
}

#[test]
fn shifting_the_target_moves_indices_down() {
    let f = fixture();
    let g2 = generator(&f, "g2", 0);
    let s = ps4(&f);
    for t in [
        generator(&f, "g1", 0),
        generator(&f, "g6", 1),
        simple_resolution(&f, v(&f, "g3")).unwrap(),
    ] {
        for n in [-2, 1, 3] {
            for src in [&g2, &s] {
                let base = int_table(&f, src, &t).unwrap();
                assert_eq!(
                    int_table(&f, src, &t.shifted(n)).unwrap(),
                    shift_keys(&base, -n)
                );
                assert_eq!(
                    int_table(&f, &src.shifted(n), &t).unwrap(),
                    shift_keys(&base, n)
                );
            }
        }
    }
}

#[test]
fn generator_morphism_is_the_a1_map() {
    let f = fixture();
    let g2 = generator(&f, "g2", 0);
    let g1 = generator(&f, "g1", 0);
    let r = &boundary_intersections(&f, &g2, &g1).unwrap()[0];
    let m = morphism_from_intersection(&f, &g2, &g1, r).unwrap();
    assert_eq!(m.degree, 0);
    assert_eq!(m.comps.len(), 1);
    let b = f.basis().unwrap();
    assert_eq!(
        m.comps[0].path,
        b.id_of(&common::path(&f, &["a1"])).unwrap()
    );
    let x2 = build_x_module(&f, &g2).unwrap();
    let x1 = build_x_module(&f, &g1).unwrap();
    assert!(is_closed(&f, &x2, &x1, &m).unwrap());
}

#[test]
fn every_boundary_morphism_of_the_fixture_corpus_is_closed() {
    let f = fixture();
    let mut arcs: Vec<_> = (0..f.n_vertices())
        .map(|i| GradedString::generator(i, 0))
        .collect();
    arcs.extend((0..f.n_vertices()).map(|i| simple_resolution(&f, i).unwrap()));
    let mut seen = 0;
    for s in &arcs {
        for t in &arcs {
            if s.same_arc(t) {
                continue;
            }
            let xs = build_x_module(&f, s).unwrap();
            let xt = build_x_module(&f, t).unwrap();
            for r in boundary_intersections(&f, s, t).unwrap() {
                let m = morphism_from_intersection(&f, s, t, &r).unwrap();
                let ok = if r.forward {
                    is_closed(&f, &xs, &xt, &m)
                } else {
                    is_closed(&f, &xt, &xs, &m)
                };
                assert!(ok.unwrap());
                seen += 1;
            }
        }
    }
    assert!(seen > 10);
}

#[test]
fn intersection_counts_match_hom_dimensions_on_the_fixture() {
    let f = fixture();
    let mut arcs: Vec<_> = (0..f.n_vertices())
        .map(|i| GradedString::generator(i, 0))
        .collect();
    arcs.extend((0..f.n_vertices()).map(|i| simple_resolution(&f, i).unwrap()));
    for s in &arcs {
        for t in &arcs {
            if s.same_arc(t) {
                continue;
            }
            let xs = build_x_module(&f, s).unwrap();
            let xt = build_x_module(&f, t).unwrap();
            assert_eq!(
                int_table(&f, s, t).unwrap(),
                hom_dims(&f, &xs, &xt, FieldKind::Rational).unwrap()
            );
        }
    }
}

#[test]
fn composite_records_give_composite_morphisms() {
    let f = fixture();
    let mut arcs: Vec<_> = (0..f.n_vertices())
        .map(|i| GradedString::generator(i, 0))
        .collect();
    arcs.extend((0..f.n_vertices()).map(|i| simple_resolution(&f, i).unwrap()));
    let forward = |s: &GradedString, t: &GradedString| -> Vec<_> {
        if s.same_arc(t) {
            return vec![];
        }
        boundary_intersections(&f, s, t)
            .unwrap()
            .into_iter()
            .filter(|r| r.forward)
            .collect()
    };
    let mut composed = 0;
    for s1 in &arcs {
        for s2 in &arcs {
            for s3 in &arcs {
                if s1.same_arc(s3) {
                    continue;
                }
                for alpha in forward(s1, s2) {
                    for beta in forward(s2, s3) {
                        let Ok(c) = compose_intersections(&f, s1, s2, s3, &alpha, &beta) else {
                            continue;
                        };
                        assert_eq!(c.index, alpha.index + beta.index);
                        let fa = morphism_from_intersection(&f, s1, s2, &alpha).unwrap();
                        let fb = morphism_from_intersection(&f, s2, s3, &beta).unwrap();
                        let fc = morphism_from_intersection(&f, s1, s3, &c).unwrap();
                        assert_eq!(fa.then(&f, &fb).unwrap().normalized(), fc.normalized());
                        composed += 1;
                    }
                }
            }
        }
    }
    assert!(composed > 0);
}

#[test]
fn interior_records_pair_up_with_indices_summing_to_one() {
    let f = fixture();
    let mut rng = ggk_core::random::rng(17);
    let mut pairs_seen = 0;
    for _ in 0..300 {
        let s = ggk_core::random::random_string(&mut rng, &f, 5).unwrap();
        let t = ggk_core::random::random_string(&mut rng, &f, 5).unwrap();
        if s.same_arc(&t) {
            continue;
        }
        let recs = interior_intersections(&f, &s, &t).unwrap();
        let fw = recs.iter().filter(|r| r.forward).count();
        assert_eq!(2 * fw, recs.len());
        for r in recs.iter().filter(|r| r.forward) {
            let partner = recs.iter().find(|q| !q.forward && q.site == r.site);
            assert_eq!(partner.map(|q| q.index + r.index), Some(1));
            pairs_seen += 1;
        }
    }
    assert!(pairs_seen > 0);
}

#[test]
fn records_at_one_end_are_unique() {
    let f = fixture();
    let g2 = generator(&f, "g2", 0);
    let g1 = generator(&f, "g1", 0);
    let mut n = 0;
    for e in [End::Head, End::Tail] {
        for e2 in [End::Head, End::Tail] {
            if ggk_core::intersect::boundary_record_at(&f, &g2, e, &g1, e2)
                .unwrap()
                .is_some()
            {
                n += 1;
            }
        }
    }
    assert_eq!(n, 1);
}
