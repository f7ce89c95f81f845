mod common;

use common::{fixture, generator, ps4, string, v};
use ggk_core::homalg::{hom_dims, is_closed, is_quasi_iso, underlying_cohomology, FieldKind};
use ggk_core::intersect::{boundary_intersections, compose_intersections};
use ggk_core::koszul::{
    composition_identity_holds, decomposition_thread, half_rotate, half_rotate_open,
    homotopy_equivalence_pair, koszul_object, resolution_family, simple_resolution, smooth,
    smooth_thread, strong_formality_check, thread_module, ThreadFile, ThreadSpec,
};
use ggk_core::string::{build_x_module, GradedString};

const Q: FieldKind = FieldKind::Rational;

fn fixture_file(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/../../fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

#[test]
fn smoothing_the_a1_angle() {
    let f = fixture();
    let g2 = generator(&f, "g2", 1);
    let g1 = generator(&f, "g1", 0);
    let r = boundary_intersections(&f, &g2, &g1).unwrap().remove(0);
    assert_eq!(r.index, 1);
    let s = smooth(&f, &g2, &g1, &r).unwrap();
    assert_eq!(s, string(&f, &["g2", "g1"], &[1, 0], &[("R", &["a1"])]));
    let hp = homotopy_equivalence_pair(&f, &g2, &g1, &r).unwrap();
    let x = build_x_module(&f, &s).unwrap();
    assert!(is_quasi_iso(&f, &hp.chi, &hp.cone, &x, Q).unwrap());
    assert!(is_quasi_iso(&f, &hp.psi, &x, &hp.cone, Q).unwrap());
}

#[test]
fn homotopy_pairs_are_closed_quasi_isomorphisms() {
    let f = fixture();
    let mut rng = ggk_core::random::rng(5);
    let mut checked = 0;
    for _ in 0..40 {
        let Some(t) = ggk_core::random::random_dg_thread(&mut rng, &f, 2, 4).unwrap() else {
            continue;
        };
        let (s, u, r) = (&t.strings[0], &t.strings[1], &t.records[0]);
        let hp = homotopy_equivalence_pair(&f, s, u, r).unwrap();
        let x = build_x_module(&f, &hp.smoothing).unwrap();
        assert!(is_closed(&f, &hp.cone, &x, &hp.chi).unwrap());
        assert!(is_closed(&f, &x, &hp.cone, &hp.psi).unwrap());
        assert!(is_quasi_iso(&f, &hp.chi, &hp.cone, &x, Q).unwrap());
        checked += 1;
    }
    assert!(checked > 5);
}

#[test]
fn singleton_thread_smooths_to_its_string() {
    let f = fixture();
    let t = ThreadSpec {
        strings: vec![ps4(&f)],
        records: vec![],
    };
    assert_eq!(smooth_thread(&f, &t).unwrap(), ps4(&f));
}

#[test]
fn decomposition_thread_round_trips() {
    let f = fixture();
    let mut rng = ggk_core::random::rng(9);
    for s in [
        ps4(&f),
        string(&f, &["g2", "g1"], &[1, 0], &[("R", &["a1"])]),
    ]
    .into_iter()
    .chain((0..30).map(|_| ggk_core::random::random_string(&mut rng, &f, 5).unwrap()))
    {
        let t = decomposition_thread(&f, &s).unwrap();
        assert_eq!(t.strings.len(), s.len());
        assert!(t.strings.iter().all(|g| g.len() == 1));
        assert!(smooth_thread(&f, &t).unwrap().same_arc(&s));
        assert_eq!(
            thread_module(&f, &t).unwrap(),
            build_x_module(&f, &s).unwrap()
        );
    }
}

#[test]
fn three_term_thread_from_the_fixture_file() {
    let f = fixture();
    let file = ThreadFile::from_json(&fixture_file("thread3.json")).unwrap();
    let t = file.to_thread(&f).unwrap();
    let s = smooth_thread(&f, &t).unwrap();
    let vs = ["g2", "g6", "g4", "g3", "g1", "g7", "g6", "g5"];
    assert_eq!(s.vertices, vs.iter().map(|x| v(&f, x)).collect::<Vec<_>>());
    assert_eq!(s.shifts, vec![2, 1, 0, 1, 0, 1, 0, 1]);
    let total = thread_module(&f, &t).unwrap();
    let x = build_x_module(&f, &s).unwrap();
    assert_eq!(
        underlying_cohomology(&f, &total, Q).unwrap(),
        underlying_cohomology(&f, &x, Q).unwrap()
    );
    for i in 0..f.n_vertices() {
        let p = ggk_core::homalg::DgModule::projective(i, 0);
        assert_eq!(
            hom_dims(&f, &p, &total, Q).unwrap(),
            hom_dims(&f, &p, &x, Q).unwrap()
        );
        assert_eq!(
            hom_dims(&f, &total, &p, Q).unwrap(),
            hom_dims(&f, &x, &p, Q).unwrap()
        );
    }
    let back = ThreadFile::from_thread(&f, file.over().unwrap(), &t).unwrap();
    assert_eq!(back, file);
    assert_eq!(ThreadFile::from_json(&back.to_json()).unwrap(), file);
}

#[test]
fn thread_files_reject_bad_input() {
    let f = fixture();
    let mut file = ThreadFile::from_json(&fixture_file("thread3.json")).unwrap();
    file.ends.pop();
    assert!(file.to_thread(&f).is_err());
    assert!(ThreadFile::from_json(r#"{"arcs": [], "ends": [], "extra": 1}"#).is_err());
    assert!(ThreadFile::from_json(r#"{"arcs": [], "ends": []}"#)
        .unwrap()
        .to_thread(&f)
        .is_err());
}

#[test]
fn composition_identity_on_random_threads() {
    let f = fixture();
    let mut rng = ggk_core::random::rng(3);
    let mut checked = 0;
    for _ in 0..60 {
        let Some(t) = ggk_core::random::random_dg_thread(&mut rng, &f, 3, 4).unwrap() else {
            continue;
        };
        if let Ok(holds) = composition_identity_holds(&f, &t) {
            assert!(holds);
            checked += 1;
        }
    }
    assert!(checked > 5);
}

#[test]
fn resolutions_of_simples() {
    let f = fixture();
    assert_eq!(simple_resolution(&f, v(&f, "g4")).unwrap(), ps4(&f));
    assert_eq!(
        simple_resolution(&f, v(&f, "g3")).unwrap(),
        generator(&f, "g3", 0)
    );
    let p1 = simple_resolution(&f, v(&f, "g1")).unwrap();
    assert_eq!(p1.vertices, vec![v(&f, "g2"), v(&f, "g1"), v(&f, "g7")]);
    assert_eq!(p1.shifts, vec![1, 0, 1]);
    for i in 0..f.n_vertices() {
        let m = build_x_module(&f, &simple_resolution(&f, i).unwrap()).unwrap();
        assert_eq!(
            underlying_cohomology(&f, &m, Q).unwrap(),
            [((i, 0), 1)].into()
        );
    }
}

#[test]
fn half_rotation_of_dual_generators() {
    let f = fixture();
    for i in 0..f.n_vertices() {
        let eta = GradedString::generator(i, 0);
        assert_eq!(
            half_rotate(&f, &eta).unwrap(),
            simple_resolution(&f, i).unwrap()
        );
        assert_eq!(
            half_rotate(&f, &eta.shifted(2)).unwrap(),
            simple_resolution(&f, i).unwrap().shifted(2)
        );
    }
    assert_eq!(
        half_rotate(&f, &GradedString::generator(v(&f, "g3"), 0)).unwrap(),
        generator(&f, "g3", 0)
    );
}

#[test]
fn koszul_objects() {
    let f = fixture();
    let eta4 = GradedString::generator(v(&f, "g4"), 0);
    assert_eq!(
        koszul_object(&f, &eta4).unwrap(),
        build_x_module(&f, &ps4(&f)).unwrap()
    );
    let eta3 = GradedString::generator(v(&f, "g3"), 0);
    assert_eq!(
        koszul_object(&f, &eta3).unwrap(),
        ggk_core::homalg::DgModule::projective(v(&f, "g3"), 0)
    );
    let closed = f.quadratic_dual().unwrap();
    let file = ggk_core::string::ArcFile::from_json(&fixture_file("eta-closed.json")).unwrap();
    let eta = file.to_string_over(&closed).unwrap();
    let k = koszul_object(&f, &eta).unwrap();
    assert_eq!(koszul_object(&f, &eta.shifted(3)).unwrap(), k.shifted(3));
}

#[test]
fn open_half_rotation_of_generators_is_the_dual_resolution() {
    let f = fixture();
    let d = f.quadratic_dual().unwrap();
    for i in 0..f.n_vertices() {
        let g = GradedString::generator(i, 0);
        assert_eq!(
            half_rotate_open(&f, &g).unwrap(),
            simple_resolution(&d, i).unwrap().shifted(-1)
        );
        assert_eq!(
            half_rotate_open(&f, &g.shifted(1)).unwrap(),
            simple_resolution(&d, i).unwrap()
        );
    }
}

#[test]
fn resolution_family_is_strongly_formal() {
    let f = fixture();
    let (strings, pairs) = resolution_family(&f).unwrap();
    assert!(!pairs.is_empty());
    assert!(strong_formality_check(&f, &strings, &pairs).unwrap());
    assert!(strong_formality_check(&f, &strings, &[]).unwrap());
}

#[test]
fn a_nonvanishing_composite_is_detected() {
    let f = fixture();
    let strings: Vec<GradedString> = (0..f.n_vertices())
        .map(|i| GradedString::generator(i, 0))
        .collect();
    let forward = |i: usize, j: usize| -> Vec<_> {
        boundary_intersections(&f, &strings[i], &strings[j])
            .unwrap()
            .into_iter()
            .filter(|r| r.forward)
            .collect()
    };
    let n = strings.len();
    let mut found = None;
    'search: for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                for alpha in forward(i, j) {
                    for beta in forward(j, k) {
                        if compose_intersections(
                            &f,
                            &strings[i],
                            &strings[j],
                            &strings[k],
                            &alpha,
                            &beta,
                        )
                        .is_ok()
                        {
                            found = Some((i, j, k, alpha, beta));
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    let pair = found.expect("the example has a nonzero composite of two angles");
    assert!(!strong_formality_check(&f, &strings, &[pair]).unwrap());
}
