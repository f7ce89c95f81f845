mod common;

use common::{a, fixture, generator, ps4, string, v};
use ggk_core::homalg::{Component, Generator};
use ggk_core::string::{
    build_x_module, canonical_form, end_descriptor, shift_string, validate_string, ArcFile, End,
    Over,
};
use ggk_core::Error;

#[test]
fn validating_strings() {
    let f = fixture();
    assert!(validate_string(&f, &string(&f, &["g2", "g1"], &[1, 0], &[("R", &["a1"])])).is_empty());
    assert!(validate_string(&f, &generator(&f, "g4", 0)).is_empty());
    let bad = validate_string(&f, &string(&f, &["g5", "g2"], &[0, 0], &[("L", &["a5"])]));
    assert!(bad.iter().any(|e| e.contains("shift")), "{bad:?}");
    assert!(validate_string(&f, &ps4(&f)).is_empty());
}

#[test]
fn same_direction_letters_need_a_relation() {
    let f = fixture();
    // a1 then a2 is a nonzero path, so two R letters through g2 do not square to zero
    let s = string(
        &f,
        &["g3", "g2", "g1"],
        &[0, 0, 0],
        &[("R", &["a2"]), ("R", &["a1"])],
    );
    assert!(!validate_string(&f, &s).is_empty());
}

#[test]
fn shifting_strings() {
    let f = fixture();
    assert_eq!(
        shift_string(&generator(&f, "g4", 0), 2),
        generator(&f, "g4", 2)
    );
    let s = string(&f, &["g2", "g1"], &[1, 0], &[("R", &["a1"])]);
    assert_eq!(
        shift_string(&s, 1),
        string(&f, &["g2", "g1"], &[2, 1], &[("R", &["a1"])])
    );
    assert_eq!(shift_string(&s, 0), s);
}

#[test]
fn canonical_forms() {
    let f = fixture();
    let p = ps4(&f);
    assert_eq!(canonical_form(&p.reversed()), canonical_form(&p));
    let g = generator(&f, "g4", 3);
    assert_eq!(canonical_form(&g), g);
    let s = string(&f, &["g2", "g1"], &[1, 0], &[("R", &["a1"])]);
    let r = string(&f, &["g1", "g2"], &[0, 1], &[("L", &["a1"])]);
    assert_eq!(s.reversed(), r);
    assert_eq!(canonical_form(&s), canonical_form(&r));
    assert_eq!(canonical_form(&canonical_form(&s)), canonical_form(&s));
}

#[test]
fn module_of_a_generator() {
    let f = fixture();
    let m = build_x_module(&f, &generator(&f, "g3", -2)).unwrap();
    assert_eq!(
        m.gens,
        vec![Generator {
            vertex: v(&f, "g3"),
            shift: -2
        }]
    );
    assert!(m.comps.is_empty());
}

#[test]
fn module_of_the_resolution_of_s4() {
    let f = fixture();
    let b = f.basis().unwrap();
    let m = build_x_module(&f, &ps4(&f)).unwrap();
    let gens: Vec<(usize, i64)> = m.gens.iter().map(|g| (g.vertex, g.shift)).collect();
    assert_eq!(
        gens,
        vec![
            (v(&f, "g5"), 2),
            (v(&f, "g6"), 1),
            (v(&f, "g4"), 0),
            (v(&f, "g3"), 1)
        ]
    );
    let id = |x: &str| b.id_of(&common::path(&f, &[x])).unwrap();
    let mut comps = m.comps.clone();
    comps.sort_by_key(|c| (c.from, c.to));
    assert_eq!(
        comps,
        vec![
            Component {
                from: 0,
                to: 1,
                coeff: 1,
                path: id("a6")
            },
            Component {
                from: 1,
                to: 2,
                coeff: 1,
                path: id("a4")
            },
            Component {
                from: 3,
                to: 2,
                coeff: 1,
                path: id("a3")
            },
        ]
    );
    m.check(&f).unwrap();
}

#[test]
fn module_of_a_two_term_string() {
    let f = fixture();
    let m = build_x_module(&f, &string(&f, &["g2", "g1"], &[1, 0], &[("R", &["a1"])])).unwrap();
    assert_eq!(m.comps.len(), 1);
    let c = m.comps[0];
    assert_eq!((c.from, c.to), (0, 1));
    let b = f.basis().unwrap();
    assert_eq!(b.get(c.path).arrows, vec![a(&f, "a1")]);
    // |a1| + shift(from) - shift(to) = 0 + 1 - 0
    assert_eq!(b.degree(c.path) + m.gens[0].shift - m.gens[1].shift, 1);
}

#[test]
fn invalid_strings_are_rejected_by_the_module_builder() {
    let f = fixture();
    let s = string(&f, &["g5", "g2"], &[0, 0], &[("L", &["a5"])]);
    assert!(matches!(
        build_x_module(&f, &s),
        Err(Error::InvalidString(_))
    ));
}

#[test]
fn end_descriptors() {
    let f = fixture();
    let g1 = generator(&f, "g1", 0);
    let fm = f.fan_model().unwrap();
    let ends = [
        end_descriptor(&f, &g1, End::Head).unwrap(),
        end_descriptor(&f, &g1, End::Tail).unwrap(),
    ];
    let expected = [fm.locate(v(&f, "g1"), 0), fm.locate(v(&f, "g1"), 1)];
    assert!(ends.contains(&expected[0]) && ends.contains(&expected[1]));
    let g3 = generator(&f, "g3", 0);
    let tail = end_descriptor(&f, &ps4(&f), End::Tail).unwrap();
    let g3_ends = [
        end_descriptor(&f, &g3, End::Head).unwrap(),
        end_descriptor(&f, &g3, End::Tail).unwrap(),
    ];
    assert!(g3_ends.contains(&tail));
}

#[test]
fn strings_with_equal_last_letters_end_at_the_same_point() {
    let f = fixture();
    let s = ps4(&f);
    let t = string(&f, &["g4", "g3"], &[0, 1], &[("L", &["a3"])]);
    assert_eq!(
        end_descriptor(&f, &s, End::Tail).unwrap(),
        end_descriptor(&f, &t, End::Tail).unwrap()
    );
}

#[test]
fn arc_file_round_trip() {
    let f = fixture();
    let text = r#"{"over":"primal","vertices":["g5","g6","g4","g3"],"shifts":[2,1,0,1],"letters":[{"dir":"R","path":["a6"]},{"dir":"R","path":["a4"]},{"dir":"L","path":["a3"]}]}"#;
    let file = ArcFile::from_json(text).unwrap();
    assert_eq!(file.over, Over::Primal);
    let s = file.to_string_over(&f).unwrap();
    assert_eq!(s, ps4(&f));
    assert_eq!(ArcFile::from_string(&f, Over::Primal, &s), file);
    assert_eq!(ArcFile::from_json(&file.to_json()).unwrap(), file);
    assert!(ArcFile::from_json(&text.replace("\"over\"", "\"side\"")).is_err());
}
