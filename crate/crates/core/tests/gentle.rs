mod common;

use std::collections::BTreeSet;

use common::{a, fixture, path, v};
use ggk_core::gentle::{AlgebraFile, ArrowSpec, GentlePair, Path};
use ggk_core::Error;

fn arrow(id: &str, from: &str, to: &str) -> ArrowSpec {
    ArrowSpec {
        id: id.into(),
        from: from.into(),
        to: to.into(),
        degree: 0,
    }
}

fn relation_names(pair: &GentlePair) -> BTreeSet<String> {
    pair.relations()
        .iter()
        .map(|&(x, y)| format!("{}{}", pair.arrow(x).id, pair.arrow(y).id))
        .collect()
}

#[test]
fn fixture_is_gentle() {
    let f = fixture();
    assert!(f.is_gentle());
    assert_eq!(f.n_vertices(), 7);
    assert_eq!(f.n_arrows(), 8);
    assert_eq!(
        relation_names(&f),
        ["a4a6", "a5a2"].map(String::from).into()
    );
}

#[test]
fn three_outgoing_arrows_violate_the_degree_bound() {
    let file = AlgebraFile {
        vertices: vec!["x".into(), "y".into(), "z".into(), "w".into()],
        arrows: vec![
            arrow("b1", "x", "y"),
            arrow("b2", "x", "z"),
            arrow("b3", "x", "w"),
        ],
        relations: vec![],
    };
    let p = GentlePair::from_file(&file).unwrap();
    assert!(!p.is_gentle());
    assert!(p.validate_gentle().violations.iter().any(|v| v.bullet == 2));
}

#[test]
fn extra_relation_into_a2_violates_the_third_bullet() {
    let mut file = fixture().to_file();
    file.relations.push(["a1".into(), "a2".into()]);
    let p = GentlePair::from_file(&file).unwrap();
    assert!(p.validate_gentle().violations.iter().any(|v| v.bullet == 3));
}

#[test]
fn dangling_arrow_is_a_structural_error() {
    let file = AlgebraFile {
        vertices: vec!["x".into()],
        arrows: vec![arrow("b", "x", "nowhere")],
        relations: vec![],
    };
    assert!(matches!(
        GentlePair::from_file(&file),
        Err(Error::Structure(_))
    ));
}

#[test]
fn nonzero_paths_of_the_fixture() {
    let f = fixture();
    let paths = f.nonzero_paths().unwrap();
    let end = |p: &Path| p.arrows.last().map(|&x| f.arrow(x).tgt).unwrap_or(p.start);
    let from4to7: Vec<&Path> = paths
        .iter()
        .filter(|p| p.start == v(&f, "g4") && end(p) == v(&f, "g7"))
        .collect();
    assert_eq!(from4to7, vec![&path(&f, &["a4", "a7"])]);
    let from3: Vec<&Path> = paths.iter().filter(|p| p.start == v(&f, "g3")).collect();
    assert_eq!(from3, vec![&Path::trivial(v(&f, "g3"))]);
    let by_len = |l: usize| paths.iter().filter(|p| p.len() == l).count();
    assert_eq!((by_len(0), by_len(1), by_len(2), by_len(3)), (7, 8, 3, 0));
    let long: BTreeSet<Path> = paths.iter().filter(|p| p.len() == 2).cloned().collect();
    let expected: BTreeSet<Path> = [["a1", "a2"], ["a6", "a5"], ["a4", "a7"]]
        .iter()
        .map(|ids| path(&f, ids))
        .collect();
    assert_eq!(long, expected);
}

#[test]
fn quadratic_dual_of_the_fixture() {
    let d = fixture().quadratic_dual().unwrap();
    assert!(d.is_gentle());
    assert_eq!(
        relation_names(&d),
        ["a2*a1*", "a5*a6*", "a7*a4*"].map(String::from).into()
    );
    assert!((0..d.n_arrows()).all(|x| d.arrow(x).degree == 1));
    let a1 = d.arrow(d.arrow_index("a1*").unwrap());
    assert_eq!((d.vertex_name(a1.src), d.vertex_name(a1.tgt)), ("g2", "g1"));
    assert_eq!(d.quadratic_dual().unwrap(), fixture());
}

#[test]
fn dual_degrees_are_one_minus_primal_degrees() {
    let mut file = fixture().to_file();
    for (i, x) in file.arrows.iter_mut().enumerate() {
        x.degree = i as i64 - 3;
    }
    let p = GentlePair::from_file(&file).unwrap();
    let d = p.quadratic_dual().unwrap();
    for x in 0..p.n_arrows() {
        let id = &p.arrow(x).id;
        let dx = d.arrow(d.arrow_index(&format!("{id}*")).unwrap());
        assert_eq!(p.arrow(x).degree + dx.degree, 1);
    }
}

#[test]
fn maximal_relation_paths_of_the_fixture() {
    let f = fixture();
    let at = |name: &str| -> BTreeSet<Path> {
        f.maximal_relation_paths(v(&f, name)).into_iter().collect()
    };
    assert_eq!(
        at("g4"),
        [path(&f, &["a3"]), path(&f, &["a4", "a6"])].into()
    );
    assert!(at("g3").is_empty());
    assert_eq!(at("g5"), [path(&f, &["a5", "a2"])].into());
}

#[test]
fn composing_paths() {
    let f = fixture();
    let c = |p: &[&str], q: &[&str]| f.compose_paths(&path(&f, p), &path(&f, q));
    assert_eq!(c(&["a4"], &["a7"]).unwrap(), Some(path(&f, &["a4", "a7"])));
    assert_eq!(c(&["a4"], &["a6"]).unwrap(), None);
    let e4 = Path::trivial(v(&f, "g4"));
    assert_eq!(
        f.compose_paths(&e4, &path(&f, &["a4"])).unwrap(),
        Some(path(&f, &["a4"]))
    );
    assert!(c(&["a1"], &["a4"]).is_err());
}

#[test]
fn fans_of_the_fixture() {
    let f = fixture();
    let fans = f.fans().unwrap();
    assert_eq!(fans.len(), 6);
    let with_a3 = fans
        .iter()
        .find(|fan| fan.arrows.contains(&a(&f, "a3")))
        .unwrap();
    let verts: BTreeSet<usize> = with_a3.ends.iter().map(|e| e.0).collect();
    assert!(verts.contains(&v(&f, "g4")) && verts.contains(&v(&f, "g3")));
    let mut ends: Vec<(usize, u8)> = fans.iter().flat_map(|fan| fan.ends.clone()).collect();
    ends.sort();
    let all: Vec<(usize, u8)> = (0..7).flat_map(|x| [(x, 0), (x, 1)]).collect();
    assert_eq!(ends, all);
    let mut arrows: Vec<usize> = fans.iter().flat_map(|fan| fan.arrows.clone()).collect();
    arrows.sort();
    assert_eq!(arrows, (0..8).collect::<Vec<_>>());
}

#[test]
fn one_vertex_without_arrows_has_two_singleton_fans() {
    let file = AlgebraFile {
        vertices: vec!["x".into()],
        arrows: vec![],
        relations: vec![],
    };
    let fans = GentlePair::from_file(&file).unwrap().fans().unwrap();
    assert_eq!(fans.len(), 2);
    assert!(fans
        .iter()
        .all(|fan| fan.ends.len() == 1 && fan.arrows.is_empty()));
}

#[test]
fn algebra_file_round_trip_is_exact() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/example-algebra.json"
    ))
    .unwrap();
    let pair = GentlePair::from_json(&text).unwrap();
    assert_eq!(pair, fixture());
    assert_eq!(pair.to_json(), text.trim_end());
}

#[test]
fn unknown_keys_are_rejected() {
    let text = r#"{"vertices":["x"],"arrows":[],"relations":[],"extra":1}"#;
    assert!(matches!(GentlePair::from_json(text), Err(Error::Json(_))));
}
