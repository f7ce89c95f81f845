//! The worked example surface: genus zero, three boundary components, seven
//! arcs, six open and six closed marked points.

use crate::dissection::{ArcSide, Dissection, MarkedSide, Polygon, Side};
use crate::gentle::{AlgebraFile, ArrowSpec, GentlePair};

/// The example gentle pair with all arrow degrees zero.
pub fn fixture_file() -> AlgebraFile {
    let arrows = [
        ("a1", "g1", "g2"),
        ("a2", "g2", "g3"),
        ("a3", "g4", "g3"),
        ("a4", "g4", "g6"),
        ("a5", "g5", "g2"),
        ("a6", "g6", "g5"),
        ("a7", "g6", "g7"),
        ("a8", "g1", "g7"),
    ];
    AlgebraFile {
        vertices: (1..=7).map(|i| format!("g{i}")).collect(),
        arrows: arrows
            .iter()
            .map(|(id, f, t)| ArrowSpec {
                id: id.to_string(),
                from: f.to_string(),
                to: t.to_string(),
                degree: 0,
            })
            .collect(),
        relations: vec![["a4".into(), "a6".into()], ["a5".into(), "a2".into()]],
    }
}

pub fn fixture_pair() -> GentlePair {
    GentlePair::from_file(&fixture_file()).expect("fixture is well formed")
}

/// Arc sides after the token and arrow names of the inner angles.
type PolygonSpec = (&'static [(&'static str, u8)], &'static [&'static str]);

/// A dissection of the example surface reproducing [`fixture_pair`].
pub fn fixture_dissection() -> Dissection {
    let polys: [PolygonSpec; 6] = [
        (&[("g5", 0), ("g2", 0), ("g3", 0)], &["a5", "a2"]),
        (&[("g4", 0), ("g6", 0), ("g5", 1)], &["a4", "a6"]),
        (&[("g1", 0), ("g2", 1)], &["a1"]),
        (&[("g4", 1), ("g3", 1)], &["a3"]),
        (&[("g6", 1), ("g7", 0)], &["a7"]),
        (&[("g1", 1), ("g7", 1)], &["a8"]),
    ];
    Dissection {
        arcs: (1..=7).map(|i| format!("g{i}")).collect(),
        polygons: polys
            .iter()
            .map(|(sides, ids)| {
                let mut s = vec![Side::Marked(MarkedSide { marked: true })];
                s.extend(sides.iter().map(|(a, e)| {
                    Side::Arc(ArcSide {
                        arc: a.to_string(),
                        end: *e,
                    })
                }));
                Polygon {
                    sides: s,
                    angle_degrees: vec![0; ids.len()],
                    angle_ids: Some(ids.iter().map(|x| x.to_string()).collect()),
                }
            })
            .collect(),
    }
}
