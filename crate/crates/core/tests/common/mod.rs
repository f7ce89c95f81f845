#![allow(dead_code)]

use std::collections::BTreeMap;

use ggk_core::fixtures::fixture_pair;
use ggk_core::gentle::{GentlePair, Path};
use ggk_core::string::{Dir, GradedString, Letter};

pub fn fixture() -> GentlePair {
    fixture_pair()
}

pub fn v(pair: &GentlePair, name: &str) -> usize {
    pair.vertex(name).unwrap()
}

pub fn a(pair: &GentlePair, id: &str) -> usize {
    pair.arrow_index(id).unwrap()
}

pub fn path(pair: &GentlePair, ids: &[&str]) -> Path {
    let arrows: Vec<usize> = ids.iter().map(|x| a(pair, x)).collect();
    Path {
        start: pair.arrow(arrows[0]).src,
        arrows,
    }
}

/// A string from vertex names, shifts and `(direction, arrow ids)` letters.
/// No validation is done here.
pub fn string(
    pair: &GentlePair,
    vs: &[&str],
    shifts: &[i64],
    letters: &[(&str, &[&str])],
) -> GradedString {
    GradedString {
        vertices: vs.iter().map(|x| v(pair, x)).collect(),
        shifts: shifts.to_vec(),
        letters: letters
            .iter()
            .map(|(d, p)| Letter {
                dir: if *d == "L" { Dir::L } else { Dir::R },
                path: p.iter().map(|x| a(pair, x)).collect(),
            })
            .collect(),
    }
}

pub fn generator(pair: &GentlePair, name: &str, shift: i64) -> GradedString {
    GradedString::generator(v(pair, name), shift)
}

/// The resolution string of the simple at g4 in the example algebra.
pub fn ps4(pair: &GentlePair) -> GradedString {
    string(
        pair,
        &["g5", "g6", "g4", "g3"],
        &[2, 1, 0, 1],
        &[("R", &["a6"]), ("R", &["a4"]), ("L", &["a3"])],
    )
}

pub fn table(entries: &[(i64, usize)]) -> BTreeMap<i64, usize> {
    entries.iter().copied().collect()
}

pub fn shift_keys(t: &BTreeMap<i64, usize>, n: i64) -> BTreeMap<i64, usize> {
    t.iter().map(|(k, c)| (k + n, *c)).collect()
}
