//! Seeded generators for gentle pairs and graded arcs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dissection::{algebra_from_dissection, ArcSide, Dissection, MarkedSide, Polygon, Side};
use crate::error::Result;
use crate::gentle::GentlePair;
use crate::intersect::{boundary_record_at, IntersectionRecord};
use crate::koszul::{check_thread, smooth_thread, ThreadSpec};
use crate::string::{from_walk, Crossing, End, GradedString};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random dissection: the `2n` arc sides are shuffled and cut into
/// polygons, each receiving one closed-point token.
pub fn random_dissection(rng: &mut Rng64, n_arcs: usize, degree_range: i64) -> Dissection {
    let arcs: Vec<String> = (1..=n_arcs).map(|i| format!("v{i}")).collect();
    let mut sides: Vec<(usize, u8)> = (0..n_arcs).flat_map(|a| [(a, 0u8), (a, 1u8)]).collect();
    sides.shuffle(rng);
    let n_polys = rng.gen_range(1..=(2 * n_arcs).max(1));
    let mut cuts: Vec<usize> = (1..sides.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(n_polys - 1).collect();
    cuts.sort();
    cuts.push(sides.len());
    let mut polygons = Vec::new();
    let mut start = 0;
    for &c in &cuts {
        let chunk = &sides[start..c];
        start = c;
        let mut s = vec![Side::Marked(MarkedSide { marked: true })];
        s.extend(chunk.iter().map(|&(a, e)| {
            Side::Arc(ArcSide {
                arc: arcs[a].clone(),
                end: e,
            })
        }));
        let angle_degrees = (1..chunk.len())
            .map(|_| rng.gen_range(-degree_range..=degree_range))
            .collect();
        polygons.push(Polygon {
            sides: s,
            angle_degrees,
            angle_ids: None,
        });
    }
    Dissection { arcs, polygons }
}

/// A random finite-dimensional gentle pair with `1..=max_vertices` vertices,
/// obtained from a random dissection.
pub fn random_pair(rng: &mut Rng64, max_vertices: usize) -> GentlePair {
    loop {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let d = random_dissection(rng, n, 3);
        if let Ok(p) = algebra_from_dissection(&d) {
            if p.n_arrows() > 0 || n == 1 {
                return p;
            }
        }
    }
}

/// A random graded arc: a walk through the fans that starts and ends at a
/// marked point, with at most `max_len` crossings.
pub fn random_string(rng: &mut Rng64, pair: &GentlePair, max_len: usize) -> Result<GradedString> {
    let fm = pair.fan_model()?;
    let n = pair.n_vertices();
    loop {
        let v = rng.gen_range(0..n);
        let inn = rng.gen_range(0..2u8);
        let mut shift: i64 = rng.gen_range(-2..=2);
        let mut walk = vec![Crossing { v, inn, shift }];
        loop {
            let last = *walk.last().unwrap();
            let (fan, x) = fm.locate(last.v, last.out());
            let m = fm.fan_len(fan);
            let stop = walk.len() >= max_len || rng.gen_bool(0.3);
            let choices: Vec<usize> = (1..=m).filter(|&y| y != x).collect();
            if stop || choices.is_empty() {
                break;
            }
            let y = *choices.choose(rng).unwrap();
            let (nv, slot) = fm.end_at(fan, y);
            let path = if x < y {
                fm.arrows_between(fan, x, y)
            } else {
                fm.arrows_between(fan, y, x)
            };
            let deg: i64 = path.iter().map(|&a| pair.arrow(a).degree).sum();
            shift = if x < y {
                shift - deg + 1
            } else {
                shift + deg - 1
            };
            walk.push(Crossing {
                v: nv,
                inn: slot,
                shift,
            });
        }
        if let Ok(s) = from_walk(pair, &walk) {
            return Ok(s);
        }
    }
}

/// A random dg thread of `len` strings: every next string meets the far end
/// of the previous one at a boundary intersection, shifted to index one.
/// Returns `None` when no such thread was found within a few attempts.
pub fn random_dg_thread(
    rng: &mut Rng64,
    pair: &GentlePair,
    len: usize,
    max_string: usize,
) -> Result<Option<ThreadSpec>> {
    'attempt: for _ in 0..200 {
        let mut strings = vec![random_string(rng, pair, max_string)?];
        let mut records: Vec<IntersectionRecord> = Vec::new();
        while strings.len() < len {
            let prev = strings.last().unwrap().clone();
            let used = records.last().and_then(|r| r.ends()).map(|(_, f)| f);
            let mut found = None;
            for _ in 0..40 {
                let cand = random_string(rng, pair, max_string)?;
                let e = match used {
                    Some(u) => u.other(),
                    None => *[End::Head, End::Tail].choose(rng).unwrap(),
                };
                let f = *[End::Head, End::Tail].choose(rng).unwrap();
                if strings.iter().any(|s| s.same_arc(&cand)) {
                    continue;
                }
                let Some(r) = boundary_record_at(pair, &prev, e, &cand, f)? else {
                    continue;
                };
                let adjust = if r.forward { r.index - 1 } else { 1 - r.index };
                let cand = cand.shifted(adjust);
                let r = boundary_record_at(pair, &prev, e, &cand, f)?
                    .expect("shift keeps the endpoint");
                let mut t = ThreadSpec {
                    strings: strings.clone(),
                    records: records.clone(),
                };
                t.strings.push(cand.clone());
                t.records.push(r.clone());
                if check_thread(pair, &t, true).is_ok() && smooth_thread(pair, &t).is_ok() {
                    found = Some((cand, r));
                    break;
                }
            }
            match found {
                Some((c, r)) => {
                    strings.push(c);
                    records.push(r);
                }
                None => continue 'attempt,
            }
        }
        return Ok(Some(ThreadSpec { strings, records }));
    }
    Ok(None)
}
