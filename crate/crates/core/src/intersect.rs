//! Oriented intersections between graded arcs, their morphisms `f_alpha`
//! and intersection tables.
//!
//! Arcs are handled as walks (see [`crate::string`]). Positions inside a fan
//! are compared cyclically starting just after a reference position, which
//! encodes the clockwise order of arc segments around the marked point.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gentle::{GentlePair, Path, PathId};
use crate::homalg::{Component, DgMorphism};
use crate::string::{reverse_walk, to_walk, visits, Crossing, End, GradedString};

/// Shape of a boundary intersection after cancelling the common part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundaryCase {
    /// No common crossing: a single angle inside the fan.
    Angle,
    /// The source arc is used up by the common part.
    SourceExhausted,
    /// The target arc is used up by the common part.
    TargetExhausted,
    /// The arcs leave the last common crossing on opposite sides.
    Opposite,
    /// The arcs leave the last common crossing on the same side.
    SameSide,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Site {
    /// At a shared endpoint. `end_s` and `end_t` are the ends of the first
    /// and second argument of the enumeration, `overlap` the number of
    /// common crossings read from that endpoint, `junction` the arrows of the
    /// divergence path (empty when there is none).
    Boundary {
        end_s: End,
        end_t: End,
        overlap: usize,
        case: BoundaryCase,
        junction: Vec<usize>,
    },
    /// In the interior. `at_s`/`at_t` index crossings of the two walks (the
    /// second possibly reversed) where a common run of length `len` starts;
    /// for `len == 0` they index the fan stretches that cross.
    Interior {
        at_s: usize,
        at_t: usize,
        len: usize,
        reversed: bool,
    },
}

/// An oriented intersection between `s` and `s'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntersectionRecord {
    /// `true` when oriented from `s` to `s'`.
    pub forward: bool,
    pub index: i64,
    pub site: Site,
}

impl IntersectionRecord {
    pub fn is_boundary(&self) -> bool {
        matches!(self.site, Site::Boundary { .. })
    }

    /// Ends of `(s, s')` used by a boundary record.
    pub fn ends(&self) -> Option<(End, End)> {
        match self.site {
            Site::Boundary { end_s, end_t, .. } => Some((end_s, end_t)),
            Site::Interior { .. } => None,
        }
    }
}

/// A walk read out of one end, with the string position of every crossing.
struct Oriented {
    walk: Vec<Crossing>,
    gens: Vec<usize>,
}

fn oriented(pair: &GentlePair, s: &GradedString, end: End) -> Result<Oriented> {
    let w = to_walk(pair, s)?;
    let r = w.len();
    Ok(match end {
        End::Head => Oriented {
            walk: w,
            gens: (0..r).collect(),
        },
        End::Tail => Oriented {
            walk: reverse_walk(&w),
            gens: (0..r).rev().collect(),
        },
    })
}

/// Cyclic rank of position `z` in a fan of `m` ends, counted from `c`.
fn rank(z: usize, c: usize, m: usize) -> usize {
    (z + m + 1 - c) % (m + 1)
}

fn path_degree(pair: &GentlePair, arrows: &[usize]) -> i64 {
    arrows.iter().map(|&a| pair.arrow(a).degree).sum()
}

fn path_of(pair: &GentlePair, arrows: &[usize]) -> Result<PathId> {
    let start = pair.arrow(arrows[0]).src;
    pair.path_id(&Path {
        start,
        arrows: arrows.to_vec(),
    })
}

/// Divergence data of two walks leaving the same marked point.
struct Divergence {
    overlap: usize,
    fan: usize,
    common: usize,
    x_a: usize,
    x_b: usize,
}

fn diverge(pair: &GentlePair, a: &[Crossing], b: &[Crossing]) -> Result<Option<Divergence>> {
    let fm = pair.fan_model()?;
    let start_a = fm.locate(a[0].v, a[0].inn).0;
    let start_b = fm.locate(b[0].v, b[0].inn).0;
    if start_a != start_b {
        return Ok(None);
    }
    let mut k = 0;
    while k < a.len() && k < b.len() && a[k].same_edge(&b[k]) {
        k += 1;
    }
    if k == a.len() && k == b.len() {
        return Err(Error::Unsupported(
            "the two ends belong to the same arc".into(),
        ));
    }
    let (fan, common) = if k == 0 {
        (start_a, 0)
    } else {
        fm.locate(a[k - 1].v, a[k - 1].out())
    };
    let pos = |w: &[Crossing]| {
        if k < w.len() {
            fm.locate(w[k].v, w[k].inn).1
        } else {
            0
        }
    };
    Ok(Some(Divergence {
        overlap: k,
        fan,
        common,
        x_a: pos(a),
        x_b: pos(b),
    }))
}

/// The boundary intersection at the given ends of `s` and `t`, if those
/// ends sit at the same marked point.
pub fn boundary_record_at(
    pair: &GentlePair,
    s: &GradedString,
    end_s: End,
    t: &GradedString,
    end_t: End,
) -> Result<Option<IntersectionRecord>> {
    let fm = pair.fan_model()?;
    let a = oriented(pair, s, end_s)?;
    let b = oriented(pair, t, end_t)?;
    let Some(d) = diverge(pair, &a.walk, &b.walk)? else {
        return Ok(None);
    };
    let m = fm.fan_len(d.fan);
    let forward = rank(d.x_b, d.common, m) < rank(d.x_a, d.common, m);
    let (src, tgt, xs, xt) = if forward {
        (&a, &b, d.x_a, d.x_b)
    } else {
        (&b, &a, d.x_b, d.x_a)
    };
    let k = d.overlap;
    let (case, junction) = if k == 0 {
        (
            BoundaryCase::Angle,
            fm.arrows_between(d.fan, xt, xs).to_vec(),
        )
    } else if k == src.walk.len() {
        (BoundaryCase::SourceExhausted, Vec::new())
    } else if k == tgt.walk.len() {
        (BoundaryCase::TargetExhausted, Vec::new())
    } else if (xs < d.common) == (xt < d.common) {
        (
            BoundaryCase::SameSide,
            fm.arrows_between(d.fan, xt, xs).to_vec(),
        )
    } else {
        (
            BoundaryCase::Opposite,
            fm.arrows_between(d.fan, xs, xt).to_vec(),
        )
    };
    let index = if k == 0 {
        path_degree(pair, &junction) + src.walk[0].shift - tgt.walk[0].shift
    } else {
        src.walk[0].shift - tgt.walk[0].shift
    };
    Ok(Some(IntersectionRecord {
        forward,
        index,
        site: Site::Boundary {
            end_s,
            end_t,
            overlap: k,
            case,
            junction,
        },
    }))
}

fn ends_of(_s: &GradedString) -> [End; 2] {
    [End::Head, End::Tail]
}

/// One record for every pair of co-located ends.
pub fn boundary_intersections(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
) -> Result<Vec<IntersectionRecord>> {
    refuse_same_arc(s, t)?;
    let mut out = Vec::new();
    for e in ends_of(s) {
        for f in ends_of(t) {
            if let Some(r) = boundary_record_at(pair, s, e, t, f)? {
                out.push(r);
            }
        }
    }
    Ok(out)
}

fn refuse_same_arc(s: &GradedString, t: &GradedString) -> Result<()> {
    if s.same_arc(t) {
        Err(Error::Unsupported(
            "intersections of an arc with itself".into(),
        ))
    } else {
        Ok(())
    }
}

/// Interior crossings, each reported as a pair of records of opposite
/// orientation whose indices sum to one.
pub fn interior_intersections(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
) -> Result<Vec<IntersectionRecord>> {
    refuse_same_arc(s, t)?;
    let fm = pair.fan_model()?;
    let a = to_walk(pair, s)?;
    let b0 = to_walk(pair, t)?;
    let mut out = Vec::new();
    let push_pair = |out: &mut Vec<IntersectionRecord>, fwd: i64, site: Site| {
        out.push(IntersectionRecord {
            forward: true,
            index: fwd,
            site: site.clone(),
        });
        out.push(IntersectionRecord {
            forward: false,
            index: 1 - fwd,
            site,
        });
    };
    // Common runs of crossings.
    for reversed in [false, true] {
        let b = if reversed {
            reverse_walk(&b0)
        } else {
            b0.clone()
        };
        for i in 0..a.len() {
            for j in 0..b.len() {
                if !a[i].same_edge(&b[j]) || (i > 0 && j > 0 && a[i - 1].same_edge(&b[j - 1])) {
                    continue;
                }
                let mut n = 1;
                while i + n < a.len() && j + n < b.len() && a[i + n].same_edge(&b[j + n]) {
                    n += 1;
                }
                let front_gap = i == 0 && j == 0;
                let back_gap = i + n == a.len() && j + n == b.len();
                if front_gap || back_gap {
                    continue;
                }
                let (ff, cf) = fm.locate(a[i].v, a[i].inn);
                let before = |w: &[Crossing], p: usize| {
                    if p == 0 {
                        0
                    } else {
                        fm.locate(w[p - 1].v, w[p - 1].out()).1
                    }
                };
                let (x, x2) = (before(&a, i), before(&b, j));
                let (fb, cb) = fm.locate(a[i + n - 1].v, a[i + n - 1].out());
                let after = |w: &[Crossing], p: usize| {
                    if p == w.len() {
                        0
                    } else {
                        fm.locate(w[p].v, w[p].inn).1
                    }
                };
                let (y, y2) = (after(&a, i + n), after(&b, j + n));
                let (mf, mb) = (fm.fan_len(ff), fm.fan_len(fb));
                let tf = rank(x2, cf, mf) < rank(x, cf, mf);
                let tb = rank(y2, cb, mb) < rank(y, cb, mb);
                if tf != tb {
                    continue;
                }
                let diff = a[i].shift - b[j].shift;
                let fwd = if tf { diff } else { 1 + diff };
                push_pair(
                    &mut out,
                    fwd,
                    Site::Interior {
                        at_s: i,
                        at_t: j,
                        len: n,
                        reversed,
                    },
                );
            }
        }
    }
    // Crossings of two stretches inside one fan.
    let va = visits(pair, &a)?;
    let vb = visits(pair, &b0)?;
    let shift_at =
        |w: &[Crossing], t: usize, first: bool| if first { w[t - 1].shift } else { w[t].shift };
    for (ta, p) in va.iter().enumerate() {
        for (tb, q) in vb.iter().enumerate() {
            if p.fan != q.fan {
                continue;
            }
            let shares = |z: usize| z != 0 && (z == q.a || z == q.b);
            if shares(p.a) || shares(p.b) {
                continue;
            }
            // (position, shift of the adjacent crossing) sorted by position
            let mut sp = [(p.a, true), (p.b, false)];
            let mut sq = [(q.a, true), (q.b, false)];
            sp.sort();
            sq.sort();
            let (p0, p1) = (sp[0].0, sp[1].0);
            let (q0, q1) = (sq[0].0, sq[1].0);
            if p0 == 0 && q0 == 0 {
                continue;
            }
            let site = Site::Interior {
                at_s: ta,
                at_t: tb,
                len: 0,
                reversed: false,
            };
            if p0 < q0 && q0 < p1 && p1 < q1 {
                let ind = path_degree(pair, fm.arrows_between(p.fan, q0, p1))
                    + shift_at(&a, ta, sp[1].1)
                    - shift_at(&b0, tb, sq[0].1);
                push_pair(&mut out, ind, site);
            } else if q0 < p0 && p0 < q1 && q1 < p1 {
                let ind = path_degree(pair, fm.arrows_between(p.fan, p0, q1))
                    + shift_at(&b0, tb, sq[1].1)
                    - shift_at(&a, ta, sp[0].1);
                push_pair(&mut out, 1 - ind, site);
            }
        }
    }
    Ok(out)
}

/// Boundary and interior records between two distinct arcs.
pub fn intersections(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
) -> Result<Vec<IntersectionRecord>> {
    let mut out = boundary_intersections(pair, s, t)?;
    out.extend(interior_intersections(pair, s, t)?);
    Ok(out)
}

/// Number of oriented intersections from `s` to `t` of each index.
pub fn int_table(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
) -> Result<BTreeMap<i64, usize>> {
    let mut table = BTreeMap::new();
    for r in intersections(pair, s, t)? {
        if r.forward {
            *table.entry(r.index).or_default() += 1;
        }
    }
    Ok(table)
}

/// Crossings of an open arc with the dual arc of vertex `i`, by index.
pub fn int_with_dual_simple(s: &GradedString, i: usize) -> BTreeMap<i64, usize> {
    let mut table = BTreeMap::new();
    for (&v, &rho) in s.vertices.iter().zip(&s.shifts) {
        if v == i {
            *table.entry(rho).or_default() += 1;
        }
    }
    table
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The closed morphism `f_alpha` of a boundary record, from the source arc
/// of the record to its target arc.
pub fn morphism_from_intersection(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
) -> Result<DgMorphism> {
    let Site::Boundary {
        end_s,
        end_t,
        overlap: k,
        case,
        ref junction,
    } = rec.site
    else {
        return Err(Error::Unsupported(
            "morphisms of interior intersections".into(),
        ));
    };
    let (src, tgt) = if rec.forward {
        (oriented(pair, s, end_s)?, oriented(pair, t, end_t)?)
    } else {
        (oriented(pair, t, end_t)?, oriented(pair, s, end_s)?)
    };
    let b = pair.basis()?;
    let rho = rec.index;
    let mut comps = Vec::new();
    for u in 0..k {
        comps.push(Component {
            from: src.gens[u],
            to: tgt.gens[u],
            coeff: sign(rho * u as i64),
            path: b.trivial(src.walk[u].v),
        });
    }
    if matches!(case, BoundaryCase::Angle | BoundaryCase::SameSide) {
        comps.push(Component {
            from: src.gens[k],
            to: tgt.gens[k],
            coeff: sign(rho * k as i64),
            path: path_of(pair, junction)?,
        });
    }
    Ok(DgMorphism { degree: rho, comps })
}

/// The record `alpha''` from `s1` to `s3` composed of `alpha: s1 -> s2` and
/// `beta: s2 -> s3`, both given relative to the argument order shown.
pub fn compose_intersections(
    pair: &GentlePair,
    s1: &GradedString,
    _s2: &GradedString,
    s3: &GradedString,
    alpha: &IntersectionRecord,
    beta: &IntersectionRecord,
) -> Result<IntersectionRecord> {
    let (Some((e1, e2)), Some((f2, f3))) = (alpha.ends(), beta.ends()) else {
        return Err(Error::NotComposable(
            "only boundary intersections compose".into(),
        ));
    };
    if !alpha.forward || !beta.forward || e2 != f2 {
        return Err(Error::NotComposable(
            "intersections do not meet at a common end".into(),
        ));
    }
    match boundary_record_at(pair, s1, e1, s3, f3)? {
        Some(r) if r.forward && r.index == alpha.index + beta.index => Ok(r),
        _ => Err(Error::NotComposable(
            "the two angles do not follow each other".into(),
        )),
    }
}
