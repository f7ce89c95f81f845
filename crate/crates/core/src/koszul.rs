//! Smoothing of arcs along oriented intersections, dg threads, projective
//! resolutions of simples, the half rotation of closed arcs and the object
//! part of the Koszul functor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentle::{GentlePair, Path};
use crate::homalg::{thread_total_module, Component, DgModule, DgMorphism, Direction};
use crate::intersect::{boundary_record_at, morphism_from_intersection, IntersectionRecord, Site};
use crate::string::{
    build_x_module, check_string, from_walk, reverse_walk, to_walk, ArcFile, Crossing, Dir, End,
    GradedString, Letter, Over,
};

/// Strings joined by boundary records; `records[i]` is given relative to
/// `(strings[i], strings[i + 1])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadSpec {
    pub strings: Vec<GradedString>,
    pub records: Vec<IntersectionRecord>,
}

/// On-disk form of a thread: the arcs in order and, for each consecutive
/// pair, the end of the first and the end of the second arc at which they
/// meet. All arcs live over the same side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreadFile {
    pub arcs: Vec<ArcFile>,
    pub ends: Vec<[End; 2]>,
}

impl ThreadFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    /// The side the arcs live over, or an error when they disagree.
    pub fn over(&self) -> Result<Over> {
        let first = self
            .arcs
            .first()
            .ok_or_else(|| Error::Thread("empty thread".into()))?
            .over;
        if self.arcs.iter().any(|a| a.over != first) {
            return Err(Error::Thread(
                "arcs of a thread must live over the same side".into(),
            ));
        }
        Ok(first)
    }

    /// Resolves the arcs over `pair` and locates each record at its ends.
    pub fn to_thread(&self, pair: &GentlePair) -> Result<ThreadSpec> {
        self.over()?;
        if self.ends.len() + 1 != self.arcs.len() {
            return Err(Error::Thread("need n arcs and n - 1 end pairs".into()));
        }
        let strings = self
            .arcs
            .iter()
            .map(|a| a.to_string_over(pair))
            .collect::<Result<Vec<_>>>()?;
        let mut records = Vec::new();
        for (i, [e, f]) in self.ends.iter().enumerate() {
            let r = boundary_record_at(pair, &strings[i], *e, &strings[i + 1], *f)?.ok_or_else(
                || {
                    Error::Thread(format!(
                        "arcs {} and {} do not meet at the given ends",
                        i + 1,
                        i + 2
                    ))
                },
            )?;
            records.push(r);
        }
        let t = ThreadSpec { strings, records };
        check_thread(pair, &t, false)?;
        Ok(t)
    }

    pub fn from_thread(pair: &GentlePair, over: Over, t: &ThreadSpec) -> Result<Self> {
        let ends = t
            .records
            .iter()
            .map(|r| {
                r.ends()
                    .map(|(e, f)| [e, f])
                    .ok_or_else(|| Error::Thread("interior record in a thread".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ThreadFile {
            arcs: t
                .strings
                .iter()
                .map(|s| ArcFile::from_string(pair, over, s))
                .collect(),
            ends,
        })
    }
}

fn walk_out_of(
    pair: &GentlePair,
    s: &GradedString,
    end: End,
) -> Result<(Vec<Crossing>, Vec<usize>)> {
    let w = to_walk(pair, s)?;
    let r = w.len();
    Ok(match end {
        End::Head => (w, (0..r).collect()),
        End::Tail => (reverse_walk(&w), (0..r).rev().collect()),
    })
}

fn boundary_data(rec: &IntersectionRecord) -> Result<(End, End, usize)> {
    match rec.site {
        Site::Boundary {
            end_s,
            end_t,
            overlap,
            ..
        } => Ok((end_s, end_t, overlap)),
        Site::Interior { .. } => Err(Error::Unsupported(
            "smoothing along an interior intersection".into(),
        )),
    }
}

/// The arc obtained from `s` and `t` by smoothing the boundary record `rec`
/// (given relative to `(s, t)`). The result runs from the far end of `s` to
/// the far end of `t`. Its grading is that of `s`; when the index is not one
/// the part coming from `t` is shifted so that the connecting component has
/// degree one.
pub fn smooth(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
) -> Result<GradedString> {
    Ok(smooth_oriented(pair, s, t, rec)?.0)
}

/// [`smooth`] together with the end of the result that is the far end of
/// `t`. This is the tail except for single-crossing results, whose string
/// form always reads from end-slot 0.
fn smooth_oriented(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
) -> Result<(GradedString, End)> {
    let (end_s, end_t, k) = boundary_data(rec)?;
    let (a, _) = walk_out_of(pair, s, end_s)?;
    let (b, _) = walk_out_of(pair, t, end_t)?;
    let adjust = if rec.forward {
        rec.index - 1
    } else {
        1 - rec.index
    };
    let mut walk = reverse_walk(&a[k..]);
    walk.extend(b[k..].iter().map(|c| Crossing {
        shift: c.shift + adjust,
        ..*c
    }));
    if walk.is_empty() {
        return Err(Error::Unsupported("smoothing an arc with itself".into()));
    }
    let out = from_walk(pair, &walk)?;
    let far = if to_walk(pair, &out)? == walk {
        End::Tail
    } else {
        End::Head
    };
    Ok((out, far))
}

fn direction(rec: &IntersectionRecord) -> Direction {
    if rec.forward {
        Direction::Forward
    } else {
        Direction::Backward
    }
}

/// The morphism `f_alpha` of every record of the thread with its direction.
pub fn thread_maps(pair: &GentlePair, t: &ThreadSpec) -> Result<Vec<(DgMorphism, Direction)>> {
    t.records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok((
                morphism_from_intersection(pair, &t.strings[i], &t.strings[i + 1], r)?,
                direction(r),
            ))
        })
        .collect()
}

/// Checks the thread conditions, and with `dg` also the dg-thread ones.
pub fn check_thread(pair: &GentlePair, t: &ThreadSpec, dg: bool) -> Result<()> {
    if t.strings.is_empty() || t.records.len() + 1 != t.strings.len() {
        return Err(Error::Thread("need n strings and n - 1 records".into()));
    }
    for (i, r) in t.records.iter().enumerate() {
        let (e, f, _) = boundary_data(r)?;
        let again = boundary_record_at(pair, &t.strings[i], e, &t.strings[i + 1], f)?;
        if again.as_ref() != Some(r) {
            return Err(Error::Thread(format!(
                "record {} does not match its strings",
                i + 1
            )));
        }
        if i > 0 {
            let (_, prev_f, _) = boundary_data(&t.records[i - 1])?;
            if prev_f == e {
                return Err(Error::Thread(format!(
                    "records {} and {} share an end of string {}",
                    i,
                    i + 1,
                    i + 1
                )));
            }
        }
        if dg && r.index != 1 {
            return Err(Error::Thread(format!(
                "record {} has index {}",
                i + 1,
                r.index
            )));
        }
    }
    if dg {
        let maps = thread_maps(pair, t)?;
        for i in 1..maps.len() {
            let composite = match (maps[i - 1].1, maps[i].1) {
                (Direction::Forward, Direction::Forward) => maps[i - 1].0.then(pair, &maps[i].0)?,
                (Direction::Backward, Direction::Backward) => {
                    maps[i].0.then(pair, &maps[i - 1].0)?
                }
                _ => continue,
            };
            if !composite.is_zero() {
                return Err(Error::Thread(format!(
                    "records {} and {} compose to a nonzero map",
                    i,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// The dg module of a dg thread.
pub fn thread_module(pair: &GentlePair, t: &ThreadSpec) -> Result<DgModule> {
    check_thread(pair, t, true)?;
    let mods = t
        .strings
        .iter()
        .map(|s| build_x_module(pair, s))
        .collect::<Result<Vec<_>>>()?;
    thread_total_module(pair, &mods, &thread_maps(pair, t)?)
}

/// Smoothing of a thread, folding from the left. After each step the record
/// to the next string is recomputed at the far end of the accumulated arc.
pub fn smooth_thread(pair: &GentlePair, t: &ThreadSpec) -> Result<GradedString> {
    check_thread(pair, t, false)?;
    let mut acc = t.strings[0].clone();
    let mut far = End::Tail;
    for (i, r) in t.records.iter().enumerate() {
        let (_, f, _) = boundary_data(r)?;
        let next = &t.strings[i + 1];
        let rec = if i == 0 {
            r.clone()
        } else {
            boundary_record_at(pair, &acc, far, next, f)?
                .ok_or_else(|| Error::Thread(format!("record {} is lost after smoothing", i + 1)))?
        };
        if rec.index != r.index {
            return Err(Error::Thread(format!(
                "induced record {} has index {}",
                i + 1,
                rec.index
            )));
        }
        (acc, far) = smooth_oriented(pair, &acc, next, &rec)?;
    }
    Ok(acc)
}

/// The thread of generator arcs `gamma_{k_u}[rho_u]` into which `s`
/// decomposes, one index-one record per letter.
pub fn decomposition_thread(pair: &GentlePair, s: &GradedString) -> Result<ThreadSpec> {
    let w = to_walk(pair, s)?;
    let strings: Vec<GradedString> = w
        .iter()
        .map(|c| GradedString::generator(c.v, c.shift))
        .collect();
    let mut records = Vec::new();
    for u in 0..w.len().saturating_sub(1) {
        let e = if w[u].out() == 0 {
            End::Head
        } else {
            End::Tail
        };
        let f = if w[u + 1].inn == 0 {
            End::Head
        } else {
            End::Tail
        };
        let r = boundary_record_at(pair, &strings[u], e, &strings[u + 1], f)?
            .ok_or_else(|| Error::Thread(format!("segment {} gives no intersection", u + 1)))?;
        records.push(r);
    }
    Ok(ThreadSpec { strings, records })
}

/// The homotopy equivalences of a cone with the smoothed arc.
#[derive(Clone, Debug)]
pub struct HomotopyPair {
    /// `X(source) (+) X(target)` with `f_alpha` added to the differential;
    /// generators of the source come first.
    pub cone: DgModule,
    pub smoothing: GradedString,
    pub chi: DgMorphism,
    pub psi: DgMorphism,
}

/// The letter joining two adjacent generators `g1`, `g2` of `s`, as
/// `(from, to, path)`.
fn letter_between(
    pair: &GentlePair,
    s: &GradedString,
    g1: usize,
    g2: usize,
) -> Result<(usize, usize, usize)> {
    let i = g1.min(g2);
    let l = &s.letters[i];
    let path = pair.path_id(&Path {
        start: pair.arrow(l.path[0]).src,
        arrows: l.path.clone(),
    })?;
    Ok(match l.dir {
        Dir::L => (i + 1, i, path),
        Dir::R => (i, i + 1, path),
    })
}

/// `chi: Cone(f_alpha) -> X(s ^ s')` and `psi` back, for an index-one
/// boundary record given relative to `(s, t)`.
pub fn homotopy_equivalence_pair(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
) -> Result<HomotopyPair> {
    if rec.index != 1 {
        return Err(Error::Unsupported(format!(
            "homotopy equivalence for index {}",
            rec.index
        )));
    }
    let (end_s, end_t, k) = boundary_data(rec)?;
    let (src, tgt, es, et) = if rec.forward {
        (s, t, end_s, end_t)
    } else {
        (t, s, end_t, end_s)
    };
    let (a, ga) = walk_out_of(pair, src, es)?;
    let (b, gb) = walk_out_of(pair, tgt, et)?;
    let f = morphism_from_intersection(pair, s, t, rec)?;
    let xa = build_x_module(pair, src)?;
    let xb = build_x_module(pair, tgt)?;
    let cone = thread_total_module(pair, &[xa.clone(), xb.clone()], &[(f, Direction::Forward)])?;
    let off = xa.gens.len();
    let mut walk = reverse_walk(&a[k..]);
    walk.extend_from_slice(&b[k..]);
    let smoothing = from_walk(pair, &walk)?;
    let basis = pair.basis()?;
    let r_a = |u: usize| a.len() - 1 - u;
    let r_b = |v: usize| a.len() - k + (v - k);
    let sign_k = if k % 2 == 0 { 1 } else { -1 };
    let mut chi = Vec::new();
    let mut psi = Vec::new();
    for u in k..a.len() {
        let p = basis.trivial(a[u].v);
        chi.push(Component {
            from: ga[u],
            to: r_a(u),
            coeff: 1,
            path: p,
        });
        psi.push(Component {
            from: r_a(u),
            to: ga[u],
            coeff: 1,
            path: p,
        });
    }
    for v in k..b.len() {
        let p = basis.trivial(b[v].v);
        chi.push(Component {
            from: off + gb[v],
            to: r_b(v),
            coeff: sign_k,
            path: p,
        });
        psi.push(Component {
            from: r_b(v),
            to: off + gb[v],
            coeff: sign_k,
            path: p,
        });
    }
    if k >= 1 && k < a.len() {
        let (from, _, path) = letter_between(pair, src, ga[k - 1], ga[k])?;
        if from == ga[k - 1] {
            chi.push(Component {
                from: off + gb[k - 1],
                to: r_a(k),
                coeff: sign_k,
                path,
            });
        }
    }
    if k >= 1 && k < b.len() {
        let (from, _, path) = letter_between(pair, tgt, gb[k - 1], gb[k])?;
        if from == gb[k] {
            psi.push(Component {
                from: r_b(k),
                to: ga[k - 1],
                coeff: 1,
                path,
            });
        }
    }
    Ok(HomotopyPair {
        cone,
        smoothing,
        chi: DgMorphism {
            degree: 0,
            comps: chi,
        }
        .normalized(),
        psi: DgMorphism {
            degree: 0,
            comps: psi,
        }
        .normalized(),
    })
}

/// The embedding of `X(t)` into `Cone(f_rec)` when `into_target`, else of
/// `X(s)`, where `rec` is relative to `(s, t)`. The summand that is the target
/// of `f_rec` is embedded with sign `(-1)^k`, `k` the overlap of `rec`.
pub fn cone_embedding(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
    into_target: bool,
) -> Result<DgMorphism> {
    cone_summand(pair, s, t, rec, into_target)
}

/// The projection of `Cone(f_rec)` onto the summand chosen as in
/// [`cone_embedding`], with the same sign.
pub fn cone_projection(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
    onto_target: bool,
) -> Result<DgMorphism> {
    let e = cone_summand(pair, s, t, rec, onto_target)?;
    let comps = e
        .comps
        .iter()
        .map(|c| Component {
            from: c.to,
            to: c.from,
            ..*c
        })
        .collect();
    Ok(DgMorphism { degree: 0, comps }.normalized())
}

fn cone_summand(
    pair: &GentlePair,
    s: &GradedString,
    t: &GradedString,
    rec: &IntersectionRecord,
    target: bool,
) -> Result<DgMorphism> {
    let (_, _, k) = boundary_data(rec)?;
    let (src, tgt) = if rec.forward { (s, t) } else { (t, s) };
    let (part, off, coeff) = if target {
        (tgt, src.len(), if k % 2 == 0 { 1 } else { -1 })
    } else {
        (src, 0, 1)
    };
    let basis = pair.basis()?;
    let comps = (0..part.len())
        .map(|u| Component {
            from: u,
            to: u + off,
            coeff,
            path: basis.trivial(part.vertices[u]),
        })
        .collect();
    Ok(DgMorphism { degree: 0, comps })
}

/// Checks the composition identities of the homotopy equivalence on a thread
/// of three strings `s1, s2, s3`. With `H = homotopy_equivalence_pair(s2, s3)`
/// and `R` the smoothing, the morphism `f_{a1}` between `s1` and `s2` must be
/// carried to the morphism of an induced record between `s1` and `R`:
/// `chi . iota . f_{a1}` when `a1` points into `s2`, and `f_{a1} . pi . psi`
/// when it points out of `s2`. Returns `Ok(true)` when the identity holds.
pub fn composition_identity_holds(pair: &GentlePair, t: &ThreadSpec) -> Result<bool> {
    if t.strings.len() != 3 {
        return Err(Error::Thread(
            "composition identity needs a thread of three strings".into(),
        ));
    }
    let (s1, s2, s3) = (&t.strings[0], &t.strings[1], &t.strings[2]);
    let (a1, a2) = (&t.records[0], &t.records[1]);
    let hp = homotopy_equivalence_pair(pair, s2, s3, a2)?;
    let f1 = morphism_from_intersection(pair, s1, s2, a1)?;
    let s2_is_target = !a2.forward;
    let lhs = if a1.forward {
        let iota = cone_embedding(pair, s2, s3, a2, s2_is_target)?;
        f1.then(pair, &iota)?.then(pair, &hp.chi)?
    } else {
        let pi = cone_projection(pair, s2, s3, a2, s2_is_target)?;
        hp.psi.then(pair, &pi)?.then(pair, &f1)?
    }
    .normalized();
    if s1.same_arc(&hp.smoothing) {
        return Err(Error::Unsupported(
            "the smoothing is the first arc of the thread".into(),
        ));
    }
    let (e1, _) = a1
        .ends()
        .ok_or_else(|| Error::Thread("interior record in a thread".into()))?;
    for e in [End::Head, End::Tail] {
        let Some(rec) = boundary_record_at(pair, s1, e1, &hp.smoothing, e)? else {
            continue;
        };
        if rec.forward != a1.forward {
            continue;
        }
        if morphism_from_intersection(pair, s1, &hp.smoothing, &rec)?.normalized() == lhs {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Orders the maximal relation paths at `i`: longer first, then by the id of
/// the first arrow.
fn branches(pair: &GentlePair, i: usize) -> (Vec<usize>, Vec<usize>) {
    let mut ps: Vec<Vec<usize>> = pair
        .maximal_relation_paths(i)
        .into_iter()
        .map(|p| p.arrows)
        .collect();
    ps.sort_by(|x, y| {
        y.len()
            .cmp(&x.len())
            .then_with(|| pair.arrow(x[0]).id.cmp(&pair.arrow(y[0]).id))
    });
    let mut it = ps.into_iter();
    (it.next().unwrap_or_default(), it.next().unwrap_or_default())
}

/// The string of the projective resolution of the simple module at `i`.
pub fn simple_resolution(pair: &GentlePair, i: usize) -> Result<GradedString> {
    let (left, right) = branches(pair, i);
    let mut vertices = Vec::new();
    let mut shifts = Vec::new();
    let mut letters = Vec::new();
    let mut deg = 0;
    let mut left_part = Vec::new();
    for (j, &a) in left.iter().enumerate() {
        deg += pair.arrow(a).degree;
        left_part.push((pair.arrow(a).tgt, (j as i64 + 1) - deg, a));
    }
    for &(v, sh, a) in left_part.iter().rev() {
        vertices.push(v);
        shifts.push(sh);
        letters.push(Letter {
            dir: Dir::R,
            path: vec![a],
        });
    }
    vertices.push(i);
    shifts.push(0);
    deg = 0;
    for (j, &a) in right.iter().enumerate() {
        deg += pair.arrow(a).degree;
        vertices.push(pair.arrow(a).tgt);
        shifts.push((j as i64 + 1) - deg);
        letters.push(Letter {
            dir: Dir::L,
            path: vec![a],
        });
    }
    let s = GradedString {
        vertices,
        shifts,
        letters,
    };
    check_string(pair, &s)?;
    Ok(s)
}

/// Position of vertex `i` inside its own resolution string.
pub fn resolution_center(pair: &GentlePair, i: usize) -> usize {
    branches(pair, i).0.len()
}

/// The end of `pS_x` whose branch leaves `x` through end-slot `slot`.
fn resolution_end(pair: &GentlePair, res: &GradedString, x: usize, slot: u8) -> Result<End> {
    let w = to_walk(pair, res)?;
    let c = w[resolution_center(pair, x)];
    Ok(if c.inn == slot { End::Head } else { End::Tail })
}

/// Core of both half rotations: `eta` lives over `dual`, the result over
/// `base`, and every generator `(j, n)` of `eta` becomes the resolution of
/// the simple at `j` over `base`, shifted by `n + offset`.
fn rotate_generic(
    base: &GentlePair,
    dual: &GentlePair,
    eta: &GradedString,
    offset: i64,
) -> Result<GradedString> {
    check_string(dual, eta)?;
    let fm = base.fan_model()?;
    let strings = eta
        .vertices
        .iter()
        .zip(&eta.shifts)
        .map(|(&j, &n)| Ok(simple_resolution(base, j)?.shifted(n + offset)))
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::new();
    for (v, l) in eta.letters.iter().enumerate() {
        // dual arrows a* reversed give the base path b_1..b_u from x to y
        let prim: Vec<usize> = l
            .path
            .iter()
            .rev()
            .map(|&d| base.arrow_index(&crate::gentle::dual_name(&dual.arrow(d).id)))
            .collect::<Result<_>>()?;
        let (x_pos, y_pos) = match l.dir {
            Dir::L => (v + 1, v),
            Dir::R => (v, v + 1),
        };
        let (x, y) = (eta.vertices[x_pos], eta.vertices[y_pos]);
        let e_x = resolution_end(base, &strings[x_pos], x, fm.src_end[prim[0]])?;
        let e_y = resolution_end(
            base,
            &strings[y_pos],
            y,
            1 - fm.tgt_end[*prim.last().unwrap()],
        )?;
        let (e_v, e_v1) = if x_pos == v { (e_x, e_y) } else { (e_y, e_x) };
        let rec = boundary_record_at(base, &strings[v], e_v, &strings[v + 1], e_v1)?.ok_or_else(
            || {
                Error::Thread(format!(
                    "letter {} gives no intersection of resolutions",
                    v + 1
                ))
            },
        )?;
        if rec.index != 1 {
            return Err(Error::Thread(format!(
                "letter {} gives an intersection of index {}",
                v + 1,
                rec.index
            )));
        }
        records.push(rec);
    }
    smooth_thread(base, &ThreadSpec { strings, records })
}

/// Half rotation of a closed arc (a string over the quadratic dual of
/// `pair`) to an open arc over `pair`.
pub fn half_rotate(pair: &GentlePair, eta: &GradedString) -> Result<GradedString> {
    let dual = pair.quadratic_dual()?;
    rotate_generic(pair, &dual, eta, 0)
}

/// Half rotation of an open arc over `pair` to a closed arc over its
/// quadratic dual. The shift offset accounts for the dual of the dual
/// system being the original one shifted by one.
pub fn half_rotate_open(pair: &GentlePair, sigma: &GradedString) -> Result<GradedString> {
    let dual = pair.quadratic_dual()?;
    rotate_generic(&dual, pair, sigma, -1)
}

/// The object of the Koszul functor on the closed arc `eta`.
pub fn koszul_object(pair: &GentlePair, eta: &GradedString) -> Result<DgModule> {
    build_x_module(pair, &half_rotate(pair, eta)?)
}

/// Two angles to compose: `(i, j, k, alpha, beta)` with `alpha` relative to
/// `(strings[i], strings[j])` and `beta` relative to `(strings[j], strings[k])`.
pub type AnglePair = (usize, usize, usize, IntersectionRecord, IntersectionRecord);

/// Whether the composite of every listed pair of angles vanishes.
pub fn strong_formality_check(
    pair: &GentlePair,
    strings: &[GradedString],
    pairs: &[AnglePair],
) -> Result<bool> {
    for (i, j, k, alpha, beta) in pairs {
        let (i, j, k) = (*i, *j, *k);
        if alpha.forward != beta.forward || !alpha.is_boundary() || !beta.is_boundary() {
            return Err(Error::NotComposable(format!(
                "angles at {i}, {j}, {k} do not form a chain"
            )));
        }
        let f = morphism_from_intersection(pair, &strings[i], &strings[j], alpha)?;
        let g = morphism_from_intersection(pair, &strings[j], &strings[k], beta)?;
        let comp = if alpha.forward {
            f.then(pair, &g)?
        } else {
            g.then(pair, &f)?
        };
        if !comp.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The resolution family `pS_1, ..., pS_n` together with the adjacent
/// angles given by the relations of the quadratic dual.
pub fn resolution_family(pair: &GentlePair) -> Result<(Vec<GradedString>, Vec<AnglePair>)> {
    let fm = pair.fan_model()?;
    let strings = (0..pair.n_vertices())
        .map(|i| simple_resolution(pair, i))
        .collect::<Result<Vec<_>>>()?;
    let angle = |a: usize| -> Result<(usize, usize, IntersectionRecord)> {
        let (x, y) = (pair.arrow(a).src, pair.arrow(a).tgt);
        let ex = resolution_end(pair, &strings[x], x, fm.src_end[a])?;
        let ey = resolution_end(pair, &strings[y], y, 1 - fm.tgt_end[a])?;
        let r = boundary_record_at(pair, &strings[x], ex, &strings[y], ey)?
            .ok_or_else(|| Error::Thread(format!("arrow {} gives no angle", pair.arrow(a).id)))?;
        Ok((x, y, r))
    };
    let mut pairs = Vec::new();
    // dual relations d1 d2 correspond to free compositions x2 x1 of `pair`
    for a2 in 0..pair.n_arrows() {
        for a1 in pair.free_successors(a2).collect::<Vec<_>>() {
            let (x, j, alpha) = angle(a2)?;
            let (j2, z, beta) = angle(a1)?;
            debug_assert_eq!(j, j2);
            if alpha.forward == beta.forward {
                pairs.push((x, j, z, alpha, beta));
            }
        }
    }
    Ok((strings, pairs))
}

/// Direct crossing counts of `sigma` with every dual arc, keyed by vertex.
pub fn dual_simple_counts(
    pair: &GentlePair,
    sigma: &GradedString,
) -> BTreeMap<usize, BTreeMap<i64, usize>> {
    (0..pair.n_vertices())
        .map(|i| (i, crate::intersect::int_with_dual_simple(sigma, i)))
        .filter(|(_, t)| !t.is_empty())
        .collect()
}
