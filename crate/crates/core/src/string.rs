//! Graded homotopy strings and their dg modules.
//!
//! Besides the letter description, a string is also handled as a *walk*: the
//! sequence of crossings `(k_i, entry end-slot, shift)`. Between two crossings
//! the walk stays inside one fan, and the letter path is the run of fan arrows
//! between the exit of one crossing and the entry of the next.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentle::{GentlePair, Path};
use crate::homalg::{Component, DgModule, Generator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub dir: Dir,
    pub path: Vec<usize>,
}

/// Vertices `k_1..k_r`, shifts `rho_1..rho_r` and the `r - 1` letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedString {
    pub vertices: Vec<usize>,
    pub shifts: Vec<i64>,
    pub letters: Vec<Letter>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Head,
    Tail,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Head => End::Tail,
            End::Tail => End::Head,
        }
    }
}

/// Crossing of a walk: the arc, the end-slot it is entered from, the shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub v: usize,
    pub inn: u8,
    pub shift: i64,
}

impl Crossing {
    pub fn out(&self) -> u8 {
        1 - self.inn
    }

    pub fn reversed(&self) -> Crossing {
        Crossing {
            v: self.v,
            inn: 1 - self.inn,
            shift: self.shift,
        }
    }

    pub fn same_edge(&self, o: &Crossing) -> bool {
        self.v == o.v && self.inn == o.inn
    }
}

/// A stretch of a walk inside one fan: positions `a` (coming from the
/// previous crossing) and `b` (going to the next one); 0 is the boundary gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub fan: usize,
    pub a: usize,
    pub b: usize,
}

impl GradedString {
    pub fn generator(v: usize, shift: i64) -> Self {
        GradedString {
            vertices: vec![v],
            shifts: vec![shift],
            letters: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let mut shifts = self.shifts.clone();
        shifts.reverse();
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter {
                dir: l.dir.flip(),
                path: l.path.clone(),
            })
            .collect();
        GradedString {
            vertices,
            shifts,
            letters,
        }
    }

    /// All shifts raised by `n`.
    pub fn shifted(&self, n: i64) -> Self {
        let mut s = self.clone();
        for x in &mut s.shifts {
            *x += n;
        }
        s
    }

    /// The same arc up to orientation and shift.
    pub fn same_arc(&self, other: &GradedString) -> bool {
        let strip = |s: &GradedString| {
            let mut s = s.clone();
            let m = s.shifts[0];
            for x in &mut s.shifts {
                *x -= m;
            }
            s
        };
        strip(self) == strip(other) || strip(&self.reversed()) == strip(other)
    }
}

/// `s` with every shift raised by `n`.
pub fn shift_string(s: &GradedString, n: i64) -> GradedString {
    s.shifted(n)
}

/// Lexicographic minimum of `s` and its reversal.
pub fn canonical_form(s: &GradedString) -> GradedString {
    let r = s.reversed();
    if r < *s {
        r
    } else {
        s.clone()
    }
}

fn letter_endpoints(pair: &GentlePair, l: &Letter) -> Option<(usize, usize)> {
    let first = *l.path.first()?;
    let last = *l.path.last()?;
    Some((pair.arrow(first).src, pair.arrow(last).tgt))
}

/// Every violated string invariant, with its position (1-based).
pub fn validate_string(pair: &GentlePair, s: &GradedString) -> Vec<String> {
    let mut errs = Vec::new();
    let r = s.vertices.len();
    if r == 0 {
        return vec!["string has no vertices".into()];
    }
    if s.shifts.len() != r {
        errs.push(format!("{} shifts for {r} vertices", s.shifts.len()));
        return errs;
    }
    if s.letters.len() + 1 != r {
        errs.push(format!("{} letters for {r} vertices", s.letters.len()));
        return errs;
    }
    if let Some(&v) = s.vertices.iter().find(|&&v| v >= pair.n_vertices()) {
        errs.push(format!("vertex index {v} out of range"));
        return errs;
    }
    for (i, l) in s.letters.iter().enumerate() {
        let pos = i + 1;
        if l.path.is_empty() {
            errs.push(format!("letter {pos}: empty path"));
            continue;
        }
        if l.path.iter().any(|&a| a >= pair.n_arrows()) {
            errs.push(format!("letter {pos}: arrow out of range"));
            continue;
        }
        let p = Path {
            start: pair.arrow(l.path[0]).src,
            arrows: l.path.clone(),
        };
        if !pair.is_nonzero(&p) {
            errs.push(format!(
                "letter {pos}: path {} is zero or not composable",
                pair.path_name(&p)
            ));
            continue;
        }
        let (from, to) = letter_endpoints(pair, l).unwrap();
        let (want_from, want_to) = match l.dir {
            Dir::L => (s.vertices[i], s.vertices[i + 1]),
            Dir::R => (s.vertices[i + 1], s.vertices[i]),
        };
        if (from, to) != (want_from, want_to) {
            errs.push(format!(
                "letter {pos}: path runs {} -> {} but direction {:?} needs {} -> {}",
                pair.vertex_name(from),
                pair.vertex_name(to),
                l.dir,
                pair.vertex_name(want_from),
                pair.vertex_name(want_to)
            ));
            continue;
        }
        let deg = pair.path_degree(&p);
        let ok = match l.dir {
            Dir::L => s.shifts[i] == s.shifts[i + 1] + deg - 1,
            Dir::R => s.shifts[i + 1] == s.shifts[i] + deg - 1,
        };
        if !ok {
            errs.push(format!(
                "letter {pos}: grading recursion fails (shifts {}, {}, path degree {deg}, direction {:?})",
                s.shifts[i],
                s.shifts[i + 1],
                l.dir
            ));
        }
    }
    if !errs.is_empty() {
        return errs;
    }
    for i in 1..s.letters.len() {
        let (p, q) = (&s.letters[i - 1], &s.letters[i]);
        let pos = i + 1;
        match (p.dir, q.dir) {
            (Dir::L, Dir::L) => {
                let (a, b) = (*p.path.last().unwrap(), q.path[0]);
                if !pair.is_relation(a, b) {
                    errs.push(format!(
                        "position {pos}: consecutive L letters need a relation at the junction"
                    ));
                }
            }
            (Dir::R, Dir::R) => {
                let (a, b) = (*q.path.last().unwrap(), p.path[0]);
                if !pair.is_relation(a, b) {
                    errs.push(format!(
                        "position {pos}: consecutive R letters need a relation at the junction"
                    ));
                }
            }
            (Dir::L, Dir::R) => {
                if p.path.last() == q.path.last() {
                    errs.push(format!(
                        "position {pos}: both letters end with the same arrow"
                    ));
                }
            }
            (Dir::R, Dir::L) => {
                if p.path.first() == q.path.first() {
                    errs.push(format!(
                        "position {pos}: both letters start with the same arrow"
                    ));
                }
            }
        }
    }
    errs
}

pub fn check_string(pair: &GentlePair, s: &GradedString) -> Result<()> {
    let e = validate_string(pair, s);
    if e.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidString(e))
    }
}

/// The dg module `X(s)`: generators `(k_i, rho_i)`, one component per letter.
pub fn build_x_module(pair: &GentlePair, s: &GradedString) -> Result<DgModule> {
    check_string(pair, s)?;
    let basis = pair.basis()?;
    let gens = s
        .vertices
        .iter()
        .zip(&s.shifts)
        .map(|(&vertex, &shift)| Generator { vertex, shift })
        .collect();
    let mut comps = Vec::new();
    for (i, l) in s.letters.iter().enumerate() {
        let p = Path {
            start: pair.arrow(l.path[0]).src,
            arrows: l.path.clone(),
        };
        let path = basis
            .id_of(&p)
            .ok_or_else(|| Error::Structure("letter path missing from basis".into()))?;
        let (from, to) = match l.dir {
            Dir::L => (i + 1, i),
            Dir::R => (i, i + 1),
        };
        comps.push(Component {
            from,
            to,
            coeff: 1,
            path,
        });
    }
    Ok(DgModule { gens, comps })
}

/// The crossing sequence of a valid string.
pub fn to_walk(pair: &GentlePair, s: &GradedString) -> Result<Vec<Crossing>> {
    check_string(pair, s)?;
    let fm = pair.fan_model()?;
    let r = s.vertices.len();
    let mut inn = vec![0u8; r];
    for (t, l) in s.letters.iter().enumerate() {
        let first = l.path[0];
        let last = *l.path.last().unwrap();
        let (out_t, in_next) = match l.dir {
            Dir::L => (fm.src_end[first], fm.tgt_end[last]),
            Dir::R => (fm.tgt_end[last], fm.src_end[first]),
        };
        if t == 0 {
            inn[0] = 1 - out_t;
        } else if inn[t] != 1 - out_t {
            return Err(Error::InvalidString(vec![format!(
                "position {}: letters use the same arc-end",
                t + 1
            )]));
        }
        inn[t + 1] = in_next;
    }
    Ok((0..r)
        .map(|t| Crossing {
            v: s.vertices[t],
            inn: inn[t],
            shift: s.shifts[t],
        })
        .collect())
}

/// Rebuilds a string from a crossing sequence; letters follow the fans.
pub fn from_walk(pair: &GentlePair, w: &[Crossing]) -> Result<GradedString> {
    let fm = pair.fan_model()?;
    if w.is_empty() {
        return Err(Error::InvalidString(vec!["empty walk".into()]));
    }
    let mut letters = Vec::new();
    for t in 0..w.len() - 1 {
        let (f1, x) = fm.locate(w[t].v, w[t].out());
        let (f2, y) = fm.locate(w[t + 1].v, w[t + 1].inn);
        if f1 != f2 || x == y {
            return Err(Error::InvalidString(vec![format!(
                "walk breaks between crossings {} and {}",
                t + 1,
                t + 2
            )]));
        }
        let letter = if x < y {
            Letter {
                dir: Dir::L,
                path: fm.arrows_between(f1, x, y).to_vec(),
            }
        } else {
            Letter {
                dir: Dir::R,
                path: fm.arrows_between(f1, y, x).to_vec(),
            }
        };
        letters.push(letter);
    }
    let s = GradedString {
        vertices: w.iter().map(|c| c.v).collect(),
        shifts: w.iter().map(|c| c.shift).collect(),
        letters,
    };
    check_string(pair, &s)?;
    Ok(s)
}

pub fn reverse_walk(w: &[Crossing]) -> Vec<Crossing> {
    w.iter().rev().map(|c| c.reversed()).collect()
}

/// The fan stretches of a walk, from the head end to the tail end.
pub fn visits(pair: &GentlePair, w: &[Crossing]) -> Result<Vec<Visit>> {
    let fm = pair.fan_model()?;
    let r = w.len();
    let mut out = Vec::with_capacity(r + 1);
    for t in 0..=r {
        let (fan_a, a) = if t == 0 {
            (None, 0)
        } else {
            let (f, p) = fm.locate(w[t - 1].v, w[t - 1].out());
            (Some(f), p)
        };
        let (fan_b, b) = if t == r {
            (None, 0)
        } else {
            let (f, p) = fm.locate(w[t].v, w[t].inn);
            (Some(f), p)
        };
        let fan = fan_a.or(fan_b).unwrap();
        if let (Some(x), Some(y)) = (fan_a, fan_b) {
            if x != y {
                return Err(Error::InvalidString(vec![format!(
                    "walk leaves fan at stretch {t}"
                )]));
            }
        }
        out.push(Visit { fan, a, b });
    }
    Ok(out)
}

/// The walk read out of one of its ends.
pub fn walk_from(w: &[Crossing], end: End) -> Vec<Crossing> {
    match end {
        End::Head => w.to_vec(),
        End::Tail => reverse_walk(w),
    }
}

/// Fan and position of the marked point at which an end of `s` sits.
pub fn end_descriptor(pair: &GentlePair, s: &GradedString, end: End) -> Result<(usize, usize)> {
    let w = to_walk(pair, s)?;
    let fm = pair.fan_model()?;
    Ok(match end {
        End::Head => fm.locate(w[0].v, w[0].inn),
        End::Tail => {
            let c = w[w.len() - 1];
            fm.locate(c.v, c.out())
        }
    })
}

/// Which side of the pair a string lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Over {
    Primal,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterFile {
    pub dir: Dir,
    pub path: Vec<String>,
}

/// On-disk form of a graded arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcFile {
    pub over: Over,
    pub vertices: Vec<String>,
    pub shifts: Vec<i64>,
    pub letters: Vec<LetterFile>,
}

impl ArcFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    /// Resolves names against the pair the file claims to live over.
    pub fn to_string_over(&self, pair: &GentlePair) -> Result<GradedString> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| pair.vertex(v))
            .collect::<Result<Vec<_>>>()?;
        let letters = self
            .letters
            .iter()
            .map(|l| {
                Ok(Letter {
                    dir: l.dir,
                    path: l
                        .path
                        .iter()
                        .map(|a| pair.arrow_index(a))
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let s = GradedString {
            vertices,
            shifts: self.shifts.clone(),
            letters,
        };
        check_string(pair, &s)?;
        Ok(s)
    }

    pub fn from_string(pair: &GentlePair, over: Over, s: &GradedString) -> Self {
        ArcFile {
            over,
            vertices: s
                .vertices
                .iter()
                .map(|&v| pair.vertex_name(v).to_string())
                .collect(),
            shifts: s.shifts.clone(),
            letters: s
                .letters
                .iter()
                .map(|l| LetterFile {
                    dir: l.dir,
                    path: l.path.iter().map(|&a| pair.arrow(a).id.clone()).collect(),
                })
                .collect(),
        }
    }
}

/// Compact human-readable form `(v..)/(shifts..)/[(dir,path)..]`.
pub fn display_string(pair: &GentlePair, s: &GradedString) -> String {
    let vs: Vec<&str> = s.vertices.iter().map(|&v| pair.vertex_name(v)).collect();
    let sh: Vec<String> = s.shifts.iter().map(|x| x.to_string()).collect();
    let ls: Vec<String> = s
        .letters
        .iter()
        .map(|l| {
            let p: Vec<&str> = l.path.iter().map(|&a| pair.arrow(a).id.as_str()).collect();
            format!("({:?},{})", l.dir, p.join(""))
        })
        .collect();
    format!("({})/({})/[{}]", vs.join(","), sh.join(","), ls.join(","))
}
