//! Graded quivers with quadratic monomial relations, the nonzero-path basis,
//! quadratic duality and the fan model of open marked points.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One arrow record of the algebra file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub degree: i64,
}

/// On-disk form of a graded quiver with relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub relations: Vec<[String; 2]>,
}

#[derive(Clone, Debug)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i64,
}

/// A path `a_1 ... a_l` read left to right, or the trivial path at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            start: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Index of a nonzero path in the basis of a [`GentlePair`].
pub type PathId = usize;

/// The finite basis of nonzero paths with composition lookup.
#[derive(Clone, Debug)]
pub struct PathBasis {
    pub paths: Vec<Path>,
    index: HashMap<Path, PathId>,
    between: HashMap<(usize, usize), Vec<PathId>>,
    ends: Vec<usize>,
    degrees: Vec<i64>,
}

/// An open marked point: the arc-ends around it in order, joined by arrows.
/// Position 0 is the boundary gap, ends sit at positions `1..=ends.len()`,
/// and `arrows[j]` goes from the end at position `j + 1` to position `j + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub ends: Vec<(usize, u8)>,
    pub arrows: Vec<usize>,
}

/// The marked points of the surface recovered from `(Q, I)`.
#[derive(Clone, Debug)]
pub struct FanModel {
    pub fans: Vec<Fan>,
    /// End-slot of the source vertex at which each arrow leaves.
    pub src_end: Vec<u8>,
    /// End-slot of the target vertex at which each arrow arrives.
    pub tgt_end: Vec<u8>,
    loc: Vec<[(usize, usize); 2]>,
}

impl FanModel {
    /// Fan and position of an arc-end.
    pub fn locate(&self, v: usize, slot: u8) -> (usize, usize) {
        self.loc[v][slot as usize]
    }

    pub fn end_at(&self, fan: usize, pos: usize) -> (usize, u8) {
        self.fans[fan].ends[pos - 1]
    }

    /// Arrows of the fan strictly between two positions `x < y`.
    pub fn arrows_between(&self, fan: usize, x: usize, y: usize) -> &[usize] {
        &self.fans[fan].arrows[x - 1..y - 1]
    }

    pub fn fan_len(&self, fan: usize) -> usize {
        self.fans[fan].ends.len()
    }
}

/// Result of checking the four gentleness conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GentleReport {
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub bullet: u8,
    pub message: String,
}

impl GentleReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A graded quiver together with quadratic monomial relations.
#[derive(Clone, Debug)]
pub struct GentlePair {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<(usize, usize)>,
    rel_set: BTreeSet<(usize, usize)>,
    vindex: HashMap<String, usize>,
    aindex: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    report: GentleReport,
    model: std::result::Result<(PathBasis, FanModel), Error>,
}

impl PartialEq for GentlePair {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.to_file();
        let mut b = other.to_file();
        a.relations.sort();
        b.relations.sort();
        a.arrows.sort_by(|x, y| x.id.cmp(&y.id));
        b.arrows.sort_by(|x, y| x.id.cmp(&y.id));
        a == b
    }
}

impl GentlePair {
    /// Builds a pair, checking only structural well-formedness. Gentleness is
    /// recorded and can be queried with [`GentlePair::validate_gentle`].
    pub fn from_file(f: &AlgebraFile) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in f.vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::Structure(format!("duplicate vertex {v}")));
            }
        }
        let mut aindex = HashMap::new();
        let mut arrows = Vec::new();
        for (i, a) in f.arrows.iter().enumerate() {
            let src = *vindex.get(&a.from).ok_or_else(|| {
                Error::Structure(format!("arrow {} has unknown source {}", a.id, a.from))
            })?;
            let tgt = *vindex.get(&a.to).ok_or_else(|| {
                Error::Structure(format!("arrow {} has unknown target {}", a.id, a.to))
            })?;
            if aindex.insert(a.id.clone(), i).is_some() {
                return Err(Error::Structure(format!("duplicate arrow {}", a.id)));
            }
            arrows.push(Arrow {
                id: a.id.clone(),
                src,
                tgt,
                degree: a.degree,
            });
        }
        let mut relations = Vec::new();
        for [x, y] in &f.relations {
            let a = *aindex
                .get(x)
                .ok_or_else(|| Error::Structure(format!("relation uses unknown arrow {x}")))?;
            let b = *aindex
                .get(y)
                .ok_or_else(|| Error::Structure(format!("relation uses unknown arrow {y}")))?;
            relations.push((a, b));
        }
        Ok(Self::assemble(
            f.vertices.clone(),
            arrows,
            relations,
            vindex,
            aindex,
        ))
    }

    fn assemble(
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        relations: Vec<(usize, usize)>,
        vindex: HashMap<String, usize>,
        aindex: HashMap<String, usize>,
    ) -> Self {
        let n = vertices.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, a) in arrows.iter().enumerate() {
            out[a.src].push(i);
            inc[a.tgt].push(i);
        }
        let rel_set = relations.iter().copied().collect();
        let mut pair = GentlePair {
            vertices,
            arrows,
            relations,
            rel_set,
            vindex,
            aindex,
            out,
            inc,
            report: GentleReport::default(),
            model: Err(Error::Structure("uninitialised".into())),
        };
        pair.report = pair.check_gentle();
        pair.model = if pair.report.is_ok() {
            pair.build_model()
        } else {
            Err(Error::NotGentle(
                pair.report
                    .violations
                    .iter()
                    .map(|v| v.message.clone())
                    .collect(),
            ))
        };
        pair
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: AlgebraFile = serde_json::from_str(text)?;
        Self::from_file(&f)
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowSpec {
                    id: a.id.clone(),
                    from: self.vertices[a.src].clone(),
                    to: self.vertices[a.tgt].clone(),
                    degree: a.degree,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|&(a, b)| [self.arrows[a].id.clone(), self.arrows[b].id.clone()])
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serialisable")
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vindex
            .get(name)
            .copied()
            .ok_or_else(|| Error::Structure(format!("unknown vertex {name}")))
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize> {
        self.aindex
            .get(id)
            .copied()
            .ok_or_else(|| Error::Structure(format!("unknown arrow {id}")))
    }

    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    pub fn is_relation(&self, a: usize, b: usize) -> bool {
        self.rel_set.contains(&(a, b))
    }

    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Arrows `b` with `ab` composable and `ab` not a relation.
    pub fn free_successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let t = self.arrows[a].tgt;
        self.out[t]
            .iter()
            .copied()
            .filter(move |&b| !self.is_relation(a, b))
    }

    pub fn free_successor(&self, a: usize) -> Option<usize> {
        self.free_successors(a).next()
    }

    pub fn relation_successor(&self, a: usize) -> Option<usize> {
        let t = self.arrows[a].tgt;
        self.out[t]
            .iter()
            .copied()
            .find(|&b| self.is_relation(a, b))
    }

    pub fn validate_gentle(&self) -> &GentleReport {
        &self.report
    }

    pub fn is_gentle(&self) -> bool {
        self.report.is_ok()
    }

    fn check_gentle(&self) -> GentleReport {
        let mut v = Vec::new();
        let mut push = |bullet: u8, message: String| v.push(Violation { bullet, message });
        for &(a, b) in &self.relations {
            if self.arrows[a].tgt != self.arrows[b].src {
                push(
                    1,
                    format!(
                        "relation ({},{}) is not composable",
                        self.arrows[a].id, self.arrows[b].id
                    ),
                );
            }
        }
        for (i, name) in self.vertices.iter().enumerate() {
            if self.inc[i].len() > 2 {
                push(
                    2,
                    format!("vertex {name} has {} incoming arrows", self.inc[i].len()),
                );
            }
            if self.out[i].len() > 2 {
                push(
                    2,
                    format!("vertex {name} has {} outgoing arrows", self.out[i].len()),
                );
            }
        }
        for (a, arr) in self.arrows.iter().enumerate() {
            let comp_after: Vec<usize> = self.out[arr.tgt].clone();
            let comp_before: Vec<usize> = self.inc[arr.src].clone();
            let rel_after = comp_after
                .iter()
                .filter(|&&b| self.is_relation(a, b))
                .count();
            let rel_before = comp_before
                .iter()
                .filter(|&&b| self.is_relation(b, a))
                .count();
            if rel_after > 1 {
                push(
                    3,
                    format!(
                        "arrow {} has {rel_after} arrows b with ({}, b) in I",
                        arr.id, arr.id
                    ),
                );
            }
            if rel_before > 1 {
                push(
                    3,
                    format!(
                        "arrow {} has {rel_before} arrows b' with (b', {}) in I",
                        arr.id, arr.id
                    ),
                );
            }
            let free_after = comp_after.len() - rel_after;
            let free_before = comp_before.len() - rel_before;
            if free_after > 1 {
                push(
                    4,
                    format!(
                        "arrow {} has {free_after} composable successors outside I",
                        arr.id
                    ),
                );
            }
            if free_before > 1 {
                push(
                    4,
                    format!(
                        "arrow {} has {free_before} composable predecessors outside I",
                        arr.id
                    ),
                );
            }
        }
        GentleReport { violations: v }
    }

    fn build_model(&self) -> std::result::Result<(PathBasis, FanModel), Error> {
        let fans = self.reconstruct_fans()?;
        let basis = self.enumerate_paths()?;
        Ok((basis, fans))
    }

    fn enumerate_paths(&self) -> Result<PathBasis> {
        let cap = self.arrows.len() + 1;
        let mut paths = Vec::new();
        for v in 0..self.vertices.len() {
            paths.push(Path::trivial(v));
        }
        let mut frontier: Vec<Path> = (0..self.arrows.len())
            .map(|a| Path {
                start: self.arrows[a].src,
                arrows: vec![a],
            })
            .collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in frontier {
                if p.len() > cap {
                    return Err(Error::Infinite(format!(
                        "nonzero path longer than {cap} arrows starting at {}",
                        self.vertices[p.start]
                    )));
                }
                let last = *p.arrows.last().unwrap();
                for b in self.free_successors(last) {
                    let mut q = p.clone();
                    q.arrows.push(b);
                    next.push(q);
                }
                paths.push(p);
            }
            frontier = next;
        }
        paths.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let mut index = HashMap::new();
        let mut between: HashMap<(usize, usize), Vec<PathId>> = HashMap::new();
        let mut ends = Vec::new();
        let mut degrees = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            index.insert(p.clone(), i);
            let e = self.path_end(p);
            between.entry((p.start, e)).or_default().push(i);
            ends.push(e);
            degrees.push(p.arrows.iter().map(|&a| self.arrows[a].degree).sum());
        }
        Ok(PathBasis {
            paths,
            index,
            between,
            ends,
            degrees,
        })
    }

    fn reconstruct_fans(&self) -> Result<FanModel> {
        let na = self.arrows.len();
        let mut src_end = vec![u8::MAX; na];
        let mut tgt_end = vec![u8::MAX; na];
        // Group the arrow-ends at each vertex: an incoming arrow and its free
        // successor sit at the same arc-end, everything else is alone.
        for v in 0..self.vertices.len() {
            let mut groups: Vec<(Option<usize>, Option<usize>)> = Vec::new();
            let mut used_out = BTreeSet::new();
            for &a in &self.inc[v] {
                let b = self.free_successor(a);
                if let Some(b) = b {
                    used_out.insert(b);
                }
                groups.push((Some(a), b));
            }
            for &b in &self.out[v] {
                if !used_out.contains(&b) {
                    groups.push((None, Some(b)));
                }
            }
            if groups.len() > 2 {
                return Err(Error::Structure(format!(
                    "vertex {} needs {} arc-ends",
                    self.vertices[v],
                    groups.len()
                )));
            }
            groups.sort_by_key(|g| {
                let x = g.0.map(|a| 2 * a).unwrap_or(usize::MAX);
                let y = g.1.map(|b| 2 * b + 1).unwrap_or(usize::MAX);
                x.min(y)
            });
            for (slot, (a, b)) in groups.into_iter().enumerate() {
                if let Some(a) = a {
                    tgt_end[a] = slot as u8;
                }
                if let Some(b) = b {
                    src_end[b] = slot as u8;
                }
            }
        }
        let nv = self.vertices.len();
        let mut out_at = vec![[None; 2]; nv];
        let mut in_at = vec![[None; 2]; nv];
        for (a, arr) in self.arrows.iter().enumerate() {
            out_at[arr.src][src_end[a] as usize] = Some(a);
            in_at[arr.tgt][tgt_end[a] as usize] = Some(a);
        }
        let mut loc = vec![[(usize::MAX, 0); 2]; nv];
        let mut fans = Vec::new();
        for v in 0..nv {
            for slot in 0..2u8 {
                if in_at[v][slot as usize].is_some() {
                    continue;
                }
                let fi = fans.len();
                let mut fan = Fan {
                    ends: vec![(v, slot)],
                    arrows: Vec::new(),
                };
                loc[v][slot as usize] = (fi, 1);
                let (mut cv, mut cs) = (v, slot);
                while let Some(b) = out_at[cv][cs as usize] {
                    let (nv2, ns) = (self.arrows[b].tgt, tgt_end[b]);
                    fan.arrows.push(b);
                    fan.ends.push((nv2, ns));
                    loc[nv2][ns as usize] = (fi, fan.ends.len());
                    if fan.ends.len() > 2 * nv + 1 {
                        return Err(Error::Infinite("cyclic fan".into()));
                    }
                    cv = nv2;
                    cs = ns;
                }
                fans.push(fan);
            }
        }
        if loc.iter().flatten().any(|l| l.0 == usize::MAX) {
            return Err(Error::Infinite(
                "a cycle of free compositions (interior puncture) makes the algebra infinite-dimensional".into(),
            ));
        }
        Ok(FanModel {
            fans,
            src_end,
            tgt_end,
            loc,
        })
    }

    fn path_end(&self, p: &Path) -> usize {
        p.arrows
            .last()
            .map(|&a| self.arrows[a].tgt)
            .unwrap_or(p.start)
    }

    /// Basis of nonzero paths; fails for non-gentle or infinite inputs.
    pub fn basis(&self) -> Result<&PathBasis> {
        self.model.as_ref().map(|m| &m.0).map_err(Clone::clone)
    }

    /// Fans of the marked surface; fails for non-gentle or infinite inputs.
    pub fn fan_model(&self) -> Result<&FanModel> {
        self.model.as_ref().map(|m| &m.1).map_err(Clone::clone)
    }

    /// Fans reconstructed from the pair.
    pub fn fans(&self) -> Result<Vec<Fan>> {
        Ok(self.fan_model()?.fans.clone())
    }

    /// All nonzero paths including the trivial ones.
    pub fn nonzero_paths(&self) -> Result<Vec<Path>> {
        Ok(self.basis()?.paths.clone())
    }

    pub fn path_degree(&self, p: &Path) -> i64 {
        p.arrows.iter().map(|&a| self.arrows[a].degree).sum()
    }

    pub fn is_nonzero(&self, p: &Path) -> bool {
        let mut v = p.start;
        for (j, &a) in p.arrows.iter().enumerate() {
            if self.arrows[a].src != v {
                return false;
            }
            if j > 0 && self.is_relation(p.arrows[j - 1], a) {
                return false;
            }
            v = self.arrows[a].tgt;
        }
        true
    }

    /// Concatenation `p` then `q`; `None` is the zero marker.
    pub fn compose_paths(&self, p: &Path, q: &Path) -> Result<Option<Path>> {
        if self.path_end(p) != q.start {
            return Err(Error::NotComposable(format!(
                "path ends at {} but next starts at {}",
                self.vertices[self.path_end(p)],
                self.vertices[q.start]
            )));
        }
        if !self.is_nonzero(p) || !self.is_nonzero(q) {
            return Ok(None);
        }
        if let (Some(&a), Some(&b)) = (p.arrows.last(), q.arrows.first()) {
            if self.is_relation(a, b) {
                return Ok(None);
            }
        }
        let mut arrows = p.arrows.clone();
        arrows.extend_from_slice(&q.arrows);
        Ok(Some(Path {
            start: p.start,
            arrows,
        }))
    }

    /// Maximal relation paths from `i`, one per outgoing arrow.
    pub fn maximal_relation_paths(&self, i: usize) -> Vec<Path> {
        let mut res = Vec::new();
        for &a in &self.out[i] {
            let mut arrows = vec![a];
            let mut cur = a;
            while let Some(b) = self.relation_successor(cur) {
                if arrows.len() > self.arrows.len() {
                    break;
                }
                arrows.push(b);
                cur = b;
            }
            res.push(Path { start: i, arrows });
        }
        res
    }

    /// The quadratic dual: opposite quiver, degrees `1 - |a|`, complementary
    /// quadratic relations. Arrow names toggle a trailing `*`.
    pub fn quadratic_dual(&self) -> Result<GentlePair> {
        let arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: dual_name(&a.id),
                src: a.tgt,
                tgt: a.src,
                degree: 1 - a.degree,
            })
            .collect();
        let mut aindex = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if aindex.insert(a.id.clone(), i).is_some() {
                return Err(Error::Structure(format!(
                    "dual arrow name {} collides",
                    a.id
                )));
            }
        }
        let mut rels = Vec::new();
        for (a, arr) in self.arrows.iter().enumerate() {
            for &b in &self.out[arr.tgt] {
                if !self.is_relation(a, b) {
                    rels.push((b, a));
                }
            }
        }
        rels.sort_by(|x, y| {
            (&arrows[x.0].id, &arrows[x.1].id).cmp(&(&arrows[y.0].id, &arrows[y.1].id))
        });
        Ok(Self::assemble(
            self.vertices.clone(),
            arrows,
            rels,
            self.vindex.clone(),
            aindex,
        ))
    }

    pub fn path_id(&self, p: &Path) -> Result<PathId> {
        self.basis()?
            .index
            .get(p)
            .copied()
            .ok_or_else(|| Error::Structure("zero or invalid path".into()))
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertices[p.start])
        } else {
            p.arrows
                .iter()
                .map(|&a| self.arrows[a].id.as_str())
                .collect::<Vec<_>>()
                .join("")
        }
    }
}

impl PathBasis {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn get(&self, id: PathId) -> &Path {
        &self.paths[id]
    }

    pub fn start(&self, id: PathId) -> usize {
        self.paths[id].start
    }

    pub fn end(&self, id: PathId) -> usize {
        self.ends[id]
    }

    pub fn degree(&self, id: PathId) -> i64 {
        self.degrees[id]
    }

    pub fn id_of(&self, p: &Path) -> Option<PathId> {
        self.index.get(p).copied()
    }

    pub fn trivial(&self, v: usize) -> PathId {
        v
    }

    /// Nonzero paths from `i` to `j`.
    pub fn between(&self, i: usize, j: usize) -> &[PathId] {
        self.between
            .get(&(i, j))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// `p` then `q`, or `None` when the product vanishes or is not composable.
    pub fn compose(&self, pair: &GentlePair, p: PathId, q: PathId) -> Option<PathId> {
        if self.ends[p] != self.paths[q].start {
            return None;
        }
        let (pp, qq) = (&self.paths[p], &self.paths[q]);
        if pp.arrows.is_empty() {
            return Some(q);
        }
        if qq.arrows.is_empty() {
            return Some(p);
        }
        if pair.is_relation(*pp.arrows.last().unwrap(), qq.arrows[0]) {
            return None;
        }
        let mut arrows = pp.arrows.clone();
        arrows.extend_from_slice(&qq.arrows);
        self.index
            .get(&Path {
                start: pp.start,
                arrows,
            })
            .copied()
    }
}

/// Name of the dual arrow: toggles a trailing `*`.
pub fn dual_name(id: &str) -> String {
    match id.strip_suffix('*') {
        Some(s) => s.to_string(),
        None => format!("{id}*"),
    }
}
