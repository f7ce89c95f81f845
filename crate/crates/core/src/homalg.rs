//! Exact linear algebra, Hom complexes between path-presented dg modules,
//! cohomology, total modules of threads and quasi-isomorphism checks.
//!
//! A module is a list of generators `(vertex, shift)`; the vector basis is
//! `(u, q)` with `q` a nonzero path starting at the vertex of `u`, in degree
//! `|q| - shift(u)`. A differential component `u -> u'` labelled `c p`, with
//! `p` a path from the vertex of `u'` to the vertex of `u`, acts by
//! `d(u, q) = c (u', p q)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentle::{GentlePair, PathBasis, PathId};

/// Characteristic used for optional modular rank computations.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FieldKind {
    #[default]
    Rational,
    Prime(u64),
}

/// Minimal field interface for Gaussian elimination.
pub trait Field: Clone {
    fn from_i64(x: i64, ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn sub_mul(&mut self, a: &Self, b: &Self, ctx: &Self::Ctx);
    fn div(&self, b: &Self, ctx: &Self::Ctx) -> Self;
    type Ctx;
}

impl Field for BigRational {
    type Ctx = ();
    fn from_i64(x: i64, _: &()) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&mut self, a: &Self, b: &Self, _: &()) {
        *self -= a * b;
    }
    fn div(&self, b: &Self, _: &()) -> Self {
        self / b
    }
}

/// Residue modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(pub u64);

impl Field for Fp {
    type Ctx = u64;
    fn from_i64(x: i64, p: &u64) -> Self {
        Fp(x.rem_euclid(*p as i64) as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn sub_mul(&mut self, a: &Self, b: &Self, p: &u64) {
        let prod = (a.0 as u128 * b.0 as u128 % *p as u128) as u64;
        self.0 = (self.0 + *p - prod) % *p;
    }
    fn div(&self, b: &Self, p: &u64) -> Self {
        let inv = pow_mod(b.0, *p - 2, *p);
        Fp((self.0 as u128 * inv as u128 % *p as u128) as u64)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Sparse integer matrix given as rows of `(column, value)`.
pub type SparseRows = Vec<Vec<(usize, i64)>>;

fn rank_generic<F: Field>(rows: &SparseRows, ncols: usize, ctx: &F::Ctx) -> usize {
    let mut m: Vec<Vec<F>> = Vec::new();
    for r in rows {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(c, x) in r {
            *acc.entry(c).or_default() += x;
        }
        if acc.values().all(|&x| x == 0) {
            continue;
        }
        let mut v = vec![F::from_i64(0, ctx); ncols];
        for (c, x) in acc {
            v[c] = F::from_i64(x, ctx);
        }
        m.push(v);
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].div(&pivot_row[col], ctx);
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c].sub_mul(&factor, &pivot_row[c], ctx);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank of an integer matrix over the chosen field.
pub fn rank(rows: &SparseRows, ncols: usize, field: FieldKind) -> usize {
    match field {
        FieldKind::Rational => rank_generic::<BigRational>(rows, ncols, &()),
        FieldKind::Prime(p) => rank_generic::<Fp>(rows, ncols, &p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub vertex: usize,
    pub shift: i64,
}

/// Differential component from generator `from` to generator `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub from: usize,
    pub to: usize,
    pub coeff: i64,
    pub path: PathId,
}

/// A dg module presented by shifted indecomposable projectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    pub gens: Vec<Generator>,
    pub comps: Vec<Component>,
}

impl DgModule {
    pub fn projective(v: usize, shift: i64) -> Self {
        DgModule {
            gens: vec![Generator { vertex: v, shift }],
            comps: Vec::new(),
        }
    }

    pub fn shifted(&self, n: i64) -> Self {
        let mut m = self.clone();
        for g in &mut m.gens {
            g.shift += n;
        }
        m
    }

    /// Checks that every component has degree one and that `d^2 = 0`.
    pub fn check(&self, pair: &GentlePair) -> Result<()> {
        let b = pair.basis()?;
        for c in &self.comps {
            let (gu, gv) = (self.gens[c.from], self.gens[c.to]);
            if b.start(c.path) != gv.vertex || b.end(c.path) != gu.vertex {
                return Err(Error::Structure(
                    "component path has wrong endpoints".into(),
                ));
            }
            if b.degree(c.path) + gu.shift - gv.shift != 1 {
                return Err(Error::Structure("component of degree other than 1".into()));
            }
        }
        let mut sq: HashMap<(usize, usize, PathId), i64> = HashMap::new();
        for c1 in &self.comps {
            for c2 in self.comps.iter().filter(|c| c.from == c1.to) {
                if let Some(p) = b.compose(pair, c2.path, c1.path) {
                    *sq.entry((c1.from, c2.to, p)).or_default() += c1.coeff * c2.coeff;
                }
            }
        }
        if let Some(((u, w, p), _)) = sq.iter().find(|(_, &v)| v != 0) {
            return Err(Error::NotComplex(format!(
                "generator {u} reaches generator {w} through {}",
                pair.path_name(b.get(*p))
            )));
        }
        Ok(())
    }
}

/// A morphism of graded modules of fixed degree, by path-labelled components
/// from source generators to target generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgMorphism {
    pub degree: i64,
    pub comps: Vec<Component>,
}

impl DgMorphism {
    pub fn zero(degree: i64) -> Self {
        DgMorphism {
            degree,
            comps: Vec::new(),
        }
    }

    /// Collects equal components and drops zero coefficients.
    pub fn normalized(&self) -> Self {
        let mut m: BTreeMap<(usize, usize, PathId), i64> = BTreeMap::new();
        for c in &self.comps {
            *m.entry((c.from, c.to, c.path)).or_default() += c.coeff;
        }
        DgMorphism {
            degree: self.degree,
            comps: m
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|((from, to, path), coeff)| Component {
                    from,
                    to,
                    coeff,
                    path,
                })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().comps.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut m = self.clone();
        for c in &mut m.comps {
            c.coeff *= k;
        }
        m.normalized()
    }

    pub fn add(&self, o: &DgMorphism) -> Result<Self> {
        if self.degree != o.degree {
            return Err(Error::Structure(
                "adding morphisms of different degrees".into(),
            ));
        }
        let mut m = self.clone();
        m.comps.extend_from_slice(&o.comps);
        Ok(m.normalized())
    }

    /// `g o self`.
    pub fn then(&self, pair: &GentlePair, g: &DgMorphism) -> Result<Self> {
        let b = pair.basis()?;
        let mut comps = Vec::new();
        for f in &self.comps {
            for h in g.comps.iter().filter(|h| h.from == f.to) {
                if let Some(p) = b.compose(pair, h.path, f.path) {
                    comps.push(Component {
                        from: f.from,
                        to: h.to,
                        coeff: f.coeff * h.coeff,
                        path: p,
                    });
                }
            }
        }
        Ok(DgMorphism {
            degree: self.degree + g.degree,
            comps,
        }
        .normalized())
    }

    /// Degree check of every component against the given modules.
    pub fn check_degree(&self, pair: &GentlePair, m: &DgModule, n: &DgModule) -> Result<()> {
        let b = pair.basis()?;
        for c in &self.comps {
            let (gu, gw) = (m.gens[c.from], n.gens[c.to]);
            if b.start(c.path) != gw.vertex || b.end(c.path) != gu.vertex {
                return Err(Error::Structure(
                    "morphism component has wrong endpoints".into(),
                ));
            }
            if b.degree(c.path) + gu.shift - gw.shift != self.degree {
                return Err(Error::Structure(
                    "morphism component of wrong degree".into(),
                ));
            }
        }
        Ok(())
    }
}

/// `d(f) = f d_M - (-1)^{|f|} d_N f`.
pub fn differential_of(
    pair: &GentlePair,
    m: &DgModule,
    n: &DgModule,
    f: &DgMorphism,
) -> Result<DgMorphism> {
    let b = pair.basis()?;
    let sign = if f.degree.rem_euclid(2) == 0 { -1 } else { 1 };
    let mut comps = Vec::new();
    for c in &f.comps {
        // f after d_M: components of d_M landing on c.from
        for dm in m.comps.iter().filter(|x| x.to == c.from) {
            if let Some(p) = b.compose(pair, c.path, dm.path) {
                comps.push(Component {
                    from: dm.from,
                    to: c.to,
                    coeff: c.coeff * dm.coeff,
                    path: p,
                });
            }
        }
        for dn in n.comps.iter().filter(|x| x.from == c.to) {
            if let Some(p) = b.compose(pair, dn.path, c.path) {
                comps.push(Component {
                    from: c.from,
                    to: dn.to,
                    coeff: sign * c.coeff * dn.coeff,
                    path: p,
                });
            }
        }
    }
    Ok(DgMorphism {
        degree: f.degree + 1,
        comps,
    }
    .normalized())
}

pub fn is_closed(pair: &GentlePair, m: &DgModule, n: &DgModule, f: &DgMorphism) -> Result<bool> {
    Ok(differential_of(pair, m, n, f)?.is_zero())
}

/// One basis element of a Hom complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomBasis {
    pub source: usize,
    pub target: usize,
    pub path: PathId,
    pub degree: i64,
}

/// The complex of path-labelled maps between two modules.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub basis: Vec<HomBasis>,
    pub index: HashMap<(usize, usize, PathId), usize>,
    /// For each basis element, its image under the differential.
    pub diff: Vec<Vec<(usize, i64)>>,
}

pub fn hom_complex(pair: &GentlePair, m: &DgModule, n: &DgModule) -> Result<HomComplex> {
    let b = pair.basis()?;
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    for (u, gu) in m.gens.iter().enumerate() {
        for (w, gw) in n.gens.iter().enumerate() {
            for &p in b.between(gw.vertex, gu.vertex) {
                index.insert((u, w, p), basis.len());
                basis.push(HomBasis {
                    source: u,
                    target: w,
                    path: p,
                    degree: b.degree(p) + gu.shift - gw.shift,
                });
            }
        }
    }
    let mut diff = Vec::with_capacity(basis.len());
    for e in &basis {
        let f = DgMorphism {
            degree: e.degree,
            comps: vec![Component {
                from: e.source,
                to: e.target,
                coeff: 1,
                path: e.path,
            }],
        };
        let df = differential_of(pair, m, n, &f)?;
        diff.push(
            df.comps
                .iter()
                .map(|c| (index[&(c.from, c.to, c.path)], c.coeff))
                .collect(),
        );
    }
    Ok(HomComplex { basis, index, diff })
}

impl HomComplex {
    /// Coordinates of a morphism in this basis.
    pub fn coords(&self, f: &DgMorphism) -> Result<Vec<(usize, i64)>> {
        f.normalized()
            .comps
            .iter()
            .map(|c| {
                self.index
                    .get(&(c.from, c.to, c.path))
                    .map(|&i| (i, c.coeff))
                    .ok_or_else(|| {
                        Error::Structure("morphism component outside the Hom basis".into())
                    })
            })
            .collect()
    }

    /// `dim H^rho` for every degree with nonzero cohomology.
    pub fn cohomology_dims(&self, field: FieldKind) -> BTreeMap<i64, usize> {
        cohomology_of(
            self.basis
                .iter()
                .map(|e| e.degree)
                .collect::<Vec<_>>()
                .as_slice(),
            &self.diff,
            field,
        )
    }

    /// Rank of the span of closed morphisms modulo boundaries of given degree,
    /// i.e. the number of independent cohomology classes among `fs`.
    pub fn class_rank(&self, fs: &[DgMorphism], degree: i64, field: FieldKind) -> Result<usize> {
        let cols: Vec<usize> = (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == degree)
            .collect();
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let boundaries: SparseRows = (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == degree - 1)
            .map(|i| self.diff[i].iter().map(|&(j, c)| (pos[&j], c)).collect())
            .collect();
        let mut all = boundaries.clone();
        for f in fs {
            all.push(
                self.coords(f)?
                    .into_iter()
                    .map(|(j, c)| (pos[&j], c))
                    .collect(),
            );
        }
        Ok(rank(&all, cols.len(), field) - rank(&boundaries, cols.len(), field))
    }
}

/// Cohomology of a cochain complex given by basis degrees and differential.
pub fn cohomology_of(
    degrees: &[i64],
    diff: &[Vec<(usize, i64)>],
    field: FieldKind,
) -> BTreeMap<i64, usize> {
    let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &d) in degrees.iter().enumerate() {
        by_deg.entry(d).or_default().push(i);
    }
    let mut local = vec![0usize; degrees.len()];
    for idx in by_deg.values() {
        for (k, &i) in idx.iter().enumerate() {
            local[i] = k;
        }
    }
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for (&d, idx) in &by_deg {
        let ncols = by_deg.get(&(d + 1)).map(|v| v.len()).unwrap_or(0);
        let rows: SparseRows = idx
            .iter()
            .map(|&i| diff[i].iter().map(|&(j, c)| (local[j], c)).collect())
            .collect();
        let r = if ncols == 0 {
            0
        } else {
            rank(&rows, ncols, field)
        };
        ranks.insert(d, r);
    }
    let mut out = BTreeMap::new();
    for (&d, idx) in &by_deg {
        let h = idx.len() - ranks[&d] - ranks.get(&(d - 1)).copied().unwrap_or(0);
        if h > 0 {
            out.insert(d, h);
        }
    }
    out
}

pub fn cohomology_dims(c: &HomComplex, field: FieldKind) -> BTreeMap<i64, usize> {
    c.cohomology_dims(field)
}

/// `dim H^rho Hom(M, N)` for all `rho`.
pub fn hom_dims(
    pair: &GentlePair,
    m: &DgModule,
    n: &DgModule,
    field: FieldKind,
) -> Result<BTreeMap<i64, usize>> {
    Ok(hom_complex(pair, m, n)?.cohomology_dims(field))
}

/// The complex `M e_i` for one vertex: basis `(u, q)` with `q` from the
/// vertex of `u` to `i`.
fn underlying_complex(
    b: &PathBasis,
    pair: &GentlePair,
    m: &DgModule,
    i: usize,
) -> (Vec<(usize, PathId)>, Vec<i64>, SparseRows) {
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    for (u, g) in m.gens.iter().enumerate() {
        for &q in b.between(g.vertex, i) {
            index.insert((u, q), basis.len());
            basis.push((u, q));
        }
    }
    let degrees = basis
        .iter()
        .map(|&(u, q)| b.degree(q) - m.gens[u].shift)
        .collect();
    let diff = basis
        .iter()
        .map(|&(u, q)| {
            let mut v: BTreeMap<usize, i64> = BTreeMap::new();
            for c in m.comps.iter().filter(|c| c.from == u) {
                if let Some(pq) = b.compose(pair, c.path, q) {
                    *v.entry(index[&(c.to, pq)]).or_default() += c.coeff;
                }
            }
            v.into_iter().filter(|(_, x)| *x != 0).collect()
        })
        .collect();
    (basis, degrees, diff)
}

/// Cohomology of `M e_i` for every vertex `i`, keyed by `(vertex, degree)`.
pub fn underlying_cohomology(
    pair: &GentlePair,
    m: &DgModule,
    field: FieldKind,
) -> Result<BTreeMap<(usize, i64), usize>> {
    let b = pair.basis()?;
    let mut out = BTreeMap::new();
    for i in 0..pair.n_vertices() {
        let (_, deg, diff) = underlying_complex(b, pair, m, i);
        for (d, h) in cohomology_of(&deg, &diff, field) {
            out.insert((i, d), h);
        }
    }
    Ok(out)
}

/// Degree-zero closed `f` is a quasi-isomorphism iff its mapping cone is
/// acyclic at every vertex.
pub fn is_quasi_iso(
    pair: &GentlePair,
    f: &DgMorphism,
    m: &DgModule,
    n: &DgModule,
    field: FieldKind,
) -> Result<bool> {
    if f.degree != 0 {
        return Err(Error::Structure(
            "quasi-isomorphism test needs a degree-0 morphism".into(),
        ));
    }
    if !is_closed(pair, m, n, f)? {
        return Err(Error::NotClosed);
    }
    let b = pair.basis()?;
    for i in 0..pair.n_vertices() {
        let (bm, dm, xm) = underlying_complex(b, pair, m, i);
        let (bn, dn, xn) = underlying_complex(b, pair, n, i);
        let nidx: HashMap<(usize, PathId), usize> =
            bn.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let off = bm.len();
        // cone: M[1] (+) N with d(x, y) = (-d x, f x + d y)
        let mut degrees: Vec<i64> = dm.iter().map(|d| d - 1).collect();
        degrees.extend(dn.iter().copied());
        let mut diff: Vec<Vec<(usize, i64)>> = xm
            .iter()
            .map(|row| row.iter().map(|&(j, c)| (j, -c)).collect())
            .collect();
        for (k, &(u, q)) in bm.iter().enumerate() {
            for c in f.comps.iter().filter(|c| c.from == u) {
                if let Some(pq) = b.compose(pair, c.path, q) {
                    diff[k].push((off + nidx[&(c.to, pq)], c.coeff));
                }
            }
        }
        diff.extend(
            xn.iter()
                .map(|row| row.iter().map(|&(j, c)| (off + j, c)).collect()),
        );
        if !cohomology_of(&degrees, &diff, field).is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the augmentation sending generator `top` (of vertex `i`, shift 0)
/// to the simple module at `i` is a quasi-isomorphism. Paths of positive
/// length act as zero on the simple module.
pub fn is_quasi_iso_to_simple(
    pair: &GentlePair,
    m: &DgModule,
    i: usize,
    top: usize,
    field: FieldKind,
) -> Result<bool> {
    let g = m.gens[top];
    if g.vertex != i || g.shift != 0 {
        return Err(Error::Structure(
            "augmentation must start at a degree-0 copy of P_i".into(),
        ));
    }
    // closedness: nothing may map into `top` by the identity path, and every
    // component leaving `top` has positive length, so only incoming
    // components matter; those have positive length too and vanish on S_i.
    let b = pair.basis()?;
    if m.comps
        .iter()
        .any(|c| c.to == top && b.get(c.path).is_empty())
    {
        return Err(Error::NotClosed);
    }
    let h = underlying_cohomology(pair, m, field)?;
    let mut expect = BTreeMap::new();
    expect.insert((i, 0), 1);
    if h != expect {
        return Ok(false);
    }
    // the class of (top, e_i) must survive: it is not a boundary
    let (basis, degrees, diff) = underlying_complex(b, pair, m, i);
    let k = basis
        .iter()
        .position(|&(u, q)| u == top && q == b.trivial(i))
        .unwrap();
    let bd: SparseRows = (0..basis.len())
        .filter(|&j| degrees[j] == -1)
        .map(|j| diff[j].clone())
        .collect();
    let mut with = bd.clone();
    with.push(vec![(k, 1)]);
    Ok(rank(&with, basis.len(), field) > rank(&bd, basis.len(), field))
}

/// Which way a thread morphism points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// From module `i` to module `i + 1`.
    Forward,
    /// From module `i + 1` to module `i`.
    Backward,
}

/// Direct sum of the modules with the thread morphisms added to the
/// differential. Each morphism must be closed of degree one.
pub fn thread_total_module(
    pair: &GentlePair,
    mods: &[DgModule],
    maps: &[(DgMorphism, Direction)],
) -> Result<DgModule> {
    if mods.is_empty() || maps.len() + 1 != mods.len() {
        return Err(Error::Thread("need n modules and n - 1 morphisms".into()));
    }
    let mut offs = Vec::new();
    let mut gens = Vec::new();
    let mut comps = Vec::new();
    for m in mods {
        let off = gens.len();
        offs.push(off);
        gens.extend_from_slice(&m.gens);
        comps.extend(m.comps.iter().map(|c| Component {
            from: c.from + off,
            to: c.to + off,
            ..*c
        }));
    }
    for (i, (f, dir)) in maps.iter().enumerate() {
        if f.degree != 1 {
            return Err(Error::Thread(format!(
                "morphism {} has degree {}",
                i + 1,
                f.degree
            )));
        }
        let (s, t) = match dir {
            Direction::Forward => (i, i + 1),
            Direction::Backward => (i + 1, i),
        };
        f.check_degree(pair, &mods[s], &mods[t])?;
        if !is_closed(pair, &mods[s], &mods[t], f)? {
            return Err(Error::NotClosed);
        }
        comps.extend(f.comps.iter().map(|c| Component {
            from: c.from + offs[s],
            to: c.to + offs[t],
            ..*c
        }));
    }
    let total = DgModule { gens, comps };
    total.check(pair)?;
    Ok(total)
}

/// Convenience: `H^*` of the Hom complex as a JSON-ready map.
pub fn table_json(t: &BTreeMap<i64, usize>) -> serde_json::Value {
    let m: serde_json::Map<String, serde_json::Value> = t
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::from(*v)))
        .collect();
    serde_json::Value::Object(m)
}
