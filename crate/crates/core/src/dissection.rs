//! Surface dissections by a full formal open arc system and the gentle pair
//! they determine.
//!
//! Each polygon lists its sides clockwise as seen from its interior. Exactly
//! one side is the boundary token carrying the polygon's closed marked point.
//! Reading the arc sides `s_1, ..., s_q` that follow the token, every inner
//! angle between `s_t` and `s_{t+1}` gives an arrow `s_t -> s_{t+1}`, and two
//! adjacent angles of one polygon give a relation.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentle::{AlgebraFile, ArrowSpec, GentlePair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Side {
    Arc(ArcSide),
    Marked(MarkedSide),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSide {
    pub arc: String,
    pub end: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedSide {
    pub marked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polygon {
    pub sides: Vec<Side>,
    pub angle_degrees: Vec<i64>,
    /// Optional names for the arrows of the inner angles, in angle order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_ids: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dissection {
    pub arcs: Vec<String>,
    pub polygons: Vec<Polygon>,
}

/// Where an arrow of the derived algebra came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleProvenance {
    pub arrow: String,
    pub polygon: usize,
    pub angle: usize,
}

/// Counts reported alongside a dissection (not enforced).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub arcs: usize,
    pub polygons: usize,
    /// `#polygons - #arcs`, which is the Euler characteristic of the surface
    /// since open and closed marked points alternate on the boundary.
    pub euler_characteristic: i64,
}

impl Dissection {
    pub fn from_json(text: &str) -> Result<Self> {
        let d: Dissection = serde_json::from_str(text)?;
        d.check()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    /// Polygon sides rotated so that the closed-point token comes first;
    /// returns the arc sides after it.
    fn arc_sides(&self, p: usize) -> Result<Vec<&ArcSide>> {
        let poly = &self.polygons[p];
        let tokens: Vec<usize> = poly
            .sides
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Side::Marked(_)))
            .map(|(i, _)| i)
            .collect();
        if tokens.len() != 1 {
            return Err(Error::Dissection(format!(
                "polygon {p} has {} closed-point tokens, expected 1",
                tokens.len()
            )));
        }
        let n = poly.sides.len();
        let mut out = Vec::new();
        for k in 1..n {
            match &poly.sides[(tokens[0] + k) % n] {
                Side::Arc(a) => out.push(a),
                Side::Marked(_) => unreachable!(),
            }
        }
        Ok(out)
    }

    fn check(&self) -> Result<()> {
        let arcs: HashSet<&str> = self.arcs.iter().map(|s| s.as_str()).collect();
        if arcs.len() != self.arcs.len() {
            return Err(Error::Dissection("duplicate arc id".into()));
        }
        let mut seen: HashMap<(&str, u8), usize> = HashMap::new();
        for (p, poly) in self.polygons.iter().enumerate() {
            for s in &poly.sides {
                if let Side::Marked(m) = s {
                    if !m.marked {
                        return Err(Error::Dissection(format!(
                            "polygon {p}: token must have marked=true"
                        )));
                    }
                }
            }
            let sides = self.arc_sides(p)?;
            for s in &sides {
                if !arcs.contains(s.arc.as_str()) {
                    return Err(Error::Dissection(format!(
                        "polygon {p}: unknown arc {}",
                        s.arc
                    )));
                }
                if s.end > 1 {
                    return Err(Error::Dissection(format!(
                        "polygon {p}: end-slot {} of {}",
                        s.end, s.arc
                    )));
                }
                *seen.entry((s.arc.as_str(), s.end)).or_default() += 1;
            }
            let angles = sides.len().saturating_sub(1);
            if poly.angle_degrees.len() != angles {
                return Err(Error::Dissection(format!(
                    "polygon {p} has {angles} inner angles but {} degrees",
                    poly.angle_degrees.len()
                )));
            }
            if let Some(ids) = &poly.angle_ids {
                if ids.len() != angles {
                    return Err(Error::Dissection(format!(
                        "polygon {p}: angle_ids length mismatch"
                    )));
                }
            }
        }
        for a in &self.arcs {
            for e in 0..2u8 {
                match seen.get(&(a.as_str(), e)).copied().unwrap_or(0) {
                    1 => {}
                    k => {
                        return Err(Error::Dissection(format!(
                            "side ({a}, {e}) appears {k} times, expected 1"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn euler_report(&self) -> EulerReport {
        EulerReport {
            arcs: self.arcs.len(),
            polygons: self.polygons.len(),
            euler_characteristic: self.polygons.len() as i64 - self.arcs.len() as i64,
        }
    }

    /// Arrow ids together with the polygon and angle they come from.
    pub fn angle_provenance(&self) -> Result<Vec<AngleProvenance>> {
        let mut out = Vec::new();
        for p in 0..self.polygons.len() {
            let q = self.arc_sides(p)?.len();
            for t in 0..q.saturating_sub(1) {
                out.push(AngleProvenance {
                    arrow: self.angle_id(p, t),
                    polygon: p,
                    angle: t,
                });
            }
        }
        Ok(out)
    }

    fn angle_id(&self, p: usize, t: usize) -> String {
        match &self.polygons[p].angle_ids {
            Some(ids) => ids[t].clone(),
            None => format!("x{}_{}", p + 1, t + 1),
        }
    }
}

/// The gentle pair of the dissection.
pub fn algebra_from_dissection(d: &Dissection) -> Result<GentlePair> {
    d.check()?;
    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    for p in 0..d.polygons.len() {
        let sides = d.arc_sides(p)?;
        let mut prev: Option<String> = None;
        for t in 0..sides.len().saturating_sub(1) {
            let id = d.angle_id(p, t);
            arrows.push(ArrowSpec {
                id: id.clone(),
                from: sides[t].arc.clone(),
                to: sides[t + 1].arc.clone(),
                degree: d.polygons[p].angle_degrees[t],
            });
            if let Some(pr) = prev {
                relations.push([pr, id.clone()]);
            }
            prev = Some(id);
        }
    }
    arrows.sort_by(|x, y| x.id.cmp(&y.id));
    relations.sort();
    let file = AlgebraFile {
        vertices: d.arcs.clone(),
        arrows,
        relations,
    };
    let pair = GentlePair::from_file(&file)?;
    if !pair.is_gentle() {
        let msgs = pair
            .validate_gentle()
            .violations
            .iter()
            .map(|v| v.message.clone())
            .collect();
        return Err(Error::NotGentle(msgs));
    }
    pair.fan_model()?;
    Ok(pair)
}

/// The algebra of the dual closed arc system, obtained as the quadratic dual.
pub fn dual_pair_of(d: &Dissection) -> Result<GentlePair> {
    algebra_from_dissection(d)?.quadratic_dual()
}

/// Summary counts keyed by polygon size, handy for diagnostics.
pub fn polygon_sizes(d: &Dissection) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for p in &d.polygons {
        *m.entry(p.sides.len()).or_default() += 1;
    }
    m
}
