//! Dynamical diagrams: ordered feet joined by labeled directed edges, one
//! edge per signed bump, every vertex of total degree 1. Includes the
//! unique order-preserving isomorphism test, elimination of isolated
//! edges, and realizations of a diagram by concrete families on [0, 1].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{ceil_log2, int, rat, Rat};
use crate::plmap::PLMap;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

impl DiagramEdge {
    pub fn span(&self) -> (usize, usize) {
        (self.src.min(self.dst), self.src.max(self.dst))
    }

    /// A positive edge points rightward in the vertex order.
    pub fn is_positive(&self) -> bool {
        self.src < self.dst
    }

    pub fn is_isolated(&self) -> bool {
        let (lo, hi) = self.span();
        hi == lo + 1
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(into = "RawDiagram")]
pub struct DynamicalDiagram {
    feet: usize,
    edges: Vec<DiagramEdge>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    feet: usize,
    edges: Vec<DiagramEdge>,
}

impl From<DynamicalDiagram> for RawDiagram {
    fn from(d: DynamicalDiagram) -> Self {
        RawDiagram {
            feet: d.feet,
            edges: d.edges,
        }
    }
}

impl<'de> Deserialize<'de> for DynamicalDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawDiagram::deserialize(d)?;
        DynamicalDiagram::new(raw.feet, raw.edges).map_err(D::Error::custom)
    }
}

impl DynamicalDiagram {
    pub fn new(feet: usize, mut edges: Vec<DiagramEdge>) -> Result<Self> {
        if feet != 2 * edges.len() {
            return Err(Error::FeetCountMismatch(feet, 2 * edges.len()));
        }
        let mut degree = vec![0usize; feet];
        for e in &edges {
            for v in [e.src, e.dst] {
                if v >= feet {
                    return Err(Error::EdgeOutOfRange(v, feet));
                }
                degree[v] += 1;
            }
        }
        if let Some(v) = degree.iter().position(|&d| d != 1) {
            return Err(Error::BadVertexDegree(v, degree[v]));
        }
        // Bumps of one generator have disjoint supports, so same-label
        // spans must not overlap.
        let mut by_label: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
        for e in &edges {
            by_label.entry(&e.label).or_default().push(e.span());
        }
        for (label, mut spans) in by_label {
            spans.sort();
            for w in spans.windows(2) {
                if w[1].0 < w[0].1 {
                    return Err(Error::OverlappingLabelSpans(label.to_string()));
                }
            }
        }
        edges.sort_by_key(|e| e.span());
        Ok(DynamicalDiagram { feet, edges })
    }

    pub fn feet(&self) -> usize {
        self.feet
    }

    /// Edges in left-to-right span order.
    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }

    pub fn labels(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.edges {
            if seen.insert(e.label.as_str()) {
                out.push(e.label.as_str());
            }
        }
        out
    }

    pub fn isolated_edges(&self) -> Vec<&DiagramEdge> {
        self.edges.iter().filter(|e| e.is_isolated()).collect()
    }

    /// Whether `other` equals this diagram up to relabeling. The vertex
    /// bijection of an isomorphism is forced (there is exactly one
    /// order-preserving bijection between the feet), so only the label
    /// pattern is free.
    pub fn isomorphism_to(&self, other: &DynamicalDiagram) -> Option<DiagramIso> {
        if self.feet != other.feet || self.edges.len() != other.edges.len() {
            return None;
        }
        let key = |d: &DynamicalDiagram| -> BTreeMap<(usize, usize), String> {
            d.edges
                .iter()
                .map(|e| ((e.src, e.dst), e.label.clone()))
                .collect()
        };
        let a = key(self);
        let b = key(other);
        if a.keys().collect::<Vec<_>>() != b.keys().collect::<Vec<_>>() {
            return None;
        }
        let mut fwd: BTreeMap<String, String> = BTreeMap::new();
        let mut bwd: BTreeMap<String, String> = BTreeMap::new();
        for (arc, la) in &a {
            let lb = &b[arc];
            if fwd.get(la).map_or(false, |x| x != lb) || bwd.get(lb).map_or(false, |x| x != la) {
                return None;
            }
            fwd.insert(la.clone(), lb.clone());
            bwd.insert(lb.clone(), la.clone());
        }
        Some(DiagramIso { label_map: fwd })
    }

    /// Inserts a fresh two-element chain inside the span of every isolated
    /// edge; the result has no isolated edges and contains this diagram as
    /// a sub-diagram.
    pub fn eliminate_isolated(&self) -> DynamicalDiagram {
        let inserts: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.is_isolated())
            .map(|e| e.span().0)
            .collect();
        if inserts.is_empty() {
            return self.clone();
        }
        let shift = |v: usize| -> usize { v + 4 * inserts.iter().filter(|&&u| u < v).count() };
        let mut edges: Vec<DiagramEdge> = self
            .edges
            .iter()
            .map(|e| DiagramEdge {
                src: shift(e.src),
                dst: shift(e.dst),
                label: e.label.clone(),
            })
            .collect();
        let used: BTreeSet<&str> = self.edges.iter().map(|e| e.label.as_str()).collect();
        let mut counter = 0usize;
        let mut fresh = || loop {
            let name = format!("x{counter}");
            counter += 1;
            if !used.contains(name.as_str()) {
                return name;
            }
        };
        for &u in &inserts {
            let base = shift(u);
            edges.push(DiagramEdge {
                src: base + 1,
                dst: base + 3,
                label: fresh(),
            });
            edges.push(DiagramEdge {
                src: base + 2,
                dst: base + 4,
                label: fresh(),
            });
        }
        DynamicalDiagram::new(self.feet + 4 * inserts.len(), edges)
            .expect("insertion preserves diagram invariants")
    }

    /// Realizes the diagram by two-piece linear bumps on [0, 1]: the i-th
    /// foot corresponds to [i*l, (i+1)*l) with l = 1/(2n). Requires no
    /// isolated edges. Signed, multiply-labeled diagrams are realized by
    /// composing the signed bumps of each label.
    pub fn realize_terminal(&self) -> Result<Realization> {
        if let Some(e) = self.isolated_edges().first() {
            return Err(Error::IsolatedEdge(e.src, e.dst));
        }
        let n = self.edges.len() as i64;
        if n == 0 {
            return Ok(Realization::empty());
        }
        let ell = rat(1, 2 * n);
        let pos = |v: usize| int(v as i64) * &ell;
        self.realize_with(|p, q| {
            let x = pos(p);
            let s = pos(p + 1);
            let t = pos(q);
            let y = pos(q + 1);
            PLMap::two_piece_bump(x, s, t, y).expect("interleaved feet give a bump")
        })
    }

    /// Realizes the diagram with dyadic breakpoints and power-of-two
    /// slopes, so the generated group sits inside Thompson's group F.
    /// Isolated edges are allowed.
    pub fn realize_dyadic(&self) -> Result<Realization> {
        let n = self.edges.len();
        if n == 0 {
            return Ok(Realization::empty());
        }
        // Integer slot per foot: a right foot sits a power of two past its
        // partner; everything else advances by one slot.
        let mut partner_left: Vec<Option<usize>> = vec![None; self.feet];
        for e in &self.edges {
            let (lo, hi) = e.span();
            partner_left[hi] = Some(lo);
        }
        let mut slots = vec![0u64; self.feet];
        for v in 1..self.feet {
            slots[v] = match partner_left[v] {
                Some(w) => {
                    let mut step = 2u64;
                    while slots[w] + step < slots[v - 1] + 1 {
                        step *= 2;
                    }
                    slots[w] + step
                }
                None => slots[v - 1] + 1,
            };
        }
        let m = ceil_log2(slots[self.feet - 1] + 1);
        let unit = rat(1, 1i64 << m);
        self.realize_with(|p, q| {
            let x = int(slots[p] as i64) * &unit;
            let s = int(slots[p] as i64 + 1) * &unit;
            let t = int(slots[q] as i64) * &unit;
            let y = int(slots[q] as i64 + 1) * &unit;
            PLMap::two_piece_bump(x, s, t, y).expect("separated slots give a bump")
        })
    }

    fn realize_with<F: Fn(usize, usize) -> PLMap>(&self, bump_of: F) -> Result<Realization> {
        let mut per_label: BTreeMap<&str, Vec<(PLMap, bool)>> = BTreeMap::new();
        for e in &self.edges {
            let (p, q) = e.span();
            per_label
                .entry(&e.label)
                .or_default()
                .push((bump_of(p, q), e.is_positive()));
        }
        let mut out: Vec<(Rat, String, PLMap)> = Vec::new();
        for (label, bumps) in per_label {
            let least = bumps
                .iter()
                .map(|(b, _)| b.breakpoints()[0].0.clone())
                .min()
                .expect("label owns an edge");
            let mut map = PLMap::identity();
            for (b, positive) in bumps {
                map = map.compose(&if positive { b } else { b.invert() });
            }
            out.push((least, label.to_string(), map));
        }
        // canonical enumeration: least transition points increasing
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Realization {
            labels: out.iter().map(|(_, l, _)| l.clone()).collect(),
            maps: out.into_iter().map(|(_, _, m)| m).collect(),
        })
    }

    /// Text rendering using the contraction convention: a destination foot
    /// immediately followed by a source foot collapses to one dot.
    pub fn render(&self) -> String {
        let mut partner = vec![0usize; self.feet];
        for e in &self.edges {
            partner[e.src] = e.dst;
            partner[e.dst] = e.src;
        }
        // column of each foot after contraction
        let mut col = vec![0usize; self.feet];
        let mut next = 0usize;
        let mut v = 0;
        while v < self.feet {
            col[v] = next;
            if v + 1 < self.feet && partner[v] < v && partner[v + 1] > v + 1 {
                col[v + 1] = next;
                v += 2;
            } else {
                v += 1;
            }
            next += 1;
        }
        let ncols = next;
        let width = 4usize;
        let mut lines = Vec::new();
        let mut dots = String::new();
        for c in 0..ncols {
            dots.push_str(&" ".repeat(c * width - dots.chars().count()));
            dots.push('*');
        }
        lines.push(dots);
        for e in &self.edges {
            let (a, b) = (col[e.src], col[e.dst]);
            let (lo, hi) = (a.min(b), a.max(b));
            let mut row: Vec<char> = vec![' '; hi * width + 1];
            for x in lo * width..=hi * width {
                row[x] = '-';
            }
            if a < b {
                row[lo * width] = 'o';
                row[hi * width] = '>';
            } else {
                row[lo * width] = '<';
                row[hi * width] = 'o';
            }
            let mut row: String = row.into_iter().collect();
            row.push_str("  ");
            row.push_str(&e.label);
            lines.push(row);
        }
        lines.join("\n")
    }
}

/// The label bijection of a diagram isomorphism; the vertex bijection is
/// the identity on indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramIso {
    pub label_map: BTreeMap<String, String>,
}

impl DiagramIso {
    pub fn apply(&self, label: &str) -> Option<&str> {
        self.label_map.get(label).map(|s| s.as_str())
    }
}

/// A concrete family realizing a diagram: one map per label, in the
/// canonical enumeration.
#[derive(Clone, Debug)]
pub struct Realization {
    pub maps: Vec<PLMap>,
    pub labels: Vec<String>,
}

impl Realization {
    fn empty() -> Self {
        Realization {
            maps: Vec::new(),
            labels: Vec::new(),
        }
    }
}

/// Convenience constructor for test code and fixtures.
pub fn diagram(feet: usize, edges: &[(usize, usize, &str)]) -> DynamicalDiagram {
    DynamicalDiagram::new(
        feet,
        edges
            .iter()
            .map(|(s, d, l)| DiagramEdge {
                src: *s,
                dst: *d,
                label: l.to_string(),
            })
            .collect(),
    )
    .expect("valid diagram literal")
}
