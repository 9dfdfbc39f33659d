//! Exact piecewise-linear orientation-preserving homeomorphisms of the
//! extended line, with affine tails outside the breakpoint range.
//!
//! Values are kept in canonical form (no collinear breakpoints, tails
//! consistent with the extreme breakpoints), so structural equality is
//! semantic equality.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::num::{int, parse_rat, rat, show_rat, Rat, XRat};

/// An affine map `t -> slope * t + intercept` with positive slope.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: Rat,
    pub intercept: Rat,
}

impl Affine {
    pub fn new(slope: Rat, intercept: Rat) -> Result<Self> {
        if !slope.is_positive() {
            return Err(Error::NonPositiveSlope);
        }
        Ok(Affine { slope, intercept })
    }

    pub fn identity() -> Self {
        Affine {
            slope: int(1),
            intercept: int(0),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.intercept.is_zero()
    }

    pub fn apply(&self, t: &Rat) -> Rat {
        &self.slope * t + &self.intercept
    }

    pub fn invert(&self) -> Affine {
        let slope = self.slope.recip();
        let intercept = -&self.intercept / &self.slope;
        Affine { slope, intercept }
    }

    /// `t -> other(self(t))`.
    pub fn then(&self, other: &Affine) -> Affine {
        Affine {
            slope: &self.slope * &other.slope,
            intercept: &other.slope * &self.intercept + &other.intercept,
        }
    }
}

impl fmt::Debug for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}t+{}", self.slope, self.intercept)
    }
}

/// Orientation of an orbital: does the map move its points rightward?
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A maximal open interval of points moved by a map, with its orientation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orbital {
    pub left: XRat,
    pub right: XRat,
    pub sign: Sign,
}

impl Orbital {
    pub fn support(&self) -> Interval {
        Interval::open(self.left.clone(), self.right.clone()).expect("orbital is nonempty")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    /// Strictly increasing in both coordinates.
    breaks: Vec<(Rat, Rat)>,
    left: Affine,
    right: Affine,
}

impl PLMap {
    pub fn identity() -> Self {
        PLMap {
            breaks: Vec::new(),
            left: Affine::identity(),
            right: Affine::identity(),
        }
    }

    pub fn affine(map: Affine) -> Self {
        PLMap {
            breaks: Vec::new(),
            left: map.clone(),
            right: map,
        }
    }

    /// Builds a map from raw parts, validating monotonicity and tail
    /// consistency, then canonicalizing away collinear breakpoints.
    pub fn from_parts(breaks: Vec<(Rat, Rat)>, left: Affine, right: Affine) -> Result<Self> {
        for i in 1..breaks.len() {
            if breaks[i - 1].0 >= breaks[i].0 {
                return Err(Error::BreakpointsNotIncreasing(i));
            }
            if breaks[i - 1].1 >= breaks[i].1 {
                return Err(Error::OutputsNotIncreasing(i));
            }
        }
        if let (Some(first), Some(last)) = (breaks.first(), breaks.last()) {
            if left.apply(&first.0) != first.1 {
                return Err(Error::TailMismatch("left"));
            }
            if right.apply(&last.0) != last.1 {
                return Err(Error::TailMismatch("right"));
            }
        } else if left != right {
            return Err(Error::TailsDiffer);
        }
        Ok(Self::canonicalize(breaks, left, right))
    }

    /// Breakpoints with identity tails; the extreme breakpoints must be
    /// fixed points.
    pub fn from_breaks(breaks: Vec<(Rat, Rat)>) -> Result<Self> {
        PLMap::from_parts(breaks, Affine::identity(), Affine::identity())
    }

    /// The two-piece bump supported on (x, y) that maps s to t.
    pub fn two_piece_bump(x: Rat, s: Rat, t: Rat, y: Rat) -> Result<Self> {
        PLMap::from_breaks(vec![(x.clone(), x), (s, t), (y.clone(), y)])
    }

    fn canonicalize(breaks: Vec<(Rat, Rat)>, left: Affine, right: Affine) -> Self {
        let n = breaks.len();
        let mut keep = Vec::with_capacity(n);
        for i in 0..n {
            let incoming = if i == 0 {
                left.slope.clone()
            } else {
                segment_slope(&breaks[i - 1], &breaks[i])
            };
            let outgoing = if i + 1 == n {
                right.slope.clone()
            } else {
                segment_slope(&breaks[i], &breaks[i + 1])
            };
            if incoming != outgoing {
                keep.push(breaks[i].clone());
            }
        }
        // A map with no genuine kinks is a single affine map.
        if keep.is_empty() {
            return PLMap::affine(left);
        }
        PLMap {
            breaks: keep,
            left,
            right,
        }
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breaks
    }

    pub fn left_tail(&self) -> &Affine {
        &self.left
    }

    pub fn right_tail(&self) -> &Affine {
        &self.right
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.is_empty() && self.left.is_identity()
    }

    pub fn eval_rat(&self, t: &Rat) -> Rat {
        // index of the first breakpoint with input > t
        let idx = self.breaks.partition_point(|(x, _)| x <= t);
        if idx == 0 {
            return self.left.apply(t);
        }
        let (x0, y0) = &self.breaks[idx - 1];
        if x0 == t {
            return y0.clone();
        }
        if idx == self.breaks.len() {
            return self.right.apply(t);
        }
        let slope = segment_slope(&self.breaks[idx - 1], &self.breaks[idx]);
        y0 + slope * (t - x0)
    }

    pub fn evaluate(&self, t: &XRat) -> XRat {
        match t {
            XRat::MinusInf => XRat::MinusInf,
            XRat::PlusInf => XRat::PlusInf,
            XRat::Fin(r) => XRat::Fin(self.eval_rat(r)),
        }
    }

    /// Exact preimage, found by searching the (strictly increasing) outputs.
    pub fn preimage_rat(&self, u: &Rat) -> Rat {
        let idx = self.breaks.partition_point(|(_, y)| y <= u);
        if idx == 0 {
            return self.left.invert().apply(u);
        }
        let (x0, y0) = &self.breaks[idx - 1];
        if y0 == u {
            return x0.clone();
        }
        if idx == self.breaks.len() {
            return self.right.invert().apply(u);
        }
        let slope = segment_slope(&self.breaks[idx - 1], &self.breaks[idx]);
        x0 + (u - y0) / slope
    }

    pub fn invert(&self) -> PLMap {
        let breaks = self.breaks.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        PLMap {
            breaks,
            left: self.left.invert(),
            right: self.right.invert(),
        }
    }

    /// Right-action composition: the returned map sends t to g(f(t)) where
    /// f is `self` and g is `other`.
    pub fn compose(&self, other: &PLMap) -> PLMap {
        let mut inputs: Vec<Rat> = self.breaks.iter().map(|(x, _)| x.clone()).collect();
        inputs.extend(other.breaks.iter().map(|(u, _)| self.preimage_rat(u)));
        inputs.sort();
        inputs.dedup();
        let breaks: Vec<(Rat, Rat)> = inputs
            .into_iter()
            .map(|x| {
                let y = other.eval_rat(&self.eval_rat(&x));
                (x, y)
            })
            .collect();
        let left = self.left.then(&other.left);
        let right = self.right.then(&other.right);
        PLMap::canonicalize(breaks, left, right)
    }

    /// Integer power, with negative exponents through the inverse.
    pub fn pow(&self, k: i64) -> PLMap {
        if k == 0 {
            return PLMap::identity();
        }
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = PLMap::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        acc
    }

    /// Affine pieces of the graph as (lo, hi, map) triples covering the line.
    fn pieces(&self) -> Vec<(XRat, XRat, Affine)> {
        if self.breaks.is_empty() {
            return vec![(XRat::MinusInf, XRat::PlusInf, self.left.clone())];
        }
        let mut out = Vec::with_capacity(self.breaks.len() + 1);
        out.push((
            XRat::MinusInf,
            XRat::Fin(self.breaks[0].0.clone()),
            self.left.clone(),
        ));
        for w in self.breaks.windows(2) {
            let slope = segment_slope(&w[0], &w[1]);
            let intercept = &w[0].1 - &slope * &w[0].0;
            out.push((
                XRat::Fin(w[0].0.clone()),
                XRat::Fin(w[1].0.clone()),
                Affine { slope, intercept },
            ));
        }
        out.push((
            XRat::Fin(self.breaks.last().unwrap().0.clone()),
            XRat::PlusInf,
            self.right.clone(),
        ));
        out
    }

    /// Minimum slope among the affine pieces meeting the interior of `iv`.
    pub fn min_slope_on(&self, iv: &Interval) -> Option<Rat> {
        let mut best: Option<Rat> = None;
        for (lo, hi, map) in self.pieces() {
            // the piece's interior overlaps iv's interior?
            let overlaps = lo < iv.hi && iv.lo < hi;
            if overlaps {
                best = match best {
                    Some(b) if b <= map.slope => Some(b),
                    _ => Some(map.slope),
                };
            }
        }
        best
    }

    /// Maximal open intervals of moved points, in increasing order.
    pub fn orbitals(&self) -> Vec<Orbital> {
        // Closed components of the fixed-point set, including both
        // infinities, merged and sorted.
        let mut fixed: Vec<(XRat, XRat)> = vec![
            (XRat::MinusInf, XRat::MinusInf),
            (XRat::PlusInf, XRat::PlusInf),
        ];
        for (lo, hi, map) in self.pieces() {
            if map.is_identity() {
                fixed.push((lo, hi));
            } else if !map.slope.is_one() {
                let t = &map.intercept / (int(1) - &map.slope);
                let t = XRat::Fin(t);
                if lo <= t && t <= hi {
                    fixed.push((t.clone(), t));
                }
            }
        }
        fixed.sort();
        let mut merged: Vec<(XRat, XRat)> = Vec::new();
        for (lo, hi) in fixed {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        let mut orbitals = Vec::new();
        for pair in merged.windows(2) {
            let left = pair[0].1.clone();
            let right = pair[1].0.clone();
            debug_assert!(left < right);
            let sample = sample_between(&left, &right);
            let sign = if self.eval_rat(&sample) > sample {
                Sign::Plus
            } else {
                Sign::Minus
            };
            orbitals.push(Orbital { left, right, sign });
        }
        orbitals
    }

    /// All orbital endpoints, in increasing order.
    pub fn transition_points(&self) -> Vec<XRat> {
        let mut pts = Vec::new();
        for orb in self.orbitals() {
            pts.push(orb.left);
            pts.push(orb.right);
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// One positive bump per orbital, signed by whether the map agrees with
    /// the bump or its inverse there. The pointwise product of the signed
    /// bumps reconstructs the map.
    pub fn signed_bumps(&self) -> Vec<(Bump, Sign)> {
        let inverse = self.invert();
        self.orbitals()
            .into_iter()
            .map(|orb| {
                let base = match orb.sign {
                    Sign::Plus => self,
                    Sign::Minus => &inverse,
                };
                let map = base.restrict_to(&orb.left, &orb.right);
                let bump = Bump::new(map).expect("restriction of an orbital is a positive bump");
                (bump, orb.sign)
            })
            .collect()
    }

    /// The map agreeing with `self` on (l, r) and the identity elsewhere.
    /// Both endpoints must be fixed (or infinite with a matching tail).
    fn restrict_to(&self, l: &XRat, r: &XRat) -> PLMap {
        let mut breaks = Vec::new();
        let mut left = Affine::identity();
        let mut right = Affine::identity();
        match l {
            XRat::Fin(x) => breaks.push((x.clone(), x.clone())),
            XRat::MinusInf => left = self.left.clone(),
            XRat::PlusInf => unreachable!("orbital cannot start at +inf"),
        }
        for (x, y) in &self.breaks {
            let x = XRat::Fin(x.clone());
            if &x > l && &x < r {
                breaks.push((x.into_fin().unwrap(), y.clone()));
            }
        }
        match r {
            XRat::Fin(x) => breaks.push((x.clone(), x.clone())),
            XRat::PlusInf => right = self.right.clone(),
            XRat::MinusInf => unreachable!("orbital cannot end at -inf"),
        }
        PLMap::from_parts(breaks, left, right).expect("restriction keeps monotonicity")
    }
}

fn segment_slope(a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    (&b.1 - &a.1) / (&b.0 - &a.0)
}

fn sample_between(lo: &XRat, hi: &XRat) -> Rat {
    match (lo, hi) {
        (XRat::Fin(a), XRat::Fin(b)) => (a + b) * rat(1, 2),
        (XRat::MinusInf, XRat::Fin(b)) => b - int(1),
        (XRat::Fin(a), XRat::PlusInf) => a + int(1),
        (XRat::MinusInf, XRat::PlusInf) => int(0),
        _ => unreachable!("empty gap"),
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        write!(f, "PL[{:?} | ", self.left)?;
        for (x, y) in &self.breaks {
            write!(f, "({x},{y}) ")?;
        }
        write!(f, "| {:?}]", self.right)
    }
}

/// A one-orbital positive map together with its orbital endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bump {
    map: PLMap,
    left: XRat,
    right: XRat,
}

impl Bump {
    pub fn new(map: PLMap) -> Result<Self> {
        let orbs = map.orbitals();
        if orbs.len() != 1 {
            return Err(Error::NotABump(orbs.len()));
        }
        let orb = &orbs[0];
        if orb.sign != Sign::Plus {
            return Err(Error::NegativeBump);
        }
        Ok(Bump {
            left: orb.left.clone(),
            right: orb.right.clone(),
            map,
        })
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    pub fn left(&self) -> &XRat {
        &self.left
    }

    pub fn right(&self) -> &XRat {
        &self.right
    }

    /// The open orbital (left, right).
    pub fn support(&self) -> Interval {
        Interval::open(self.left.clone(), self.right.clone()).expect("orbital nonempty")
    }

    pub fn into_map(self) -> PLMap {
        self.map
    }
}

// ---------------------------------------------------------------------------
// Serialization: rationals as "p/q" strings.

#[derive(Serialize, Deserialize)]
struct RawPLMap {
    breakpoints: Vec<[String; 2]>,
    left_tail: [String; 2],
    right_tail: [String; 2],
}

impl Serialize for PLMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawPLMap {
            breakpoints: self
                .breaks
                .iter()
                .map(|(x, y)| [show_rat(x), show_rat(y)])
                .collect(),
            left_tail: [show_rat(&self.left.slope), show_rat(&self.left.intercept)],
            right_tail: [show_rat(&self.right.slope), show_rat(&self.right.intercept)],
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawPLMap::deserialize(d)?;
        let parse_pair = |p: &[String; 2]| -> Result<(Rat, Rat)> {
            Ok((parse_rat(&p[0])?, parse_rat(&p[1])?))
        };
        let build = || -> Result<PLMap> {
            let mut breaks = Vec::with_capacity(raw.breakpoints.len());
            for p in &raw.breakpoints {
                breaks.push(parse_pair(p)?);
            }
            let (ls, li) = parse_pair(&raw.left_tail)?;
            let (rs, ri) = parse_pair(&raw.right_tail)?;
            PLMap::from_parts(breaks, Affine::new(ls, li)?, Affine::new(rs, ri)?)
        };
        build().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::XRat;

    #[test]
    fn identity_evaluates_trivially() {
        let id = PLMap::identity();
        assert_eq!(id.eval_rat(&rat(7, 13)), rat(7, 13));
        assert_eq!(id.evaluate(&XRat::PlusInf), XRat::PlusInf);
        assert!(id.orbitals().is_empty());
        assert!(id.transition_points().is_empty());
        assert!(id.signed_bumps().is_empty());
    }

    #[test]
    fn f2_generator_values() {
        let g0 = fixtures::f_generator(2, 0);
        let g1 = fixtures::f_generator(2, 1);
        // slope 2 on [0,1]
        assert_eq!(g0.eval_rat(&rat(1, 2)), int(1));
        // translation by 1 above 2
        assert_eq!(g1.eval_rat(&int(3)), int(4));
        assert_eq!(g1.invert().eval_rat(&int(3)), int(2));
        let h0 = g0.compose(&g1.invert());
        assert_eq!(h0.eval_rat(&int(1)), rat(3, 2));
        let expected = PLMap::from_parts(
            vec![
                (int(0), int(0)),
                (rat(1, 2), int(1)),
                (int(1), rat(3, 2)),
                (int(2), int(2)),
            ],
            Affine::identity(),
            Affine::identity(),
        )
        .unwrap();
        assert_eq!(h0, expected);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let h0 = fixtures::f_chain(2).remove(0);
        assert!(h0.compose(&h0.invert()).is_identity());
        assert!(h0.invert().compose(&h0).is_identity());
        assert_eq!(h0.invert().invert(), h0);
    }

    #[test]
    fn orbitals_of_chain_generators() {
        let chain = fixtures::f_chain(2);
        let orbs = chain[0].orbitals();
        assert_eq!(orbs.len(), 1);
        assert_eq!(orbs[0].left, XRat::of(0, 1));
        assert_eq!(orbs[0].right, XRat::of(2, 1));
        assert_eq!(orbs[0].sign, Sign::Plus);
        let orbs1 = chain[1].orbitals();
        assert_eq!(orbs1.len(), 1);
        assert_eq!(orbs1[0].left, XRat::of(1, 1));
        assert_eq!(orbs1[0].right, XRat::PlusInf);
        assert_eq!(
            chain[1].transition_points(),
            vec![XRat::of(1, 1), XRat::PlusInf]
        );
    }

    #[test]
    fn signed_bumps_of_brin_navas_generator() {
        let (maps, _names) = fixtures::brin_navas();
        let f = &maps[0]; // one negative bump then one positive bump
        let bumps = f.signed_bumps();
        assert_eq!(bumps.len(), 2);
        assert_eq!(bumps[0].1, Sign::Minus);
        assert_eq!(bumps[1].1, Sign::Plus);
        // reconstruct
        let mut acc = PLMap::identity();
        for (b, s) in &bumps {
            let factor = match s {
                Sign::Plus => b.map().clone(),
                Sign::Minus => b.map().invert(),
            };
            acc = acc.compose(&factor);
        }
        assert_eq!(&acc, f);
    }

    #[test]
    fn negative_tail_orbital() {
        // tails with interior fixed points at 0 and 5
        let m = PLMap::from_parts(
            vec![(int(4), int(3))],
            Affine::new(rat(3, 4), int(0)).unwrap(),
            Affine::new(int(2), int(-5)).unwrap(),
        )
        .unwrap();
        let orbs = m.orbitals();
        assert_eq!(orbs.len(), 3);
        assert_eq!(orbs[0].left, XRat::MinusInf);
        assert_eq!(orbs[0].right, XRat::of(0, 1));
        assert_eq!(orbs[0].sign, Sign::Plus);
        assert_eq!(orbs[1].left, XRat::of(0, 1));
        assert_eq!(orbs[1].right, XRat::of(5, 1));
        assert_eq!(orbs[1].sign, Sign::Minus);
        assert_eq!(orbs[2].left, XRat::of(5, 1));
        assert_eq!(orbs[2].right, XRat::PlusInf);
        assert_eq!(orbs[2].sign, Sign::Plus);
    }

    #[test]
    fn canonical_form_merges_collinear() {
        let m = PLMap::from_breaks(vec![
            (int(0), int(0)),
            (int(1), int(2)),
            (int(2), rat(5, 2)),
            (int(3), int(3)),
            (int(4), int(4)),
        ])
        .unwrap();
        // (2, 5/2) sits on the slope-1/2 segment and (4,4) on the identity
        // tail; both merge away.
        assert_eq!(
            m.breakpoints(),
            &[(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]
        );
        let again = PLMap::from_breaks(m.breakpoints().to_vec()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn json_round_trip() {
        let h0 = fixtures::f_chain(2).remove(0);
        let text = serde_json::to_string(&h0).unwrap();
        assert!(text.contains("\"1/2\""));
        let back: PLMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h0);
    }
}
