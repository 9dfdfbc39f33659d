//! Geometric properness, stretched transition chains, the algorithmic
//! fastness criterion, and the canonical marking with its feet.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::num::{Rat, XRat};
use crate::plmap::{Bump, PLMap};

/// A point that is a left (or right) transition point of two different
/// generators.
#[derive(Clone, Debug, Serialize)]
pub struct ProperViolation {
    pub point: XRat,
    pub members: (usize, usize),
    pub side: &'static str,
}

/// The first properness violation of the family, scanning transition
/// points in increasing order. `None` means geometrically proper.
pub fn properness_violation(maps: &[PLMap]) -> Option<ProperViolation> {
    let mut seen: BTreeMap<(XRat, bool), usize> = BTreeMap::new();
    let mut best: Option<ProperViolation> = None;
    for (i, f) in maps.iter().enumerate() {
        for orb in f.orbitals() {
            for (point, is_right) in [(orb.left.clone(), false), (orb.right.clone(), true)] {
                let key = (point.clone(), is_right);
                if let Some(&j) = seen.get(&key) {
                    if j != i {
                        let v = ProperViolation {
                            point,
                            members: (j, i),
                            side: if is_right { "right" } else { "left" },
                        };
                        let better = match &best {
                            None => true,
                            Some(b) => (&v.point, v.side) < (&b.point, b.side),
                        };
                        if better {
                            best = Some(v);
                        }
                    }
                } else {
                    seen.insert(key, i);
                }
            }
        }
    }
    best
}

pub fn is_geometrically_proper(maps: &[PLMap]) -> bool {
    properness_violation(maps).is_none()
}

/// A finite family of positive bumps in the canonical enumeration
/// (increasing left transition points; ties — which only occur in
/// non-proper families — are broken by the right endpoint).
#[derive(Clone, Debug)]
pub struct BumpFamily {
    bumps: Vec<Bump>,
}

impl BumpFamily {
    pub fn new(mut bumps: Vec<Bump>) -> Self {
        bumps.sort_by(|a, b| (a.left(), a.right()).cmp(&(b.left(), b.right())));
        BumpFamily { bumps }
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    pub fn len(&self) -> usize {
        self.bumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bumps.is_empty()
    }

    pub fn maps(&self) -> Vec<PLMap> {
        self.bumps.iter().map(|b| b.map().clone()).collect()
    }

    pub fn properness_violation(&self) -> Option<ProperViolation> {
        properness_violation(&self.maps())
    }

    /// All transition points of the family, increasing.
    pub fn transition_points(&self) -> Vec<XRat> {
        let mut pts: Vec<XRat> = Vec::new();
        for b in &self.bumps {
            pts.push(b.left().clone());
            pts.push(b.right().clone());
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// Transition points strictly inside the open interval (lo, hi);
    /// these are always finite.
    fn transitions_inside(&self, lo: &XRat, hi: &XRat) -> Vec<Rat> {
        self.transition_points()
            .into_iter()
            .filter(|t| t > lo && t < hi)
            .map(|t| t.into_fin().expect("interior transition points are finite"))
            .collect()
    }

    /// A bump is isolated when its support contains no transition point of
    /// the family (its own endpoints are not interior points).
    pub fn is_isolated(&self, k: usize) -> bool {
        let b = &self.bumps[k];
        self.transitions_inside(b.left(), b.right()).is_empty()
    }
}

/// A maximal stretched transition chain: consecutive supports interleave
/// and no transition point of the family sits in an overlap.
#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    /// Bump indices, left to right.
    pub members: Vec<usize>,
    /// Least transition point of the family inside the chain's support.
    #[serde(with = "crate::num::rat_serde")]
    pub c_min: Rat,
    /// Greatest transition point of the family inside the chain's support.
    #[serde(with = "crate::num::rat_serde")]
    pub c_max: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainPartition {
    pub chains: Vec<Chain>,
    pub isolated: Vec<usize>,
}

/// Partitions the nonisolated bumps into maximal stretched transition
/// chains. Requires a geometrically proper family.
pub fn maximal_chains(fam: &BumpFamily) -> Result<ChainPartition> {
    if let Some(v) = fam.properness_violation() {
        return Err(Error::NotProper(v.point, v.members, v.side));
    }
    let n = fam.len();
    let isolated: Vec<usize> = (0..n).filter(|&k| fam.is_isolated(k)).collect();
    // left endpoint -> bump index (properness makes this injective)
    let by_left: BTreeMap<&XRat, usize> = fam
        .bumps()
        .iter()
        .enumerate()
        .map(|(k, b)| (b.left(), k))
        .collect();
    // succ(k): the bump whose left endpoint is the greatest transition
    // point inside supt(k), when that point is a left endpoint at all.
    let mut succ: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        if fam.is_isolated(k) {
            continue;
        }
        let b = &fam.bumps()[k];
        let inside = fam.transitions_inside(b.left(), b.right());
        let greatest = XRat::Fin(inside.last().expect("nonisolated").clone());
        if let Some(&j) = by_left.get(&greatest) {
            succ[k] = Some(j);
        }
    }
    let mut has_pred = vec![false; n];
    for s in succ.iter().flatten() {
        has_pred[*s] = true;
    }
    let mut chains = Vec::new();
    for start in 0..n {
        if fam.is_isolated(start) || has_pred[start] {
            continue;
        }
        let mut members = vec![start];
        let mut cur = start;
        while let Some(next) = succ[cur] {
            members.push(next);
            cur = next;
        }
        let lo = fam.bumps()[start].left().clone();
        let hi = fam.bumps()[cur].right().clone();
        let inside = fam.transitions_inside(&lo, &hi);
        let c_min = inside.first().expect("chain has interior transitions").clone();
        let c_max = inside.last().unwrap().clone();
        chains.push(Chain {
            members,
            c_min,
            c_max,
        });
    }
    Ok(ChainPartition { chains, isolated })
}

/// One chain of the fastness report: the inequality
/// `c_max <= c_min * (product of the chain)` evaluated exactly.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCheck {
    pub members: Vec<usize>,
    #[serde(with = "crate::num::rat_serde")]
    pub c_min: Rat,
    #[serde(with = "crate::num::rat_serde")]
    pub c_max: Rat,
    /// Image of c_min under the composition of the chain, left to right.
    #[serde(with = "crate::num::rat_serde")]
    pub image: Rat,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FastReport {
    pub violation: Option<ProperViolation>,
    pub chains: Vec<ChainCheck>,
    pub isolated: Vec<usize>,
    pub fast: bool,
}

pub fn check_chain(fam: &BumpFamily, members: &[usize], c_min: &Rat, c_max: &Rat) -> ChainCheck {
    let mut image = c_min.clone();
    for &k in members {
        image = fam.bumps()[k].map().eval_rat(&image);
    }
    ChainCheck {
        members: members.to_vec(),
        c_min: c_min.clone(),
        c_max: c_max.clone(),
        ok: c_max <= &image,
        image,
    }
}

/// The fastness decision: geometrically proper, and every maximal chain
/// satisfies the stretching inequality.
pub fn fastness_report(fam: &BumpFamily) -> FastReport {
    if let Some(v) = fam.properness_violation() {
        return FastReport {
            violation: Some(v),
            chains: Vec::new(),
            isolated: Vec::new(),
            fast: false,
        };
    }
    let part = maximal_chains(fam).expect("properness just checked");
    let chains: Vec<ChainCheck> = part
        .chains
        .iter()
        .map(|c| check_chain(fam, &c.members, &c.c_min, &c.c_max))
        .collect();
    let fast = chains.iter().all(|c| c.ok);
    FastReport {
        violation: None,
        chains,
        isolated: part.isolated,
        fast,
    }
}

pub fn is_geometrically_fast(fam: &BumpFamily) -> bool {
    fastness_report(fam).fast
}

/// Source and destination feet of one marked bump: src is the open
/// interval (x, t), dest the half-open [t*a, y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FootPair {
    pub src: Interval,
    pub dest: Interval,
}

#[derive(Clone, Debug)]
pub struct CanonicalMarking {
    /// Marker of each bump, in family order.
    pub markers: Vec<Rat>,
    /// Whether the marker is initial: no marker s < t of a bump a has
    /// s*a = t.
    pub initial: Vec<bool>,
    feet: Option<Vec<FootPair>>,
}

impl CanonicalMarking {
    /// The feet induced by the marking. `None` only for non-fast families
    /// whose marking recursion escapes an orbital.
    pub fn feet(&self) -> Option<&[FootPair]> {
        self.feet.as_deref()
    }

    pub fn initial_count(&self) -> usize {
        self.initial.iter().filter(|b| **b).count()
    }
}

/// The inductive marking: s_k is the least transition point of the family
/// inside supt(a_k) (midpoint when isolated); t_k = s_k when initial,
/// otherwise t_k = t_j * a_j where s_k is the right endpoint of a_j.
pub fn canonical_marking(fam: &BumpFamily) -> Result<CanonicalMarking> {
    if let Some(v) = fam.properness_violation() {
        return Err(Error::NotProper(v.point, v.members, v.side));
    }
    let n = fam.len();
    let by_right: BTreeMap<&XRat, usize> = fam
        .bumps()
        .iter()
        .enumerate()
        .map(|(k, b)| (b.right(), k))
        .collect();
    let mut markers: Vec<Option<Rat>> = vec![None; n];
    for k in 0..n {
        let b = &fam.bumps()[k];
        if fam.is_isolated(k) {
            let support = b.support();
            let mid = support
                .midpoint()
                .ok_or(Error::UnboundedIsolatedOrbital(k))?;
            markers[k] = Some(mid);
            continue;
        }
        let s_k = fam.transitions_inside(b.left(), b.right())[0].clone();
        match by_right.get(&XRat::Fin(s_k.clone())) {
            Some(&j) => {
                // s_k is the right transition point of a_j, and j < k in the
                // canonical enumeration, so markers[j] is already set.
                debug_assert!(j < k);
                let t_j = markers[j].clone().expect("predecessor already marked");
                markers[k] = Some(fam.bumps()[j].map().eval_rat(&t_j));
            }
            None => markers[k] = Some(s_k),
        }
    }
    let markers: Vec<Rat> = markers.into_iter().map(|m| m.unwrap()).collect();

    let initial: Vec<bool> = (0..n)
        .map(|k| {
            let t = &markers[k];
            (0..n).all(|j| {
                let s = &markers[j];
                s >= t || fam.bumps()[j].map().eval_rat(s) != *t
            })
        })
        .collect();

    let in_orbital = (0..n).all(|k| {
        let b = &fam.bumps()[k];
        let t = XRat::Fin(markers[k].clone());
        b.left() < &t && &t < b.right()
    });
    let feet = if in_orbital {
        Some(
            (0..n)
                .map(|k| {
                    let b = &fam.bumps()[k];
                    let t = markers[k].clone();
                    let ta = b.map().eval_rat(&t);
                    FootPair {
                        src: Interval::open(b.left().clone(), XRat::Fin(t))
                            .expect("marker right of left endpoint"),
                        dest: Interval::left_closed(XRat::Fin(ta), b.right().clone())
                            .expect("marker image left of right endpoint"),
                    }
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(CanonicalMarking {
        markers,
        initial,
        feet,
    })
}

/// Exact pairwise disjointness of all source and destination intervals.
pub fn feet_disjoint(feet: &[FootPair]) -> bool {
    let mut all: Vec<&Interval> = Vec::with_capacity(2 * feet.len());
    for f in feet {
        all.push(&f.src);
        all.push(&f.dest);
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if !all[i].disjoint(all[j]) {
                return false;
            }
        }
    }
    true
}

/// Searches for the least k <= cap making the family of k-th powers fast.
pub fn fast_power(fam: &BumpFamily, cap: i64) -> Option<(i64, BumpFamily)> {
    for k in 1..=cap {
        let powered: Vec<Bump> = fam
            .bumps()
            .iter()
            .map(|b| Bump::new(b.map().pow(k)).expect("powers of a bump are bumps"))
            .collect();
        let powered = BumpFamily::new(powered);
        if is_geometrically_fast(&powered) {
            return Some((k, powered));
        }
    }
    None
}

/// All positive bumps used in the generators, with bookkeeping:
/// returns (family, per-generator lists of (index into family, sign)).
pub fn bumps_used(maps: &[PLMap]) -> (BumpFamily, Vec<Vec<(usize, crate::plmap::Sign)>>) {
    let mut bumps: Vec<Bump> = Vec::new();
    let mut raw: Vec<Vec<(usize, crate::plmap::Sign)>> = Vec::new();
    for m in maps {
        let mut list = Vec::new();
        for (b, s) in m.signed_bumps() {
            bumps.push(b);
            list.push((bumps.len() - 1, s));
        }
        raw.push(list);
    }
    // Re-index according to the canonical enumeration.
    let fam = BumpFamily::new(bumps.clone());
    let find = |b: &Bump| -> usize {
        fam.bumps()
            .iter()
            .position(|c| c == b)
            .expect("bump present in family")
    };
    let per_gen = raw
        .into_iter()
        .map(|list| {
            list.into_iter()
                .map(|(old, s)| (find(&bumps[old]), s))
                .collect()
        })
        .collect();
    (fam, per_gen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::{int, rat};
    use crate::plmap::PLMap;

    fn chain_family(n: usize) -> BumpFamily {
        let maps = fixtures::f_chain(n);
        BumpFamily::new(
            maps.into_iter()
                .map(|m| Bump::new(m).unwrap())
                .collect(),
        )
    }

    #[test]
    fn identity_family_is_proper() {
        assert!(is_geometrically_proper(&[PLMap::identity()]));
    }

    #[test]
    fn f2_chain_is_proper_but_g_generators_are_not() {
        let h = fixtures::f_chain(2);
        assert!(is_geometrically_proper(&h));
        let g = vec![fixtures::f_generator(2, 0), fixtures::f_generator(2, 1)];
        let v = properness_violation(&g).expect("shared tail behavior at +inf");
        assert_eq!(v.point, XRat::PlusInf);
        assert_eq!(v.side, "right");
    }

    #[test]
    fn single_bump_is_isolated() {
        let b = Bump::new(PLMap::two_piece_bump(int(0), rat(1, 2), rat(3, 4), int(1)).unwrap())
            .unwrap();
        let fam = BumpFamily::new(vec![b]);
        let part = maximal_chains(&fam).unwrap();
        assert!(part.chains.is_empty());
        assert_eq!(part.isolated, vec![0]);
    }

    #[test]
    fn f2_chain_partition_and_fastness() {
        let fam = chain_family(2);
        let part = maximal_chains(&fam).unwrap();
        assert_eq!(part.chains.len(), 1);
        assert_eq!(part.chains[0].members, vec![0, 1]);
        assert_eq!(part.chains[0].c_min, int(1));
        assert_eq!(part.chains[0].c_max, int(2));
        assert!(part.isolated.is_empty());
        let report = fastness_report(&fam);
        assert!(report.fast);
        assert_eq!(report.chains[0].image, int(2));
    }

    #[test]
    fn slowed_variant_is_not_fast_but_a_power_is() {
        let (slowed, h1) = fixtures::slowed_pair();
        let fam = BumpFamily::new(vec![
            Bump::new(slowed).unwrap(),
            Bump::new(h1).unwrap(),
        ]);
        let report = fastness_report(&fam);
        assert!(!report.fast);
        assert_eq!(report.chains[0].image, rat(3, 2));
        assert_eq!(report.chains[0].c_max, int(2));
        let (k, _) = fast_power(&fam, 64).expect("powering makes it fast");
        assert_eq!(k, 2);
    }

    #[test]
    fn canonical_marking_of_f2_chain() {
        let fam = chain_family(2);
        let marking = canonical_marking(&fam).unwrap();
        assert_eq!(marking.markers, vec![int(1), rat(3, 2)]);
        assert_eq!(marking.initial, vec![true, false]);
        let feet = marking.feet().unwrap();
        assert_eq!(feet[0].src.to_string(), "(0, 1)");
        assert_eq!(feet[0].dest.to_string(), "[3/2, 2)");
        assert_eq!(feet[1].src.to_string(), "(1, 3/2)");
        assert_eq!(feet[1].dest.to_string(), "[2, +inf)");
        assert!(feet_disjoint(feet));
        assert_eq!(marking.initial_count(), 1);
    }

    #[test]
    fn isolated_bump_gets_midpoint_marker() {
        let b = Bump::new(PLMap::two_piece_bump(int(0), rat(1, 4), rat(1, 2), int(1)).unwrap())
            .unwrap();
        let fam = BumpFamily::new(vec![b]);
        let marking = canonical_marking(&fam).unwrap();
        assert_eq!(marking.markers, vec![rat(1, 2)]);
        assert!(feet_disjoint(marking.feet().unwrap()));
    }

    #[test]
    fn unbounded_isolated_bump_is_rejected() {
        // a single bump supported on (0, +inf): no midpoint marker exists
        let m = PLMap::from_parts(
            vec![(int(0), int(0)), (int(1), int(3))],
            crate::plmap::Affine::identity(),
            crate::plmap::Affine::new(int(1), int(2)).unwrap(),
        )
        .unwrap();
        let fam = BumpFamily::new(vec![Bump::new(m).unwrap()]);
        assert!(matches!(
            canonical_marking(&fam),
            Err(Error::UnboundedIsolatedOrbital(0))
        ));
    }

    #[test]
    fn slowed_feet_overlap() {
        let (slowed, h1) = fixtures::slowed_pair();
        let fam = BumpFamily::new(vec![
            Bump::new(slowed).unwrap(),
            Bump::new(h1).unwrap(),
        ]);
        let marking = canonical_marking(&fam).unwrap();
        let feet = marking.feet().expect("markers stay inside orbitals here");
        assert!(!feet_disjoint(feet));
    }
}
