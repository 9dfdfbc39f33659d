//! Intervals of the extended line with exact endpoints and explicit
//! open/closed flags. Feet, supports, and excision witnesses are all
//! represented this way, so disjointness and containment tests stay exact.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::num::{rat, Rat, XRat};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: XRat,
    pub lo_open: bool,
    pub hi: XRat,
    pub hi_open: bool,
}

impl Interval {
    pub fn new(lo: XRat, lo_open: bool, hi: XRat, hi_open: bool) -> Result<Self, Error> {
        let nonempty = lo < hi || (lo == hi && !lo_open && !hi_open);
        if !nonempty {
            return Err(Error::EmptyInterval(lo, hi));
        }
        Ok(Interval {
            lo,
            lo_open,
            hi,
            hi_open,
        })
    }

    /// Open interval (lo, hi).
    pub fn open(lo: XRat, hi: XRat) -> Result<Self, Error> {
        Interval::new(lo, true, hi, true)
    }

    /// Half-open interval [lo, hi).
    pub fn left_closed(lo: XRat, hi: XRat) -> Result<Self, Error> {
        Interval::new(lo, false, hi, true)
    }

    /// The degenerate interval {p}.
    pub fn point(p: XRat) -> Self {
        Interval {
            lo: p.clone(),
            lo_open: false,
            hi: p,
            hi_open: false,
        }
    }

    pub fn contains_point(&self, p: &XRat) -> bool {
        let lo_ok = match p.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => !self.lo_open,
            Ordering::Less => false,
        };
        let hi_ok = match p.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => !self.hi_open,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Interval) -> bool {
        let lo_ok = match self.lo.cmp(&other.lo) {
            Ordering::Less => true,
            Ordering::Equal => !self.lo_open || other.lo_open,
            Ordering::Greater => false,
        };
        let hi_ok = match other.hi.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => !self.hi_open || other.hi_open,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }

    /// Strict "entirely to the left" order on intervals.
    pub fn entirely_left_of(&self, other: &Interval) -> bool {
        match self.hi.cmp(&other.lo) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_open || other.lo_open,
            Ordering::Greater => false,
        }
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.entirely_left_of(other) || other.entirely_left_of(self)
    }

    /// Total order on pairwise disjoint intervals; panics on overlap.
    pub fn cmp_disjoint(&self, other: &Interval) -> Ordering {
        if self == other {
            Ordering::Equal
        } else if self.entirely_left_of(other) {
            Ordering::Less
        } else if other.entirely_left_of(self) {
            Ordering::Greater
        } else {
            panic!("cmp_disjoint called on overlapping intervals {self} and {other}")
        }
    }

    /// Midpoint of a bounded interval.
    pub fn midpoint(&self) -> Option<Rat> {
        match (&self.lo, &self.hi) {
            (XRat::Fin(a), XRat::Fin(b)) => Some((a + b) * rat(1, 2)),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Maximal intervals of the extended line [-inf, +inf] not meeting any of
/// the given pairwise disjoint intervals.
pub fn complement_of_disjoint(parts: &[Interval]) -> Vec<Interval> {
    let mut sorted: Vec<&Interval> = parts.iter().collect();
    sorted.sort_by(|a, b| a.cmp_disjoint(b));
    let mut out = Vec::new();
    let mut cursor = XRat::MinusInf;
    let mut cursor_open = false; // complement piece starts closed at -inf
    for p in sorted {
        // gap (cursor, p.lo) with flipped openness on the p side
        let gap = Interval::new(cursor.clone(), cursor_open, p.lo.clone(), !p.lo_open);
        if let Ok(g) = gap {
            out.push(g);
        }
        cursor = p.hi.clone();
        cursor_open = !p.hi_open;
    }
    if let Ok(last) = Interval::new(cursor, cursor_open, XRat::PlusInf, false) {
        out.push(last);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn iv(lo: i64, lo_open: bool, hi: i64, hi_open: bool) -> Interval {
        Interval::new(XRat::Fin(int(lo)), lo_open, XRat::Fin(int(hi)), hi_open).unwrap()
    }

    #[test]
    fn touching_endpoints() {
        // dest [t, y) followed by src (y, .) are disjoint and ordered
        let dest = iv(1, false, 2, true);
        let src = iv(2, true, 3, true);
        assert!(dest.entirely_left_of(&src));
        assert!(dest.disjoint(&src));
        // [1,2) and [2,3) also disjoint
        assert!(iv(1, false, 2, true).disjoint(&iv(2, false, 3, true)));
        // (0,2) and [1,3) overlap
        assert!(!iv(0, true, 2, true).disjoint(&iv(1, false, 3, true)));
    }

    #[test]
    fn containment_openness() {
        assert!(iv(0, true, 2, true).contains(&iv(1, false, 2, true)));
        assert!(!iv(0, true, 2, true).contains_point(&XRat::Fin(int(2))));
        assert!(iv(0, false, 2, false).contains_point(&XRat::Fin(int(0))));
        let marker = Interval::point(XRat::Fin(int(2)));
        assert!(iv(0, true, 2, true).entirely_left_of(&marker));
    }

    #[test]
    fn complement_pieces() {
        let feet = vec![iv(0, true, 4, true), iv(6, false, 8, true)];
        let gaps = complement_of_disjoint(&feet);
        assert_eq!(gaps.len(), 3);
        assert_eq!(gaps[0].to_string(), "[-inf, 0]");
        assert_eq!(gaps[1].to_string(), "[4, 6)");
        assert_eq!(gaps[2].to_string(), "[8, +inf]");
    }
}
