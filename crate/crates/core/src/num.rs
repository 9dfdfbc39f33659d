//! Exact scalars: arbitrary-precision rationals and the two symbolic
//! infinities of the extended line.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A point of the extended real line.
///
/// Finite values are rationals in lowest terms (`BigRational` keeps them
/// reduced with a positive denominator); the infinities compare below and
/// above every rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum XRat {
    MinusInf,
    Fin(Rat),
    PlusInf,
}

impl XRat {
    pub fn fin(r: Rat) -> Self {
        XRat::Fin(r)
    }

    pub fn of(n: i64, d: i64) -> Self {
        XRat::Fin(rat(n, d))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XRat::Fin(_))
    }

    pub fn as_fin(&self) -> Option<&Rat> {
        match self {
            XRat::Fin(r) => Some(r),
            _ => None,
        }
    }

    pub fn into_fin(self) -> Option<Rat> {
        match self {
            XRat::Fin(r) => Some(r),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "-inf" | "-INF" | "-oo" => Ok(XRat::MinusInf),
            "+inf" | "inf" | "+INF" | "+oo" => Ok(XRat::PlusInf),
            t => Ok(XRat::Fin(parse_rat(t)?)),
        }
    }
}

impl From<Rat> for XRat {
    fn from(r: Rat) -> Self {
        XRat::Fin(r)
    }
}

impl PartialOrd for XRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XRat {
    fn cmp(&self, other: &Self) -> Ordering {
        use XRat::*;
        match (self, other) {
            (MinusInf, MinusInf) | (PlusInf, PlusInf) => Ordering::Equal,
            (MinusInf, _) | (_, PlusInf) => Ordering::Less,
            (_, MinusInf) | (PlusInf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRat::MinusInf => write!(f, "-inf"),
            XRat::Fin(r) => write!(f, "{r}"),
            XRat::PlusInf => write!(f, "+inf"),
        }
    }
}

impl fmt::Debug for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for XRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for XRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        XRat::parse(&s).map_err(de::Error::custom)
    }
}

/// Parses `p/q` or a plain integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    Rat::from_str(s.trim()).map_err(|_| Error::BadRational(s.to_string()))
}

/// Serde adapter storing rationals as `p/q` strings.
pub mod rat_serde {
    use super::{parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Renders a rational the way the file formats expect: `p/q`, or `p` when
/// the denominator is 1.
pub fn show_rat(r: &Rat) -> String {
    r.to_string()
}

fn odd_part(n: &BigInt) -> BigInt {
    let mut m = n.clone();
    let two = BigInt::from(2);
    while (&m % &two).is_zero() && !m.is_zero() {
        m /= &two;
    }
    m
}

/// True when the denominator is a power of two.
pub fn is_dyadic(r: &Rat) -> bool {
    odd_part(r.denom()).is_one()
}

/// True when `r` is 2^k for some integer k (positive or negative).
pub fn is_power_of_two(r: &Rat) -> bool {
    if !r.is_positive() {
        return false;
    }
    let (n, d) = (r.numer(), r.denom());
    if d.is_one() {
        odd_part(n).is_one()
    } else if n.is_one() {
        odd_part(d).is_one()
    } else {
        false
    }
}

/// Smallest k >= 0 with value <= 2^k, for small positive integers.
pub fn ceil_log2(n: u64) -> u32 {
    let mut k = 0;
    while (1u64 << k) < n {
        k += 1;
    }
    k
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_show() {
        assert_eq!(parse_rat("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(show_rat(&rat(4, 6)), "2/3");
        assert_eq!(show_rat(&int(5)), "5");
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn extended_order() {
        assert!(XRat::MinusInf < XRat::of(-1000000, 1));
        assert!(XRat::of(1000000, 1) < XRat::PlusInf);
        assert!(XRat::of(1, 3) < XRat::of(1, 2));
        assert_eq!(XRat::parse("+inf").unwrap(), XRat::PlusInf);
        assert_eq!(XRat::parse("-inf").unwrap(), XRat::MinusInf);
    }

    #[test]
    fn dyadic_and_pow2() {
        assert!(is_dyadic(&rat(5, 8)));
        assert!(!is_dyadic(&rat(1, 3)));
        assert!(is_power_of_two(&rat(1, 4)));
        assert!(is_power_of_two(&int(8)));
        assert!(!is_power_of_two(&rat(3, 2)));
        assert!(!is_power_of_two(&int(-2)));
    }
}
