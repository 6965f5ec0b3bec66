//! Exact circle and torus coordinates.
//!
//! A circle coordinate is a rational number of turns in `[0, 1)`. Arcs are
//! traversed in the positive direction from `start` to `end`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational used for all combinatorial coordinates.
pub type Rational = Ratio<i128>;

/// Reduce a rational into `[0, 1)`.
pub fn frac(q: Rational) -> Rational {
    q - q.floor()
}

/// A point on the circle `R/Z`, stored in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CircleCoord(Rational);

impl CircleCoord {
    pub fn new(q: Rational) -> Self {
        CircleCoord(frac(q))
    }

    pub fn from_ratio(num: i128, den: i128) -> Self {
        Self::new(Rational::new(num, den))
    }

    pub fn zero() -> Self {
        CircleCoord(Rational::zero())
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Positive distance travelled from `self` to `other`, in `[0, 1)`.
    pub fn forward_to(self, other: CircleCoord) -> Rational {
        frac(other.0 - self.0)
    }

    pub fn shifted(self, d: Rational) -> Self {
        Self::new(self.0 + d)
    }
}

impl fmt::Debug for CircleCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CircleCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for CircleCoord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_rational(s).map(CircleCoord::new)
    }
}

impl Serialize for CircleCoord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CircleCoord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the torus, `theta` along longitudes, `phi` along meridians.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusPoint {
    pub theta: CircleCoord,
    pub phi: CircleCoord,
}

impl TorusPoint {
    pub fn new(theta: CircleCoord, phi: CircleCoord) -> Self {
        TorusPoint { theta, phi }
    }

    pub fn from_ratios(t: (i128, i128), p: (i128, i128)) -> Self {
        TorusPoint::new(CircleCoord::from_ratio(t.0, t.1), CircleCoord::from_ratio(p.0, p.1))
    }

    pub fn translated(self, dt: Rational, dp: Rational) -> Self {
        TorusPoint::new(self.theta.shifted(dt), self.phi.shifted(dp))
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.theta, self.phi)
    }
}

/// Closed arc `[start, end]` traversed positively; `start != end`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub start: CircleCoord,
    pub end: CircleCoord,
}

/// One connected piece of an arc intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcPiece {
    Point(CircleCoord),
    Arc(Arc),
}

impl Arc {
    pub fn new(start: CircleCoord, end: CircleCoord) -> Result<Self, Error> {
        if start == end {
            return Err(Error::Validation(format!("degenerate arc [{start}, {end}]")));
        }
        Ok(Arc { start, end })
    }

    pub fn length(&self) -> Rational {
        self.start.forward_to(self.end)
    }

    pub fn length_f64(&self) -> f64 {
        let l = self.length();
        *l.numer() as f64 / *l.denom() as f64
    }

    /// Membership in the closed arc.
    pub fn contains(&self, x: CircleCoord) -> bool {
        self.start.forward_to(x) <= self.length()
    }

    /// Membership in the open arc.
    pub fn contains_open(&self, x: CircleCoord) -> bool {
        let d = self.start.forward_to(x);
        d > Rational::zero() && d < self.length()
    }

    /// `self` lies inside the open arc `other`.
    pub fn inside_open(&self, other: &Arc) -> bool {
        let d = other.start.forward_to(self.start);
        d > Rational::zero() && d + self.length() < other.length()
    }

    pub fn midpoint(&self) -> CircleCoord {
        self.start.shifted(self.length() / Rational::from_integer(2))
    }

    /// Intersection of two closed arcs as at most two pieces.
    pub fn intersect(&self, other: &Arc) -> Vec<ArcPiece> {
        let s = self.start.value();
        let e = s + self.length();
        let mut out = Vec::new();
        for k in [-1i128, 0, 1] {
            let os = other.start.value() + Rational::from_integer(k);
            let oe = os + other.length();
            let lo = if os > s { os } else { s };
            let hi = if oe < e { oe } else { e };
            if lo < hi {
                out.push(ArcPiece::Arc(Arc {
                    start: CircleCoord::new(lo),
                    end: CircleCoord::new(hi),
                }));
            } else if lo == hi {
                out.push(ArcPiece::Point(CircleCoord::new(lo)));
            }
        }
        // A full overlap of complementary arcs can produce the same point twice.
        let mut dedup: Vec<ArcPiece> = Vec::new();
        for p in out {
            if !dedup.contains(&p) {
                dedup.push(p);
            }
        }
        dedup
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Smallest cyclic gap between distinct values; `None` for fewer than two values.
pub fn min_cyclic_gap(values: &[CircleCoord]) -> Option<Rational> {
    let mut v: Vec<CircleCoord> = values.to_vec();
    v.sort();
    v.dedup();
    if v.len() < 2 {
        return None;
    }
    let mut best = v[v.len() - 1].forward_to(v[0]);
    for w in v.windows(2) {
        let g = w[0].forward_to(w[1]);
        if g < best {
            best = g;
        }
    }
    Some(best)
}

/// A value strictly inside the largest cyclic gap of `values`.
pub fn largest_gap_midpoint(values: &[CircleCoord]) -> CircleCoord {
    let mut v: Vec<CircleCoord> = values.to_vec();
    v.sort();
    v.dedup();
    if v.is_empty() {
        return CircleCoord::zero();
    }
    let half = Rational::new(1, 2);
    if v.len() == 1 {
        return v[0].shifted(half);
    }
    let mut best = (v[v.len() - 1], v[v.len() - 1].forward_to(v[0]));
    for w in v.windows(2) {
        let g = w[0].forward_to(w[1]);
        if g > best.1 {
            best = (w[0], g);
        }
    }
    best.0.shifted(best.1 * half)
}

/// Signum of a rational as `i64`.
pub fn sign_of(q: Rational) -> i64 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Least common multiple of the denominators, used when rescaling to integers.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values.into_iter().fold(1i128, |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i128, d: i128) -> CircleCoord {
        CircleCoord::from_ratio(n, d)
    }

    #[test]
    fn normalizes_into_unit_interval() {
        assert_eq!(c(5, 4), c(1, 4));
        assert_eq!(c(-1, 4), c(3, 4));
        assert_eq!(c(1, 1), CircleCoord::zero());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("3/6".parse::<CircleCoord>().unwrap(), c(1, 2));
        assert_eq!("0".parse::<CircleCoord>().unwrap().to_string(), "0/1");
        assert!("1/0".parse::<CircleCoord>().is_err());
        assert!("x".parse::<CircleCoord>().is_err());
    }

    #[test]
    fn wrapping_arc_membership() {
        let a = Arc::new(c(3, 4), c(1, 4)).unwrap();
        assert_eq!(a.length(), Rational::new(1, 2));
        assert!(a.contains(c(0, 1)));
        assert!(a.contains(c(1, 4)));
        assert!(!a.contains_open(c(1, 4)));
        assert!(!a.contains(c(1, 2)));
    }

    #[test]
    fn complementary_arcs_meet_in_two_points() {
        let a = Arc::new(c(0, 1), c(1, 2)).unwrap();
        let b = Arc::new(c(1, 2), c(0, 1)).unwrap();
        let mut pts = a.intersect(&b);
        pts.sort_by_key(|p| match p {
            ArcPiece::Point(x) => *x,
            ArcPiece::Arc(a) => a.start,
        });
        assert_eq!(pts, vec![ArcPiece::Point(c(0, 1)), ArcPiece::Point(c(1, 2))]);
    }

    #[test]
    fn overlapping_wrapped_arcs() {
        let a = Arc::new(c(7, 8), c(3, 8)).unwrap();
        let b = Arc::new(c(1, 8), c(5, 8)).unwrap();
        assert_eq!(a.intersect(&b), vec![ArcPiece::Arc(Arc::new(c(1, 8), c(3, 8)).unwrap())]);
        let d = Arc::new(c(1, 2), c(5, 8)).unwrap();
        assert!(a.intersect(&d).is_empty());
    }

    #[test]
    fn gaps() {
        let v = [c(0, 1), c(1, 4), c(7, 8)];
        assert_eq!(min_cyclic_gap(&v), Some(Rational::new(1, 8)));
        assert_eq!(largest_gap_midpoint(&v), c(9, 16));
        assert_eq!(min_cyclic_gap(&[c(1, 3)]), None);
    }
}
