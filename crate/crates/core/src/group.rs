//! The value group `G ∪ {∞}`.
//!
//! Values are tuples of exact rationals compared lexicographically; scalar
//! groups (`ℤ`, `ℚ`) are the rank-1 case. A [`GroupSpec`] records which
//! coordinates are integral, which is what decides divisibility.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Shorthand used across the crate.
pub type Q = BigRational;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub(crate) fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Writes a rational as `p/q`, always with an explicit denominator.
pub(crate) fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// An element of the value group, or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupValue {
    Finite(Vec<Q>),
    Infinity,
}

impl GroupValue {
    pub fn scalar(x: Q) -> Self {
        GroupValue::Finite(vec![x])
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(q(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::scalar(qr(n, d))
    }

    pub fn tuple<I: IntoIterator<Item = Q>>(coords: I) -> Self {
        let coords: Vec<Q> = coords.into_iter().collect();
        assert!(!coords.is_empty(), "group values have rank >= 1");
        GroupValue::Finite(coords)
    }

    /// Zero of the given rank.
    pub fn zero(rank: usize) -> Self {
        GroupValue::Finite(vec![Q::zero(); rank])
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GroupValue::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    /// Number of coordinates; `None` for `∞`, which fits every rank.
    pub fn rank(&self) -> Option<usize> {
        match self {
            GroupValue::Finite(c) => Some(c.len()),
            GroupValue::Infinity => None,
        }
    }

    pub fn coords(&self) -> Option<&[Q]> {
        match self {
            GroupValue::Finite(c) => Some(c),
            GroupValue::Infinity => None,
        }
    }

    /// The single coordinate of a finite rank-1 value.
    pub fn as_scalar(&self) -> Option<&Q> {
        match self {
            GroupValue::Finite(c) if c.len() == 1 => Some(&c[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GroupValue::Finite(c) if c.iter().all(Zero::is_zero))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            GroupValue::Infinity => true,
            GroupValue::Finite(c) => c
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_positive()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            GroupValue::Infinity => false,
            GroupValue::Finite(c) => c
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative()),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        match (self.rank(), other.rank()) {
            (Some(a), Some(b)) if a != b => Err(Error::RankMismatch { left: a, right: b }),
            _ => Ok(()),
        }
    }

    /// Lexicographic comparison with `∞` as the maximum.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.check_rank(other)?;
        Ok(match (self, other) {
            (GroupValue::Infinity, GroupValue::Infinity) => Ordering::Equal,
            (GroupValue::Infinity, _) => Ordering::Greater,
            (_, GroupValue::Infinity) => Ordering::Less,
            (GroupValue::Finite(a), GroupValue::Finite(b)) => a.cmp(b),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(match (self, other) {
            (GroupValue::Finite(a), GroupValue::Finite(b)) => {
                GroupValue::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => GroupValue::Infinity,
        })
    }

    /// `n·g`. `0·∞` has no meaning and is rejected.
    pub fn scale_int(&self, n: i64) -> Result<Self> {
        match self {
            GroupValue::Infinity if n == 0 => Err(Error::UndefinedForm("0 * inf".into())),
            GroupValue::Infinity if n < 0 => Err(Error::UndefinedForm("negative multiple of inf".into())),
            GroupValue::Infinity => Ok(GroupValue::Infinity),
            GroupValue::Finite(c) => {
                let n = q(n);
                Ok(GroupValue::Finite(c.iter().map(|x| x * &n).collect()))
            }
        }
    }

    /// Multiplies by a rational, staying in the divisible hull `ℚ ⊗ G`.
    pub(crate) fn scale_q(&self, r: &Q) -> Self {
        match self {
            GroupValue::Infinity => GroupValue::Infinity,
            GroupValue::Finite(c) => GroupValue::Finite(c.iter().map(|x| x * r).collect()),
        }
    }
}

impl PartialOrd for GroupValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total on values of equal rank. Panics on a rank mismatch, like the
/// arithmetic operators; use [`GroupValue::try_cmp`] to get an error instead.
impl Ord for GroupValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("group values of different rank")
    }
}

impl Add for &GroupValue {
    type Output = GroupValue;
    fn add(self, rhs: &GroupValue) -> GroupValue {
        self.try_add(rhs).expect("group values of different rank")
    }
}

impl Add for GroupValue {
    type Output = GroupValue;
    fn add(self, rhs: GroupValue) -> GroupValue {
        &self + &rhs
    }
}

impl Neg for &GroupValue {
    type Output = GroupValue;
    fn neg(self) -> GroupValue {
        match self {
            GroupValue::Finite(c) => GroupValue::Finite(c.iter().map(|x| -x).collect()),
            GroupValue::Infinity => panic!("negation of inf"),
        }
    }
}

impl Neg for GroupValue {
    type Output = GroupValue;
    fn neg(self) -> GroupValue {
        -&self
    }
}

/// Finite minus finite. Subtracting from `∞` leaves `∞`.
impl Sub for &GroupValue {
    type Output = GroupValue;
    fn sub(self, rhs: &GroupValue) -> GroupValue {
        self + &(-rhs)
    }
}

impl Sub for GroupValue {
    type Output = GroupValue;
    fn sub(self, rhs: GroupValue) -> GroupValue {
        &self - &rhs
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupValue::Infinity => f.write_str("inf"),
            GroupValue::Finite(c) if c.len() == 1 => f.write_str(&fmt_q(&c[0])),
            GroupValue::Finite(c) => {
                let parts: Vec<String> = c.iter().map(fmt_q).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

pub(crate) fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

impl FromStr for GroupValue {
    type Err = Error;

    /// Accepts `inf`, `p`, `p/q` and `(p1/q1,...,pn/qn)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "+inf" || t == "∞" {
            return Ok(GroupValue::Infinity);
        }
        let bad = |expected: &str| Error::Syntax {
            offset: 0,
            expected: vec![expected.to_string()],
            found: s.to_string(),
        };
        if let Some(inner) = t.strip_prefix('(') {
            let inner = inner.strip_suffix(')').ok_or_else(|| bad("')'"))?;
            let coords = inner
                .split(',')
                .map(parse_q)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("rational coordinate"))?;
            if coords.is_empty() {
                return Err(bad("rational coordinate"));
            }
            return Ok(GroupValue::Finite(coords));
        }
        parse_q(t).map(GroupValue::scalar).ok_or_else(|| bad("rational or 'inf'"))
    }
}

/// Per-coordinate kind of a lexicographic product group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoordKind {
    Integer,
    Rational,
}

/// A lexicographically ordered product `ℤ^a × ℚ^b` (in any coordinate mix).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kinds: Vec<CoordKind>,
}

impl GroupSpec {
    pub fn new(kinds: Vec<CoordKind>) -> Self {
        assert!(!kinds.is_empty(), "group rank must be positive");
        GroupSpec { kinds }
    }

    pub fn integers() -> Self {
        Self::new(vec![CoordKind::Integer])
    }

    pub fn rationals() -> Self {
        Self::new(vec![CoordKind::Rational])
    }

    /// `ℤⁿ` with the lexicographic order.
    pub fn lex_integers(n: usize) -> Self {
        Self::new(vec![CoordKind::Integer; n])
    }

    pub fn lex_rationals(n: usize) -> Self {
        Self::new(vec![CoordKind::Rational; n])
    }

    pub fn rank(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[CoordKind] {
        &self.kinds
    }

    pub fn divisible(&self) -> bool {
        self.kinds.iter().all(|k| *k == CoordKind::Rational)
    }

    /// Whether `g` is an element of this group (or `∞`).
    pub fn contains(&self, g: &GroupValue) -> bool {
        match g {
            GroupValue::Infinity => true,
            GroupValue::Finite(c) => {
                c.len() == self.rank()
                    && c.iter().zip(&self.kinds).all(|(x, k)| match k {
                        CoordKind::Integer => x.is_integer(),
                        CoordKind::Rational => true,
                    })
            }
        }
    }

    fn check(&self, g: &GroupValue) -> Result<()> {
        match g.rank() {
            Some(r) if r != self.rank() => Err(Error::RankMismatch { left: r, right: self.rank() }),
            _ if !self.contains(g) => Err(Error::GroupMismatch(format!("{g} is not in the value group"))),
            _ => Ok(()),
        }
    }

    /// The `h` with `n·h = g`, when the group has one.
    ///
    /// Failure on an integer coordinate is the concrete witness that the
    /// group is not divisible.
    pub fn divide_exact(&self, g: &GroupValue, n: i64) -> Result<GroupValue> {
        if n < 1 {
            return Err(Error::Precondition(format!("divisor must be positive, got {n}")));
        }
        self.check(g)?;
        let coords = g
            .coords()
            .ok_or_else(|| Error::UndefinedForm("inf / n".into()))?;
        let n_q = q(n);
        let mut out = Vec::with_capacity(coords.len());
        for (x, kind) in coords.iter().zip(&self.kinds) {
            let h = x / &n_q;
            if *kind == CoordKind::Integer && !h.is_integer() {
                return Err(Error::Divisibility { value: g.to_string(), n });
            }
            out.push(h);
        }
        Ok(GroupValue::Finite(out))
    }

    /// Some element of the group in the closed interval `[lo, hi]`, preferring `lo`.
    pub(crate) fn pick_in(&self, lo: &GroupValue, hi: &GroupValue) -> Option<GroupValue> {
        if lo > hi {
            return None;
        }
        if self.contains(lo) {
            return Some(lo.clone());
        }
        // Only the first coordinate can be rounded without leaving [lo, hi]
        // in general; this covers every rank-1 group.
        if let GroupValue::Finite(c) = lo {
            if self.rank() == 1 {
                let up = GroupValue::scalar(c[0].ceil());
                if &up <= hi {
                    return Some(up);
                }
            }
        }
        if self.contains(hi) && hi.is_finite() {
            return Some(hi.clone());
        }
        None
    }
}

/// `lcm` of the denominators of a set of rationals.
pub(crate) fn denom_lcm<'a, I: IntoIterator<Item = &'a Q>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v2(a: i64, b: i64) -> GroupValue {
        GroupValue::tuple([q(a), q(b)])
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(v2(1, 0).try_cmp(&v2(0, 5)).unwrap(), Ordering::Greater);
        assert_eq!(GroupValue::Infinity.try_cmp(&GroupValue::int(1_000_000_000)).unwrap(), Ordering::Greater);
        assert_eq!(v2(2, 3).try_cmp(&v2(2, 3)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn rank_mismatch_is_structural() {
        let e = GroupValue::int(1).try_cmp(&v2(1, 2)).unwrap_err();
        assert!(matches!(e, Error::RankMismatch { .. }));
        assert!(GroupValue::int(1).try_add(&v2(0, 0)).is_err());
    }

    #[test]
    fn addition_and_scaling() {
        assert_eq!(GroupValue::ratio(1, 2) + GroupValue::ratio(1, 3), GroupValue::ratio(5, 6));
        assert_eq!(v2(1, -2).scale_int(3).unwrap(), v2(3, -6));
        assert_eq!(GroupValue::Infinity + GroupValue::int(7), GroupValue::Infinity);
        assert_eq!(GroupValue::ratio(7, 3).scale_int(0).unwrap(), GroupValue::int(0));
        assert!(matches!(GroupValue::Infinity.scale_int(0), Err(Error::UndefinedForm(_))));
    }

    #[test]
    fn exact_division() {
        assert_eq!(GroupSpec::rationals().divide_exact(&GroupValue::int(1), 2).unwrap(), GroupValue::ratio(1, 2));
        assert!(matches!(
            GroupSpec::integers().divide_exact(&GroupValue::int(1), 2),
            Err(Error::Divisibility { .. })
        ));
        assert_eq!(GroupSpec::lex_integers(2).divide_exact(&v2(4, -6), 2).unwrap(), v2(2, -3));
        assert!(GroupSpec::lex_integers(2).divide_exact(&v2(4, -5), 2).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(GroupValue::ratio(1, 2).to_string(), "1/2");
        assert_eq!(GroupValue::int(0).to_string(), "0/1");
        assert_eq!(GroupValue::Infinity.to_string(), "inf");
        assert_eq!(v2(1, -2).to_string(), "(1/1,-2/1)");
        assert_eq!("(1/1,-2/1)".parse::<GroupValue>().unwrap(), v2(1, -2));
        assert_eq!("-3/6".parse::<GroupValue>().unwrap(), GroupValue::ratio(-1, 2));
        assert!("1/0".parse::<GroupValue>().is_err());
    }

    #[test]
    fn divisible_predicate() {
        assert!(GroupSpec::rationals().divisible());
        assert!(!GroupSpec::integers().divisible());
        assert!(!GroupSpec::new(vec![CoordKind::Rational, CoordKind::Integer]).divisible());
    }

    fn arb_value(rank: usize) -> impl Strategy<Value = GroupValue> {
        prop::collection::vec((-20i64..20, 1i64..6), rank)
            .prop_map(|v| GroupValue::tuple(v.into_iter().map(|(n, d)| qr(n, d))))
    }

    proptest! {
        #[test]
        fn addition_is_strictly_monotone(a in arb_value(3), b in arb_value(3), h in arb_value(3)) {
            if a < b {
                prop_assert!(&a + &h < &b + &h);
            }
            prop_assert!(a < GroupValue::Infinity);
        }

        #[test]
        fn division_round_trips(g in arb_value(2), n in 1i64..7) {
            let spec = GroupSpec::lex_rationals(2);
            let h = spec.divide_exact(&g, n).unwrap();
            prop_assert_eq!(h.scale_int(n).unwrap(), g.clone());
            if let Ok(h) = GroupSpec::lex_integers(2).divide_exact(&g, n) {
                prop_assert_eq!(h.scale_int(n).unwrap(), g);
            }
        }

        #[test]
        fn text_round_trip(g in arb_value(2)) {
            prop_assert_eq!(g.to_string().parse::<GroupValue>().unwrap(), g);
        }
    }
}
