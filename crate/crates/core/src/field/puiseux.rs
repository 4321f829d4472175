//! Truncated Puiseux series `Σ cₑ tᵉ + O(tᵖ)` over `ℚ`.
//!
//! Exponents are rationals; an element is known modulo terms of valuation at
//! least its precision. `precision == None` means the element is exact.
//! Laurent series are the sub-case with integral exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{denom_lcm, q, Q};

/// Grid steps of relative precision used when an exact element has to be
/// expanded into an infinite series (inverses of multi-term elements).
pub const DEFAULT_GRID_STEPS: i64 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PuiseuxSeries {
    // Sorted by exponent, no zero coefficients, every exponent < precision.
    terms: Vec<(Q, Q)>,
    precision: Option<Q>,
}

fn min_opt(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if a <= b { a } else { b }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn add_opt(a: &Option<Q>, b: &Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    }
}

impl PuiseuxSeries {
    pub fn zero() -> Self {
        PuiseuxSeries { terms: Vec::new(), precision: None }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Q::zero())
    }

    /// `c·tᵉ`, exact.
    pub fn monomial(c: Q, e: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PuiseuxSeries { terms: vec![(e, c)], precision: None }
    }

    /// `O(tᵖ)`: an unknown element of valuation at least `p`.
    pub fn big_o(p: Q) -> Self {
        PuiseuxSeries { terms: Vec::new(), precision: Some(p) }
    }

    /// Builds from `(exponent, coefficient)` pairs in any order; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (Q, Q)>>(terms: I, precision: Option<Q>) -> Self {
        let mut map: BTreeMap<Q, Q> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Q::zero) += c;
        }
        Self::from_map(map, precision)
    }

    fn from_map(map: BTreeMap<Q, Q>, precision: Option<Q>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && precision.as_ref().is_none_or(|p| e < p))
            .collect();
        PuiseuxSeries { terms, precision }
    }

    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<&Q> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// The literal zero (exact, no terms).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// No known terms; zero up to the precision.
    pub fn is_undetermined(&self) -> bool {
        self.terms.is_empty() && self.precision.is_some()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn leading(&self) -> Option<&(Q, Q)> {
        self.terms.first()
    }

    /// Valuation, `None` for the exact zero.
    pub fn valuation(&self) -> Result<Option<Q>> {
        match (self.terms.first(), &self.precision) {
            (Some((e, _)), _) => Ok(Some(e.clone())),
            (None, None) => Ok(None),
            (None, Some(p)) => Err(Error::Precision(format!(
                "valuation of O(t^{}) is not determined",
                fmt_exp(p)
            ))),
        }
    }

    /// Certified lower bound for the valuation: the leading exponent, else
    /// the precision, else `None` (= ∞).
    pub fn valuation_lower_bound(&self) -> Option<Q> {
        self.terms.first().map(|(e, _)| e.clone()).or_else(|| self.precision.clone())
    }

    pub fn coefficient(&self, e: &Q) -> Q {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    /// Common denominator of all exponents (and of the precision).
    pub fn ramification(&self) -> BigInt {
        denom_lcm(self.terms.iter().map(|(e, _)| e).chain(self.precision.iter()))
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_integer())
            && self.precision.as_ref().is_none_or(|p| p.is_integer())
    }

    /// Forgets every term of valuation `≥ p` (no-op when already coarser).
    /// The literal zero stays exact.
    pub fn truncate(&self, p: &Q) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let prec = min_opt(self.precision.clone(), Some(p.clone()));
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| prec.as_ref().is_none_or(|p| e < p))
            .cloned()
            .collect();
        PuiseuxSeries { terms, precision: prec }
    }

    /// Drops the `O(·)` tag, keeping the known terms as an exact element.
    pub fn exact_part(&self) -> Self {
        PuiseuxSeries { terms: self.terms.clone(), precision: None }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return match &self.precision {
                None => Self::zero(),
                Some(_) if self.terms.is_empty() => self.clone(),
                // c·(x + O(p)) with c = 0 is exactly 0.
                Some(_) => Self::zero(),
            };
        }
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiplication by `tᵉ`.
    pub fn shift(&self, e: &Q) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            precision: self.precision.as_ref().map(|p| p + e),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let prec = min_opt(self.precision.clone(), rhs.precision.clone());
        let mut map = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(&rhs.terms) {
            *map.entry(e.clone()).or_insert_with(Q::zero) += c;
        }
        Self::from_map(map, prec)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let vx = self.terms.first().map(|(e, _)| e.clone());
        let vy = rhs.terms.first().map(|(e, _)| e.clone());
        let prec = min_opt(
            min_opt(add_opt(&self.precision, &vy), add_opt(&rhs.precision, &vx)),
            add_opt(&self.precision, &rhs.precision),
        );
        let mut map: BTreeMap<Q, Q> = BTreeMap::new();
        for (ex, cx) in &self.terms {
            for (ey, cy) in &rhs.terms {
                let e = ex + ey;
                if prec.as_ref().is_some_and(|p| &e >= p) {
                    continue;
                }
                *map.entry(e).or_insert_with(Q::zero) += cx * cy;
            }
        }
        Self::from_map(map, prec)
    }

    /// Multiplicative inverse.
    ///
    /// Exact monomials invert exactly. Otherwise the result is a geometric
    /// expansion carrying absolute precision `target`, capped by what the
    /// input's own precision supports. With `target = None` an exact input is
    /// expanded to [`DEFAULT_GRID_STEPS`] grid steps past its valuation.
    pub fn inv(&self, target: Option<&Q>) -> Result<Self> {
        let (e0, c0) = match (self.terms.first(), &self.precision) {
            (Some(t), _) => t.clone(),
            (None, None) => return Err(Error::DivisionByZero),
            (None, Some(_)) => {
                return Err(Error::Precision("cannot invert an element of undetermined valuation".into()))
            }
        };
        if self.terms.len() == 1 && self.precision.is_none() {
            return Ok(Self::monomial(c0.recip(), -e0));
        }
        // x = c0 tᵉ⁰ (1 + u), v(u) > 0, u known modulo t^rel.
        let default_rel = Q::from_integer(BigInt::from(DEFAULT_GRID_STEPS)) / Q::from_integer(self.ramification());
        let mut rel = match &self.precision {
            Some(p) => p - &e0,
            None => default_rel,
        };
        if let Some(t) = target {
            let wanted = t + &e0;
            if wanted < rel || self.precision.is_none() {
                rel = wanted;
            }
        }
        let inv_c0 = c0.recip();
        let u = PuiseuxSeries {
            terms: self.terms[1..].iter().map(|(e, c)| (e - &e0, c * &inv_c0)).collect(),
            precision: self.precision.as_ref().map(|p| p - &e0),
        };
        let mut sum = Self::one().truncate(&rel);
        let mut power = Self::one();
        if rel.is_positive() {
            loop {
                power = -(&power * &u).truncate(&rel);
                if power.terms.is_empty() {
                    break;
                }
                sum = &sum + &power;
            }
        }
        Ok(sum.scale(&inv_c0).shift(&-e0))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_ref(rhs)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_ref(&-rhs)
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.mul_ref(rhs)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            precision: self.precision.clone(),
        }
    }
}

impl Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        -&self
    }
}

pub(crate) fn fmt_exp(e: &Q) -> String {
    if e.is_integer() && !e.is_negative() {
        e.numer().to_string()
    } else if e.is_integer() {
        format!("({})", e.numer())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

pub(crate) fn fmt_coeff(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(c: &Q, e: &Q) -> String {
    // c is positive here; signs are handled by the caller.
    if e.is_zero() {
        return fmt_coeff(c);
    }
    let var = if e == &q(1) { "t".to_string() } else { format!("t^{}", fmt_exp(e)) };
    if c.is_one() {
        var
    } else {
        format!("{}*{}", fmt_coeff(c), var)
    }
}

/// `2*t^(1/4) - t + O(t^3)`; the exact zero prints as `0`.
impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let body = fmt_monomial(&c.abs(), e);
            match (i, c.is_negative()) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        if let Some(p) = &self.precision {
            if out.is_empty() {
                out.push('0');
            }
            out.push_str(&format!(" + O(t^{})", fmt_exp(p)));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::qr;

    fn t(n: i64, d: i64) -> PuiseuxSeries {
        PuiseuxSeries::monomial(q(1), qr(n, d))
    }

    #[test]
    fn exponent_addition() {
        assert_eq!(&t(1, 2) * &t(1, 2), t(1, 1));
    }

    #[test]
    fn geometric_inverse() {
        let x = &PuiseuxSeries::one() - &t(1, 1);
        let inv = x.inv(Some(&q(4))).unwrap();
        let expected = PuiseuxSeries::from_terms((0..4).map(|k| (q(k), q(1))), Some(q(4)));
        assert_eq!(inv, expected);
        // (1 - t)(1 + t + t² + t³ + O(t⁴)) = 1 + O(t⁴)
        assert_eq!(&x * &inv, PuiseuxSeries::one().truncate(&q(4)));
    }

    #[test]
    fn precision_of_sum_is_min() {
        let a = &t(1, 1) + &PuiseuxSeries::big_o(q(3));
        let b = &-t(1, 1) + &PuiseuxSeries::big_o(q(2));
        let s = &a + &b;
        assert!(s.is_undetermined());
        assert_eq!(s.precision(), Some(&q(2)));
        assert!(matches!(s.valuation(), Err(Error::Precision(_))));
    }

    #[test]
    fn product_precision() {
        // (t + O(t³)) · (1 + t + O(t²)) = t + t² + O(t³)
        let a = &t(1, 1) + &PuiseuxSeries::big_o(q(3));
        let b = &(&PuiseuxSeries::one() + &t(1, 1)) + &PuiseuxSeries::big_o(q(2));
        let p = &a * &b;
        assert_eq!(p.precision(), Some(&q(3)));
        assert_eq!(p.terms().len(), 2);
    }

    #[test]
    fn inverse_of_inexact_element() {
        // 1/(t + t² + O(t³)) = t⁻¹ - 1 + O(t)
        let x = PuiseuxSeries::from_terms([(q(1), q(1)), (q(2), q(1))], Some(q(3)));
        let y = x.inv(None).unwrap();
        assert_eq!(y.precision(), Some(&q(1)));
        assert_eq!(y.terms(), &[(q(-1), q(1)), (q(0), q(-1))]);
    }

    #[test]
    fn display() {
        let x = PuiseuxSeries::from_terms([(qr(1, 2), q(1)), (q(1), q(3)), (q(-1), qr(-1, 2))], Some(q(5)));
        assert_eq!(x.to_string(), "-1/2*t^(-1) + t^(1/2) + 3*t + O(t^5)");
        assert_eq!(PuiseuxSeries::big_o(q(5)).to_string(), "0 + O(t^5)");
        assert_eq!(PuiseuxSeries::zero().to_string(), "0");
    }
}
