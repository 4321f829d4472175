//! Concrete valued fields.
//!
//! * `padic(p)`: `ℚ` with the `p`-adic valuation, group `ℤ`, residue field `𝔽_p`.
//! * `laurent`: truncated Laurent series over `ℚ`, group `ℤ`, residue field `ℚ`.
//! * `puiseux`: truncated Puiseux series over `ℚ`, group `ℚ`, residue field `ℚ`.
//!
//! Only the Puiseux model has both a divisible group and an infinite residue
//! field. The other two exist to exhibit what breaks without them.

pub mod puiseux;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{q, GroupSpec, GroupValue, Q};
use crate::poly::Poly;

pub use puiseux::{PuiseuxSeries, DEFAULT_GRID_STEPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Padic { p: u64 },
    Laurent,
    Puiseux,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FieldSpec {
    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Padic { p })
    }

    pub fn group(&self) -> GroupSpec {
        match self {
            FieldSpec::Puiseux => GroupSpec::rationals(),
            _ => GroupSpec::integers(),
        }
    }

    /// Size of the residue field, `None` when infinite.
    pub fn residue_field_size(&self) -> Option<u64> {
        match self {
            FieldSpec::Padic { p } => Some(*p),
            _ => None,
        }
    }

    /// Divisible value group and infinite residue field.
    pub fn satisfies_hypotheses(&self) -> bool {
        self.group().divisible() && self.residue_field_size().is_none()
    }

    pub fn is_series(&self) -> bool {
        !matches!(self, FieldSpec::Padic { .. })
    }

    /// Checks that `x` is a legal element of this model.
    pub fn check(&self, x: &FieldElement) -> Result<()> {
        match (self, x) {
            (_, FieldElement::Rational(_)) => Ok(()),
            (FieldSpec::Padic { .. }, FieldElement::Series(_)) => {
                Err(Error::FieldMismatch("series element in a p-adic field".into()))
            }
            (FieldSpec::Laurent, FieldElement::Series(s)) if !s.has_integral_exponents() => {
                Err(Error::GroupMismatch(format!("{s} has non-integral exponents")))
            }
            _ => Ok(()),
        }
    }

    pub fn valuation(&self, x: &FieldElement) -> Result<GroupValue> {
        match x {
            FieldElement::Rational(r) => Ok(match self {
                FieldSpec::Padic { p } => padic_valuation(r, *p),
                _ if r.is_zero() => GroupValue::Infinity,
                _ => GroupValue::int(0),
            }),
            FieldElement::Series(s) => {
                if let FieldSpec::Padic { .. } = self {
                    return Err(Error::FieldMismatch("series element in a p-adic field".into()));
                }
                Ok(s.valuation()?.map_or(GroupValue::Infinity, GroupValue::scalar))
            }
        }
    }

    /// Certified lower bound for the valuation (`∞` for the exact zero).
    pub fn valuation_lower_bound(&self, x: &FieldElement) -> GroupValue {
        match x {
            FieldElement::Series(s) => s.valuation_lower_bound().map_or(GroupValue::Infinity, GroupValue::scalar),
            r => self.valuation(r).unwrap_or(GroupValue::Infinity),
        }
    }

    /// Image of `x` in the residue field `A/M`.
    pub fn residue(&self, x: &FieldElement) -> Result<ResidueElement> {
        match (self, x) {
            (FieldSpec::Padic { p }, FieldElement::Rational(r)) => {
                let v = padic_valuation(r, *p);
                if v.is_negative() {
                    return Err(Error::NegativeValuation(v.to_string()));
                }
                let pb = BigInt::from(*p);
                let num = r.numer().mod_floor(&pb);
                let den = r.denom().mod_floor(&pb);
                let inv = mod_inverse(&den, &pb).expect("denominator is a unit when v >= 0");
                let value = (num * inv).mod_floor(&pb).to_u64().expect("residue below p");
                Ok(ResidueElement::ModP { value, p: *p })
            }
            (FieldSpec::Padic { .. }, FieldElement::Series(_)) => {
                Err(Error::FieldMismatch("series element in a p-adic field".into()))
            }
            (_, FieldElement::Rational(r)) => Ok(ResidueElement::Rational(r.clone())),
            (_, FieldElement::Series(s)) => {
                if let Some((e, _)) = s.leading() {
                    if e.is_negative() {
                        return Err(Error::NegativeValuation(e.to_string()));
                    }
                }
                if let Some(p) = s.precision() {
                    if !p.is_positive() {
                        return Err(Error::Precision(format!("residue needs precision > 0, have {p}")));
                    }
                }
                Ok(ResidueElement::Rational(s.coefficient(&Q::zero())))
            }
        }
    }

    /// `k` elements of `A` with pairwise distinct residues.
    pub fn residue_representatives(&self, k: usize) -> Result<Vec<FieldElement>> {
        match self {
            FieldSpec::Padic { p } => {
                let available = *p as usize;
                if k > available {
                    return Err(Error::ExhaustedResidues { needed: k, available });
                }
                Ok((0..k as i64).map(FieldElement::from_int).collect())
            }
            _ => Ok((0..k as i64)
                .map(|i| {
                    // 0, 1, -1, 2, -2, ...
                    let m = (i + 1) / 2;
                    FieldElement::from_int(if i % 2 == 1 { m } else { -m })
                })
                .collect()),
        }
    }

    /// Units with pairwise distinct nonzero residues, in scan order:
    /// `1, 2, 3, …` for the series models, `1, …, p−1` for `padic(p)`.
    pub(crate) fn unit_residues(&self) -> Box<dyn Iterator<Item = Q>> {
        match self {
            FieldSpec::Padic { p } => Box::new((1..*p as i64).map(q)),
            _ => Box::new((1..).map(q)),
        }
    }

    /// Units in scan order without the distinct-residue restriction; after
    /// the residues of [`Self::unit_residues`] a finite field repeats classes
    /// with `u + j·p`.
    pub(crate) fn unit_candidates(&self) -> Box<dyn Iterator<Item = Q>> {
        match self {
            FieldSpec::Padic { p } => {
                let p = *p as i64;
                Box::new((0..).flat_map(move |j| (1..p).map(move |u| q(u + j * p))))
            }
            _ => Box::new((1..).map(q)),
        }
    }

    /// The canonical element `p^γ` or `t^γ`.
    pub fn element_with_valuation(&self, gamma: &GroupValue) -> Result<FieldElement> {
        let g = gamma
            .as_scalar()
            .ok_or_else(|| Error::GroupMismatch(format!("{gamma} is not a finite scalar value")))?;
        if !self.group().contains(gamma) {
            return Err(Error::GroupMismatch(format!("{gamma} is not in the value group of {self}")));
        }
        Ok(match self {
            FieldSpec::Padic { p } => {
                let e = g.to_integer().to_i32().ok_or_else(|| Error::Precondition("exponent too large".into()))?;
                FieldElement::Rational(Q::from_integer(BigInt::from(*p)).pow(e))
            }
            _ => FieldElement::Series(PuiseuxSeries::monomial(Q::one(), g.clone())),
        })
    }

    /// `u·p^γ` or `u·t^γ`.
    pub(crate) fn unit_times(&self, u: &Q, gamma: &GroupValue) -> Result<FieldElement> {
        Ok(self.element_with_valuation(gamma)?.scale(u))
    }

    /// Checked field operation; both operands must belong to this model.
    pub fn arith(&self, op: ArithOp, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(match op {
            ArithOp::Add => x + y,
            ArithOp::Mul => x * y,
            ArithOp::Neg => -x,
            ArithOp::Inv => x.inv(None)?,
        })
    }

    pub fn evaluate_poly(&self, f: &Poly, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        for c in f.coeffs() {
            self.check(c)?;
        }
        Ok(f.eval(x))
    }

    pub fn parse_element(&self, src: &str) -> Result<FieldElement> {
        let x = crate::parse::parse_element(src)?;
        self.check(&x)?;
        Ok(x)
    }

    pub fn parse_poly(&self, src: &str) -> Result<Poly> {
        let f = crate::parse::parse_poly(src)?;
        for c in f.coeffs() {
            self.check(c)?;
        }
        Ok(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Neg,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Padic { p } => write!(f, "padic:{p}"),
            FieldSpec::Laurent => f.write_str("laurent"),
            FieldSpec::Puiseux => f.write_str("puiseux"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// `puiseux`, `laurent`, `padic:<p>` (also `padic<p>`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "puiseux" => Ok(FieldSpec::Puiseux),
            "laurent" => Ok(FieldSpec::Laurent),
            _ => {
                let p = s
                    .strip_prefix("padic")
                    .map(|r| r.trim_start_matches([':', '=']))
                    .and_then(|r| r.parse::<u64>().ok())
                    .ok_or_else(|| Error::Syntax {
                        offset: 0,
                        expected: vec!["puiseux".into(), "laurent".into(), "padic:<prime>".into()],
                        found: s.to_string(),
                    })?;
                FieldSpec::padic(p)
            }
        }
    }
}

fn padic_valuation(r: &Q, p: u64) -> GroupValue {
    if r.is_zero() {
        return GroupValue::Infinity;
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0i64;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        k
    };
    GroupValue::int(count(r.numer()) - count(r.denom()))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Element of the residue field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ResidueElement {
    ModP { value: u64, p: u64 },
    Rational(Q),
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueElement::ModP { value, p } => write!(f, "{value} mod {p}"),
            ResidueElement::Rational(r) => f.write_str(&puiseux::fmt_coeff(r)),
        }
    }
}

/// An element of one of the models. Rationals are exact; in the series
/// models they are the constants.
#[derive(Clone, Debug)]
pub enum FieldElement {
    Rational(Q),
    Series(PuiseuxSeries),
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement::Rational(Q::zero())
    }

    pub fn one() -> Self {
        FieldElement::Rational(Q::one())
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::Rational(q(n))
    }

    pub fn rational(r: Q) -> Self {
        FieldElement::Rational(r)
    }

    pub fn series(s: PuiseuxSeries) -> Self {
        FieldElement::Series(s)
    }

    /// `c·tᵉ`.
    pub fn monomial(c: Q, e: Q) -> Self {
        FieldElement::Series(PuiseuxSeries::monomial(c, e))
    }

    /// The literal (exact) zero.
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Series(s) => s.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            FieldElement::Rational(_) => true,
            FieldElement::Series(s) => s.is_exact(),
        }
    }

    pub fn precision(&self) -> Option<&Q> {
        match self {
            FieldElement::Rational(_) => None,
            FieldElement::Series(s) => s.precision(),
        }
    }

    pub fn to_series(&self) -> PuiseuxSeries {
        match self {
            FieldElement::Rational(r) => PuiseuxSeries::constant(r.clone()),
            FieldElement::Series(s) => s.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(r * c),
            FieldElement::Series(s) => FieldElement::Series(s.scale(c)),
        }
    }

    pub fn truncate(&self, p: &Q) -> Self {
        match self {
            FieldElement::Rational(_) => self.clone(),
            FieldElement::Series(s) => FieldElement::Series(s.truncate(p)),
        }
    }

    pub fn exact_part(&self) -> Self {
        match self {
            FieldElement::Rational(_) => self.clone(),
            FieldElement::Series(s) => FieldElement::Series(s.exact_part()),
        }
    }

    /// See [`PuiseuxSeries::inv`] for the precision contract.
    pub fn inv(&self, target: Option<&Q>) -> Result<Self> {
        match self {
            FieldElement::Rational(r) if r.is_zero() => Err(Error::DivisionByZero),
            FieldElement::Rational(r) => Ok(FieldElement::Rational(r.recip())),
            FieldElement::Series(s) => Ok(FieldElement::Series(s.inv(target)?)),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.pow(n as i32)),
            FieldElement::Series(s) => FieldElement::Series(s.pow(n)),
        }
    }

    fn binary(
        &self,
        rhs: &Self,
        rat: impl Fn(&Q, &Q) -> Q,
        ser: impl Fn(&PuiseuxSeries, &PuiseuxSeries) -> PuiseuxSeries,
    ) -> Self {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(rat(a, b)),
            _ => FieldElement::Series(ser(&self.to_series(), &rhs.to_series())),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a == b,
            _ => self.to_series() == other.to_series(),
        }
    }
}

impl Eq for FieldElement {}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Series(s) => FieldElement::Series(-s),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl From<PuiseuxSeries> for FieldElement {
    fn from(s: PuiseuxSeries) -> Self {
        FieldElement::Series(s)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => f.write_str(&puiseux::fmt_coeff(r)),
            FieldElement::Series(s) => s.fmt(f),
        }
    }
}
