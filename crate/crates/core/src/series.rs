//! Restricted power series `Σ aₙXⁿ` with `v(aₙ) → ∞`, over the series models.
//!
//! A series is a finite head plus a certified tail rule. The only tail rule is
//! geometric, `aₙ = c·r^(n−start)` for `n ≥ start` with `v(r) > 0`; the family
//! is closed under `X ↦ aX` and scaling, which is all normalization needs.
//!
//! Zeros and values are studied through the Weierstrass factorization
//! `h·S(aX) = P(X)·B(X)` with `P` monic and `B ≡ 1 mod M`, computed to a
//! finite precision `π`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, PuiseuxSeries};
use crate::group::{GroupValue, Q};
use crate::ivt::{ivt_solve, IvtQuery, IvtSolution};
use crate::poly::Poly;
use crate::tropical::{PolygonSlopes, RootValuation, TropicalForm};

const MAX_TERMS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    None,
    /// `aₙ = coeff·ratioⁿ⁻ˢᵗᵃʳᵗ` for `n ≥ start`.
    Geometric { coeff: FieldElement, ratio: FieldElement, start: usize },
}

impl Tail {
    /// `aₙ = c·t^(ρ·(n−start))`.
    pub fn geometric(c: FieldElement, rho: Q, start: usize) -> Tail {
        Tail::Geometric { coeff: c, ratio: FieldElement::monomial(Q::one(), rho), start }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedSeries {
    head: Vec<FieldElement>,
    tail: Tail,
}

fn val(x: &FieldElement) -> Result<GroupValue> {
    FieldSpec::Puiseux.valuation(x)
}

fn scalar(g: &GroupValue, what: &str) -> Result<Q> {
    g.as_scalar()
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("{what} must be a finite rational value, got {g}")))
}

fn q_int(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

// Exact element with every term of exponent ≥ p dropped.
fn drop_from(x: &FieldElement, p: &Q) -> FieldElement {
    match x {
        FieldElement::Rational(_) if p.is_positive() => x.clone(),
        _ => x.truncate(p).exact_part(),
    }
}

/// `div_rem_monic` in `A/(t^p)`: every product is reduced as it is formed.
fn div_rem_mod(f: &Poly, divisor: &Poly, p: &Q) -> (Poly, Poly) {
    let n = divisor.coeffs().len() - 1;
    let mut rem: Vec<FieldElement> = f.coeffs().to_vec();
    if rem.len() <= n {
        return (Poly::zero(), f.clone());
    }
    let mut quot = vec![FieldElement::zero(); rem.len() - n];
    for k in (0..quot.len()).rev() {
        let lead = drop_from(&rem[k + n], p);
        if lead.is_zero() {
            continue;
        }
        for (j, d) in divisor.coeffs().iter().enumerate().take(n) {
            rem[k + j] = drop_from(&(&rem[k + j] - &(&lead * d)), p);
        }
        rem[k + n] = FieldElement::zero();
        quot[k] = lead;
    }
    rem.truncate(n);
    (Poly::new(quot), Poly::new(rem.iter().map(|c| drop_from(c, p)).collect()))
}

fn with_precision(x: &FieldElement, p: &Q) -> FieldElement {
    x + &FieldElement::Series(PuiseuxSeries::big_o(p.clone()))
}

fn series_model(spec: &FieldSpec) -> Result<()> {
    if spec.is_series() {
        Ok(())
    } else {
        Err(Error::FieldMismatch(format!("restricted series are implemented over the series models, not {spec}")))
    }
}

impl RestrictedSeries {
    pub fn new(head: Vec<FieldElement>, tail: Tail) -> Result<Self> {
        if let Tail::Geometric { coeff, ratio, start } = &tail {
            if head.len() > *start {
                return Err(Error::Precondition(format!(
                    "head has {} terms but the tail starts at index {start}",
                    head.len()
                )));
            }
            if !coeff.is_exact() || !ratio.is_exact() {
                return Err(Error::Precondition("tail data must be exact".into()));
            }
            let rho = val(ratio)?;
            if !rho.is_positive() {
                return Err(Error::Precondition(format!("tail ratio must have positive valuation, got {rho}")));
            }
        }
        let mut s = RestrictedSeries { head, tail };
        while s.head.last().is_some_and(FieldElement::is_zero) && s.is_polynomial() {
            s.head.pop();
        }
        if s.tail_is_zero() {
            s.tail = Tail::None;
        }
        Ok(s)
    }

    pub fn polynomial(f: &Poly) -> Self {
        RestrictedSeries { head: f.coeffs().to_vec(), tail: Tail::None }
    }

    pub fn head(&self) -> &[FieldElement] {
        &self.head
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.tail, Tail::None)
    }

    fn tail_is_zero(&self) -> bool {
        matches!(&self.tail, Tail::Geometric { coeff, .. } if coeff.is_zero())
    }

    pub fn to_poly(&self) -> Option<Poly> {
        self.is_polynomial().then(|| Poly::new(self.head.clone()))
    }

    /// `v(r)` of the tail ratio.
    pub fn tail_rate(&self) -> Option<Q> {
        match &self.tail {
            Tail::None => None,
            Tail::Geometric { ratio, .. } => val(ratio).ok().and_then(|g| g.as_scalar().cloned()),
        }
    }

    pub fn coefficient(&self, n: usize) -> FieldElement {
        if let Some(c) = self.head.get(n) {
            return c.clone();
        }
        match &self.tail {
            Tail::Geometric { coeff, ratio, start } if n >= *start => coeff * &ratio.pow((n - start) as u32),
            _ => FieldElement::zero(),
        }
    }

    /// Common denominator of all exponents in play.
    pub fn ramification(&self) -> BigInt {
        let mut d = BigInt::one();
        let mut add = |x: &FieldElement| {
            if let FieldElement::Series(s) = x {
                d = d.lcm(&s.ramification());
            }
        };
        self.head.iter().for_each(&mut add);
        if let Tail::Geometric { coeff, ratio, .. } = &self.tail {
            add(coeff);
            add(ratio);
        }
        d
    }

    /// The same series with the head materialized to at least `len` terms.
    pub fn expand_head(&self, len: usize) -> Self {
        match &self.tail {
            Tail::Geometric { coeff, ratio, start } if len > *start => {
                let mut head = self.head.clone();
                head.resize(*start, FieldElement::zero());
                let mut c = coeff.clone();
                for _ in *start..len {
                    head.push(c.clone());
                    c = &c * ratio;
                }
                RestrictedSeries { head, tail: Tail::Geometric { coeff: c, ratio: ratio.clone(), start: len } }
            }
            _ => self.clone(),
        }
    }

    /// `u·S(aX)`, coefficientwise `u·aⁿ·aₙ`.
    pub fn substitute(&self, a: &FieldElement, u: &FieldElement) -> Self {
        let mut pow = u.clone();
        let mut head = Vec::with_capacity(self.head.len());
        for c in &self.head {
            head.push(c * &pow);
            pow = &pow * a;
        }
        let tail = match &self.tail {
            Tail::None => Tail::None,
            Tail::Geometric { coeff, ratio, start } => {
                let scale = &a.pow(*start as u32) * u;
                Tail::Geometric { coeff: coeff * &scale, ratio: ratio * a, start: *start }
            }
        };
        RestrictedSeries { head, tail }
    }

    /// Partial sum `Σ_{n<len} aₙXⁿ`.
    pub fn partial_sum(&self, len: usize) -> Poly {
        Poly::new((0..len).map(|n| self.coefficient(n)).collect())
    }
}

/// Certified lower bound for `v(aₙ) + nα` over all `n ≥ N`.
pub fn tail_bound(s: &RestrictedSeries, alpha: &GroupValue, n: usize) -> Result<GroupValue> {
    if alpha.is_infinite() {
        return Ok(if n == 0 { val(&s.coefficient(0))? } else { GroupValue::Infinity });
    }
    let a = scalar(alpha, "valuation")?;
    let mut best = GroupValue::Infinity;
    for (i, c) in s.head.iter().enumerate().skip(n) {
        let lb = FieldSpec::Puiseux.valuation_lower_bound(c);
        if lb.is_finite() {
            best = best.min(&lb + &GroupValue::scalar(&a * q_int(i)));
        }
    }
    if let Tail::Geometric { coeff, ratio, start } = &s.tail {
        if !coeff.is_zero() {
            let rho = scalar(&val(ratio)?, "tail rate")?;
            if !(&rho + &a).is_positive() {
                return Err(Error::DivergesAt(alpha.to_string()));
            }
            let vc = scalar(&val(coeff)?, "tail coefficient valuation")?;
            let m = n.max(*start);
            let at_m = vc + rho * q_int(m - start) + &a * q_int(m);
            best = best.min(GroupValue::scalar(at_m));
        }
    }
    Ok(best)
}

/// Smallest `N` with `tail_bound(S, α, N) ≥ π`.
pub fn truncation_index(s: &RestrictedSeries, alpha: &GroupValue, pi: &GroupValue) -> Result<usize> {
    let mut lo = 0;
    let mut hi = s.head.len().max(match &s.tail {
        Tail::Geometric { start, .. } => *start,
        Tail::None => 0,
    });
    while &tail_bound(s, alpha, hi)? < pi {
        lo = hi;
        hi = (hi * 2).max(1);
        if hi > MAX_TERMS {
            return Err(Error::Precision(format!("more than {MAX_TERMS} terms needed for precision {pi}")));
        }
    }
    // tail_bound is monotone in N.
    while lo < hi {
        let mid = (lo + hi) / 2;
        if &tail_bound(s, alpha, mid)? >= pi {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// `S(x)` to absolute precision `π`; exact when `S` is a polynomial.
pub fn eval_series(s: &RestrictedSeries, x: &FieldElement, pi: &GroupValue) -> Result<FieldElement> {
    if let Some(f) = s.to_poly() {
        return Ok(f.eval(x));
    }
    let p = scalar(pi, "precision")?;
    let alpha = FieldSpec::Puiseux.valuation_lower_bound(x);
    let n = truncation_index(s, &alpha, pi)?;
    let mut sum = FieldElement::zero();
    let mut pow = FieldElement::one();
    for i in 0..n {
        let c = s.coefficient(i);
        if !c.is_zero() {
            sum = &sum + &(&c * &pow);
        }
        pow = &pow * x;
    }
    Ok(with_precision(&sum, &p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    /// `h_a`, the inverse of the leading monomial of the distinguished coefficient.
    pub h: FieldElement,
    /// `S_a = h_a·S(aX)`, head materialized through index `n`.
    pub series: RestrictedSeries,
    /// Distinguished index: the largest index of minimal valuation.
    pub n: usize,
}

/// `S_a = h_a·S(aX)`: all coefficients in `A`, the one at index `N` a unit
/// with residue `1`, all later ones in `M`.
pub fn normalize_at(s: &RestrictedSeries, a: &FieldElement) -> Result<Normalization> {
    if a.is_zero() {
        return Err(Error::Precondition("cannot normalize at 0".into()));
    }
    if !a.is_exact() {
        return Err(Error::Precondition(format!("normalization point {a} must be exact")));
    }
    let va = val(a)?;
    let sub = s.substitute(a, &FieldElement::one());
    let va_q = scalar(&va, "v(a)")?;
    if let Some(rho) = s.tail_rate() {
        if !(rho + &va_q).is_positive() && !s.tail_is_zero() {
            return Err(Error::DivergesAt(va.to_string()));
        }
    }
    let len = match &sub.tail {
        Tail::Geometric { start, .. } => start + 1,
        Tail::None => sub.head.len(),
    };
    let sub = sub.expand_head(len);
    // Past the head the tail valuations strictly increase, so the minimum is in the head.
    let mut best: Option<(usize, GroupValue)> = None;
    for (i, c) in sub.head.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = val(c).map_err(|_| Error::Precision(format!("valuation of coefficient {i} is not determined")))?;
        if best.as_ref().is_none_or(|(_, b)| &v <= b) {
            best = Some((i, v));
        }
    }
    let (n, _) = best.ok_or_else(|| Error::Precondition("S(aX) is the zero series".into()))?;
    let lead = sub.head[n].to_series();
    let (e, c) = lead.leading().cloned().expect("nonzero coefficient");
    let h = FieldElement::monomial(c.recip(), -e);
    let mut series = sub.substitute(&FieldElement::one(), &h);
    if let Tail::Geometric { coeff, .. } = &series.tail {
        if coeff.is_zero() {
            series.tail = Tail::None;
        }
    }
    Ok(Normalization { h, series, n })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassFactorization {
    pub p: Poly,
    pub b: RestrictedSeries,
    pub precision: GroupValue,
    pub n: usize,
}

fn distinguished_index(s: &RestrictedSeries) -> Result<usize> {
    let s = match &s.tail {
        Tail::Geometric { start, .. } => s.expand_head(start + 1),
        Tail::None => s.clone(),
    };
    let mut n = None;
    for (i, c) in s.head.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = val(c)?;
        if v.is_negative() {
            return Err(Error::NotNormalized(format!("coefficient {i} has negative valuation {v}")));
        }
        if v.is_zero() {
            n = Some(i);
        }
    }
    if let Tail::Geometric { coeff, .. } = &s.tail {
        if !coeff.is_zero() && !val(coeff)?.is_positive() {
            return Err(Error::NotNormalized("tail coefficients must lie in M".into()));
        }
    }
    let n = n.ok_or_else(|| Error::NotNormalized("no coefficient of valuation 0".into()))?;
    match FieldSpec::Puiseux.residue(&s.head[n])? {
        crate::field::ResidueElement::Rational(r) if r.is_one() => Ok(n),
        r => Err(Error::NotNormalized(format!("distinguished coefficient has residue {r}, not 1"))),
    }
}

/// `S = P·B` modulo terms of valuation `≥ π`, by successive approximation:
/// divide by the current `P`, add the remainder to `P`, repeat.
pub fn weierstrass_factor(s: &RestrictedSeries, pi: &GroupValue) -> Result<WeierstrassFactorization> {
    let p = scalar(pi, "precision")?;
    if !p.is_positive() {
        return Err(Error::Precondition(format!("precision must be positive, got {pi}")));
    }
    let n = distinguished_index(s)?;
    if n == 0 {
        return Ok(WeierstrassFactorization {
            p: Poly::constant(FieldElement::one()),
            b: s.clone(),
            precision: pi.clone(),
            n,
        });
    }
    let len = truncation_index(s, &GroupValue::int(0), pi)?.max(n + 1);
    let s_l = s.partial_sum(len).map_coeffs(|c| drop_from(c, &p));
    let mut lower: Vec<FieldElement> = (0..n).map(|i| s_l.coeff(i)).collect();
    lower.push(FieldElement::one());
    let mut big_p = Poly::new(lower);

    // Each step gains at least one grid step.
    let grid = Q::from_integer(s_l.coeffs().iter().fold(BigInt::one(), |d, c| d.lcm(&c.to_series().ramification())));
    let steps: usize = (&p * grid).ceil().to_integer().try_into().unwrap_or(usize::MAX).saturating_add(2);
    let mut quotient = Poly::constant(FieldElement::one());
    let mut converged = false;
    for _ in 0..=steps {
        let (q_, r) = div_rem_mod(&s_l, &big_p, &p);
        quotient = q_;
        if r.is_zero() {
            converged = true;
            break;
        }
        big_p = &big_p + &r;
    }
    if !converged {
        return Err(Error::Precision(format!("factorization did not settle within {steps} steps")));
    }
    let exact = s.is_polynomial() && s.head.iter().all(FieldElement::is_exact) && {
        let prod = &big_p * &quotient;
        prod == Poly::new(s.head.clone())
    };
    if !exact {
        let coeffs = big_p.coeffs();
        let mut tagged: Vec<FieldElement> = coeffs[..n].iter().map(|c| with_precision(c, &p)).collect();
        tagged.push(FieldElement::one());
        big_p = Poly::new(tagged);
        quotient = quotient.map_coeffs(|c| with_precision(c, &p));
    }
    Ok(WeierstrassFactorization { p: big_p, b: RestrictedSeries::polynomial(&quotient), precision: pi.clone(), n })
}

/// Normalizes at `a` and factors; the series-side counterpart of a polynomial.
pub fn factor_at(s: &RestrictedSeries, a: &FieldElement, pi: &GroupValue) -> Result<(Normalization, WeierstrassFactorization)> {
    let norm = normalize_at(s, a)?;
    let w = weierstrass_factor(&norm.series, pi)?;
    Ok((norm, w))
}

fn exact_poly(p: &Poly) -> Poly {
    p.map_coeffs(FieldElement::exact_part)
}

fn determined(x: &FieldElement) -> Result<GroupValue> {
    let v = val(x)?;
    if v.is_infinite() && !x.is_exact() {
        return Err(Error::Precision(format!("valuation of {x} is not determined")));
    }
    Ok(v)
}

/// `c` with `v(S(c)) = α` and `v(c)` between `v(a)` and `v(b)`, through the
/// factorization at the endpoint of smaller valuation.
pub fn ivt_series_solve(
    spec: &FieldSpec,
    s: &RestrictedSeries,
    a: &FieldElement,
    b: &FieldElement,
    alpha: &GroupValue,
    pi: &GroupValue,
) -> Result<IvtSolution> {
    series_model(spec)?;
    if let Some(f) = s.to_poly() {
        return ivt_solve(&IvtQuery { spec: *spec, f, a: a.clone(), b: b.clone(), alpha: alpha.clone() });
    }
    match solve_series_at(spec, s, a, b, alpha, pi) {
        Err(Error::VerificationFailed(_)) | Err(Error::Precision(_)) => {
            let doubled = pi.scale_int(2)?;
            solve_series_at(spec, s, a, b, alpha, &doubled)
        }
        r => r,
    }
}

fn solve_series_at(
    spec: &FieldSpec,
    s: &RestrictedSeries,
    a: &FieldElement,
    b: &FieldElement,
    alpha: &GroupValue,
    pi: &GroupValue,
) -> Result<IvtSolution> {
    let (va, vb) = (val(a)?, val(b)?);
    let (lo, hi) = if va <= vb { (a, b) } else { (b, a) };
    let alpha_q = scalar(alpha, "target")?;
    let mut p = scalar(pi, "precision")?;
    if p <= alpha_q {
        p = &alpha_q + Q::one();
    }
    let pi = GroupValue::scalar(p.clone());
    let s_lo = determined(&eval_series(s, lo, &pi)?)?;
    let s_hi = determined(&eval_series(s, hi, &pi)?)?;
    let (top, bottom) = if s_lo >= s_hi { (&s_lo, &s_hi) } else { (&s_hi, &s_lo) };
    if !(top > alpha && alpha > bottom) {
        return Err(Error::NoGap(format!("{alpha} is not strictly between v(S(a)) = {s_lo} and v(S(b)) = {s_hi}")));
    }
    let norm = normalize_at(s, lo)?;
    let vh = scalar(&val(&norm.h)?, "v(h)")?;
    let target = GroupValue::scalar(&alpha_q + &vh);
    let pw = if p > &alpha_q + &vh { p.clone() } else { &alpha_q + &vh + Q::one() };
    let w = weierstrass_factor(&norm.series, &GroupValue::scalar(pw.clone()))?;
    let p_exact = exact_poly(&w.p);
    let k = &pw + Q::one();
    let inv_lo = lo.inv(Some(&(&k - scalar(&vb.clone().min(va.clone()), "v(b)")? + Q::one())))?;
    let ratio = drop_from(&(hi * &inv_lo), &k);
    let inner = ivt_solve(&IvtQuery { spec: *spec, f: p_exact, a: FieldElement::one(), b: ratio, alpha: target })?;
    let c = lo * &inner.c;
    let check = GroupValue::scalar(&pw * Q::from_integer(2.into()) + Q::one());
    let achieved = determined(&eval_series(s, &c, &check)?)?;
    let vc = val(&c)?;
    let (vmin, vmax) = if va <= vb { (&va, &vb) } else { (&vb, &va) };
    if &achieved != alpha || &vc < vmin || &vc > vmax {
        return Err(Error::VerificationFailed(format!("c = {c} gives v(S(c)) = {achieved}, v(c) = {vc}")));
    }
    Ok(IvtSolution { c, vc, achieved, certificate: inner.certificate })
}

/// `v(S(x))` for `v(x) = γ`, away from zero valuations, read off the factor
/// at valuation `β ≤ γ`: `φ_{P_b}(γ − β) − v(h_b)`.
pub fn phi_series(s: &RestrictedSeries, beta: &GroupValue, gamma: &GroupValue, pi: &GroupValue) -> Result<GroupValue> {
    if let Some(f) = s.to_poly() {
        return crate::tropical::phi_eval(&FieldSpec::Puiseux, &f, gamma);
    }
    if gamma < beta {
        return Err(Error::Precondition(format!("need gamma >= beta, got {gamma} < {beta}")));
    }
    if gamma.is_infinite() {
        return val(&s.coefficient(0));
    }
    let b = FieldSpec::Puiseux.element_with_valuation(beta)?;
    let norm = normalize_at(s, &b)?;
    let vh = val(&norm.h)?;
    let mut p = scalar(pi, "precision")?;
    for _ in 0..8 {
        let w = weierstrass_factor(&norm.series, &GroupValue::scalar(p.clone()))?;
        let form = TropicalForm::new(&FieldSpec::Puiseux, &exact_poly(&w.p))?;
        let value = form.phi(&(gamma - beta));
        if value < GroupValue::scalar(p.clone()) {
            return Ok(&value - &vh);
        }
        p = &p * Q::from_integer(2.into());
    }
    Err(Error::Precision(format!("phi at {gamma} not certified below precision {p}")))
}

/// Valuations `≥ v(a)` of zeros of `S`, with multiplicities.
pub fn zero_valuations_above(s: &RestrictedSeries, a: &FieldElement, pi: &GroupValue) -> Result<PolygonSlopes> {
    let va = val(a)?;
    if let Some(f) = s.to_poly() {
        let all = crate::tropical::newton_polygon(&FieldSpec::Puiseux, &f)?;
        return Ok(PolygonSlopes(all.0.into_iter().filter(|r| r.h >= va).collect()));
    }
    let (_, w) = factor_at(s, a, pi)?;
    let form = TropicalForm::new(&FieldSpec::Puiseux, &exact_poly(&w.p))?;
    Ok(PolygonSlopes(
        form.newton_polygon()
            .0
            .into_iter()
            .map(|r| RootValuation { h: &r.h + &va, multiplicity: r.multiplicity })
            .collect(),
    ))
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::None => f.write_str("none"),
            Tail::Geometric { coeff, ratio, start } => {
                let monic_monomial = match ratio {
                    FieldElement::Series(r) if r.is_exact() && r.terms().len() == 1 && r.terms()[0].1.is_one() => {
                        Some(r.terms()[0].0.clone())
                    }
                    _ => None,
                };
                match monic_monomial {
                    Some(rho) => write!(f, "geometric({coeff}, {}, {start})", crate::field::puiseux::fmt_coeff(&rho)),
                    None => write!(f, "geometric({coeff}, ratio {ratio}, {start})"),
                }
            }
        }
    }
}

impl fmt::Display for RestrictedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(|c| c.to_string()).collect();
        write!(f, "head: [{}]; tail: {}", head.join(", "), self.tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_poly, parse_series};

    fn el(s: &str) -> FieldElement {
        parse_element(s).unwrap()
    }

    fn g(s: &str) -> GroupValue {
        s.parse().unwrap()
    }

    fn geometric_t() -> RestrictedSeries {
        parse_series("head: []; tail: geometric(1, 1, 0)").unwrap()
    }

    fn weierstrass_example() -> RestrictedSeries {
        parse_series("head: [t, 1]; tail: geometric(t, 1, 2)").unwrap()
    }

    #[test]
    fn tail_bounds() {
        let s = geometric_t();
        assert_eq!(tail_bound(&s, &g("0"), 5).unwrap(), g("5"));
        assert_eq!(tail_bound(&s, &g("-1/2"), 4).unwrap(), g("2"));
        assert!(matches!(tail_bound(&s, &g("-1"), 0), Err(Error::DivergesAt(_))));
        let p = RestrictedSeries::polynomial(&parse_poly("X^2 - t").unwrap());
        assert_eq!(tail_bound(&p, &g("-7"), 3).unwrap(), GroupValue::Infinity);
    }

    #[test]
    fn evaluation() {
        let s = geometric_t();
        assert_eq!(eval_series(&s, &el("1"), &g("4")).unwrap(), el("1 + t + t^2 + t^3 + O(t^4)"));
        let inv = el("1 - t").inv(Some(&Q::from_integer(4.into()))).unwrap();
        assert_eq!(eval_series(&s, &el("1"), &g("4")).unwrap(), inv);
        assert!(matches!(eval_series(&s, &el("t^-1"), &g("4")), Err(Error::DivergesAt(_))));
        let f = parse_poly("X^2 - t").unwrap();
        let p = RestrictedSeries::polynomial(&f);
        assert_eq!(eval_series(&p, &el("1 + t"), &g("2")).unwrap(), f.eval(&el("1 + t")));
    }

    #[test]
    fn normalization_examples() {
        let n = normalize_at(&weierstrass_example(), &el("1")).unwrap();
        assert_eq!((n.h, n.n), (el("1"), 1));
        let n = normalize_at(&geometric_t(), &el("1")).unwrap();
        assert_eq!((n.h, n.n), (el("1"), 0));
        let n = normalize_at(&geometric_t(), &el("t")).unwrap();
        assert_eq!((n.h.clone(), n.n), (el("1"), 0));
        assert_eq!(n.series.coefficient(3), el("t^6"));
        assert!(matches!(normalize_at(&geometric_t(), &el("t^-1")), Err(Error::DivergesAt(_))));
    }

    #[test]
    fn normalization_prefers_the_largest_minimizer() {
        let s = parse_series("head: [t, 2 + t, 3, t^2]; tail: none").unwrap();
        let n = normalize_at(&s, &el("1")).unwrap();
        assert_eq!(n.n, 2);
        assert_eq!(n.h, el("1/3"));
        assert_eq!(n.series.coefficient(2), el("1"));
    }

    #[test]
    fn factor_examples() {
        let w = weierstrass_factor(&weierstrass_example(), &g("4")).unwrap();
        assert_eq!(w.n, 1);
        assert_eq!(w.p, parse_poly("X + (t + t^3 + O(t^4))").unwrap());

        let w = weierstrass_factor(&geometric_t(), &g("4")).unwrap();
        assert_eq!(w.p, Poly::constant(FieldElement::one()));
        assert_eq!(w.b, geometric_t());

        let f = parse_poly("X^2 - t").unwrap();
        let w = weierstrass_factor(&RestrictedSeries::polynomial(&f), &g("4")).unwrap();
        assert_eq!(w.p, f);
        assert_eq!(w.b, RestrictedSeries::polynomial(&Poly::constant(FieldElement::one())));
    }

    #[test]
    fn factor_with_slow_convergence() {
        // The distinguished coefficient carries a t^(1/2) term: one half grid step per iteration.
        let s = parse_series("head: [0, 1, 0, 1 - 3/2*t^(1/2) + t^(3/2)]; tail: geometric(-3/2*t^(3/2), 3/2, 4)").unwrap();
        let w = weierstrass_factor(&s, &g("4")).unwrap();
        assert_eq!(w.n, 3);
        assert!(w.p.is_monic());
    }

    #[test]
    fn factor_residual_is_small() {
        let s = weierstrass_example();
        let pi = g("6");
        let w = weierstrass_factor(&s, &pi).unwrap();
        let prod = &w.p * &w.b.to_poly().unwrap();
        let len = prod.coeffs().len() + 4;
        for i in 0..len {
            let d = &s.coefficient(i) - &prod.coeff(i);
            assert!(FieldSpec::Puiseux.valuation_lower_bound(&d) >= pi, "coefficient {i}: {d}");
        }
        for c in &w.b.to_poly().unwrap().coeffs()[1..] {
            assert!(FieldSpec::Puiseux.valuation_lower_bound(c).is_positive());
        }
    }

    #[test]
    fn series_ivt() {
        let s = weierstrass_example();
        let sol = ivt_series_solve(&FieldSpec::Puiseux, &s, &el("t"), &el("1"), &g("1/2"), &g("4")).unwrap();
        assert_eq!(sol.c, el("t^(1/2)"));
        assert_eq!(sol.achieved, g("1/2"));

        let e = ivt_series_solve(&FieldSpec::Puiseux, &geometric_t(), &el("t"), &el("1"), &g("1/2"), &g("4"));
        assert!(matches!(e, Err(Error::NoGap(_))));

        let f = parse_poly("X^2 - t").unwrap();
        let direct = ivt_solve(&IvtQuery {
            spec: FieldSpec::Puiseux,
            f: f.clone(),
            a: el("t"),
            b: el("1"),
            alpha: g("1/2"),
        })
        .unwrap();
        let via = ivt_series_solve(&FieldSpec::Puiseux, &RestrictedSeries::polynomial(&f), &el("t"), &el("1"), &g("1/2"), &g("4"))
            .unwrap();
        assert_eq!(direct, via);
        assert!(matches!(
            ivt_series_solve(&FieldSpec::Padic { p: 3 }, &s, &el("3"), &el("1"), &g("1/2"), &g("4")),
            Err(Error::FieldMismatch(_))
        ));
    }

    #[test]
    fn phi_and_zeros() {
        let s = weierstrass_example();
        assert_eq!(phi_series(&s, &g("0"), &g("2"), &g("4")).unwrap(), g("1"));
        assert_eq!(phi_series(&s, &g("0"), &g("1/2"), &g("4")).unwrap(), g("1/2"));
        let f = parse_poly("X^2 - t").unwrap();
        let p = RestrictedSeries::polynomial(&f);
        assert_eq!(
            phi_series(&p, &g("0"), &g("1/3"), &g("4")).unwrap(),
            crate::tropical::phi_eval(&FieldSpec::Puiseux, &f, &g("1/3")).unwrap()
        );

        let z = zero_valuations_above(&s, &el("1"), &g("4")).unwrap();
        assert_eq!(z, PolygonSlopes(vec![RootValuation { h: g("1"), multiplicity: 1 }]));
        assert!(zero_valuations_above(&geometric_t(), &el("1"), &g("4")).unwrap().is_empty());
        let z = zero_valuations_above(&p, &el("1"), &g("4")).unwrap();
        assert_eq!(z, PolygonSlopes(vec![RootValuation { h: g("1/2"), multiplicity: 2 }]));
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let s = weierstrass_example();
        assert_eq!(s.to_string(), "head: [t, 1]; tail: geometric(t, 1, 2)");
        assert_eq!(parse_series(&s.to_string()).unwrap(), s);
    }
}
