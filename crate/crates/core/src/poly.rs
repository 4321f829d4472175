//! Dense univariate polynomials in `X` over [`FieldElement`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::field::FieldElement;
use crate::group::Q;

/// Coefficients in ascending degree. Trailing exact zeros are stripped, so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(FieldElement::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::new(vec![FieldElement::zero(), FieldElement::one()])
    }

    /// `X − c`.
    pub fn linear_root(c: &FieldElement) -> Self {
        Self::new(vec![-c, FieldElement::one()])
    }

    /// `∏ (X − rᵢ)`.
    pub fn from_roots<'a, I: IntoIterator<Item = &'a FieldElement>>(roots: I) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(FieldElement::one()), |acc, r| &acc * &Self::linear_root(r))
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_exact)
    }

    /// Leading coefficient is literally one.
    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == FieldElement::one())
    }

    /// Horner evaluation; precision propagates through the element arithmetic.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::zero(), |acc, c| &(&acc * x) + c)
    }

    /// `f(X + c)`, by repeated synthetic division.
    pub fn taylor_shift(&self, c: &FieldElement) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] = &a[j] + &t;
            }
        }
        Self::new(a)
    }

    /// `f(c·X)`.
    pub fn scale_arg(&self, c: &FieldElement) -> Self {
        let mut pow = FieldElement::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow = &pow * c;
        }
        Self::new(out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self::new(self.coeffs.iter().map(f).collect())
    }

    /// Division with remainder by a polynomial whose leading coefficient is
    /// exactly one. Returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let n = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= n {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElement::zero(); rem.len() - n];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + n].clone();
            if lead.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate().take(n) {
                rem[k + j] = &rem[k + j] - &(&lead * d);
            }
            rem[k + n] = FieldElement::zero();
            quot[k] = lead;
        }
        rem.truncate(n);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(FieldElement::one()), |acc, _| &acc * self)
    }

    /// `Xⁿ`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![FieldElement::zero(); n + 1];
        c[n] = FieldElement::one();
        Self::new(c)
    }

    pub fn truncate_coeffs(&self, p: &Q) -> Self {
        self.map_coeffs(|c| c.truncate(p))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

/// `X^2 - t`, `(1 + t)*X + 3`. Coefficients that are not a single signed
/// monomial are parenthesized.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let simple = !text.contains(' ');
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            let var = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            let term = if i == 0 {
                if simple { body } else { format!("({body})") }
            } else if simple && body == "1" {
                var
            } else if simple {
                format!("{body}*{var}")
            } else {
                format!("({body})*{var}")
            };
            match (first, neg) {
                (true, false) => f.write_str(&term)?,
                (true, true) => write!(f, "-{term}")?,
                (false, false) => write!(f, " + {term}")?,
                (false, true) => write!(f, " - {term}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::parse::{parse_element, parse_poly};

    #[test]
    fn taylor_shift_matches_expansion() {
        let f = parse_poly("X^2 - X").unwrap();
        let g = f.taylor_shift(&parse_element("1 + t").unwrap());
        // (1 + t + X)(t + X) = X² + (1 + 2t)X + t + t²
        assert_eq!(g, parse_poly("X^2 + (1 + 2*t)*X + t + t^2").unwrap());
        let x = parse_element("t^(1/3) - 2").unwrap();
        let c = parse_element("1 + t").unwrap();
        assert_eq!(g.eval(&x), f.eval(&(&x + &c)));
    }

    #[test]
    fn division_by_monic() {
        let f = parse_poly("X^3 + 2*X + t").unwrap();
        let d = parse_poly("X - t").unwrap();
        let (q, r) = f.div_rem_monic(&d);
        assert_eq!(&(&q * &d) + &r, f);
        assert_eq!(r.degree(), Some(0));
        assert_eq!(r.coeff(0), parse_element("t^3 + 3*t").unwrap());
    }

    #[test]
    fn display_round_trips() {
        for s in ["X^2 - t", "(1 + 2*t)*X^3 - 1/2*X + t^(1/2)", "X", "-X^4 + (t - 1)"] {
            let f = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&f.to_string()).unwrap(), f, "{s} -> {f}");
        }
    }
}
