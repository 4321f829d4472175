//! Recursive-descent parser for the textual forms used on the command line.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' exponent)?
//! atom     := number | 't' | 'X' | '(' expr ')' | 'O' '(' 't' ('^' exponent)? ')'
//! number   := digits ('/' digits)?
//! exponent := '-'? digits | '(' '-'? digits ('/' digits)? ')'
//!
//! series   := 'head' ':' '[' (expr (',' expr)*)? ']' (';' 'tail' ':' tail)?
//! tail     := 'none' | 'geometric' '(' expr ',' rational ',' digits ')'
//! ```
//!
//! `^` binds tighter than `*`, which binds tighter than `+`/`-`. Rational
//! exponents are only allowed on `t`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PuiseuxSeries};
use crate::group::{GroupValue, Q};
use crate::poly::Poly;
use crate::series::{RestrictedSeries, Tail};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next().map(|c| if c == '−' { '-' } else { c })
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        let raw = self.rest().chars().next().expect("peeked");
        self.pos += raw.len_utf8();
        Some(c)
    }

    fn error(&mut self, expected: &[&str]) -> Error {
        self.skip_ws();
        let found = self.rest().chars().next().map_or("end of input".to_string(), |c| c.to_string());
        Error::Syntax { offset: self.pos, expected: expected.iter().map(|s| s.to_string()).collect(), found }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(word) {
            let after = self.rest()[word.len()..].chars().next();
            if !after.is_some_and(|c| c.is_alphanumeric()) {
                self.pos += word.len();
                return true;
            }
        }
        false
    }

    fn expect_keyword(&mut self, word: &str) -> Result<()> {
        if self.keyword(word) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{word}'")]))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error(&["'+'", "'-'", "'*'", "end of input"])),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error(&["digit"]));
        }
        let n = self.rest()[..len].parse().expect("ascii digits");
        self.pos += len;
        Ok(n)
    }

    fn number(&mut self) -> Result<Q> {
        let n = self.digits()?;
        if self.peek() == Some('/') {
            self.bump();
            let d = self.digits()?;
            if d.is_zero() {
                return Err(self.error(&["nonzero denominator"]));
            }
            return Ok(Q::new(n, d));
        }
        Ok(Q::from_integer(n))
    }

    fn signed_rational(&mut self) -> Result<Q> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let x = self.number()?;
        Ok(if neg { -x } else { x })
    }

    fn exponent(&mut self) -> Result<Q> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.signed_rational()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('-') => {
                self.bump();
                Ok(-Q::from_integer(self.digits()?))
            }
            Some(c) if c.is_ascii_digit() => Ok(Q::from_integer(self.digits()?)),
            _ => Err(self.error(&["exponent"])),
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.bump();
                -&self.term()?
            }
            Some('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.peek() == Some('t') {
            self.bump();
            let e = if self.eat('^') { self.exponent()? } else { Q::from_integer(1.into()) };
            return Ok(Poly::constant(FieldElement::monomial(Q::from_integer(1.into()), e)));
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.exponent()?;
        let bad = |msg: &str| Error::Syntax { offset: at, expected: vec![msg.to_string()], found: e.to_string() };
        if !e.is_integer() {
            return Err(bad("integer exponent (rational exponents only apply to t)"));
        }
        let n = e.to_integer().to_i64().ok_or_else(|| bad("small exponent"))?;
        if n >= 0 {
            return Ok(base.pow(n as u32));
        }
        match (base.degree(), base.coeffs().first()) {
            (Some(0), Some(c)) => {
                let inv = c.inv(None).map_err(|_| bad("invertible base for a negative exponent"))?;
                if !inv.is_exact() {
                    return Err(bad("monomial base for a negative exponent"));
                }
                Ok(Poly::constant(inv.pow(n.unsigned_abs() as u32)))
            }
            _ => Err(bad("non-negative exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(FieldElement::Rational(self.number()?))),
            Some('X') => {
                self.bump();
                Ok(Poly::x())
            }
            Some('O') => {
                self.bump();
                self.expect('(')?;
                if self.peek() != Some('t') {
                    return Err(self.error(&["'t'"]));
                }
                self.bump();
                let e = if self.eat('^') { self.exponent()? } else { Q::from_integer(1.into()) };
                self.expect(')')?;
                Ok(Poly::constant(FieldElement::Series(PuiseuxSeries::big_o(e))))
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.error(&["number", "'t'", "'X'", "'('", "'O'"])),
        }
    }

    fn element(&mut self) -> Result<FieldElement> {
        let start = self.pos;
        let p = self.expr()?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(Error::Syntax {
                offset: start,
                expected: vec!["field element (no X)".into()],
                found: self.src[start..self.pos].trim().to_string(),
            });
        }
        Ok(p.coeff(0))
    }

    fn series(&mut self) -> Result<RestrictedSeries> {
        self.expect_keyword("head")?;
        self.expect(':')?;
        self.expect('[')?;
        let mut head = Vec::new();
        if !self.eat(']') {
            loop {
                head.push(self.element()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        let mut tail = Tail::None;
        if self.eat(';') {
            self.expect_keyword("tail")?;
            self.expect(':')?;
            if self.keyword("none") {
            } else if self.keyword("geometric") {
                self.expect('(')?;
                let c = self.element()?;
                self.expect(',')?;
                let at = self.pos;
                let rho = self.signed_rational()?;
                if !rho.is_positive() {
                    return Err(Error::Syntax { offset: at, expected: vec!["positive rho".into()], found: rho.to_string() });
                }
                self.expect(',')?;
                let start = self.digits()?.to_usize().ok_or_else(|| self.error(&["small start index"]))?;
                self.expect(')')?;
                tail = Tail::geometric(c, rho, start);
            } else {
                return Err(self.error(&["'none'", "'geometric'"]));
            }
            self.eat(';');
        }
        RestrictedSeries::new(head, tail).map_err(|e| match e {
            Error::Precondition(msg) => Error::Syntax { offset: self.pos, expected: vec![msg], found: String::new() },
            other => other,
        })
    }
}

/// A field element: `t^(1/2) + 3*t`, `7/3`, `1 - t + O(t^4)`.
pub fn parse_element(src: &str) -> Result<FieldElement> {
    let mut p = Parser::new(src);
    let x = p.element()?;
    p.expect_end()?;
    Ok(x)
}

/// A polynomial in `X` with field-element coefficients.
pub fn parse_poly(src: &str) -> Result<Poly> {
    let mut p = Parser::new(src);
    let f = p.expr()?;
    p.expect_end()?;
    Ok(f)
}

/// `head: [c0, c1, ...]; tail: geometric(c, rho, start)`.
pub fn parse_series(src: &str) -> Result<RestrictedSeries> {
    let mut p = Parser::new(src);
    let s = p.series()?;
    p.expect_end()?;
    Ok(s)
}

pub fn parse_group_value(src: &str) -> Result<GroupValue> {
    src.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::group::{q, qr};

    #[test]
    fn polynomial_grammar() {
        let f = parse_poly("X^2 - t").unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.coeff(0), FieldElement::monomial(q(-1), q(1)));
        assert_eq!(f.coeff(1), FieldElement::zero());
        assert_eq!(f.coeff(2), FieldElement::one());
    }

    #[test]
    fn element_grammar() {
        let x = parse_element("t^(1/2) + 3*t").unwrap();
        assert_eq!(FieldSpec::Puiseux.valuation(&x).unwrap(), GroupValue::ratio(1, 2));
        assert_eq!(parse_element("t^-1").unwrap(), FieldElement::monomial(q(1), q(-1)));
        assert_eq!(parse_element("−t").unwrap(), FieldElement::monomial(q(-1), q(1)));
        assert_eq!(parse_element("7/3").unwrap(), FieldElement::Rational(qr(7, 3)));
        let y = parse_element("1 - t + O(t^(7/2))").unwrap();
        assert_eq!(y.precision(), Some(&qr(7, 2)));
        assert_eq!(parse_element("(2*t)^-2").unwrap(), FieldElement::monomial(qr(1, 4), q(-2)));
    }

    #[test]
    fn precedence() {
        // ^ over * over +
        assert_eq!(parse_poly("2*X^2 + 1").unwrap(), parse_poly("(2*(X^2)) + 1").unwrap());
        assert_eq!(parse_element("1/2*t^2").unwrap(), FieldElement::monomial(qr(1, 2), q(2)));
        assert_eq!(parse_poly("(X - 1)^2").unwrap(), parse_poly("X^2 - 2*X + 1").unwrap());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_poly("X^^2") {
            Err(Error::Syntax { offset, expected, .. }) => {
                assert_eq!(offset, 2);
                assert_eq!(expected, vec!["exponent".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("X +"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_element("X + 1"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_poly("X^(1/2)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("t t"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn series_grammar() {
        let s = parse_series("head: [t, 1]; tail: geometric(t, 1, 2)").unwrap();
        assert_eq!(s.head().len(), 2);
        assert!(matches!(s.tail(), Tail::Geometric { .. }));
        let s = parse_series("head: [1, 0, -t]").unwrap();
        assert!(s.is_polynomial());
        assert!(parse_series("head: [1]; tail: geometric(1, -1, 2)").is_err());
        assert!(parse_series("head: [1, 2, 3]; tail: geometric(1, 1, 2)").is_err());
    }

    #[test]
    fn element_display_round_trips() {
        for s in ["t^(1/4)", "1 + t^(1/2) + t", "-1/2*t^(-3) + 2 - t^(5/3) + O(t^4)", "0 + O(t^(1/2))", "7/3", "0"] {
            let x = parse_element(s).unwrap();
            assert_eq!(parse_element(&x.to_string()).unwrap(), x, "{s} -> {x}");
        }
    }
}
