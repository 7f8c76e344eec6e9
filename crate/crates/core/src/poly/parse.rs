//! Infix polynomial syntax such as `3/2*x1^2*x2 - (x1 + 1)^2`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{Polynomial, VariableOrder};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial syntax error at offset {offset}: {message}")]
pub struct ParsePolyError {
    pub offset: usize,
    pub message: String,
}

/// Parses with the names in `vars`. Names of the form `xK` that are not in
/// `vars` denote variable index `K - 1`.
pub fn parse_poly(text: &str, vars: &VariableOrder) -> Result<Polynomial, ParsePolyError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars };
    let out = p.sum()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a VariableOrder,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> ParsePolyError {
        ParsePolyError { offset: self.pos, message: m.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Polynomial, ParsePolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, ParsePolyError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, ParsePolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Polynomial, ParsePolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().unwrap();
                let mut den = BigInt::from(1);
                if self.s.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                }
                Ok(Polynomial::constant(Rational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if let Some(i) = self.vars.index_of(name) {
                    return Ok(Polynomial::var(i));
                }
                match name.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()) {
                    Some(k) if k >= 1 => Ok(Polynomial::var(k - 1)),
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{name}'")))
                    }
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;

    #[test]
    fn named_variables() {
        let vars = VariableOrder::new(vec!["a".into(), "b".into()]);
        let f = parse_poly("b^2 - 3/4*a", &vars).unwrap();
        assert_eq!(f.degree(1), 2);
        assert_eq!(f.coefficients(0)[1], Polynomial::constant(q(-3, 4)));
        assert_eq!(f.display_with(&vars), "b^2 - 3/4*a");
    }

    #[test]
    fn errors_report_offset() {
        let e = parse_poly("x1 + y", &VariableOrder::default()).unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(parse_poly("x1 +", &VariableOrder::default()).is_err());
        assert!(parse_poly("(x1", &VariableOrder::default()).is_err());
    }

    #[test]
    fn round_trip() {
        let vars = VariableOrder::numbered(3);
        for s in ["x3^2*x1 - 7/3*x2 + 1", "-x1", "0", "(x1 - x2)^3"] {
            let f = parse_poly(s, &vars).unwrap();
            assert_eq!(parse_poly(&f.display_with(&vars), &vars).unwrap(), f);
        }
    }
}
