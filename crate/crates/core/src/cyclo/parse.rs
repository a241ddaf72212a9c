use num_bigint::BigInt;

use super::{Cyclotomic, Rational};
use crate::error::{Error, Result};

/// Parses literals such as `-1+E(5)+E(5)^4` or `3/2*E(3)^2`.
pub fn parse_cyclotomic(s: &str) -> Result<Cyclotomic> {
    parse_at(s, 1, 1)
}

/// As [`parse_cyclotomic`], reporting errors relative to `line`/`col`.
pub fn parse_at(s: &str, line: usize, col: usize) -> Result<Cyclotomic> {
    let mut p = Parser { s: s.as_bytes(), i: 0, line, col };
    let v = p.expr()?;
    if p.i != p.s.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.line, self.col + self.i, msg)
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Cyclotomic> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Cyclotomic> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.i += 1;
                    acc = &acc * &self.factor()?;
                }
                b'/' => {
                    self.i += 1;
                    let d = self.factor()?;
                    acc = acc.div(&d).map_err(|_| self.err("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Cyclotomic> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            let neg = if self.peek() == Some(b'-') {
                self.i += 1;
                true
            } else {
                false
            };
            let k = self.integer()?;
            let k: i64 = k.try_into().map_err(|_| self.err("exponent too large"))?;
            return base.pow(if neg { -k } else { k }).map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Cyclotomic> {
        match self.peek() {
            Some(b'E') => {
                self.i += 1;
                if self.peek() != Some(b'(') {
                    return Err(self.err("expected '(' after E"));
                }
                self.i += 1;
                let n = self.integer()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                let n: u64 = n.try_into().map_err(|_| self.err("conductor out of range"))?;
                if n == 0 {
                    return Err(self.err("E(0) is undefined"));
                }
                Ok(Cyclotomic::e(n))
            }
            Some(b'(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(Cyclotomic::from_rational(Rational::from_integer(v)))
            }
            _ => Err(self.err("expected a number, E(n) or '('")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.i]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_cyclotomic("3/2").unwrap(), Cyclotomic::from_frac(3, 2));
        assert_eq!(parse_cyclotomic("-1+E(5)+E(5)^4").unwrap().to_string(), "2*E(5)+E(5)^2+E(5)^3+2*E(5)^4");
        assert_eq!(parse_cyclotomic("E(3)^2*E(4)").unwrap(), &Cyclotomic::root(3, 2) * &Cyclotomic::e(4));
        assert_eq!(parse_cyclotomic("E(4)^-1").unwrap(), Cyclotomic::root(4, 3));
    }

    #[test]
    fn errors_carry_column() {
        match parse_at("1+E(5", 7, 10) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 7);
                assert_eq!(col, 15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_cyclotomic("").is_err());
        assert!(parse_cyclotomic("1/0").is_err());
        assert!(parse_cyclotomic("E(0)").is_err());
    }
}
