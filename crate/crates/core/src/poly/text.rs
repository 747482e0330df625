//! Human text syntax for polynomials.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! poly  := ['+'|'-'] term (('+'|'-') term)*
//! term  := coeff ['*'] power | coeff | power
//! coeff := uint ['/' uint] | '(' ['+'|'-'] uint ['/' uint] ')'
//! power := 't' ['^' uint]
//! ```

use std::fmt;

use rug::{Integer, Rational};

use super::Poly;
use crate::error::{Error, Result};

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn uint(&mut self) -> Result<Integer> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        Ok(Integer::from_str_radix(digits, 10).expect("digits"))
    }

    fn fraction(&mut self) -> Result<Rational> {
        let num = self.uint()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.uint()?;
            if den == 0 {
                return Err(Error::Parse {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rational::from((num, den)))
        } else {
            Ok(Rational::from(num))
        }
    }

    fn coeff(&mut self) -> Result<Option<Rational>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let neg = if self.eat(b'-') {
                    true
                } else {
                    self.eat(b'+');
                    false
                };
                let c = self.fraction()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(Some(if neg { -c } else { c }))
            }
            Some(c) if c.is_ascii_digit() => Ok(Some(self.fraction()?)),
            _ => Ok(None),
        }
    }

    fn power(&mut self) -> Result<Option<usize>> {
        if !self.eat(b't') {
            return Ok(None);
        }
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.uint()?;
            match e.to_usize() {
                Some(e) if e <= 1 << 20 => Ok(Some(e)),
                _ => Err(Error::Parse {
                    pos: at,
                    msg: "exponent too large".into(),
                }),
            }
        } else {
            Ok(Some(1))
        }
    }

    fn term(&mut self) -> Result<(Rational, usize)> {
        let coeff = self.coeff()?;
        let star = coeff.is_some() && self.eat(b'*');
        let power = self.power()?;
        match (coeff, power) {
            (None, None) => self.err("expected a coefficient or 't'"),
            (Some(_), None) if star => self.err("expected 't' after '*'"),
            (c, p) => Ok((c.unwrap_or_else(|| Rational::from(1)), p.unwrap_or(0))),
        }
    }
}

pub(super) fn parse(input: &str) -> Result<Poly> {
    let mut lx = Lexer {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut first = true;
    loop {
        let neg = match lx.peek() {
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            Some(b'+') => {
                lx.pos += 1;
                false
            }
            None if first => return lx.err("empty polynomial"),
            None => break,
            Some(_) if first => false,
            Some(_) => return lx.err("expected '+' or '-'"),
        };
        first = false;
        let (c, k) = lx.term()?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::new());
        }
        if neg {
            coeffs[k] -= c;
        } else {
            coeffs[k] += c;
        }
    }
    Ok(Poly::from_coeffs(coeffs))
}

pub(super) fn write(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if *c == 0 {
            continue;
        }
        let neg = *c < 0;
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let abs = Rational::from(c.abs_ref());
        match k {
            0 => write!(f, "{abs}")?,
            _ => {
                if abs != 1 {
                    write!(f, "{abs}*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_degree_eight_example() {
        let f = parse(
            "t^8 - t^7 - (3/4)t^6 + (7/2)t^5 - (21/4)t^4 + (7/2)t^3 - (3/4)t^2 - t + 1",
        )
        .unwrap();
        assert_eq!(f.degree(), Some(8));
        assert_eq!(f.coeff(6), Rational::from((-3, 4)));
        assert_eq!(
            f.to_string(),
            "t^8 - t^7 - 3/4*t^6 + 7/2*t^5 - 21/4*t^4 + 7/2*t^3 - 3/4*t^2 - t + 1"
        );
    }

    #[test]
    fn accepts_juxtaposition_and_repeated_terms() {
        assert_eq!(parse("2t + t").unwrap(), Poly::from_ints(&[0, 3]));
        assert_eq!(parse("-t^2+1").unwrap(), Poly::from_ints(&[1, 0, -1]));
        assert_eq!(parse("(-1/2)*t").unwrap().to_string(), "-1/2*t");
        assert!(parse("t - t").unwrap().is_zero());
    }

    #[test]
    fn reports_error_positions() {
        match parse("t^2 + * 3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        match parse("t^2 x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Parse { pos: 2, .. })));
    }
}
