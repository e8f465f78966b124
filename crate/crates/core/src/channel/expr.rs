//! Parser for polynomial expressions such as `3/2*g1^2*g2 - g3 + 1`.

use num_traits::One;

use crate::algebra::{AlgebraElement, Monomial, Rational};
use crate::error::{Error, Result};

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

/// Parses `text` into an element over the generators `names`.
pub fn parse_element(text: &str, names: &[String]) -> Result<AlgebraElement> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<AlgebraElement> {
        let nvars = self.names.len();
        let mut acc = AlgebraElement::zero(nvars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return Err(self.error("empty expression")),
            _ => 1,
        };
        loop {
            let t = self.term()?;
            let t = if sign < 0 { -&t } else { t };
            acc.add_assign_unchecked(&t);
            sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let nvars = self.names.len();
        let mut coefficient = Rational::one();
        let mut exponents = vec![0u32; nvars];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let value = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let den = self.integer()?;
                        if den == 0u32.into() {
                            return Err(self.error("zero denominator"));
                        }
                        Rational::new(num, den)
                    } else {
                        Rational::from_integer(num)
                    };
                    coefficient *= value;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let index = self.names.iter().position(|n| n == name).ok_or_else(|| Error::Parse {
                        offset: start,
                        message: format!("unknown generator `{name}`"),
                    })?;
                    let power = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let e = self.integer()?;
                        u32::try_from(e).map_err(|_| self.error("exponent too large"))?
                    } else {
                        1
                    };
                    exponents[index] += power;
                }
                _ => return Err(self.error("expected a number or a generator name")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(AlgebraElement::term(Monomial::from_exponents(exponents), coefficient))
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_sums_of_terms() {
        let e = parse_element("3/2*x^2*y - y + 1", &names()).unwrap();
        assert_eq!(e.terms().len(), 3);
        assert_eq!(e.display(&names()).to_string(), "3/2*x^2*y - y + 1");
        assert!(parse_element("x - x", &names()).unwrap().is_zero());
        assert_eq!(parse_element("2*3*x", &names()).unwrap(), parse_element("6 * x", &names()).unwrap());
        assert_eq!(parse_element("-x^2", &names()).unwrap().display(&names()).to_string(), "-x^2");
        assert!(parse_element("0", &names()).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_element("z", &names()), Err(Error::Parse { .. })));
        assert!(parse_element("", &names()).is_err());
        assert!(parse_element("x +", &names()).is_err());
        assert!(parse_element("1/0", &names()).is_err());
        assert!(parse_element("x y", &names()).is_err());
    }
}
