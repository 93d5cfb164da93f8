//! Canonical text form of Laurent polynomials.
//!
//! Terms are printed in ascending lexicographic order of exponent vectors,
//! variables as a fixed letter with a 1-based index, e.g.
//! `z1^-1*z2^-1 + z2 + z1`. The parser accepts exactly this shape (plus
//! optional whitespace and leading signs) and is total: malformed input
//! yields an error, never a panic.

use crate::error::{Error, Result};
use crate::exactalg::poly::{Coeff, LaurentPoly};

/// Renders in canonical order with the given variable letter.
pub fn render(poly: &LaurentPoly, letter: char) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in poly.terms().enumerate() {
        use num_traits::{One, Signed};
        let mag = c.abs();
        let negative = c.sign() == num_bigint::Sign::Minus;
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || m.is_unit() {
            factors.push(mag.to_string());
        }
        for (j, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                factors.push(format!("{}{}", letter, j + 1));
            } else {
                factors.push(format!("{}{}^{}", letter, j + 1, e));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Parses the canonical text form back into a polynomial with `nvars`
/// variables. Any ASCII letter is accepted as the variable name; indices
/// are 1-based and must not exceed `nvars`.
pub fn parse(input: &str, nvars: usize) -> Result<LaurentPoly> {
    let mut p = Parser { bytes: input.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.eat(b'0') && p.at_end_after_ws() {
        return Ok(LaurentPoly::zero(nvars));
    }
    p.pos = 0;
    let mut terms: Vec<(Vec<i64>, Coeff)> = Vec::new();
    let mut sign = 1i32;
    p.skip_ws();
    if p.eat(b'-') {
        sign = -1;
    } else {
        let _ = p.eat(b'+');
    }
    loop {
        let (exp, coeff) = p.term(nvars)?;
        terms.push((exp, coeff * sign));
        p.skip_ws();
        if p.at_end() {
            break;
        }
        sign = if p.eat(b'+') {
            1
        } else if p.eat(b'-') {
            -1
        } else {
            return Err(Error::Parse(format!("expected '+' or '-' at byte {}", p.pos)));
        };
    }
    LaurentPoly::from_terms(nvars, terms)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn at_end_after_ws(&mut self) -> bool {
        self.skip_ws();
        self.at_end()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!("expected digits at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::Parse("invalid utf-8".into()))
    }

    fn integer_usize(&mut self) -> Result<usize> {
        self.digits()?
            .parse::<usize>()
            .map_err(|_| Error::Parse("index overflow".into()))
    }

    fn signed_i64(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        if !neg {
            let _ = self.eat(b'+');
        }
        let mag = self.digits()?.parse::<i64>().map_err(|_| Error::ExponentOverflow)?;
        Ok(if neg { -mag } else { mag })
    }

    /// One term: `coeff`, `coeff*monos`, or `monos`.
    fn term(&mut self, nvars: usize) -> Result<(Vec<i64>, Coeff)> {
        self.skip_ws();
        let mut coeff = Coeff::from(1);
        let mut exp = vec![0i64; nvars];
        let mut saw_factor = false;

        if matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            coeff = self.digits()?.parse::<Coeff>().map_err(|_| Error::Parse("bad coefficient".into()))?;
            saw_factor = true;
        }
        loop {
            self.skip_ws();
            if saw_factor {
                let mut fork = Parser { bytes: self.bytes, pos: self.pos };
                if !fork.eat(b'*') {
                    break;
                }
                fork.skip_ws();
                if !matches!(fork.peek(), Some(b) if b.is_ascii_alphabetic()) {
                    break;
                }
                *self = Parser { bytes: self.bytes, pos: fork.pos };
            } else if !matches!(self.peek(), Some(b) if b.is_ascii_alphabetic()) {
                return Err(Error::Parse(format!("expected a term at byte {}", self.pos)));
            }
            // variable: letter then 1-based index
            self.pos += 1;
            let idx = self.integer_usize()?;
            if idx == 0 || idx > nvars {
                return Err(Error::Parse(format!("variable index {idx} out of range 1..={nvars}")));
            }
            let e = if self.eat(b'^') { self.signed_i64()? } else { 1 };
            exp[idx - 1] = exp[idx - 1].checked_add(e).ok_or(Error::ExponentOverflow)?;
            saw_factor = true;
        }
        Ok((exp, coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(nvars: usize, terms: &[(&[i64], i128)]) -> LaurentPoly {
        LaurentPoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn renders_canonical_order() {
        let w = poly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]);
        assert_eq!(render(&w, 'z'), "z1^-1*z2^-1 + z2 + z1");
    }

    #[test]
    fn renders_coefficients_and_signs() {
        let p = poly(2, &[(&[0, 0], -3), (&[1, 0], 1), (&[0, -2], 2)]);
        assert_eq!(render(&p, 'z'), "2*z2^-2 - 3 + z1");
        assert_eq!(render(&LaurentPoly::zero(2), 'z'), "0");
    }

    #[test]
    fn parse_inverts_render() {
        let cases = [
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]),
            poly(2, &[(&[0, 1], 1), (&[-1, -1], 1), (&[0, -2], 2), (&[1, -3], 1)]),
            poly(3, &[(&[0, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 1, 1], 1)]),
            poly(1, &[(&[0], -7)]),
            LaurentPoly::zero(2),
        ];
        for p in cases {
            let s = render(&p, 'u');
            assert_eq!(parse(&s, p.nvars()).unwrap(), p, "roundtrip of {s}");
        }
    }

    #[test]
    fn parse_accepts_paper_style_strings() {
        let cc = parse(
            "x1^-1*x2^2*x3^-1 + x1^-1*x2^-1*x3^2 + x1^2*x2^-1*x3^-1",
            3,
        )
        .unwrap();
        assert_eq!(cc.num_terms(), 3);
        assert_eq!(cc.coeff(&crate::exactalg::Monomial::new(vec![-1, 2, -1])), 1.into());
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse("z1 +", 2).is_err());
        assert!(parse("z3", 2).is_err());
        assert!(parse("z0", 2).is_err());
        assert!(parse("^2", 2).is_err());
        assert!(parse("1,5", 2).is_err());
        assert!(parse("", 2).is_err());
    }

    #[test]
    fn parse_combines_duplicates() {
        assert_eq!(parse("z1 + z1", 2).unwrap(), poly(2, &[(&[1, 0], 2)]));
        assert_eq!(parse("z1 - z1", 2).unwrap(), LaurentPoly::zero(2));
    }
}
