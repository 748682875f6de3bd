use num_complex::Complex64;

use super::BiPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag,
    Z1,
    Z2,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'i' | 'I' | 'j' => {
                out.push(Tok::Imag);
                i += 1;
            }
            'z' | 'Z' => {
                match chars.get(i + 1) {
                    Some('1') => out.push(Tok::Z1),
                    Some('2') => out.push(Tok::Z2),
                    _ => return Err(Error::Parse(format!("expected z1 or z2 at position {i}"))),
                }
                i += 2;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
                out.push(Tok::Num(v));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character '{other}' at position {i}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := unary ('*'? unary)*   (juxtaposition multiplies)
    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Num(_) | Tok::Imag | Tok::Z1 | Tok::Z2 | Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 4096.0 => {
                    Ok(base.pow(v as u32))
                }
                _ => Err(Error::Parse(
                    "exponent must be a non-negative integer".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(BiPoly::constant(Complex64::new(v, 0.0))),
            Some(Tok::Imag) => Ok(BiPoly::constant(Complex64::new(0.0, 1.0))),
            Some(Tok::Z1) => Ok(BiPoly::z1()),
            Some(Tok::Z2) => Ok(BiPoly::z2()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Parse an expression such as `(z1 - z2)^2*z1 + 3i*z2^4`.
///
/// Accepts `+ - * ^`, parentheses, real literals, the imaginary unit `i`,
/// the variables `z1`, `z2` and implicit multiplication (`2z1`, `3i`).
pub fn parse_bipoly(src: &str) -> Result<BiPoly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_multiplication() {
        assert_eq!(parse_bipoly("2z1").unwrap(), parse_bipoly("2*z1").unwrap());
        assert_eq!(
            parse_bipoly("3i").unwrap(),
            BiPoly::constant(Complex64::new(0.0, 3.0))
        );
        assert_eq!(
            parse_bipoly("(z1)(z2)").unwrap(),
            &BiPoly::z1() * &BiPoly::z2()
        );
    }

    #[test]
    fn precedence() {
        let p = parse_bipoly("-z1^2 + 1e-1*z2").unwrap();
        assert_eq!(p.coeff(2, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(p.coeff(0, 1), Complex64::new(0.1, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "z3", "z1^-1", "z1^1.5", "(z1", "z1 +", "x"] {
            assert!(parse_bipoly(bad).is_err(), "{bad}");
        }
    }
}
