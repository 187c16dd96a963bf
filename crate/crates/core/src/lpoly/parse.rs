//! Recursive-descent parser for polynomial expressions in `x`, `y` and the
//! symbolic parameter `k`.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ["*"] unary } ;          (* juxtaposition multiplies *)
//! unary    = ("+" | "-") unary | power ;
//! power    = atom [ "^" exponent ] ;
//! exponent = ["-"] INT | "(" ["-"] INT ")" ;
//! atom     = INT | "x" | "y" | "k" | "(" expr ")" ;
//! ```
//!
//! Negative exponents are only allowed directly on `x` or `y`.

use num_traits::One;
use thiserror::Error;

use super::{KPoly, RealPoly, SymPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    IntegerOverflow,
    NegativeExponent,
    ExponentTooLarge,
    UnboundParameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind:?} at position {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v = src[start..i]
                    .parse::<i64>()
                    .map_err(|_| ParseError { kind: ParseErrorKind::IntegerOverflow, pos: start })?;
                out.push((Tok::Int(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or(c);
                return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(ch), pos: start });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

enum Atom {
    Var(SymPoly),
    Other(SymPoly),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, pos: self.pos() }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken(format!("{t:?}"))),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<SymPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<SymPoly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<SymPoly, ParseError> {
        let atom = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(match atom {
                Atom::Var(p) | Atom::Other(p) => p,
            });
        }
        self.at += 1;
        let exp_pos = self.pos();
        let e = self.exponent()?;
        match atom {
            Atom::Var(p) => {
                // a bare variable is a single monomial with unit coefficient
                let ((i, j), _) = p.terms().next().expect("variable monomial");
                let (i, j) = (i as i64 * e, j as i64 * e);
                let i = i32::try_from(i).map_err(|_| ParseError { kind: ParseErrorKind::ExponentTooLarge, pos: exp_pos })?;
                let j = i32::try_from(j).map_err(|_| ParseError { kind: ParseErrorKind::ExponentTooLarge, pos: exp_pos })?;
                Ok(SymPoly::monomial(KPoly::one(), i, j))
            }
            Atom::Other(p) => {
                if e < 0 {
                    return Err(ParseError { kind: ParseErrorKind::NegativeExponent, pos: exp_pos });
                }
                if e > 256 {
                    return Err(ParseError { kind: ParseErrorKind::ExponentTooLarge, pos: exp_pos });
                }
                Ok(p.pow(e as u32))
            }
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.at += 1;
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.at += 1;
        }
        let v = match self.peek() {
            Some(Tok::Int(v)) => *v,
            _ => return Err(self.unexpected()),
        };
        self.at += 1;
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(Atom::Other(SymPoly::constant(KPoly::from(v))))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "x" => Ok(Atom::Var(SymPoly::monomial(KPoly::one(), 1, 0))),
                    "y" => Ok(Atom::Var(SymPoly::monomial(KPoly::one(), 0, 1))),
                    "k" => Ok(Atom::Other(SymPoly::constant(KPoly::k()))),
                    _ => Err(ParseError { kind: ParseErrorKind::UnknownIdentifier(name), pos }),
                }
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Atom::Other(e))
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses and expands an expression, keeping `k` symbolic.
pub fn parse_poly(src: &str) -> Result<SymPoly, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

/// Parses an expression and substitutes `k` when given. Fails with
/// [`ParseErrorKind::UnboundParameter`] if `k` occurs but no value is given.
pub fn parse_real(src: &str, k: Option<f64>) -> Result<RealPoly, ParseError> {
    let p = parse_poly(src)?;
    match k {
        Some(k) => Ok(p.specialize(k)),
        None if p.has_parameter() => Err(ParseError { kind: ParseErrorKind::UnboundParameter, pos: 0 }),
        None => Ok(p.specialize(0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpoly::IntPoly;

    fn int(s: &str) -> IntPoly {
        parse_poly(s).unwrap().to_integer().unwrap()
    }

    #[test]
    fn reads_linear_polynomial() {
        let p = int("x+y-1");
        assert_eq!(p, IntPoly::from_terms([(1, 0, 1), (0, 1, 1), (0, 0, -1)]));
    }

    #[test]
    fn p3_matches_hand_expansion() {
        let p = parse_real("(x^2+x+1)*y^2+k*x*(x+1)*y+x*(x^2+x+1)", Some(3.0)).unwrap();
        let expected = IntPoly::from_terms([
            (2, 2, 1),
            (1, 2, 1),
            (0, 2, 1),
            (2, 1, 3),
            (1, 1, 3),
            (3, 0, 1),
            (2, 0, 1),
            (1, 0, 1),
        ]);
        assert_eq!(p, expected.to_real());
    }

    #[test]
    fn r4_matches_hand_expansion() {
        let p = parse_real("y^3-y+x^3-x+k*x*y", Some(4.0)).unwrap();
        let expected = IntPoly::from_terms([(0, 3, 1), (0, 1, -1), (3, 0, 1), (1, 0, -1), (1, 1, 4)]);
        assert_eq!(p, expected.to_real());
    }

    #[test]
    fn symbolic_k_is_linear() {
        let p = parse_poly("k*x*y + 3*k - 2").unwrap();
        assert_eq!(p.coeff(1, 1), Some(&KPoly::k()));
        assert_eq!(p.coeff(0, 0), Some(&KPoly::new(vec![-2, 3])));
        assert_eq!(
            parse_real("k*x", None).unwrap_err().kind,
            ParseErrorKind::UnboundParameter
        );
    }

    #[test]
    fn negative_exponents_and_juxtaposition() {
        assert_eq!(int("x^-2*y"), int("x^(-2) y"));
        assert_eq!(int("2x(x+1)"), int("2*x^2+2*x"));
        assert_eq!(int("-x^2"), int("0-x*x"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("x + z").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("z".into()));
        assert_eq!(e.pos, 4);

        let e = parse_poly("(x+1)^-1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NegativeExponent);
        assert_eq!(e.pos, 6);

        let e = parse_poly("x + ").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(e.pos, 4);

        let e = parse_poly("x $ y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        assert_eq!(e.pos, 2);

        assert!(parse_poly("(x+1").is_err());
        assert!(parse_poly("x)").is_err());
        assert!(parse_poly("99999999999999999999").is_err());
    }
}
