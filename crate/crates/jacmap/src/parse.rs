//! Text grammar for polynomials and maps.
//!
//! The grammar accepts integer and `a/b` rational literals, the variables
//! `x` and `y`, the operators `+ - * ^` and parentheses. Multiplication is
//! explicit, with one exception: a parenthesized coefficient may directly
//! precede a variable, so `(1/3)*x*y^2` and `(1/3)x*y^2` both parse.
//! A map is written `(P, Q)` or `P; Q`.
//!
//! Expansion budgets: a few characters of input can demand an enormous
//! polynomial (`(x+y+1)^9999`), so powers of multi-term bases are limited to
//! total degree [`MAX_DENSE_POW_DEGREE`] and every other intermediate to
//! total degree [`MAX_EXPR_DEGREE`]. Inputs beyond that are rejected with a
//! syntax error instead of exhausting memory.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::analyzer::PolyMap;
use crate::poly::{Poly2, Rational};

/// Largest total degree any intermediate polynomial may reach while an
/// expression is being evaluated. Generous for ordinary use; it exists so
/// exponent arithmetic stays far away from `u32` overflow.
pub const MAX_EXPR_DEGREE: u64 = 1_000_000;

/// Largest total degree a power of a base with two or more terms may expand
/// to. Dense bivariate expansion costs roughly the square of this number in
/// terms, each carrying an exact coefficient with hundreds of digits, so the
/// budget is much smaller than [`MAX_EXPR_DEGREE`].
pub const MAX_DENSE_POW_DEGREE: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Malformed input, with the byte position of the offending token.
    Syntax { pos: usize, message: String },
    /// An identifier other than `x` or `y`.
    UnknownIdentifier { pos: usize, name: String },
    /// `^` followed by a negative exponent.
    NegativeExponent { pos: usize },
    /// Map input that does not contain exactly two components.
    MapArity { message: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, message } => {
                write!(f, "syntax error at position {pos}: {message}")
            }
            ParseError::UnknownIdentifier { pos, name } => {
                write!(f, "unknown identifier `{name}` at position {pos}")
            }
            ParseError::NegativeExponent { pos } => {
                write!(f, "negative exponent at position {pos}")
            }
            ParseError::MapArity { message } => write!(f, "map arity error: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn offset(self, by: usize) -> ParseError {
        match self {
            ParseError::Syntax { pos, message } => ParseError::Syntax {
                pos: pos + by,
                message,
            },
            ParseError::UnknownIdentifier { pos, name } => ParseError::UnknownIdentifier {
                pos: pos + by,
                name,
            },
            ParseError::NegativeExponent { pos } => ParseError::NegativeExponent { pos: pos + by },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let pos = i;
        match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push(Lexed {
                    tok: Tok::Plus,
                    pos,
                });
                i += 1;
            }
            b'-' => {
                out.push(Lexed {
                    tok: Tok::Minus,
                    pos,
                });
                i += 1;
            }
            b'*' => {
                out.push(Lexed {
                    tok: Tok::Star,
                    pos,
                });
                i += 1;
            }
            b'^' => {
                out.push(Lexed {
                    tok: Tok::Caret,
                    pos,
                });
                i += 1;
            }
            b'(' => {
                out.push(Lexed {
                    tok: Tok::LParen,
                    pos,
                });
                i += 1;
            }
            b')' => {
                out.push(Lexed {
                    tok: Tok::RParen,
                    pos,
                });
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: BigInt = text[start..i].parse().expect("digit run");
                let value = if i < bytes.len() && bytes[i] == b'/' {
                    let den_start = i + 1;
                    let mut j = den_start;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == den_start {
                        return Err(ParseError::Syntax {
                            pos: i,
                            message: "expected digits after '/'".into(),
                        });
                    }
                    let denom: BigInt = text[den_start..j].parse().expect("digit run");
                    if denom.is_zero() {
                        return Err(ParseError::Syntax {
                            pos: den_start,
                            message: "zero denominator in rational literal".into(),
                        });
                    }
                    i = j;
                    Rational::new(numer, denom)
                } else {
                    Rational::from_integer(numer)
                };
                out.push(Lexed {
                    tok: Tok::Num(value),
                    pos,
                });
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Lexed {
                    tok: Tok::Ident(text[start..i].to_string()),
                    pos,
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    message: format!("unexpected character `{}`", other as char),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Lexed> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<Lexed> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<Poly2, ParseError> {
        let negate = matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly2, ParseError> {
        let (mut acc, mut paren) = self.factor()?;
        loop {
            let pos = self.here();
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Star) => {
                    self.bump();
                    let (rhs, p) = self.factor()?;
                    acc = &acc * &rhs;
                    paren = p;
                }
                // implicit multiplication: parenthesized coefficient
                // immediately followed by a variable, e.g. (1/27)y^3
                Some(Tok::Ident(_)) if paren => {
                    let (rhs, p) = self.factor()?;
                    acc = &acc * &rhs;
                    paren = p;
                }
                _ => break,
            }
            check_expr_degree(&acc, pos)?;
        }
        Ok(acc)
    }

    // The bool marks a bare parenthesized atom, the one place where an
    // implicit product with a following variable is allowed.
    fn factor(&mut self) -> Result<(Poly2, bool), ParseError> {
        let (base, paren) = self.atom()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            let e = self.exponent()?;
            check_pow_budget(&base, e, pos)?;
            return Ok((base.pow(e), false));
        }
        Ok((base, paren))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let pos = self.here();
        match self.bump().map(|t| t.tok) {
            Some(Tok::Minus) => Err(ParseError::NegativeExponent { pos }),
            Some(Tok::Num(n)) if n.is_integer() => {
                let big = n.to_integer();
                u32::try_from(&big).map_err(|_| ParseError::Syntax {
                    pos,
                    message: format!("exponent {big} is too large"),
                })
            }
            Some(Tok::Num(_)) => Err(ParseError::Syntax {
                pos,
                message: "exponent must be an integer".into(),
            }),
            _ => Err(ParseError::Syntax {
                pos,
                message: "expected an integer exponent after '^'".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<(Poly2, bool), ParseError> {
        let pos = self.here();
        match self.bump().map(|t| t.tok) {
            Some(Tok::Num(n)) => Ok((Poly2::constant(n), false)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok((Poly2::x(), false)),
                "y" => Ok((Poly2::y(), false)),
                _ => Err(ParseError::UnknownIdentifier { pos, name }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.here();
                match self.bump().map(|t| t.tok) {
                    Some(Tok::RParen) => Ok((inner, true)),
                    _ => Err(ParseError::Syntax {
                        pos: close,
                        message: "expected ')'".into(),
                    }),
                }
            }
            Some(_) => Err(ParseError::Syntax {
                pos,
                message: "expected a number, variable or '('".into(),
            }),
            None => Err(ParseError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

fn check_expr_degree(poly: &Poly2, pos: usize) -> Result<(), ParseError> {
    let degree = u64::from(poly.degree().finite().unwrap_or(0));
    if degree > MAX_EXPR_DEGREE {
        return Err(ParseError::Syntax {
            pos,
            message: format!("expression degree {degree} exceeds the limit {MAX_EXPR_DEGREE}"),
        });
    }
    Ok(())
}

// Powers are checked before expansion: a constant or single-monomial base
// grows linearly and gets the full degree budget, while a multi-term base
// expands densely and gets a far smaller one.
fn check_pow_budget(base: &Poly2, e: u32, pos: usize) -> Result<(), ParseError> {
    let degree = u64::from(base.degree().finite().unwrap_or(0)).max(1);
    let limit = if base.term_count() > 1 {
        MAX_DENSE_POW_DEGREE
    } else {
        MAX_EXPR_DEGREE
    };
    if degree * u64::from(e) > limit {
        return Err(ParseError::Syntax {
            pos,
            message: format!("exponent {e} is too large to expand (degree limit {limit})"),
        });
    }
    Ok(())
}

/// Parse a polynomial in `x` and `y`.
pub fn parse_poly(text: &str) -> Result<Poly2, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        idx: 0,
        end: text.len(),
    };
    let poly = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(ParseError::Syntax {
            pos: t.pos,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(poly)
}

/// Parse a map written `(P, Q)` or `P; Q`.
pub fn parse_map(text: &str) -> Result<PolyMap, ParseError> {
    if let Some((first, second)) = split_parenthesized_pair(text)? {
        let p = parse_poly(&text[first.clone()]).map_err(|e| e.offset(first.start))?;
        let q = parse_poly(&text[second.clone()]).map_err(|e| e.offset(second.start))?;
        return Ok(PolyMap::new(p, q));
    }
    let semis: Vec<usize> = top_level_positions(text, 0..text.len(), b';');
    match semis.as_slice() {
        [cut] => {
            let p = parse_poly(&text[..*cut])?;
            let q = parse_poly(&text[cut + 1..]).map_err(|e| e.offset(cut + 1))?;
            Ok(PolyMap::new(p, q))
        }
        [] => Err(ParseError::MapArity {
            message: "expected `(P, Q)` or `P; Q`".into(),
        }),
        _ => Err(ParseError::MapArity {
            message: "expected exactly two components".into(),
        }),
    }
}

type Span = std::ops::Range<usize>;

// When the whole input is one parenthesized group, return the spans of its
// two top-level comma-separated components.
fn split_parenthesized_pair(text: &str) -> Result<Option<(Span, Span)>, ParseError> {
    let bytes = text.as_bytes();
    let start = match text.find(|c: char| !c.is_whitespace()) {
        Some(i) if bytes[i] == b'(' => i,
        _ => return Ok(None),
    };
    let end = text.rfind(|c: char| !c.is_whitespace()).expect("nonempty");
    if bytes[end] != b')' {
        return Ok(None);
    }
    // the opening paren must match the final closing paren
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate().take(end).skip(start) {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 && i != end {
                    return Ok(None);
                }
            }
            _ => {}
        }
    }
    let inner = start + 1..end;
    let commas = top_level_positions(text, inner.clone(), b',');
    match commas.as_slice() {
        [cut] => Ok(Some((inner.start..*cut, cut + 1..inner.end))),
        [] => Err(ParseError::MapArity {
            message: "expected two comma-separated components".into(),
        }),
        _ => Err(ParseError::MapArity {
            message: "expected exactly two components".into(),
        }),
    }
}

fn top_level_positions(text: &str, range: Span, needle: u8) -> Vec<usize> {
    let bytes = text.as_bytes();
    let mut depth = 0i64;
    let mut out = Vec::new();
    for i in range {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b if b == needle && depth == 0 => out.push(i),
            _ => {}
        }
    }
    out
}

/// Canonical text for a polynomial (same as its `Display` form).
pub fn format_poly(p: &Poly2) -> String {
    p.to_string()
}

/// Canonical text for a map: `(P, Q)`.
pub fn format_map(m: &PolyMap) -> String {
    m.to_string()
}

/// Render a gap-set as `{0, 1, 3, 4}`.
pub fn format_gap_set(gaps: &std::collections::BTreeSet<u32>) -> String {
    let items: Vec<String> = gaps.iter().map(|g| g.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}
