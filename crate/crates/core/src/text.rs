//! Recursive-descent parser shared by the field and polynomial text formats.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'w' | 'ω' | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//! Division is only allowed by a nonzero scalar.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::Monomial;

type Sparse = BTreeMap<Monomial, FieldElement>;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Omega,
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '+' => out.push(Token::Plus),
            '-' | '−' => out.push(Token::Minus),
            '*' | '·' => out.push(Token::Star),
            '/' => out.push(Token::Slash),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            'w' | 'ω' => out.push(Token::Omega),
            'x' => out.push(Token::Var(0)),
            'y' => out.push(Token::Var(1)),
            'z' => out.push(Token::Var(2)),
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..=i].iter().collect();
                out.push(Token::Int(lit.parse().expect("digits")));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn scalar(c: FieldElement) -> Sparse {
    let mut m = Sparse::new();
    if !c.is_zero() {
        m.insert(Monomial(0, 0, 0), c);
    }
    m
}

fn as_scalar(p: &Sparse) -> Option<FieldElement> {
    match p.len() {
        0 => Some(FieldElement::zero()),
        1 => p.get(&Monomial(0, 0, 0)).cloned(),
        _ => None,
    }
}

fn add_into(acc: &mut Sparse, other: &Sparse, negate: bool) {
    for (m, c) in other {
        let e = acc.entry(*m).or_default();
        if negate {
            *e -= c;
        } else {
            *e += c;
        }
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut acc = Sparse::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            let e = acc.entry(m1.mul(m2)).or_default();
            *e += &(c1 * c2);
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            let negate = match t {
                Token::Plus => false,
                Token::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            add_into(&mut acc, &rhs, negate);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.unary()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Star => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = mul(&acc, &rhs);
                }
                Token::Slash => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let d = as_scalar(&rhs)
                        .ok_or_else(|| Error::Parse("division by a non-scalar".into()))?;
                    let inv = d.inverse().map_err(|_| Error::Parse("division by zero".into()))?;
                    acc = mul(&acc, &scalar(inv));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                let inner = self.unary()?;
                let mut out = Sparse::new();
                add_into(&mut out, &inner, true);
                Ok(out)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let e = match self.next() {
                Some(Token::Int(n)) => u32::try_from(n)
                    .map_err(|_| Error::Parse("exponent out of range".into()))?,
                other => return Err(Error::Parse(format!("expected exponent, got {other:?}"))),
            };
            let mut acc = scalar(FieldElement::one());
            for _ in 0..e {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse> {
        match self.next() {
            Some(Token::Int(n)) => Ok(scalar(FieldElement::rational(BigRational::from_integer(n)))),
            Some(Token::Omega) => Ok(scalar(FieldElement::omega())),
            Some(Token::Var(i)) => {
                let mut e = [0; 3];
                e[i] = 1;
                let mut m = Sparse::new();
                m.insert(Monomial::from_exps(e), FieldElement::one());
                Ok(m)
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    other => Err(Error::Parse(format!("expected ')', got {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression in `x, y, z` with coefficients in `Q(w)`; degrees
/// may be mixed at this stage.
pub fn parse_polynomial(s: &str) -> Result<Vec<(Monomial, FieldElement)>> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out.into_iter().collect())
}

pub fn parse_scalar(s: &str) -> Result<FieldElement> {
    let terms = parse_polynomial(s)?;
    let map: Sparse = terms.into_iter().collect();
    as_scalar(&map).ok_or_else(|| Error::Parse(format!("{s:?} is not a field element")))
}
