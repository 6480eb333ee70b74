//! Polynomial expressions: a small recursive-descent parser and a renderer
//! whose output the parser reads back to the same polynomial.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := rational | var | '(' expr ')'
//! ```
//!
//! Rational literals are `p` or `p/q` written without spaces; decimals are
//! rejected. Whitespace is otherwise insignificant.

use std::collections::BTreeMap;
use std::fmt;

use dcover_core::exact_arith::rational::parse_rational;
use dcover_core::exact_arith::{HomPoly3, Rational, UniPoly};
use num_traits::{One, Signed, Zero};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 512;

/// Variables of a projective plane chart-free expression.
pub const PLANE_VARS: [&str; 3] = ["x0", "x1", "x2"];
/// The affine coordinate on the projective line.
pub const LINE_VARS: [&str; 1] = ["x"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at position {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyExpr {
    Const(Rational),
    Var(usize),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    pub fn eval(&self, nvars: usize) -> Poly {
        match self {
            PolyExpr::Const(c) => Poly::constant(nvars, c.clone()),
            PolyExpr::Var(i) => Poly::var(nvars, *i),
            PolyExpr::Neg(a) => a.eval(nvars).neg(),
            PolyExpr::Add(a, b) => a.eval(nvars).add(&b.eval(nvars)),
            PolyExpr::Sub(a, b) => a.eval(nvars).add(&b.eval(nvars).neg()),
            PolyExpr::Mul(a, b) => a.eval(nvars).mul(&b.eval(nvars)),
            PolyExpr::Pow(a, e) => a.eval(nvars).pow(*e),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
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

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let d = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if d == i {
                        return err(d, "expected a denominator after '/'");
                    }
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return err(i, "decimal literals are not accepted; write p/q");
                }
                match parse_rational(&text[start..i]) {
                    Some(q) => out.push((start, Tok::Num(q))),
                    None => return err(start, "zero denominator"),
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'/' => return err(start, "'/' is only allowed inside a rational literal p/q"),
            _ => {
                let ch = text[start..].chars().next().expect("in bounds");
                return err(start, format!("unexpected character '{ch}'"));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    /// Error for a missing operand: at end of input it points at the
    /// operator that is left dangling.
    fn missing(&self, what: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((p, t)) => ParseError {
                position: *p,
                message: format!("expected {what}, found '{t}'"),
            },
            None => {
                let (p, t) = self
                    .toks
                    .get(self.pos.wrapping_sub(1))
                    .map_or((0, None), |(p, t)| (*p, Some(t)));
                ParseError {
                    position: p,
                    message: match t {
                        Some(t) => format!("expected {what} after '{t}'"),
                        None => "empty expression".into(),
                    },
                }
            }
        }
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            PolyExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = PolyExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = PolyExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = PolyExpr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.toks.get(self.pos).cloned() {
            Some((p, Tok::Num(n))) => {
                if !n.is_integer() {
                    return err(p, "exponents must be nonnegative integers");
                }
                let e = n.to_integer();
                let e: u32 = match e.try_into() {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return err(p, format!("exponent larger than {MAX_EXPONENT}")),
                };
                self.pos += 1;
                Ok(PolyExpr::Pow(Box::new(base), e))
            }
            Some((p, Tok::Minus)) => err(p, "exponents must be nonnegative integers"),
            _ => Err(self.missing("an exponent")),
        }
    }

    fn base(&mut self) -> Result<PolyExpr, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(PolyExpr::Const(n))
            }
            Some((p, Tok::Ident(name))) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(PolyExpr::Var(i))
                }
                None => err(
                    p,
                    format!(
                        "undeclared variable '{name}' (declared: {})",
                        self.vars.join(", ")
                    ),
                ),
            },
            Some((p, Tok::LParen)) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return match self.peek() {
                        Some(_) => Err(self.missing("')'")),
                        None => err(p, "unclosed '('"),
                    };
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.missing("a number, a variable or '('")),
        }
    }
}

/// Parses `text` over the declared variables.
pub fn parse_expr(text: &str, vars: &[&str]) -> Result<PolyExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
        vars,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let t = &p.toks[p.pos].1;
        return err(
            p.offset(),
            format!("unexpected '{t}' after a complete expression"),
        );
    }
    Ok(e)
}

/// Parses and expands `text` into a sparse polynomial.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<Poly, ParseError> {
    Ok(parse_expr(text, vars)?.eval(vars.len()))
}

/// Sparse polynomial over `nvars` variables with rational coefficients.
/// No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, [(e, Rational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common total degree of all terms, if there is one. The zero
    /// polynomial is homogeneous of every degree and reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|x| x == d).then_some(d),
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Converts to a form on the projective plane; fails unless the
    /// polynomial is homogeneous in three variables.
    pub fn to_hom(&self) -> Result<HomPoly3, String> {
        if self.nvars != 3 {
            return Err(format!("expected 3 variables, got {}", self.nvars));
        }
        let d = self
            .homogeneous_degree()
            .ok_or_else(|| format!("'{}' is not homogeneous", self.render(&PLANE_VARS)))?;
        HomPoly3::from_terms(
            d,
            self.terms
                .iter()
                .map(|(e, c)| (c.clone(), [e[0], e[1], e[2]])),
        )
        .map_err(|e| e.to_string())
    }

    pub fn from_hom(p: &HomPoly3) -> Self {
        Self::from_terms(3, p.terms().map(|(e, c)| (e.to_vec(), c.clone())))
    }

    pub fn to_uni(&self) -> Result<UniPoly, String> {
        if self.nvars != 1 {
            return Err(format!("expected 1 variable, got {}", self.nvars));
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        Ok(UniPoly::from_coeffs(coeffs))
    }

    pub fn from_uni(p: &UniPoly) -> Self {
        Self::from_terms(
            1,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c.clone())),
        )
    }

    /// Terms by decreasing total degree, then decreasing exponents.
    fn ordered(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }

    /// Renders in the grammar accepted by [`parse_poly`].
    pub fn render(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.ordered().into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let c = c.abs();
            let factors: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(p, _)| **p > 0)
                .map(|(p, v)| {
                    if *p == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{p}")
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&c.to_string());
            } else {
                if !c.is_one() {
                    out.push_str(&c.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}
