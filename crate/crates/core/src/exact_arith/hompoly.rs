//! Sparse homogeneous polynomials in `x0, x1, x2`.
//!
//! Besides ring arithmetic this provides exact division and a gcd. The gcd
//! strips monomial content, dehomogenizes at `x0 = 1` and runs a primitive
//! remainder sequence in `Q[x1][x2]`; that is all the multivariate machinery
//! the chart-function field needs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{power_text, write_terms};
use super::unipoly::UniPoly;
use super::Rational;
use crate::error::{Error, Result};

pub type Exp = [u32; 3];
pub type Point3 = [Rational; 3];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly3 {
    degree: u32,
    terms: BTreeMap<Exp, Rational>,
}

fn exp_degree(e: &Exp) -> u32 {
    e[0] + e[1] + e[2]
}

impl HomPoly3 {
    pub fn zero(degree: u32) -> Self {
        HomPoly3 {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn monomial(c: Rational, e: Exp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        HomPoly3 {
            degree: exp_degree(&e),
            terms,
        }
    }

    /// Builds from `(coefficient, exponent)` pairs; fails if the exponents do
    /// not all have the same total degree.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Exp)>,
    {
        let mut p = Self::zero(degree);
        for (c, e) in terms {
            if exp_degree(&e) != degree {
                return Err(Error::DegreeMismatch(format!(
                    "monomial {e:?} in a form of degree {degree}"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Integer-coefficient shorthand, mostly for tests and fixed data.
    pub fn from_int_terms(terms: &[(i64, Exp)]) -> Self {
        let d = terms.first().map(|(_, e)| exp_degree(e)).unwrap_or(0);
        Self::from_terms(
            d,
            terms
                .iter()
                .map(|(c, e)| (Rational::from_integer((*c).into()), *e)),
        )
        .expect("homogeneous terms")
    }

    fn add_term(&mut self, e: Exp, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0 || self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exp) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest term in lexicographic order with `x0 > x1 > x2`.
    pub fn leading_term(&self) -> Option<(&Exp, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        HomPoly3 {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Scales so the lexicographic leading coefficient is one.
    pub fn normalized(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, p: &Point3) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t *= &p[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// `h(P + tQ)` as a polynomial in `t`.
    pub fn restrict_to_line(&self, p: &Point3, q: &Point3) -> Result<UniPoly> {
        if independent(p, q).is_none() {
            return Err(Error::DependentPoints);
        }
        Ok(self.restrict_unchecked(p, q))
    }

    pub(crate) fn restrict_unchecked(&self, p: &Point3, q: &Point3) -> UniPoly {
        let lin: Vec<UniPoly> = (0..3)
            .map(|i| UniPoly::from_coeffs(vec![p[i].clone(), q[i].clone()]))
            .collect();
        let mut powers: Vec<Vec<UniPoly>> = vec![vec![UniPoly::one()]; 3];
        let mut acc = UniPoly::zero();
        for (e, c) in &self.terms {
            let mut t = UniPoly::constant(c.clone());
            for i in 0..3 {
                while powers[i].len() <= e[i] as usize {
                    let next = &powers[i][powers[i].len() - 1] * &lin[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e[i] as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `h(T y)` for a 3x3 matrix `T` (rows indexed by the old variables).
    pub fn substitute_linear(&self, t: &[[Rational; 3]; 3]) -> Self {
        let forms: Vec<HomPoly3> = (0..3)
            .map(|i| {
                HomPoly3::from_terms(
                    1,
                    (0..3).map(|j| {
                        let mut e = [0; 3];
                        e[j] = 1;
                        (t[i][j].clone(), e)
                    }),
                )
                .expect("linear")
            })
            .collect();
        let mut acc = Self::zero(self.degree);
        for (e, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for i in 0..3 {
                term = &term * &forms[i].pow(e[i]);
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Exp {
        let mut m = [u32::MAX; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                m[i] = m[i].min(e[i]);
            }
        }
        if self.is_zero() {
            [0; 3]
        } else {
            m
        }
    }

    /// Divides by the monomial `x^e`, which must divide every term.
    pub fn div_monomial(&self, m: &Exp) -> Self {
        HomPoly3 {
            degree: self.degree - exp_degree(m),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] - m[0], e[1] - m[1], e[2] - m[2]], c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Exp) -> Self {
        HomPoly3 {
            degree: self.degree + exp_degree(m),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] + m[0], e[1] + m[1], e[2] + m[2]], c.clone()))
                .collect(),
        }
    }

    /// Exact quotient by a nonzero form, `None` if it does not divide.
    pub fn div_exact(&self, d: &HomPoly3) -> Option<HomPoly3> {
        let (de, dc) = d.leading_term()?;
        let (de, dc_inv) = (*de, dc.recip());
        if self.is_zero() {
            return Some(Self::zero(self.degree.checked_sub(d.degree)?));
        }
        let qdeg = self.degree.checked_sub(d.degree)?;
        let mut r = self.clone();
        let mut q = Self::zero(qdeg);
        while let Some((re, rc)) = r.leading_term() {
            if (0..3).any(|i| re[i] < de[i]) {
                return None;
            }
            let te = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            let tc = rc * &dc_inv;
            for (e, c) in &d.terms {
                r.add_term([e[0] + te[0], e[1] + te[1], e[2] + te[2]], -(c * &tc));
            }
            q.add_term(te, tc);
        }
        Some(q)
    }

    /// Greatest common divisor, normalized to lexicographic leading
    /// coefficient one. `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &HomPoly3) -> Result<HomPoly3> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroGcd);
        }
        if self.is_zero() {
            return Ok(other.normalized());
        }
        if other.is_zero() {
            return Ok(self.normalized());
        }
        let ma = self.monomial_content();
        let mb = other.monomial_content();
        let m = [ma[0].min(mb[0]), ma[1].min(mb[1]), ma[2].min(mb[2])];
        let a = self.div_monomial(&ma);
        let b = other.div_monomial(&mb);
        let core = if a.is_constant() || b.is_constant() {
            HomPoly3::one()
        } else {
            let g = bivariate::gcd(&bivariate::dehomogenize(&a), &bivariate::dehomogenize(&b));
            bivariate::homogenize(&g)
        };
        Ok(core.mul_monomial(&m).normalized())
    }

    pub fn display_in<'a>(&'a self, vars: [&'a str; 3]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a HomPoly3, [&'a str; 3]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms = self.0.terms.iter().rev().map(|(e, c)| {
                    let parts: Vec<String> = (0..3)
                        .filter(|&i| e[i] > 0)
                        .map(|i| power_text(self.1[i], e[i]))
                        .collect();
                    (c, parts.join("*"))
                });
                write_terms(f, terms)
            }
        }
        D(self, vars)
    }
}

/// Cross product of two points; `None` if they are dependent.
pub fn independent(p: &Point3, q: &Point3) -> Option<Point3> {
    let c = cross(p, q);
    (!c.iter().all(|x| x.is_zero())).then_some(c)
}

pub fn cross(p: &Point3, q: &Point3) -> Point3 {
    [
        &p[1] * &q[2] - &p[2] * &q[1],
        &p[2] * &q[0] - &p[0] * &q[2],
        &p[0] * &q[1] - &p[1] * &q[0],
    ]
}

impl fmt::Display for HomPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(["x0", "x1", "x2"]))
    }
}

impl fmt::Debug for HomPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly3[{}]({self})", self.degree)
    }
}

fn check_degrees(a: &HomPoly3, b: &HomPoly3) -> u32 {
    if a.is_zero() {
        return b.degree;
    }
    if b.is_zero() {
        return a.degree;
    }
    assert_eq!(a.degree, b.degree, "adding forms of different degree");
    a.degree
}

impl Add for &HomPoly3 {
    type Output = HomPoly3;
    fn add(self, rhs: &HomPoly3) -> HomPoly3 {
        let mut out = self.clone();
        out.degree = check_degrees(self, rhs);
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &HomPoly3 {
    type Output = HomPoly3;
    fn sub(self, rhs: &HomPoly3) -> HomPoly3 {
        self + &(-rhs)
    }
}

impl Neg for &HomPoly3 {
    type Output = HomPoly3;
    fn neg(self) -> HomPoly3 {
        HomPoly3 {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &HomPoly3 {
    type Output = HomPoly3;
    fn mul(self, rhs: &HomPoly3) -> HomPoly3 {
        let mut out = HomPoly3::zero(self.degree + rhs.degree);
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                out.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], c * d);
            }
        }
        out
    }
}

/// Polynomials in `Q[x1][x2]`: index is the `x2` exponent, entries are
/// polynomials in `x1`.
mod bivariate {
    use super::*;

    pub(super) type Bi = Vec<UniPoly>;

    fn trim(mut a: Bi) -> Bi {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub(super) fn dehomogenize(h: &HomPoly3) -> Bi {
        let mut coeffs: Vec<Vec<Rational>> = Vec::new();
        for (e, c) in h.terms() {
            let (i, j) = (e[2] as usize, e[1] as usize);
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Vec::new());
            }
            if coeffs[i].len() <= j {
                coeffs[i].resize(j + 1, Rational::zero());
            }
            coeffs[i][j] += c;
        }
        trim(coeffs.into_iter().map(UniPoly::from_coeffs).collect())
    }

    pub(super) fn homogenize(b: &Bi) -> HomPoly3 {
        let d = b
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.degree().map(|j| i + j))
            .max()
            .unwrap_or(0) as u32;
        let mut out = HomPoly3::zero(d);
        for (i, p) in b.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                out.add_term([d - i as u32 - j as u32, j as u32, i as u32], c.clone());
            }
        }
        out
    }

    fn content(a: &Bi) -> UniPoly {
        a.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
    }

    fn div_content(a: &Bi, c: &UniPoly) -> Bi {
        a.iter()
            .map(|p| p.div_exact(c).expect("content divides"))
            .collect()
    }

    fn mul_scalar(a: &Bi, c: &UniPoly) -> Bi {
        trim(a.iter().map(|p| p * c).collect())
    }

    /// Pseudo-remainder of `a` by `b` with respect to `x2`.
    fn prem(a: &Bi, b: &Bi) -> Bi {
        let db = b.len() - 1;
        let lb = &b[db];
        let mut r = a.clone();
        while r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            r = mul_scalar(&r, lb);
            let mut r2 = r.clone();
            for (k, bk) in b.iter().enumerate() {
                r2[k + shift] = &r2[k + shift] - &(&lr * bk);
            }
            r = trim(r2);
        }
        r
    }

    pub(super) fn gcd(a: &Bi, b: &Bi) -> Bi {
        let ca = content(a);
        let cb = content(b);
        let c = ca.gcd(&cb);
        let mut p = div_content(a, &ca);
        let mut q = div_content(b, &cb);
        if p.len() < q.len() {
            std::mem::swap(&mut p, &mut q);
        }
        let core = loop {
            if q.len() == 1 {
                // q is a nonzero polynomial in x1 alone, hence a unit after
                // taking primitive parts.
                break vec![UniPoly::one()];
            }
            let r = prem(&p, &q);
            if r.is_empty() {
                break q;
            }
            let rc = content(&r);
            p = q;
            q = div_content(&r, &rc);
        };
        mul_scalar(&core, &c)
    }
}
