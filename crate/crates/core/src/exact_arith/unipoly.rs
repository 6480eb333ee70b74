//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{power_text, rational_sqrt, write_terms};
use super::Rational;
use crate::error::{Error, Result};

/// Coefficients in ascending order; never has a trailing zero, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_coeffs(
            cs.iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Largest `k` with `x^k` dividing `self`; `None` for zero.
    pub fn trailing_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: v }
    }

    /// Divides by `x^k`, discarding lower terms.
    pub fn unshift(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// `x^n p(1/x)`; requires `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Self {
        debug_assert!(self.deg() <= n as i64);
        let mut v = vec![Rational::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        Self::from_coeffs(v)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division `self = q*d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    pub fn quot(&self, d: &UniPoly) -> Result<UniPoly> {
        self.div_rem(d).map(|(q, _)| q)
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Monic gcd; `gcd(0, 0)` is zero.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        // Primitive remainder sequence over Z: Euclid over Q lets the
        // coefficient sizes explode.
        let (mut a, mut b) = (primitive_integer(self), primitive_integer(other));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive_pseudo_rem(&a, &b);
            a = b;
            b = r;
        }
        Self::from_coeffs(a.into_iter().map(Rational::from_integer).collect()).monic()
    }

    /// Monic `g = gcd(a, b)` together with `u, v` such that `g = u*a + v*b`.
    pub fn ext_gcd(a: &UniPoly, b: &UniPoly) -> Result<(UniPoly, UniPoly, UniPoly)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroGcd);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let lc = r0.leading_coeff().expect("nonzero").recip();
        Ok((r0.scale(&lc), s0.scale(&lc), t0.scale(&lc)))
    }

    /// Monic lcm; zero if either argument is zero.
    pub fn lcm(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * other).div_exact(&g).expect("gcd divides").monic()
    }

    /// Monic squarefree part `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return if self.is_zero() {
                Self::zero()
            } else {
                Self::one()
            };
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// The polynomial `q` with positive leading coefficient and `q^2 = self`,
    /// if it exists over Q.
    pub fn sqrt_poly(&self) -> Option<UniPoly> {
        let Some(n) = self.degree() else {
            return Some(Self::zero());
        };
        if n % 2 == 1 {
            return None;
        }
        let m = n / 2;
        let top = rational_sqrt(&self.coeffs[n])?;
        let two_top = &top * Rational::from_integer(2.into());
        let mut q = vec![Rational::zero(); m + 1];
        q[m] = top;
        // Coefficient of x^(m+k) in q^2 determines q_k once q_(k+1..m) are known.
        for k in (0..m).rev() {
            let mut s = self.coeffs[m + k].clone();
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    s -= &q[i] * &q[j];
                }
            }
            q[k] = s / &two_top;
        }
        let q = Self::from_coeffs(q);
        (&q * &q == *self).then_some(q)
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a UniPoly, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms = self
                    .0
                    .coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (c, power_text(self.1, i as u32)));
                write_terms(f, terms)
            }
        }
        D(self, var)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

/// Integer multiple of `p` with coprime coefficients.
fn primitive_integer(p: &UniPoly) -> Vec<BigInt> {
    let den = p.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    primitive_part(ints)
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    v
}

/// Primitive part of the pseudo-remainder of `a` by `b` (both nonzero).
fn primitive_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().expect("nonempty").clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &lr * bi;
        }
        r.pop();
        r = primitive_part(r);
    }
    primitive_part(r)
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{rat, ratio};
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::from_ints(cs)
    }

    #[test]
    fn ext_gcd_of_coprime_linears() {
        // x^2 - 1 and x - 1 share x - 1; u*a + v*b must reproduce it.
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (g, u, v) = UniPoly::ext_gcd(&a, &b).unwrap();
        assert_eq!(g, p(&[-1, 1]));
        assert_eq!(&(&u * &a) + &(&v * &b), g);
    }

    #[test]
    fn ext_gcd_rejects_double_zero() {
        assert_eq!(
            UniPoly::ext_gcd(&UniPoly::zero(), &UniPoly::zero()),
            Err(Error::ZeroGcd)
        );
    }

    #[test]
    fn ext_gcd_with_one_zero_argument() {
        let a = p(&[2, 4]);
        let (g, u, v) = UniPoly::ext_gcd(&a, &UniPoly::zero()).unwrap();
        assert_eq!(g, p(&[1, 2]).monic());
        assert_eq!(&(&u * &a) + &(&v * &UniPoly::zero()), g);
    }

    #[test]
    fn sqrt_poly_cases() {
        let sq = &p(&[1, 2]) * &p(&[1, 2]);
        assert_eq!(sq.sqrt_poly(), Some(p(&[1, 2])));
        let neg = &p(&[-1, -2]) * &p(&[-1, -2]);
        assert_eq!(neg.sqrt_poly(), Some(p(&[1, 2])));
        assert_eq!(p(&[0, 0, 2]).sqrt_poly(), None);
        assert_eq!(p(&[1, 0, 0, 1]).sqrt_poly(), None);
        assert_eq!(p(&[1, 1, 1]).sqrt_poly(), None);
        let frac = UniPoly::from_coeffs(vec![ratio(1, 4), rat(0), rat(0)]);
        assert_eq!(frac.sqrt_poly(), Some(UniPoly::constant(ratio(1, 2))));
    }

    #[test]
    fn display_matches_conventional_form() {
        let q = UniPoly::from_coeffs(vec![rat(7), rat(-1), ratio(3, 2)]);
        assert_eq!(q.to_string(), "3/2*x^2 - x + 7");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(p(&[0, -1]).display_in("t").to_string(), "-t");
    }

    #[test]
    fn reverse_and_shift() {
        let q = p(&[1, 2, 3]);
        assert_eq!(q.reverse(3), p(&[0, 3, 2, 1]));
        assert_eq!(q.shift(2).unshift(2), q);
        assert_eq!(q.trailing_degree(), Some(0));
        assert_eq!(q.shift(3).trailing_degree(), Some(3));
    }

    fn small_poly() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(-6i64..=6, 0..6).prop_map(|v| UniPoly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.deg() < b.deg());
        }

        #[test]
        fn bezout_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let (g, u, v) = UniPoly::ext_gcd(&a, &b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert_eq!(&(&u * &a) + &(&v * &b), g.clone());
            prop_assert!(g.divides(&a) && g.divides(&b));
        }

        #[test]
        fn sqrt_of_square(a in small_poly()) {
            let s = (&a * &a).sqrt_poly().unwrap();
            prop_assert!(s == a || s == -&a);
        }
    }
}
