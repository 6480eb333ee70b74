//! Univariate rational functions in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::Field;
use super::unipoly::UniPoly;
use super::Rational;
use crate::error::{Error, Result};

/// Order of vanishing at a point, with the zero function at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd"),
                den.div_exact(&g).expect("gcd"),
            )
        };
        let lc = d.leading_coeff().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
        }
    }

    pub fn x() -> Self {
        Self::from_poly(UniPoly::x())
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    /// `x^k` for any integer `k`.
    pub fn x_pow(k: i64) -> Self {
        let m = UniPoly::monomial(Rational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RatFunc {
                num: UniPoly::one(),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<&UniPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Order of vanishing at `x = 0`.
    pub fn valuation_at_zero(&self) -> Valuation {
        match self.num.trailing_degree() {
            None => Valuation::Infinity,
            Some(n) => Valuation::Finite(n as i64 - self.den.trailing_degree().unwrap_or(0) as i64),
        }
    }

    /// Order of vanishing at the point at infinity, `deg den - deg num`.
    pub fn valuation_at_infinity(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.den.deg() - self.num.deg())
        }
    }

    /// True if the only possible zero or pole in the affine line is `x = 0`.
    pub fn is_laurent(&self) -> bool {
        self.den.coeffs().iter().rev().skip(1).all(|c| c.is_zero())
    }

    /// `self(1/x)`, i.e. the same function in the reciprocal coordinate.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.deg() as usize;
        let dd = self.den.deg() as usize;
        let n = dn.max(dd);
        Self::reduce(
            self.num.reverse(dn).shift(n - dn),
            self.den.reverse(dd).shift(n - dd),
        )
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a RatFunc, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.den.is_one() {
                    write!(f, "{}", self.0.num.display_in(self.1))
                } else {
                    write!(
                        f,
                        "({})/({})",
                        self.0.num.display_in(self.1),
                        self.0.den.display_in(self.1)
                    )
                }
            }
        }
        D(self, var)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g).expect("gcd");
        let b = rhs.den.div_exact(&g).expect("gcd");
        RatFunc::reduce(&(&self.num * &b) + &(&rhs.num * &a), &a * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel first so the final reduction works on smaller inputs.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd");
        let d2 = rhs.den.div_exact(&g1).expect("gcd");
        let n2 = rhs.num.div_exact(&g2).expect("gcd");
        let d1 = self.den.div_exact(&g2).expect("gcd");
        RatFunc::reduce(&n1 * &n2, &d1 * &d2)
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_rational(q: Rational) -> Self {
        RatFunc::constant(q)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
}
