//! Rational functions on the projective plane: quotients of forms of equal
//! degree, kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::Field;
use super::hompoly::{Exp, HomPoly3, Point3};
use super::ratfunc::RatFunc;
use super::Rational;
use crate::error::{Error, Result};

/// `num / den` with `deg num = deg den`, `gcd(num, den) = 1` and `den`
/// normalized to lexicographic leading coefficient one. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomRatio {
    num: HomPoly3,
    den: HomPoly3,
}

impl HomRatio {
    pub fn new(num: HomPoly3, den: HomPoly3) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !num.is_zero() && num.degree() != den.degree() {
            return Err(Error::DegreeMismatch(format!(
                "numerator of degree {} over denominator of degree {}",
                num.degree(),
                den.degree()
            )));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: HomPoly3, den: HomPoly3) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut n, mut d) = (num, den);
        // Cheap monomial cancellation first; it covers most chart data.
        let mn = n.monomial_content();
        let md = d.monomial_content();
        let m = [mn[0].min(md[0]), mn[1].min(md[1]), mn[2].min(md[2])];
        if m != [0, 0, 0] {
            n = n.div_monomial(&m);
            d = d.div_monomial(&m);
        }
        if !n.is_constant() && !d.is_constant() && !is_monomial(&d) && !is_monomial(&n) {
            let g = n.gcd(&d).expect("nonzero");
            if !g.is_constant() {
                n = n.div_exact(&g).expect("gcd divides");
                d = d.div_exact(&g).expect("gcd divides");
            }
        }
        let lc = d.leading_term().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        HomRatio { num: n, den: d }
    }

    pub fn zero() -> Self {
        HomRatio {
            num: HomPoly3::zero(0),
            den: HomPoly3::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        HomRatio {
            num: HomPoly3::constant(c),
            den: HomPoly3::one(),
        }
    }

    /// `x_i / x_j`.
    pub fn var_ratio(i: usize, j: usize) -> Self {
        Self::reduce(HomPoly3::var(i), HomPoly3::var(j))
    }

    /// `h / x_i^deg h`, the dehomogenization of `h` on the chart `x_i != 0`.
    pub fn on_chart(h: &HomPoly3, i: usize) -> Self {
        let mut e: Exp = [0; 3];
        e[i] = h.degree();
        Self::reduce(h.clone(), HomPoly3::monomial(Rational::one(), e))
    }

    pub fn num(&self) -> &HomPoly3 {
        &self.num
    }

    pub fn den(&self) -> &HomPoly3 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        (self.num.is_constant() && self.den.is_constant())
            .then(|| self.num.coeff(&[0, 0, 0]) / self.den.coeff(&[0, 0, 0]))
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::reduce(self.den.clone(), self.num.clone()))
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, p: &Point3) -> Option<Rational> {
        let d = self.den.eval(p);
        (!d.is_zero()).then(|| self.num.eval(p) / d)
    }

    /// Restriction to the line `t -> P + tQ`; fails when the denominator
    /// vanishes identically there.
    pub fn restrict_to_line(&self, p: &Point3, q: &Point3) -> Result<RatFunc> {
        let d = self.den.restrict_to_line(p, q)?;
        if d.is_zero() {
            return Err(Error::Input(format!("{self} is undefined along the line")));
        }
        RatFunc::new(self.num.restrict_unchecked(p, q), d)
    }

    /// Pull-back along `x = T y`.
    pub fn substitute_linear(&self, t: &[[Rational; 3]; 3]) -> Self {
        Self::reduce(self.num.substitute_linear(t), self.den.substitute_linear(t))
    }

    /// Writes the function in the affine coordinates of chart `i`, i.e. with
    /// `x_i = 1`, as a Laurent polynomial when the denominator is a monomial
    /// times a constant. Keys are exponents of the two remaining variables
    /// in increasing index order.
    pub fn chart_laurent(&self, i: usize) -> Option<Vec<([i64; 2], Rational)>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        if self.den.num_terms() != 1 {
            return None;
        }
        let (de, dc) = self.den.leading_term().expect("nonzero");
        let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let mut out = Vec::new();
        for (e, c) in self.num.terms() {
            let key = [
                e[others[0]] as i64 - de[others[0]] as i64,
                e[others[1]] as i64 - de[others[1]] as i64,
            ];
            out.push((key, c / dc));
        }
        out.sort_by_key(|t| t.0);
        Some(out)
    }

    pub fn display_in<'a>(&'a self, vars: [&'a str; 3]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a HomRatio, [&'a str; 3]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.den.is_constant() {
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
        D(self, vars)
    }
}

fn is_monomial(h: &HomPoly3) -> bool {
    h.num_terms() == 1
}

impl fmt::Display for HomRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(["x0", "x1", "x2"]))
    }
}

impl fmt::Debug for HomRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomRatio({self})")
    }
}

impl Add for &HomRatio {
    type Output = HomRatio;
    fn add(self, rhs: &HomRatio) -> HomRatio {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return HomRatio::reduce(&self.num + &rhs.num, self.den.clone());
        }
        HomRatio::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &HomRatio {
    type Output = HomRatio;
    fn neg(self) -> HomRatio {
        HomRatio {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &HomRatio {
    type Output = HomRatio;
    fn sub(self, rhs: &HomRatio) -> HomRatio {
        self + &(-rhs)
    }
}

impl Mul for &HomRatio {
    type Output = HomRatio;
    fn mul(self, rhs: &HomRatio) -> HomRatio {
        if self.is_zero() || rhs.is_zero() {
            return HomRatio::zero();
        }
        HomRatio::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Field for HomRatio {
    fn zero() -> Self {
        HomRatio::zero()
    }
    fn one() -> Self {
        HomRatio::constant(Rational::one())
    }
    fn from_rational(q: Rational) -> Self {
        HomRatio::constant(q)
    }
    fn is_zero(&self) -> bool {
        HomRatio::is_zero(self)
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
        HomRatio::inv(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::rat;

    #[test]
    fn ratios_cancel_to_canonical_form() {
        let l = HomPoly3::from_int_terms(&[(1, [1, 0, 0]), (1, [0, 1, 0])]);
        let m = HomPoly3::from_int_terms(&[(2, [1, 0, 0]), (-1, [0, 0, 1])]);
        let a = HomRatio::new(&l * &HomPoly3::var(1), &m * &HomPoly3::var(1)).unwrap();
        let b = HomRatio::new(l.scale(&rat(3)), m.scale(&rat(3))).unwrap();
        assert_eq!(a, b);
        let q = HomRatio::new(&l * &m, &m * &l).unwrap();
        assert_eq!(q, Field::one());
    }

    #[test]
    fn chart_coordinates() {
        // x0/x1 * x2/x1 = x10 * x12 on chart 1.
        let f = &HomRatio::var_ratio(0, 1) * &HomRatio::var_ratio(2, 1);
        assert_eq!(f.chart_laurent(1), Some(vec![([1, 1], rat(1))]));
        let g = HomRatio::var_ratio(1, 2);
        assert_eq!(g.chart_laurent(1), Some(vec![([0, -1], rat(1))]));
    }

    #[test]
    fn field_arithmetic_round_trip() {
        let a = HomRatio::var_ratio(0, 2);
        let b = HomRatio::on_chart(
            &HomPoly3::from_int_terms(&[(1, [2, 0, 0]), (1, [0, 1, 1])]),
            2,
        );
        let c = &(&a + &b) - &b;
        assert_eq!(c, a);
        let inv = b.inv().unwrap();
        assert_eq!(&b * &inv, Field::one());
    }

    #[test]
    fn restriction_to_line() {
        let f = HomRatio::var_ratio(1, 2);
        let p = [rat(0), rat(1), rat(0)];
        let q = [rat(0), rat(0), rat(1)];
        assert_eq!(f.restrict_to_line(&p, &q).unwrap(), RatFunc::x_pow(-1));
        assert!(HomRatio::var_ratio(0, 1)
            .restrict_to_line(&[rat(1), rat(0), rat(0)], &q)
            .is_err());
    }
}
