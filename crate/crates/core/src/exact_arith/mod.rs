//! Exact arithmetic over Q: rationals, univariate polynomials and rational
//! functions, ternary forms, 2x2 matrices, and the few derived operations
//! (lowest common denominators, open-set separation, nullspaces) that the
//! bundle algorithms are written in terms of.

mod field;
mod hompoly;
mod homratio;
mod linalg;
mod mat2;
mod ratfunc;
pub mod rational;
mod unipoly;

pub use field::Field;
pub use hompoly::{cross, independent, Exp, HomPoly3, Point3};
pub use homratio::HomRatio;
pub use linalg::{nullspace, rank, rref};
pub use mat2::Mat2;
pub use ratfunc::{RatFunc, Valuation};
pub use unipoly::UniPoly;

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// The open set `{h != 0}` of the affine line, `h` squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedOpen {
    h: UniPoly,
}

impl DistinguishedOpen {
    pub fn new(h: UniPoly) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroInput("distinguished open"));
        }
        if !h.gcd(&h.derivative()).is_constant() {
            return Err(Error::NotSquarefree);
        }
        Ok(DistinguishedOpen { h: h.monic() })
    }

    /// The whole affine line.
    pub fn everything() -> Self {
        DistinguishedOpen { h: UniPoly::one() }
    }

    pub fn h(&self) -> &UniPoly {
        &self.h
    }

    /// Part of `p` supported on the zeros of `h`, as a monic polynomial.
    fn support_part(&self, p: &UniPoly) -> UniPoly {
        let mut rest = p.clone();
        let mut part = UniPoly::one();
        loop {
            let g = rest.gcd(&self.h);
            if g.is_constant() {
                return part;
            }
            rest = rest.div_exact(&g).expect("gcd divides");
            part = &part * &g;
        }
    }

    /// True if `p` has no zero in the open set.
    pub fn is_unit_poly(&self, p: &UniPoly) -> bool {
        !p.is_zero() && self.support_part(p).deg() == p.deg()
    }

    /// True if `f` is regular and nowhere zero on the open set.
    pub fn is_unit(&self, f: &RatFunc) -> bool {
        self.is_unit_poly(f.num()) && self.is_unit_poly(f.den())
    }

    /// True if `f` has no pole in the open set.
    pub fn is_regular(&self, f: &RatFunc) -> bool {
        self.is_unit_poly(f.den())
    }
}

/// Splits a nonzero `a` as `D * N`, where `D` collects the zeros and poles of
/// `a` outside the open set (monic numerator and denominator) and `N` those
/// inside.
pub fn separate(u: &DistinguishedOpen, a: &RatFunc) -> Result<(RatFunc, RatFunc)> {
    if a.is_zero() {
        return Err(Error::ZeroInput("separation"));
    }
    let d = RatFunc::new(u.support_part(a.num()), u.support_part(a.den()))?;
    let n = a * &d.inv().expect("nonzero");
    Ok((d, n))
}

/// `gcd(numerators) / lcm(denominators)` over the nonzero entries.
pub fn lcd_x(g: &Mat2<RatFunc>) -> Result<RatFunc> {
    let mut num = UniPoly::zero();
    let mut den = UniPoly::one();
    let mut any = false;
    for e in g.entries().filter(|e| !e.is_zero()) {
        any = true;
        num = num.gcd(e.num());
        den = den.lcm(e.den());
    }
    if !any {
        return Err(Error::ZeroInput("lowest common denominator"));
    }
    RatFunc::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rational::rat;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(UniPoly::from_ints(n), UniPoly::from_ints(d)).unwrap()
    }

    #[test]
    fn separate_splits_support() {
        // U = {x != 0}; a = x^2 (x - 1) / (x + 1)^3
        let u = DistinguishedOpen::new(UniPoly::from_ints(&[0, 1])).unwrap();
        let a = rf(&[0, 0, -1, 1], &[1, 3, 3, 1]);
        let (d, n) = separate(&u, &a).unwrap();
        assert_eq!(d, RatFunc::x_pow(2));
        assert_eq!(n, rf(&[-1, 1], &[1, 3, 3, 1]));
        assert_eq!(&d * &n, a);
        assert_eq!(
            separate(&u, &RatFunc::zero()),
            Err(Error::ZeroInput("separation"))
        );
    }

    #[test]
    fn separate_is_multiplicative() {
        let u = DistinguishedOpen::new(UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        let a = rf(&[-2, 1, 1], &[3, 1]);
        let b = rf(&[0, 1], &[-2, 0, 1]);
        let (da, na) = separate(&u, &a).unwrap();
        let (db, nb) = separate(&u, &b).unwrap();
        let (dab, nab) = separate(&u, &(&a * &b)).unwrap();
        assert_eq!(dab, &da * &db);
        assert_eq!(nab, &na * &nb);
    }

    #[test]
    fn lcd_examples() {
        let g = Mat2::new(
            rf(&[0, 0, 2], &[1]),
            rf(&[0, 1], &[1, 1]),
            RatFunc::zero(),
            rf(&[0, 0, 0, 1], &[1]),
        );
        let l = lcd_x(&g).unwrap();
        assert_eq!(l, rf(&[0, 1], &[1, 1]));
        let scaled = g.scale(&l.inv().unwrap());
        assert!(scaled.entries().all(|e| e.is_polynomial()));
        assert!(lcd_x(&Mat2::<RatFunc>::new(
            RatFunc::zero(),
            RatFunc::zero(),
            RatFunc::zero(),
            RatFunc::zero()
        ))
        .is_err());
    }

    #[test]
    fn distinguished_open_rejects_squares() {
        assert_eq!(
            DistinguishedOpen::new(UniPoly::from_ints(&[1, 2, 1])),
            Err(Error::NotSquarefree)
        );
        assert!(DistinguishedOpen::new(UniPoly::from_ints(&[0, 0, 0])).is_err());
        let u = DistinguishedOpen::new(UniPoly::from_ints(&[-1, 1])).unwrap();
        assert!(u.is_unit(&rf(&[-1, 1], &[1])));
        assert!(!u.is_unit(&rf(&[0, 1], &[1])));
        assert!(u.is_unit(&RatFunc::constant(rat(5))));
    }
}
