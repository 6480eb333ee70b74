//! 2x2 matrices over any [`Field`].

use std::fmt;

use super::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2<F> {
    pub m: [[F; 2]; 2],
}

impl<F: Field> Mat2<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Self {
        Mat2 {
            m: [[a, b], [c, d]],
        }
    }

    pub fn identity() -> Self {
        Self::new(F::one(), F::zero(), F::zero(), F::one())
    }

    /// The swap matrix `[[0, 1], [1, 0]]`.
    pub fn swap() -> Self {
        Self::new(F::zero(), F::one(), F::one(), F::zero())
    }

    pub fn diag(a: F, d: F) -> Self {
        Self::new(a, F::zero(), F::zero(), d)
    }

    pub fn scalar(c: F) -> Self {
        Self::diag(c.clone(), c)
    }

    /// `[[1, s], [0, 1]]`.
    pub fn upper(s: F) -> Self {
        Self::new(F::one(), s, F::zero(), F::one())
    }

    /// `[[1, 0], [s, 1]]`.
    pub fn lower(s: F) -> Self {
        Self::new(F::one(), F::zero(), s, F::one())
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.m[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.m.iter().flatten()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat2<G> {
        Mat2 {
            m: [
                [f(&self.m[0][0]), f(&self.m[0][1])],
                [f(&self.m[1][0]), f(&self.m[1][1])],
            ],
        }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Mat2<G>, E> {
        Ok(Mat2 {
            m: [
                [f(&self.m[0][0])?, f(&self.m[0][1])?],
                [f(&self.m[1][0])?, f(&self.m[1][1])?],
            ],
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| {
            self.m[i][0]
                .mul(&o.m[0][j])
                .add(&self.m[i][1].mul(&o.m[1][j]))
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn add(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.m[i][j].add(&o.m[i][j]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.m[i][j].sub(&o.m[i][j]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn det(&self) -> F {
        self.m[0][0]
            .mul(&self.m[1][1])
            .sub(&self.m[0][1].mul(&self.m[1][0]))
    }

    pub fn trace(&self) -> F {
        self.m[0][0].add(&self.m[1][1])
    }

    pub fn inverse(&self) -> Option<Self> {
        let di = self.det().inv()?;
        let [[a, b], [c, d]] = &self.m;
        Some(Self::new(
            d.mul(&di),
            b.neg().mul(&di),
            c.neg().mul(&di),
            a.mul(&di),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn apply(&self, v: &[F; 2]) -> [F; 2] {
        [
            self.m[0][0].mul(&v[0]).add(&self.m[0][1].mul(&v[1])),
            self.m[1][0].mul(&v[0]).add(&self.m[1][1].mul(&v[1])),
        ]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(|x| x.is_zero())
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(it: impl IntoIterator<Item = &'a Self>) -> Self {
        it.into_iter().fold(Self::identity(), |acc, m| acc.mul(m))
    }
}

impl<F: fmt::Debug> fmt::Debug for Mat2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:?}, {:?}], [{:?}, {:?}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl<F: fmt::Display> fmt::Display for Mat2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rational::rat, RatFunc};

    #[test]
    fn inverse_and_det() {
        let x = RatFunc::x();
        let m = Mat2::new(x.clone(), RatFunc::one(), RatFunc::zero(), x.clone());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(m.det(), &x * &x);
        let s: Mat2<RatFunc> = Mat2::swap();
        assert_eq!(s.det(), RatFunc::constant(rat(-1)));
        assert!(s.mul(&s).is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m: Mat2<RatFunc> = Mat2::new(
            RatFunc::one(),
            RatFunc::one(),
            RatFunc::one(),
            RatFunc::one(),
        );
        assert!(m.inverse().is_none());
    }
}
