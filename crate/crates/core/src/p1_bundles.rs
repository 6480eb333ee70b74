//! Rank-two bundles on the projective line and on the affine line.
//!
//! A bundle on P^1 is given by one transition matrix `G` between the chart
//! `U0 = {x finite}` (coordinate `x`) and `U1 = {y finite}`, `y = 1/x`, with
//! the convention that `G` maps `U1`-frame coordinates to `U0`-frame
//! coordinates. Under that convention `x^e` presents `O(e)`.
//!
//! [`split_p1`] computes the Birkhoff–Grothendieck splitting
//! `A_x^{-1} G A_y = diag(x^e1, x^e2)` with `A_x` invertible over `Q[x]` and
//! `A_y` invertible over `Q[y]`. [`trivialize_affine`] trivializes a cocycle
//! on a finite cover of the affine line by distinguished opens.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{
    lcd_x, separate, DistinguishedOpen, Mat2, RatFunc, Rational, UniPoly, Valuation,
};

/// `E` and the data of `E G = lcd * [[a, b], [0, d]]`, with `E` invertible
/// over `Q[x]`, `a` and `d` monic and `deg b < deg d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularForm {
    pub e_mat: Mat2<RatFunc>,
    pub lcd: RatFunc,
    pub a: UniPoly,
    pub b: UniPoly,
    pub d: UniPoly,
}

impl TriangularForm {
    /// `lcd * [[a, b], [0, d]]` as a matrix.
    pub fn triangle(&self) -> Mat2<RatFunc> {
        Mat2::new(
            RatFunc::from_poly(self.a.clone()),
            RatFunc::from_poly(self.b.clone()),
            RatFunc::zero(),
            RatFunc::from_poly(self.d.clone()),
        )
        .scale(&self.lcd)
    }
}

fn polys_of(g: &Mat2<RatFunc>) -> Result<[UniPoly; 4]> {
    let p = |e: &RatFunc| {
        e.as_polynomial().cloned().ok_or_else(|| {
            Error::Internal(format!("{e} is not a polynomial after clearing the lcd"))
        })
    };
    Ok([
        p(&g.m[0][0])?,
        p(&g.m[0][1])?,
        p(&g.m[1][0])?,
        p(&g.m[1][1])?,
    ])
}

fn poly_mat(a: UniPoly, b: UniPoly, c: UniPoly, d: UniPoly) -> Mat2<RatFunc> {
    Mat2::new(
        RatFunc::from_poly(a),
        RatFunc::from_poly(b),
        RatFunc::from_poly(c),
        RatFunc::from_poly(d),
    )
}

/// Upper-triangularizes an invertible matrix by polynomial row operations.
///
/// Rows are swapped while the top-left entry is zero or of larger degree
/// than the bottom-left one; otherwise a multiple of the top row is
/// subtracted from the bottom row to lower its degree. Ties take the
/// subtraction branch.
pub fn triangularize(g: &Mat2<RatFunc>) -> Result<TriangularForm> {
    if g.det().is_zero() {
        return Err(Error::Singular);
    }
    let lcd = lcd_x(g)?;
    let [mut a, mut b, mut c, mut d] = polys_of(&g.scale(&lcd.inv().expect("nonzero")))?;
    let mut e = Mat2::<RatFunc>::identity();
    while !c.is_zero() {
        if a.is_zero() || a.deg() > c.deg() {
            std::mem::swap(&mut a, &mut c);
            std::mem::swap(&mut b, &mut d);
            e = Mat2::swap().mul(&e);
        } else {
            let s = -&c.quot(&a)?;
            c = &c + &(&s * &a);
            d = &d + &(&s * &b);
            e = Mat2::lower(RatFunc::from_poly(s)).mul(&e);
        }
    }
    let a0 = a.leading_coeff().expect("invertible").recip();
    let d0 = d.leading_coeff().expect("invertible").recip();
    let b1 = b.scale(&a0);
    let s = -&b1.quot(&d)?;
    let b2 = &b1 + &(&s * &d);
    let last = Mat2::new(
        RatFunc::constant(a0.clone()),
        RatFunc::from_poly(s),
        RatFunc::zero(),
        RatFunc::constant(d0.clone()),
    );
    Ok(TriangularForm {
        e_mat: last.mul(&e),
        lcd,
        a: a.scale(&a0),
        b: b2,
        d: d.scale(&d0),
    })
}

/// A validated transition matrix for a bundle on P^1: entries are Laurent
/// polynomials in `x` and the determinant is `c * x^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct P1TransitionData {
    g: Mat2<RatFunc>,
}

impl P1TransitionData {
    pub fn new(g: Mat2<RatFunc>) -> Result<Self> {
        if let Some(e) = g.entries().find(|e| !e.is_laurent()) {
            return Err(Error::InvalidTransition(format!(
                "entry {e} has a pole away from 0 and infinity"
            )));
        }
        let det = g.det();
        if det.is_zero() {
            return Err(Error::InvalidTransition("determinant is zero".into()));
        }
        let monomial_num = det.num().coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if !monomial_num {
            return Err(Error::InvalidTransition(format!(
                "determinant {det} is not c*x^r"
            )));
        }
        Ok(P1TransitionData { g })
    }

    pub fn matrix(&self) -> &Mat2<RatFunc> {
        &self.g
    }

    pub fn into_matrix(self) -> Mat2<RatFunc> {
        self.g
    }
}

/// Valuation data of a Laurent transition matrix at `x = 0`.
///
/// `v` is the exponent of the lowest common denominator `x^v`; `v1`, `v2`
/// are the column valuations of `G / x^v`; `e1`, `e2` are the exponents of
/// the monic diagonal of its triangular form and `b` is the off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnInvariants {
    pub v1: i64,
    pub v2: i64,
    pub v: i64,
    pub e1: i64,
    pub e2: i64,
    pub b: UniPoly,
}

fn val(p: &UniPoly) -> Valuation {
    match p.trailing_degree() {
        Some(k) => Valuation::Finite(k as i64),
        None => Valuation::Infinity,
    }
}

fn finite(v: Valuation) -> Result<i64> {
    v.finite()
        .ok_or_else(|| Error::InvalidTransition("zero column".into()))
}

pub fn column_invariants(g: &P1TransitionData) -> Result<ColumnInvariants> {
    column_invariants_of(g.matrix()).map(|(inv, _)| inv)
}

fn column_invariants_of(g: &Mat2<RatFunc>) -> Result<(ColumnInvariants, TriangularForm)> {
    let tri = triangularize(g)?;
    let v = finite(tri.lcd.valuation_at_zero())?;
    let [a, b, c, d] = polys_of(&g.scale(&tri.lcd.inv().expect("nonzero")))?;
    let inv = ColumnInvariants {
        v1: finite(val(&a).min(val(&c)))?,
        v2: finite(val(&b).min(val(&d)))?,
        v,
        e1: finite(val(&tri.a))?,
        e2: finite(val(&tri.d))?,
        b: tri.b.clone(),
    };
    Ok((inv, tri))
}

/// Result of [`split_p1`]. `a_x` has entries in `Q[x]`; `a_y` has entries in
/// `Q[y]`, written as polynomials in the variable `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingType {
    pub e1: i64,
    pub e2: i64,
    pub a_x: Mat2<RatFunc>,
    pub a_y: Mat2<RatFunc>,
}

impl SplittingType {
    pub fn pair(&self) -> (i64, i64) {
        (self.e1, self.e2)
    }

    /// `a_y` rewritten as a function of `x`.
    pub fn a_y_in_x(&self) -> Mat2<RatFunc> {
        self.a_y.map(RatFunc::invert_variable)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}) + O({})", self.e1, self.e2)
    }
}

/// One pass through the splitting loop, for inspecting progress.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitStep {
    pub invariants: ColumnInvariants,
    pub swapped: bool,
}

/// Splits a bundle on P^1 into line bundles.
pub fn split_p1(g: &P1TransitionData) -> Result<SplittingType> {
    split_p1_traced(g).map(|(s, _)| s)
}

/// [`split_p1`] together with the invariants seen at each non-terminal
/// iteration.
pub fn split_p1_traced(g: &P1TransitionData) -> Result<(SplittingType, Vec<SplitStep>)> {
    let gm = g.matrix();
    let mut ax = Mat2::<RatFunc>::identity();
    let mut ay = Mat2::<RatFunc>::identity();
    let mut trace = Vec::new();
    // Each iteration either repairs the column order or reduces the
    // off-diagonal; the bound only guards against a broken invariant.
    let limit = 64 + 8 * degree_bound(gm);
    let (inv, tri) = loop {
        let gp = current(gm, &ax, &ay)?;
        let (inv, tri) = column_invariants_of(&gp)?;
        if !(inv.v1 < inv.v2 || inv.e1 < inv.e2) {
            break (inv, tri);
        }
        if trace.len() > limit {
            return Err(Error::Internal("splitting loop does not terminate".into()));
        }
        let swapped = inv.v1 < inv.v2;
        if swapped {
            ay = ay.mul(&Mat2::swap());
        } else {
            let s = quot_shift(&inv.b, inv.e1, inv.e2);
            ax = ax.mul(&tri.e_mat.inverse().ok_or(Error::Singular)?);
            ay = ay.mul(&Mat2::upper(-&s));
        }
        trace.push(SplitStep {
            invariants: inv,
            swapped,
        });
    };
    ax = ax.mul(&tri.e_mat.inverse().ok_or(Error::Singular)?);
    let tail = &RatFunc::from_poly(inv.b.clone()) * &RatFunc::x_pow(-inv.e1);
    ay = ay.mul(&Mat2::upper(-&tail));
    let s = SplittingType {
        e1: inv.v + inv.e1,
        e2: inv.v + inv.e2,
        a_x: ax,
        a_y: ay.map(RatFunc::invert_variable),
    };
    if let Some(why) = factorization_defect(g, &s) {
        return Err(Error::Internal(format!(
            "splitting failed verification: {why}"
        )));
    }
    Ok((s, trace))
}

fn degree_bound(g: &Mat2<RatFunc>) -> usize {
    g.entries()
        .map(|e| (e.num().deg().max(0) + e.den().deg().max(0)) as usize)
        .sum()
}

fn current(g: &Mat2<RatFunc>, ax: &Mat2<RatFunc>, ay: &Mat2<RatFunc>) -> Result<Mat2<RatFunc>> {
    Ok(ax.inverse().ok_or(Error::Singular)?.mul(g).mul(ay))
}

/// `quot_y(y^e2 * b, y^(e2 - e1))` returned as a function of `x`.
fn quot_shift(b: &UniPoly, e1: i64, e2: i64) -> RatFunc {
    let e2u = e2 as usize;
    let ypoly = UniPoly::from_coeffs(
        (0..=e2u)
            .map(|i| {
                if i <= e2u {
                    b.coeff(e2u - i)
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    );
    let q = ypoly.unshift((e2 - e1) as usize);
    RatFunc::from_poly(q).invert_variable()
}

/// Checks a splitting against the bundle it claims to split.
pub fn verify_factorization(g: &P1TransitionData, s: &SplittingType) -> bool {
    factorization_defect(g, s).is_none()
}

/// The first violated condition of [`verify_factorization`], if any.
pub fn factorization_defect(g: &P1TransitionData, s: &SplittingType) -> Option<String> {
    if s.e1 < s.e2 {
        return Some(format!("exponents ({}, {}) not sorted", s.e1, s.e2));
    }
    for (name, m) in [("A_x", &s.a_x), ("A_y", &s.a_y)] {
        if let Some(e) = m.entries().find(|e| !e.is_polynomial()) {
            return Some(format!("{name} entry {e} is not polynomial"));
        }
        match m.det().as_constant() {
            Some(c) if !c.is_zero() => {}
            _ => return Some(format!("{name} does not have constant nonzero determinant")),
        }
    }
    let Some(axi) = s.a_x.inverse() else {
        return Some("A_x is singular".into());
    };
    let d = axi.mul(g.matrix()).mul(&s.a_y_in_x());
    if !d.m[0][1].is_zero() || !d.m[1][0].is_zero() {
        return Some(format!("A_x^-1 G A_y = {d} is not diagonal"));
    }
    let monomial = |f: &RatFunc, e: i64| {
        let c = f * &RatFunc::x_pow(-e);
        c.as_constant().is_some_and(|c| !c.is_zero())
    };
    if !monomial(&d.m[0][0], s.e1) || !monomial(&d.m[1][1], s.e2) {
        return Some(format!(
            "diagonal {d} is not diag(c1 x^{}, c2 x^{})",
            s.e1, s.e2
        ));
    }
    None
}

/// Transition data on a cover of the affine line by distinguished opens.
///
/// `transitions[i][j]` maps `U_j`-frame coordinates to `U_i`-frame ones.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineCocycle {
    opens: Vec<DistinguishedOpen>,
    transitions: Vec<Vec<Mat2<RatFunc>>>,
}

impl AffineCocycle {
    /// Builds from the full table and validates it.
    pub fn new(
        opens: Vec<DistinguishedOpen>,
        transitions: Vec<Vec<Mat2<RatFunc>>>,
    ) -> Result<Self> {
        let c = AffineCocycle { opens, transitions };
        c.validate()?;
        Ok(c)
    }

    /// Builds from the matrices `G_i0` alone (`G_00` must be the identity),
    /// setting `G_ij = G_i0 G_j0^-1`.
    pub fn from_base(opens: Vec<DistinguishedOpen>, to_base: Vec<Mat2<RatFunc>>) -> Result<Self> {
        if opens.len() != to_base.len() || opens.is_empty() {
            return Err(Error::InvalidTransition(
                "one matrix per open is required".into(),
            ));
        }
        let invs = to_base
            .iter()
            .map(|g| g.inverse().ok_or(Error::Singular))
            .collect::<Result<Vec<_>>>()?;
        let transitions = to_base
            .iter()
            .map(|gi| invs.iter().map(|gj| gi.mul(gj)).collect())
            .collect();
        Self::new(opens, transitions)
    }

    pub fn opens(&self) -> &[DistinguishedOpen] {
        &self.opens
    }

    pub fn transitions(&self) -> &[Vec<Mat2<RatFunc>>] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.opens.len();
        if n == 0 || self.transitions.len() != n || self.transitions.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTransition(
                "transition table has the wrong shape".into(),
            ));
        }
        let g = self.opens.iter().fold(UniPoly::zero(), |g, u| g.gcd(u.h()));
        if !g.is_constant() {
            return Err(Error::NotCovering);
        }
        for i in 0..n {
            if !self.transitions[i][i].is_identity() {
                return Err(Error::InvalidTransition(format!(
                    "G_{i}{i} is not the identity"
                )));
            }
            for j in 0..n {
                let gij = &self.transitions[i][j];
                let overlap = DistinguishedOpen::new(
                    (self.opens[i].h() * self.opens[j].h()).squarefree_part(),
                )?;
                let inv = gij.inverse().ok_or(Error::Singular)?;
                if !gij
                    .entries()
                    .chain(inv.entries())
                    .all(|e| overlap.is_regular(e))
                {
                    return Err(Error::InvalidTransition(format!(
                        "G_{i}{j} is not regular on the overlap"
                    )));
                }
                for k in 0..n {
                    if gij.mul(&self.transitions[j][k]) != self.transitions[i][k] {
                        return Err(Error::InconsistentCocycle(format!(
                            "G_{i}{j} G_{j}{k} != G_{i}{k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Finds `A_i`, invertible over the coordinate ring of `U_i`, with
/// `A_i^-1 G_ij A_j = E` for all `i, j`.
pub fn trivialize_affine(c: &AffineCocycle) -> Result<Vec<Mat2<RatFunc>>> {
    let g = &c.transitions;
    let mut a: Vec<Mat2<RatFunc>> = vec![Mat2::identity()];
    for (k, (u, g_k)) in c.opens.iter().zip(g).enumerate().skip(1) {
        let x = g_k[0].mul(&a[0]);
        let tri = triangularize(&x)?;
        let gad =
            &(&tri.lcd * &RatFunc::from_poly(tri.a.clone())) * &RatFunc::from_poly(tri.d.clone());
        let (d_gad, n_gad) = separate(u, &gad)?;
        let (da, na) = separate(u, &RatFunc::from_poly(tri.a.clone()))?;
        let (dd, nd) = separate(u, &RatFunc::from_poly(tri.d.clone()))?;
        let [da, na, dd, nd] =
            [&da, &na, &dd, &nd].map(|f| f.as_polynomial().cloned().expect("polynomial part"));
        // The off-diagonal of (A_k)^-1 G_k0 A_0 vanishes exactly when
        // D(a) alpha + N(d) beta + b = 0.
        let (one, s, _) = UniPoly::ext_gcd(&da, &nd)?;
        if !one.is_constant() || !na.gcd(&dd).is_constant() {
            return Err(Error::InconsistentCocycle(format!(
                "step {k}: separated parts are not coprime"
            )));
        }
        let minus_b = -&tri.b;
        let alpha = (&minus_b * &s).rem(&nd)?;
        let beta = (&minus_b - &(&da * &alpha))
            .div_exact(&nd)
            .ok_or_else(|| Error::Internal("Bezout solution is not exact".into()))?;
        let p_n = poly_mat(nd.clone(), alpha, UniPoly::zero(), na.clone());
        let p_d = poly_mat(dd.clone(), beta, UniPoly::zero(), da.clone());
        let n_inv = n_gad.inv().expect("nonzero");
        for ai in a.iter_mut() {
            *ai = ai.mul(&p_n).scale(&n_inv);
        }
        let d_inv = d_gad.inv().expect("nonzero");
        let ak = p_d
            .mul(&tri.e_mat)
            .scale(&d_inv)
            .inverse()
            .ok_or(Error::Singular)?;
        a.push(ak);
    }
    if let Some(why) = trivialization_defect(c, &a) {
        return Err(Error::Internal(format!(
            "trivialization failed verification: {why}"
        )));
    }
    Ok(a)
}

/// Checks `A_i^-1 G_ij A_j = E` and that each `A_i` is invertible over `U_i`.
pub fn verify_trivialization(c: &AffineCocycle, a: &[Mat2<RatFunc>]) -> bool {
    trivialization_defect(c, a).is_none()
}

fn trivialization_defect(c: &AffineCocycle, a: &[Mat2<RatFunc>]) -> Option<String> {
    if a.len() != c.len() {
        return Some("wrong number of matrices".into());
    }
    for (i, ai) in a.iter().enumerate() {
        let u = &c.opens[i];
        if let Some(e) = ai.entries().find(|e| !u.is_regular(e)) {
            return Some(format!("A_{i} entry {e} has a pole on U_{i}"));
        }
        if !u.is_unit(&ai.det()) {
            return Some(format!("det A_{i} is not a unit on U_{i}"));
        }
    }
    for (i, a_i) in a.iter().enumerate() {
        let ai = a_i.inverse()?;
        for (j, a_j) in a.iter().enumerate() {
            if !ai.mul(&c.transitions[i][j]).mul(a_j).is_identity() {
                return Some(format!("A_{i}^-1 G_{i}{j} A_{j} is not the identity"));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFunc {
        RatFunc::x()
    }

    fn xp(k: i64) -> RatFunc {
        RatFunc::x_pow(k)
    }

    fn poly(cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(UniPoly::from_ints(cs))
    }

    fn p1(g: Mat2<RatFunc>) -> P1TransitionData {
        P1TransitionData::new(g).unwrap()
    }

    #[test]
    fn triangularize_swap() {
        let t = triangularize(&Mat2::swap()).unwrap();
        assert_eq!(t.e_mat, Mat2::swap());
        assert_eq!(
            (t.a.clone(), t.b.clone(), t.d.clone()),
            (UniPoly::one(), UniPoly::zero(), UniPoly::one())
        );
    }

    #[test]
    fn triangularize_row_reduction() {
        let g = Mat2::new(x(), RatFunc::one(), xp(2), poly(&[1, 1]));
        let t = triangularize(&g).unwrap();
        assert_eq!(t.triangle(), Mat2::diag(x(), RatFunc::one()));
        assert_eq!(t.e_mat.mul(&g), t.triangle());
        assert!(t.e_mat.entries().all(|e| e.is_polynomial()));
        assert!(t.e_mat.det().as_constant().is_some());
    }

    #[test]
    fn triangularize_rejects_singular() {
        let g = Mat2::new(x(), x(), x(), x());
        assert_eq!(triangularize(&g), Err(Error::Singular));
    }

    #[test]
    fn column_invariants_examples() {
        let inv =
            column_invariants(&p1(Mat2::new(x(), RatFunc::one(), RatFunc::zero(), x()))).unwrap();
        assert_eq!((inv.v1, inv.v2, inv.v, inv.e1, inv.e2), (1, 0, 0, 1, 1));
        assert_eq!(inv.b, UniPoly::one());
        let inv = column_invariants(&p1(Mat2::diag(xp(3), x()))).unwrap();
        assert_eq!((inv.v1, inv.v2, inv.v, inv.e1, inv.e2), (2, 0, 1, 2, 0));
        assert!(inv.b.is_zero());
    }

    #[test]
    fn split_examples() {
        let g = p1(Mat2::new(x(), RatFunc::one(), RatFunc::zero(), x()));
        let s = split_p1(&g).unwrap();
        assert_eq!(s.pair(), (1, 1));
        assert_eq!(s.a_y, Mat2::upper(poly(&[0, -1])));
        assert_eq!(
            split_p1(&p1(Mat2::diag(xp(3), x()))).unwrap().pair(),
            (3, 1)
        );
        assert_eq!(
            split_p1(&p1(Mat2::diag(x(), xp(3)))).unwrap().pair(),
            (3, 1)
        );
        for k in -3..=3 {
            let s = split_p1(&p1(Mat2::swap().scale(&xp(k)))).unwrap();
            assert_eq!(s.pair(), (k, k));
        }
        assert_eq!(split_p1(&p1(Mat2::identity())).unwrap().pair(), (0, 0));
    }

    #[test]
    fn split_needs_off_diagonal_reduction() {
        // [[1, x^-1], [0, x^2]]: the upper entry must be pushed into A_y.
        let g = p1(Mat2::new(RatFunc::one(), xp(-1), RatFunc::zero(), xp(2)));
        let s = split_p1(&g).unwrap();
        assert!(verify_factorization(&g, &s));
        assert_eq!(s.e1 + s.e2, 2);
    }

    #[test]
    fn p1_transition_validation() {
        assert!(P1TransitionData::new(Mat2::diag(poly(&[1, 1]), RatFunc::one())).is_err());
        let bad = Mat2::new(
            RatFunc::one(),
            RatFunc::one(),
            RatFunc::one(),
            RatFunc::one(),
        );
        assert!(P1TransitionData::new(bad).is_err());
        let non_laurent = Mat2::diag(
            RatFunc::new(UniPoly::one(), UniPoly::from_ints(&[1, 1])).unwrap(),
            poly(&[1, 1]),
        );
        assert!(P1TransitionData::new(non_laurent).is_err());
    }

    #[test]
    fn verify_rejects_wrong_exponents() {
        let g = p1(Mat2::diag(xp(2), RatFunc::one()));
        let mut s = split_p1(&g).unwrap();
        assert!(verify_factorization(&g, &s));
        s.e1 = 3;
        assert!(!verify_factorization(&g, &s));
    }

    #[test]
    fn trivialize_two_opens() {
        // U0 = {x != 0}, U1 = {x != 1}; G_10 only has poles at x = 0.
        let u0 = DistinguishedOpen::new(UniPoly::from_ints(&[0, 1])).unwrap();
        let u1 = DistinguishedOpen::new(UniPoly::from_ints(&[-1, 1])).unwrap();
        let g10 = Mat2::new(
            x(),
            RatFunc::from_poly(UniPoly::from_ints(&[0, 0, 3])),
            RatFunc::zero(),
            xp(-1),
        );
        let c = AffineCocycle::from_base(vec![u0, u1], vec![Mat2::identity(), g10]).unwrap();
        let a = trivialize_affine(&c).unwrap();
        assert!(verify_trivialization(&c, &a));
    }

    #[test]
    fn cocycle_must_cover() {
        let u0 = DistinguishedOpen::new(UniPoly::from_ints(&[0, 1])).unwrap();
        let u1 = DistinguishedOpen::new(UniPoly::from_ints(&[0, 1])).unwrap();
        let err = AffineCocycle::from_base(vec![u0, u1], vec![Mat2::identity(), Mat2::identity()]);
        assert_eq!(err, Err(Error::NotCovering));
    }

    #[test]
    fn cocycle_rejects_irregular_transition() {
        let u0 = DistinguishedOpen::new(UniPoly::from_ints(&[0, 1])).unwrap();
        let u1 = DistinguishedOpen::new(UniPoly::from_ints(&[-1, 1])).unwrap();
        let g = Mat2::diag(
            RatFunc::new(UniPoly::one(), UniPoly::from_ints(&[2, 1])).unwrap(),
            RatFunc::one(),
        );
        let err = AffineCocycle::from_base(vec![u0, u1], vec![Mat2::identity(), g]);
        assert!(matches!(err, Err(Error::InvalidTransition(_))));
    }
}
