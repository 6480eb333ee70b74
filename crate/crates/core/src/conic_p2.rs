//! The double cover of the plane branched along a smooth conic, and its
//! one-dimensional analogue, the double cover of the line branched at two
//! points.
//!
//! Everything is computed for the normal form `F = x0^2 + x1 x2`; other
//! conics are carried to it by an exact congruence `x = T y` with
//! `F(T y) = gamma * (y0^2 + y1 y2)`.
//!
//! The standard pair is `M = [[x0, x2], [x1, -x0]]` on the trivial rank-two
//! bundle, made good by the frames `[[1, 0], [1, 1]]`, `E` and the swap on
//! `U0`, `U1`, `U2`; it is taken to be the pair of `O_X(0, 1)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::double_cover::{
    group_law, refine_good, section_norm, AdmissiblePairRep, BinaryForm, ChartDomain, ChartMatrix,
    P1Chart, P2Chart, Refinement,
};
use crate::error::{Error, Result};
use crate::exact_arith::rational::{rat, ratio};
use crate::exact_arith::{
    nullspace, DistinguishedOpen, Field, HomPoly3, HomRatio, Mat2, Point3, RatFunc, Rational,
    UniPoly,
};
use crate::p1_bundles::{
    split_p1, trivialize_affine, AffineCocycle, P1TransitionData, SplittingType,
};

pub type PlanePair = AdmissiblePairRep<HomRatio, P2Chart>;
pub type LinePair = AdmissiblePairRep<RatFunc, P1Chart>;
pub type Matrix3 = [[Rational; 3]; 3];

/// Search radius for rational points when reducing a conic to normal form.
pub const POINT_SEARCH_BOUND: u32 = 24;

/// `x0^2 + x1 x2`.
pub fn standard_conic() -> HomPoly3 {
    HomPoly3::from_int_terms(&[(1, [2, 0, 0]), (1, [0, 1, 1])])
}

fn identity3() -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { rat(1) } else { rat(0) }))
}

fn det3(a: &Matrix3) -> Rational {
    let m = |i: usize, j: usize| &a[i][j];
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

fn inverse3(a: &Matrix3) -> Option<Matrix3> {
    let d = det3(a);
    if d.is_zero() {
        return None;
    }
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &a[r0][c0] * &a[r1][c1] - &a[r0][c1] * &a[r1][c0]
    };
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| cof(j, i) / &d)
    }))
}

/// `l . T`, the form of the line `l . x = 0` in the coordinates `x = T y`.
fn pull_back_form(l: &Point3, t: &Matrix3) -> Point3 {
    std::array::from_fn(|j| (0..3).map(|i| &l[i] * &t[i][j]).sum())
}

/// Symmetric matrix `S` with `F(x) = x^T S x`.
fn gram(f: &HomPoly3) -> Matrix3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = f.coeff(&e);
            if i == j {
                c
            } else {
                c / rat(2)
            }
        })
    })
}

fn bilinear(s: &Matrix3, p: &Point3, q: &Point3) -> Rational {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| &s[i][j] * &p[i] * &q[j])
        .sum()
}

fn apply3(s: &Matrix3, p: &Point3) -> Point3 {
    std::array::from_fn(|i| (0..3).map(|j| &s[i][j] * &p[j]).sum())
}

/// A smooth plane conic together with a congruence to the normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicCover {
    form: HomPoly3,
    /// `x = T y` with `form(T y) = gamma * (y0^2 + y1 y2)`.
    to_standard: Matrix3,
    from_standard: Matrix3,
    gamma: Rational,
}

impl Default for ConicCover {
    fn default() -> Self {
        ConicCover {
            form: standard_conic(),
            to_standard: identity3(),
            from_standard: identity3(),
            gamma: rat(1),
        }
    }
}

impl ConicCover {
    /// The cover branched along `x0^2 + x1 x2`.
    pub fn standard() -> Self {
        Self::default()
    }

    /// Any smooth conic with a rational point of height at most
    /// [`POINT_SEARCH_BOUND`].
    pub fn new(form: HomPoly3) -> Result<Self> {
        if form.degree() != 2 {
            return Err(Error::DegreeMismatch(format!(
                "a conic has degree 2, not {}",
                form.degree()
            )));
        }
        let s = gram(&form);
        if det3(&s).is_zero() {
            return Err(Error::SingularConic);
        }
        if form == standard_conic() {
            return Ok(Self::default());
        }
        let p1 = find_rational_point(&form, POINT_SEARCH_BOUND)
            .ok_or(Error::NoRationalPoint(POINT_SEARCH_BOUND))?;
        let p2 = second_point(&form, &s, &p1)
            .ok_or_else(|| Error::Internal("no second conic point".into()))?;
        // The pole of the chord p1 p2 is polar-orthogonal to both points.
        let w = crate::exact_arith::cross(&apply3(&s, &p1), &apply3(&s, &p2));
        let gamma = bilinear(&s, &w, &w);
        let lambda = &gamma / (rat(2) * bilinear(&s, &p1, &p2));
        let t: Matrix3 = std::array::from_fn(|i| [w[i].clone(), p1[i].clone(), &lambda * &p2[i]]);
        let inv = inverse3(&t).ok_or_else(|| Error::Internal("congruence is singular".into()))?;
        let cover = ConicCover {
            form,
            to_standard: t,
            from_standard: inv,
            gamma,
        };
        if cover.form.substitute_linear(&cover.to_standard) != standard_conic().scale(&cover.gamma)
        {
            return Err(Error::Internal(
                "congruence does not carry the conic to normal form".into(),
            ));
        }
        Ok(cover)
    }

    pub fn form(&self) -> &HomPoly3 {
        &self.form
    }

    /// `T` with `x = T y`.
    pub fn to_standard(&self) -> &Matrix3 {
        &self.to_standard
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn is_standard(&self) -> bool {
        self.to_standard == identity3()
    }

    /// The same line in normal-form coordinates.
    pub fn line_in_standard(&self, line: &LineInP2) -> Result<LineInP2> {
        LineInP2::new(pull_back_form(&line.form, &self.to_standard))
    }

    /// A line given in normal-form coordinates, moved back to the cover's.
    pub fn line_from_standard(&self, line: &LineInP2) -> Result<LineInP2> {
        LineInP2::new(pull_back_form(&line.form, &self.from_standard))
    }

    pub fn classify_line(&self, line: &LineInP2) -> Result<LineKind> {
        let r = self.form.restrict_to_line(&line.p, &line.q)?;
        let (a, b, c) = (r.coeff(0), r.coeff(1), r.coeff(2));
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(Error::Internal("a smooth conic contains no line".into()));
        }
        Ok(if (&b * &b - rat(4) * &a * &c).is_zero() {
            LineKind::Tangent
        } else {
            LineKind::Transversal
        })
    }
}

fn find_rational_point(f: &HomPoly3, bound: u32) -> Option<Point3> {
    let b = bound as i64;
    for h in 0..=b {
        for x in -h..=h {
            for y in -h..=h {
                for z in -h..=h {
                    if x.abs().max(y.abs()).max(z.abs()) != h || h == 0 {
                        continue;
                    }
                    let p = [rat(x), rat(y), rat(z)];
                    if f.eval(&p).is_zero() {
                        return Some(p);
                    }
                }
            }
        }
    }
    None
}

/// The other intersection of the conic with a chord through `p`.
fn second_point(f: &HomPoly3, s: &Matrix3, p: &Point3) -> Option<Point3> {
    let dirs: [[i64; 3]; 7] = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
    ];
    dirs.iter().find_map(|d| {
        let d = d.map(rat);
        let (bd, fd) = (bilinear(s, p, &d), f.eval(&d));
        if bd.is_zero() || fd.is_zero() {
            return None;
        }
        let sp = rat(-2) * bd / fd;
        Some(std::array::from_fn(|i| &p[i] + &sp * &d[i]))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineKind {
    Transversal,
    Tangent,
}

/// The line `form . x = 0`, parameterized as `P + tQ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineInP2 {
    pub form: Point3,
    pub p: Point3,
    pub q: Point3,
}

impl LineInP2 {
    /// Chooses `P`, `Q` on the coordinate lines: when `l0 != 0`,
    /// `P = L cap {x2 = 0}` and `Q = L cap {x1 = 0}`, so that the parameter
    /// is `t = x2 / x1`.
    pub fn new(form: Point3) -> Result<Self> {
        let [l0, l1, l2] = form.clone();
        let (p, q) = if !l0.is_zero() {
            (
                [-l1.clone(), l0.clone(), rat(0)],
                [-l2.clone(), rat(0), l0.clone()],
            )
        } else if !l1.is_zero() {
            ([rat(1), rat(0), rat(0)], [rat(0), -l2.clone(), l1.clone()])
        } else if !l2.is_zero() {
            ([rat(1), rat(0), rat(0)], [rat(0), rat(1), rat(0)])
        } else {
            return Err(Error::ZeroInput("line form"));
        };
        Ok(LineInP2 { form, p, q })
    }

    pub fn from_ints(l: [i64; 3]) -> Result<Self> {
        Self::new(l.map(rat))
    }

    /// The line through two distinct points.
    pub fn through(p: Point3, q: Point3) -> Result<Self> {
        let form = crate::exact_arith::independent(&p, &q).ok_or(Error::DependentPoints)?;
        Ok(LineInP2 { form, p, q })
    }

    /// True if the line passes through `[1:0:0]`, the one point outside
    /// `U1 cup U2`.
    pub fn meets_base_point(&self) -> bool {
        self.form[0].is_zero()
    }

    pub fn form_poly(&self) -> HomPoly3 {
        let terms = (0..3).map(|i| {
            let mut e = [0; 3];
            e[i] = 1;
            (self.form[i].clone(), e)
        });
        HomPoly3::from_terms(1, terms).expect("linear")
    }
}

/// The projective transformation `x = T y` preserving `x0^2 + x1 x2` that
/// moves the tangent lines `x1 = 0` and `x2 = 0` off `[1:0:0]`.
pub fn coordinate_tangent_transform() -> Matrix3 {
    let h = ratio(1, 2);
    [
        [rat(0), h.clone(), h.clone()],
        [rat(1), -h.clone(), h.clone()],
        [rat(1), h.clone(), -h],
    ]
}

/// The good representation of the pair of `O_X(0, 1)` on the refined cover
/// `U0 cap {-2x0 + x1 - x2 != 0}`, `U1`, `U2`.
pub fn standard_conic_pair() -> PlanePair {
    let f = standard_conic();
    let charts: Vec<P2Chart> = (0..3).map(P2Chart::standard).collect();
    let xi = (0..3)
        .map(|i| (0..3).map(|j| HomRatio::var_ratio(i, j)).collect())
        .collect();
    let branch = (0..3).map(|i| HomRatio::on_chart(&f, i)).collect();
    let transitions = vec![vec![Mat2::identity(); 3]; 3];
    let matrices = (0..3)
        .map(|i| {
            ChartMatrix::new(
                HomRatio::var_ratio(0, i),
                HomRatio::var_ratio(1, i),
                HomRatio::var_ratio(2, i),
            )
        })
        .collect();
    let rep = AdmissiblePairRep {
        charts,
        xi,
        branch,
        transitions,
        matrices,
        is_good: false,
        is_normal: false,
    };
    let choices = vec![
        vec![Refinement::Shear(HomRatio::one())],
        vec![Refinement::Identity],
        vec![Refinement::Swap],
    ];
    let (mut good, _) = refine_good(&rep, &choices).expect("the standard refinement is valid");
    for (c, i) in good.charts.iter_mut().zip(0..) {
        *c = c.with_label(format!("U{i}*"));
    }
    good
}

impl P2Chart {
    /// The chart cut down to a parameterized line; `None` if they miss.
    pub fn restrict_to_line(&self, p: &Point3, q: &Point3) -> Result<Option<P1Chart>> {
        let mut avoid = Vec::new();
        for w in &self.avoid {
            let poly = w.restrict_to_line(p, q)?;
            if poly.is_zero() {
                return Ok(None);
            }
            avoid.push(BinaryForm {
                poly,
                degree: w.degree(),
            });
        }
        Ok(Some(P1Chart {
            label: self.label.clone(),
            avoid,
        }))
    }
}

/// Restricts a plane pair to the charts meeting the line and substitutes
/// the parameterization into every function. Returns the surviving chart
/// indices alongside.
pub fn restrict_pair(pair: &PlanePair, line: &LineInP2) -> Result<(LinePair, Vec<usize>)> {
    let mut keep = Vec::new();
    let mut charts = Vec::new();
    for (i, c) in pair.charts.iter().enumerate() {
        if let Some(rc) = c.restrict_to_line(&line.p, &line.q)? {
            keep.push(i);
            charts.push(rc);
        }
    }
    let f = |h: &HomRatio| h.restrict_to_line(&line.p, &line.q);
    let mut out = pair.try_map(&keep, f, |_| {
        Ok(P1Chart {
            label: String::new(),
            avoid: Vec::new(),
        })
    })?;
    out.charts = charts;
    Ok((out, keep))
}

/// Transition data of a bundle restricted to a line, in one of two shapes.
#[derive(Clone, Debug, PartialEq)]
pub enum RestrictedBundle {
    /// Two charts, `{t finite}` and `{t != 0}`, glued by one Laurent matrix.
    TwoChart {
        charts: (usize, usize),
        transition: P1TransitionData,
    },
    /// The restricted charts as cocycles on the affine lines `t != infinity`
    /// and `s = 1/t != infinity`, for trivialization chart by chart.
    Affine {
        charts: Vec<usize>,
        finite: AffineCocycle,
        at_infinity: AffineCocycle,
    },
}

impl RestrictedBundle {
    /// A single transition matrix for the whole line.
    pub fn to_p1(&self) -> Result<P1TransitionData> {
        match self {
            RestrictedBundle::TwoChart { transition, .. } => Ok(transition.clone()),
            RestrictedBundle::Affine {
                finite,
                at_infinity,
                ..
            } => {
                let at = trivialize_affine(finite)?;
                let a_s = trivialize_affine(at_infinity)?;
                // Both trivializations describe the same local frames on
                // chart 0; their comparison is the gluing across the line.
                let a0_inv = at[0].inverse().ok_or(Error::Singular)?;
                let g = a0_inv.mul(&a_s[0].map(RatFunc::invert_variable));
                P1TransitionData::new(g)
            }
        }
    }
}

fn is_finite_chart(c: &P1Chart) -> bool {
    c.finite_complement().is_one() && !c.contains_infinity()
}

fn is_punctured_chart(c: &P1Chart) -> bool {
    c.finite_complement() == UniPoly::x() && c.contains_infinity()
}

/// Picks the two-chart route when available, else the chart-wise route.
pub fn restricted_bundle(rep: &LinePair, ids: &[usize]) -> Result<RestrictedBundle> {
    match two_chart_route(rep, ids)? {
        Some(r) => Ok(r),
        None => affine_route(rep, ids),
    }
}

/// The gluing `G_ij` between a chart equal to `{t finite}` and one equal to
/// `{t != 0}`, if the restricted cover has such charts.
pub fn two_chart_route(rep: &LinePair, ids: &[usize]) -> Result<Option<RestrictedBundle>> {
    let i = rep.charts.iter().position(is_finite_chart);
    let j = rep.charts.iter().position(is_punctured_chart);
    match (i, j) {
        (Some(i), Some(j)) => {
            let transition = P1TransitionData::new(rep.transitions[i][j].clone())?;
            Ok(Some(RestrictedBundle::TwoChart {
                charts: (ids[i], ids[j]),
                transition,
            }))
        }
        _ => Ok(None),
    }
}

/// The restricted cover as two affine cocycles, one per standard chart of
/// the line.
pub fn affine_route(rep: &LinePair, ids: &[usize]) -> Result<RestrictedBundle> {
    let opens = |charts: Vec<P1Chart>| {
        charts
            .iter()
            .map(|c| DistinguishedOpen::new(c.finite_complement()))
            .collect::<Result<Vec<_>>>()
    };
    let finite = AffineCocycle::new(opens(rep.charts.clone())?, rep.transitions.clone())?;
    let swapped: Vec<P1Chart> = rep.charts.iter().map(P1Chart::swapped).collect();
    let flipped = rep
        .transitions
        .iter()
        .map(|row| {
            row.iter()
                .map(|g| g.map(RatFunc::invert_variable))
                .collect()
        })
        .collect();
    let at_infinity = AffineCocycle::new(opens(swapped)?, flipped)?;
    Ok(RestrictedBundle::Affine {
        charts: ids.to_vec(),
        finite,
        at_infinity,
    })
}

/// Restriction of a plane pair to a line.
pub fn restrict_to_line(pair: &PlanePair, line: &LineInP2) -> Result<RestrictedBundle> {
    let (rep, ids) = restrict_pair(pair, line)?;
    restricted_bundle(&rep, &ids)
}

/// Line in normal-form coordinates on which the splitting is computed:
/// the coordinate tangents `x1 = 0`, `x2 = 0` are moved by
/// [`coordinate_tangent_transform`].
pub fn working_line(cover: &ConicCover, line: &LineInP2) -> Result<LineInP2> {
    let std_line = cover.line_in_standard(line)?;
    let [l0, l1, l2] = &std_line.form;
    if l0.is_zero() && (l1.is_zero() || l2.is_zero()) {
        return LineInP2::new(pull_back_form(
            &std_line.form,
            &coordinate_tangent_transform(),
        ));
    }
    Ok(std_line)
}

/// Splitting type of the push-forward of `L_1^n_1 (x) ... (x) L_m^n_m`
/// restricted to a line, for good plane pairs `L_k` on a common cover.
pub fn splitting_for_pairs(
    cover: &ConicCover,
    pairs: &[&PlanePair],
    n: &[i64],
    line: &LineInP2,
) -> Result<SplittingType> {
    split_p1(&restricted_for_pairs(cover, pairs, n, line)?.to_p1()?)
}

/// Transition data on a line of the push-forward of
/// `L_1^n_1 (x) ... (x) L_m^n_m`, in the parameter of [`working_line`].
pub fn restricted_for_pairs(
    cover: &ConicCover,
    pairs: &[&PlanePair],
    n: &[i64],
    line: &LineInP2,
) -> Result<RestrictedBundle> {
    let l = working_line(cover, line)?;
    let mut restricted = Vec::new();
    let mut ids = Vec::new();
    for pair in pairs {
        let (r, k) = restrict_pair(pair, &l)?;
        restricted.push(r);
        ids = k;
    }
    let refs: Vec<&LinePair> = restricted.iter().collect();
    let normal = group_law(&refs, n)?;
    restricted_bundle(&normal, &ids)
}

/// Splitting type of `phi_* O_X(0, n)` restricted to `line`.
pub fn splitting_on_line(cover: &ConicCover, n: i64, line: &LineInP2) -> Result<SplittingType> {
    splitting_for_pairs(cover, &[&standard_conic_pair()], &[n], line)
}

/// As [`splitting_on_line`] but always through the chart-wise route.
pub fn splitting_on_line_affine(
    cover: &ConicCover,
    n: i64,
    line: &LineInP2,
) -> Result<SplittingType> {
    let l = working_line(cover, line)?;
    let (r, ids) = restrict_pair(&standard_conic_pair(), &l)?;
    let normal = group_law(&[&r], &[n])?;
    split_p1(&affine_route(&normal, &ids)?.to_p1()?)
}

/// Tangent lines to the conic. For the normal form, `b` gives the line
/// `x0 + c x1 + b x2 = 0` with `4bc = -1`; other conics use the image of
/// that line under the cover's congruence.
pub fn tangent_lines(cover: &ConicCover, params: &[Rational]) -> Result<Vec<LineInP2>> {
    params
        .iter()
        .map(|b| {
            if b.is_zero() {
                return Err(Error::ZeroInput("tangent parameter"));
            }
            let c = -(rat(4) * b).recip();
            cover.line_from_standard(&LineInP2::new([rat(1), c, b.clone()])?)
        })
        .collect()
}

/// The tangent lines `x1 = 0` and `x2 = 0` of the normal form, in the
/// cover's coordinates.
pub fn coordinate_tangents(cover: &ConicCover) -> Result<Vec<LineInP2>> {
    [[0, 1, 0], [0, 0, 1]]
        .iter()
        .map(|l| cover.line_from_standard(&LineInP2::from_ints(*l)?))
        .collect()
}

/// Seeded random transversal lines with small rational coefficients.
pub fn random_lines(cover: &ConicCover, count: usize, seed: u64) -> Result<Vec<LineInP2>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<LineInP2> = Vec::with_capacity(count);
    while out.len() < count {
        let form: Point3 =
            std::array::from_fn(|_| ratio(rng.gen_range(-12..=12), rng.gen_range(1..=6)));
        if form.iter().all(|c| c.is_zero()) {
            continue;
        }
        let line = LineInP2::new(form)?;
        if cover.classify_line(&line)? == LineKind::Transversal
            && !out.iter().any(|l| same_line(l, &line))
        {
            out.push(line);
        }
    }
    Ok(out)
}

fn same_line(a: &LineInP2, b: &LineInP2) -> bool {
    crate::exact_arith::independent(&a.form, &b.form).is_none()
}

/// One row of a jumping-line scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub line: LineInP2,
    pub kind: LineKind,
    pub splitting: (i64, i64),
    pub is_jumping: bool,
}

/// Splits `phi_* O_X(0, n)` on every line using `jobs` worker threads and
/// flags the lines whose type differs from the most frequent one (ties go
/// to the type seen first). Rows keep the input order.
pub fn jumping_scan(
    cover: &ConicCover,
    n: i64,
    lines: &[LineInP2],
    jobs: usize,
) -> Result<Vec<ScanRow>> {
    if lines.is_empty() {
        return Err(Error::Input("no lines to scan".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let computed: Vec<Result<(LineKind, (i64, i64))>> = pool.install(|| {
        lines
            .par_iter()
            .map(|l| {
                Ok((
                    cover.classify_line(l)?,
                    splitting_on_line(cover, n, l)?.pair(),
                ))
            })
            .collect()
    });
    let computed = computed.into_iter().collect::<Result<Vec<_>>>()?;
    let mut counts: Vec<((i64, i64), usize)> = Vec::new();
    for (_, s) in &computed {
        match counts.iter_mut().find(|(t, _)| t == s) {
            Some((_, c)) => *c += 1,
            None => counts.push((*s, 1)),
        }
    }
    let best = counts.iter().map(|(_, c)| *c).max().expect("nonempty");
    let mode = counts.iter().find(|(_, c)| *c == best).expect("nonempty").0;
    Ok(lines
        .iter()
        .zip(computed)
        .map(|(line, (kind, splitting))| ScanRow {
            line: line.clone(),
            kind,
            splitting,
            is_jumping: splitting != mode,
        })
        .collect())
}

/// Transition `G~_12` of `phi_* O_X(k1, k2)` from `U2` to `U1`,
/// `x12^k2 K_12^n G0_12` (`K_12^-1`-type for negative `n`).
pub fn twisted_transition(k1: i64, k2: i64) -> Result<Mat2<HomRatio>> {
    let pair = standard_conic_pair();
    let sub = pair.try_map(&[1, 2], |f| Ok(f.clone()), |c| Ok(c.clone()))?;
    let normal = group_law(&[&sub], &[k1 - k2])?;
    let x12 = HomRatio::var_ratio(2, 1);
    let twist = if k2 >= 0 {
        x12.pow(k2 as u32)
    } else {
        x12.inv().expect("nonzero").pow(k2.unsigned_abs() as u32)
    };
    Ok(normal.transitions[0][1].scale(&twist))
}

/// A basis of sections over `U1 cup U2`, written in chart-`U2`
/// coordinates `x20 = x0/x2`, `x21 = x1/x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionBasis {
    pub degree_bound: u32,
    pub basis: Vec<(HomRatio, HomRatio)>,
    pub dimension: usize,
    /// The dimension does not grow when the bound is raised by one.
    pub saturated: bool,
}

fn chart2_monomials(bound: u32) -> Vec<[u32; 2]> {
    (0..=bound)
        .flat_map(|d| (0..=d).rev().map(move |a| [a, d - a]))
        .collect()
}

fn chart2_monomial(e: [u32; 2]) -> HomRatio {
    HomRatio::on_chart(&HomPoly3::monomial(rat(1), [e[0], e[1], 0]), 2)
}

/// Monomials of the chart-`U2` ansatz and the solution vectors.
type SectionSpace = (Vec<[u32; 2]>, Vec<Vec<Rational>>);

fn section_space(g: &Mat2<HomRatio>, bound: u32) -> Result<SectionSpace> {
    let monos = chart2_monomials(bound);
    let m = monos.len();
    // Unknowns: coefficients of s1 then of s2.
    let mut conditions: BTreeMap<(usize, [i64; 2]), Vec<Rational>> = BTreeMap::new();
    for (row, g_row) in g.m.iter().enumerate() {
        for (col, entry) in g_row.iter().enumerate() {
            for (k, e) in monos.iter().enumerate() {
                let image = entry * &chart2_monomial(*e);
                let terms = image.chart_laurent(1).ok_or_else(|| {
                    Error::Internal(format!("{image} is not a Laurent polynomial on U1"))
                })?;
                for (key, c) in terms {
                    if key[0] < 0 || key[1] < 0 {
                        let v = conditions
                            .entry((row, key))
                            .or_insert_with(|| vec![rat(0); 2 * m]);
                        v[col * m + k] += c;
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<Rational>> = conditions.into_values().collect();
    Ok((monos, nullspace(&rows, 2 * m)))
}

fn assemble(monos: &[[u32; 2]], v: &[Rational]) -> (HomRatio, HomRatio) {
    let m = monos.len();
    let build = |coeffs: &[Rational]| {
        monos
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(HomRatio::zero(), |acc, (e, c)| {
                &acc + &(&chart2_monomial(*e) * &HomRatio::constant(c.clone()))
            })
    };
    (build(&v[..m]), build(&v[m..]))
}

/// Sections of `phi_* O_X(k1, k2)`, `k1 >= k2`, whose chart-`U2` components
/// have degree at most `degree_bound`.
pub fn global_sections(k1: i64, k2: i64, degree_bound: u32) -> Result<SectionBasis> {
    if k1 < k2 {
        return Err(Error::Input(format!(
            "bidegree ({k1}, {k2}) needs k1 >= k2; swap the entries"
        )));
    }
    let g = twisted_transition(k1, k2)?;
    let (monos, space) = section_space(&g, degree_bound)?;
    let (_, bigger) = section_space(&g, degree_bound + 1)?;
    Ok(SectionBasis {
        degree_bound,
        dimension: space.len(),
        saturated: bigger.len() == space.len(),
        basis: space.iter().map(|v| assemble(&monos, v)).collect(),
    })
}

/// Coefficient vectors of a section pair over the monomials of
/// [`chart2_monomials`]`(bound)`, for comparing spans.
pub fn section_coordinates(s: &(HomRatio, HomRatio), bound: u32) -> Option<Vec<Rational>> {
    let monos = chart2_monomials(bound);
    let mut out = vec![rat(0); 2 * monos.len()];
    for (half, f) in [&s.0, &s.1].into_iter().enumerate() {
        for (key, c) in f.chart_laurent(2)? {
            let e = [u32::try_from(key[0]).ok()?, u32::try_from(key[1]).ok()?];
            let k = monos.iter().position(|m| *m == e)?;
            out[half * monos.len() + k] = c;
        }
    }
    Some(out)
}

/// Total degree in `x20, x21` of a chart-`U2` polynomial; `None` for zero or
/// non-polynomials.
pub fn chart2_degree(f: &HomRatio) -> Option<u32> {
    let terms = f.chart_laurent(2)?;
    if terms.iter().any(|(k, _)| k[0] < 0 || k[1] < 0) {
        return None;
    }
    terms.iter().map(|(k, _)| (k[0] + k[1]) as u32).max()
}

/// Image of the divisor of a section: `h = s1^2 - s2^2 F` on `U2` and its
/// degree, after checking through the section norm that `h` glues.
pub fn section_image_degree(k1: i64, k2: i64, s: &(HomRatio, HomRatio)) -> Result<(HomRatio, u32)> {
    let g = twisted_transition(k1, k2)?;
    let pair = standard_conic_pair();
    let mut sub = pair.try_map(&[1, 2], |f| Ok(f.clone()), |c| Ok(c.clone()))?;
    sub.matrices = sub.branch.iter().map(ChartMatrix::normal).collect();
    sub.transitions = vec![
        vec![Mat2::identity(), g.clone()],
        vec![g.inverse().ok_or(Error::Singular)?, Mat2::identity()],
    ];
    let v1 = g.apply(&[s.0.clone(), s.1.clone()]);
    let [x1, y1] = v1;
    let norm = section_norm(&sub, &[(x1, y1), s.clone()])?;
    if !norm.gluing_verified {
        return Err(Error::Internal("section norms do not glue".into()));
    }
    let h = norm.h[1].clone();
    let degree =
        chart2_degree(&h).ok_or_else(|| Error::NotASection("h is not polynomial on U2".into()))?;
    Ok((h, degree))
}

/// The double cover of the line branched at `x0 = 0` and `x1 = 0`, with the
/// pair of `O_X(1)` on `U0 = {t finite}`, `U1 = {t != 0}`, `t = x1/x0`.
pub fn two_point_cover_pair() -> LinePair {
    let t = RatFunc::x();
    let ti = t.inv().expect("nonzero");
    let charts = vec![
        P1Chart {
            label: "U0".into(),
            avoid: vec![BinaryForm {
                poly: UniPoly::one(),
                degree: 1,
            }],
        },
        P1Chart {
            label: "U1".into(),
            avoid: vec![BinaryForm {
                poly: UniPoly::x(),
                degree: 1,
            }],
        },
    ];
    let one = RatFunc::one();
    let xi = vec![vec![one.clone(), ti.clone()], vec![t.clone(), one.clone()]];
    let branch = vec![t.clone(), ti.clone()];
    let transitions = vec![vec![Mat2::identity(); 2]; 2];
    let matrices = vec![
        ChartMatrix::new(RatFunc::zero(), one.clone(), t.clone()),
        ChartMatrix::new(RatFunc::zero(), ti, one),
    ];
    let rep = AdmissiblePairRep {
        charts,
        xi,
        branch,
        transitions,
        matrices,
        is_good: false,
        is_normal: false,
    };
    let (good, _) = refine_good(&rep, &[vec![Refinement::Identity], vec![Refinement::Swap]])
        .expect("the two-point refinement is valid");
    good
}

/// Splitting type of `phi_* O_X(n)` for the two-point cover of the line.
pub fn two_point_splitting(n: i64) -> Result<SplittingType> {
    let normal = group_law(&[&two_point_cover_pair()], &[n])?;
    split_p1(&P1TransitionData::new(normal.transitions[0][1].clone())?)
}

/// `(k, k)` for `n = 2k + 1` and `(k, k - 1)` for `n = 2k`.
pub fn expected_transversal(n: i64) -> (i64, i64) {
    let k = n.div_euclid(2);
    if n.rem_euclid(2) == 1 {
        (k, k)
    } else {
        (k, k - 1)
    }
}
