//! Admissible pairs: local data `(G_ij, M_i)` describing the push-forward of
//! a line bundle along a double cover `t^2 = F`.
//!
//! On chart `i` the pair carries the twist `xi_ij` (transition of the line
//! bundle whose square is cut out by `F`), the local branch function `F_i`,
//! the rank-two transitions `G_ij` and the trace-free matrix
//! `M_i = [[a_i0, a_i2], [a_i1, -a_i0]]` with `det M_i = -F_i`. The matrix
//! `M_i` is the action of `t` on the local frame, so compatibility reads
//! `M_j = xi_ij G_ij^-1 M_i G_ij`.
//!
//! The representation is *good* when every `a_i1` is a unit on its chart and
//! *normal* when every `M_i` is `[[0, F_i], [1, 0]]`. [`group_law`] turns a
//! tuple of good representations on a common cover and an exponent vector
//! into the normal representation of the tensor product.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_arith::{Field, HomPoly3, HomRatio, Mat2, RatFunc, Rational, UniPoly};

/// An open set of the base together with the test "is this function a unit
/// here", which is all the pair algorithms need to know about charts.
pub trait ChartDomain<F: Field>: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn label(&self) -> &str;
    fn with_label(&self, label: String) -> Self;
    /// True if `f` is regular and nowhere zero on the chart.
    fn is_unit(&self, f: &F) -> bool;
    /// The chart shrunk to where `f` (regular on the chart) does not vanish.
    fn refine(&self, f: &F, label: String) -> Self;
}

/// `{w != 0 for every w in avoid}` in the projective plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2Chart {
    pub label: String,
    pub avoid: Vec<HomPoly3>,
}

impl P2Chart {
    /// The standard chart `{x_i != 0}`.
    pub fn standard(i: usize) -> Self {
        P2Chart {
            label: format!("U{i}"),
            avoid: vec![HomPoly3::var(i)],
        }
    }

    fn avoid_product(&self) -> HomPoly3 {
        self.avoid.iter().fold(HomPoly3::one(), |acc, w| &acc * w)
    }
}

/// True if every irreducible factor of `p` divides `w`.
fn form_supported_on(p: &HomPoly3, w: &HomPoly3) -> bool {
    let mut p = p.clone();
    loop {
        if p.is_constant() {
            return !p.is_zero();
        }
        let g = p.gcd(w).expect("nonzero");
        if g.is_constant() {
            return false;
        }
        p = p.div_exact(&g).expect("gcd divides");
    }
}

impl ChartDomain<HomRatio> for P2Chart {
    fn label(&self) -> &str {
        &self.label
    }

    fn with_label(&self, label: String) -> Self {
        P2Chart {
            label,
            avoid: self.avoid.clone(),
        }
    }

    fn is_unit(&self, f: &HomRatio) -> bool {
        let w = self.avoid_product();
        !f.is_zero() && form_supported_on(f.num(), &w) && form_supported_on(f.den(), &w)
    }

    fn refine(&self, f: &HomRatio, label: String) -> Self {
        let mut avoid = self.avoid.clone();
        if !self.is_unit(f) {
            avoid.push(f.num().normalized());
        }
        P2Chart { label, avoid }
    }
}

/// A binary form `w(u0, u1)` of the given degree, stored as `w(1, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub poly: UniPoly,
    pub degree: u32,
}

impl BinaryForm {
    /// True if the form vanishes at `t = infinity`, i.e. `[0 : 1]`.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.poly.deg() < self.degree as i64
    }

    /// The same form with the roles of `u0` and `u1` exchanged.
    pub fn swapped(&self) -> Self {
        BinaryForm {
            poly: self.poly.reverse(self.degree as usize),
            degree: self.degree,
        }
    }
}

/// `{w != 0 for every w in avoid}` on a projective line with affine
/// coordinate `t = u1 / u0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1Chart {
    pub label: String,
    pub avoid: Vec<BinaryForm>,
}

impl P1Chart {
    /// Squarefree polynomial whose zeros are the finite points outside the
    /// chart.
    pub fn finite_complement(&self) -> UniPoly {
        self.avoid
            .iter()
            .fold(UniPoly::one(), |acc, w| &acc * &w.poly)
            .squarefree_part()
    }

    pub fn contains_infinity(&self) -> bool {
        !self.avoid.iter().any(BinaryForm::vanishes_at_infinity)
    }

    /// The chart in the reciprocal coordinate `s = 1/t`.
    pub fn swapped(&self) -> Self {
        P1Chart {
            label: self.label.clone(),
            avoid: self.avoid.iter().map(BinaryForm::swapped).collect(),
        }
    }
}

fn poly_supported_on(p: &UniPoly, w: &UniPoly) -> bool {
    let mut p = p.clone();
    loop {
        if p.is_constant() {
            return !p.is_zero();
        }
        let g = p.gcd(w);
        if g.is_constant() {
            return false;
        }
        p = p.div_exact(&g).expect("gcd divides");
    }
}

impl ChartDomain<RatFunc> for P1Chart {
    fn label(&self) -> &str {
        &self.label
    }

    fn with_label(&self, label: String) -> Self {
        P1Chart {
            label,
            avoid: self.avoid.clone(),
        }
    }

    fn is_unit(&self, f: &RatFunc) -> bool {
        if f.is_zero() {
            return false;
        }
        let w = self
            .avoid
            .iter()
            .fold(UniPoly::one(), |acc, b| &acc * &b.poly);
        let order_at_infinity = f.den().deg() - f.num().deg();
        poly_supported_on(f.num(), &w)
            && poly_supported_on(f.den(), &w)
            && (order_at_infinity == 0 || !self.contains_infinity())
    }

    fn refine(&self, f: &RatFunc, label: String) -> Self {
        let mut avoid = self.avoid.clone();
        if !self.is_unit(f) {
            let degree = f.num().deg().max(f.den().deg()) as u32;
            avoid.push(BinaryForm {
                poly: f.num().monic(),
                degree,
            });
        }
        P1Chart { label, avoid }
    }
}

/// The entries `(a0, a1, a2)` of `M = [[a0, a2], [a1, -a0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMatrix<F> {
    pub a0: F,
    pub a1: F,
    pub a2: F,
}

impl<F: Field> ChartMatrix<F> {
    pub fn new(a0: F, a1: F, a2: F) -> Self {
        ChartMatrix { a0, a1, a2 }
    }

    /// The normal form `[[0, F], [1, 0]]`.
    pub fn normal(branch: &F) -> Self {
        ChartMatrix {
            a0: F::zero(),
            a1: F::one(),
            a2: branch.clone(),
        }
    }

    pub fn matrix(&self) -> Mat2<F> {
        Mat2::new(
            self.a0.clone(),
            self.a2.clone(),
            self.a1.clone(),
            self.a0.neg(),
        )
    }

    fn from_matrix(m: &Mat2<F>) -> Self {
        ChartMatrix {
            a0: m.m[0][0].clone(),
            a1: m.m[1][0].clone(),
            a2: m.m[0][1].clone(),
        }
    }

    pub fn neg(&self) -> Self {
        ChartMatrix {
            a0: self.a0.neg(),
            a1: self.a1.neg(),
            a2: self.a2.neg(),
        }
    }
}

/// Local data of a rank-two bundle `phi_* L` on a cover of the base.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissiblePairRep<F, C> {
    pub charts: Vec<C>,
    /// `xi[i][j]`, the twist cocycle.
    pub xi: Vec<Vec<F>>,
    /// `F_i` on each chart.
    pub branch: Vec<F>,
    /// `transitions[i][j] = G_ij`.
    pub transitions: Vec<Vec<Mat2<F>>>,
    pub matrices: Vec<ChartMatrix<F>>,
    pub is_good: bool,
    pub is_normal: bool,
}

impl<F: Field, C: ChartDomain<F>> AdmissiblePairRep<F, C> {
    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    /// True if `a_i1` is a unit on every chart.
    pub fn check_good(&self) -> bool {
        self.charts
            .iter()
            .zip(&self.matrices)
            .all(|(c, m)| c.is_unit(&m.a1))
    }

    pub fn check_normal(&self) -> bool {
        self.matrices
            .iter()
            .zip(&self.branch)
            .all(|(m, f)| *m == ChartMatrix::normal(f))
    }

    /// Rewrites every function through `f` and every chart through `chart`,
    /// keeping only the charts listed in `keep`.
    pub fn try_map<G: Field, D: ChartDomain<G>>(
        &self,
        keep: &[usize],
        f: impl Fn(&F) -> Result<G>,
        chart: impl Fn(&C) -> Result<D>,
    ) -> Result<AdmissiblePairRep<G, D>> {
        let mx = |m: &Mat2<F>| m.try_map(&f);
        Ok(AdmissiblePairRep {
            charts: keep
                .iter()
                .map(|&i| chart(&self.charts[i]))
                .collect::<Result<_>>()?,
            xi: keep
                .iter()
                .map(|&i| {
                    keep.iter()
                        .map(|&j| f(&self.xi[i][j]))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?,
            branch: keep
                .iter()
                .map(|&i| f(&self.branch[i]))
                .collect::<Result<_>>()?,
            transitions: keep
                .iter()
                .map(|&i| {
                    keep.iter()
                        .map(|&j| mx(&self.transitions[i][j]))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?,
            matrices: keep
                .iter()
                .map(|&i| {
                    let m = &self.matrices[i];
                    Ok(ChartMatrix::new(f(&m.a0)?, f(&m.a1)?, f(&m.a2)?))
                })
                .collect::<Result<_>>()?,
            is_good: self.is_good,
            is_normal: self.is_normal,
        })
    }

    /// Replaces chart `i` by a smaller open; the function data is unchanged.
    pub fn shrink_chart(&self, i: usize, chart: C) -> Self {
        let mut out = self.clone();
        out.charts[i] = chart;
        out
    }
}

/// One violated condition found by [`validate_admissible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    Shape(String),
    BranchIdentity { chart: usize },
    TransitionDiagonal { chart: usize },
    TransitionSingular { i: usize, j: usize },
    TransitionCocycle { i: usize, j: usize, k: usize },
    TwistDiagonal { chart: usize },
    TwistCocycle { i: usize, j: usize, k: usize },
    BranchTwist { i: usize, j: usize },
    Compatibility { i: usize, j: usize },
    NotGood { chart: usize },
    NotNormal { chart: usize },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::Shape(s) => write!(f, "malformed tables: {s}"),
            Defect::BranchIdentity { chart } => write!(f, "a0^2 + a1*a2 != F on chart {chart}"),
            Defect::TransitionDiagonal { chart } => {
                write!(f, "G_{chart}{chart} is not the identity")
            }
            Defect::TransitionSingular { i, j } => write!(f, "G_{i}{j} is singular"),
            Defect::TransitionCocycle { i, j, k } => write!(f, "G_{i}{j} G_{j}{k} != G_{i}{k}"),
            Defect::TwistDiagonal { chart } => write!(f, "xi_{chart}{chart} != 1"),
            Defect::TwistCocycle { i, j, k } => write!(f, "xi_{i}{j} xi_{j}{k} != xi_{i}{k}"),
            Defect::BranchTwist { i, j } => write!(f, "F_{j} != xi_{i}{j}^2 F_{i}"),
            Defect::Compatibility { i, j } => {
                write!(f, "M_{j} != xi_{i}{j} G_{i}{j}^-1 M_{i} G_{i}{j}")
            }
            Defect::NotGood { chart } => {
                write!(f, "flagged good but a1 is not a unit on chart {chart}")
            }
            Defect::NotNormal { chart } => {
                write!(f, "flagged normal but M_{chart} is not [[0, F], [1, 0]]")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub defects: Vec<Defect>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks every identity an admissible pair must satisfy and lists the
/// failures.
pub fn validate_admissible<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
) -> ValidationReport {
    let mut defects = Vec::new();
    let n = rep.charts.len();
    let square = |t: usize, w: &[usize]| t == n && w.iter().all(|&l| l == n);
    if rep.branch.len() != n
        || rep.matrices.len() != n
        || !square(
            rep.xi.len(),
            &rep.xi.iter().map(Vec::len).collect::<Vec<_>>(),
        )
        || !square(
            rep.transitions.len(),
            &rep.transitions.iter().map(Vec::len).collect::<Vec<_>>(),
        )
    {
        defects.push(Defect::Shape(format!("expected {n} charts in every table")));
        return ValidationReport { defects };
    }
    for i in 0..n {
        let m = &rep.matrices[i];
        if m.a0.mul(&m.a0).add(&m.a1.mul(&m.a2)) != rep.branch[i] {
            defects.push(Defect::BranchIdentity { chart: i });
        }
        if !rep.transitions[i][i].is_identity() {
            defects.push(Defect::TransitionDiagonal { chart: i });
        }
        if !rep.xi[i][i].is_one() {
            defects.push(Defect::TwistDiagonal { chart: i });
        }
        if rep.is_good && !rep.charts[i].is_unit(&m.a1) {
            defects.push(Defect::NotGood { chart: i });
        }
        if rep.is_normal && *m != ChartMatrix::normal(&rep.branch[i]) {
            defects.push(Defect::NotNormal { chart: i });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let g = &rep.transitions[i][j];
            let xi = &rep.xi[i][j];
            for k in 0..n {
                if g.mul(&rep.transitions[j][k]) != rep.transitions[i][k] {
                    defects.push(Defect::TransitionCocycle { i, j, k });
                }
                if xi.mul(&rep.xi[j][k]) != rep.xi[i][k] {
                    defects.push(Defect::TwistCocycle { i, j, k });
                }
            }
            if xi.mul(xi).mul(&rep.branch[i]) != rep.branch[j] {
                defects.push(Defect::BranchTwist { i, j });
            }
            match g.inverse() {
                None => defects.push(Defect::TransitionSingular { i, j }),
                Some(gi) => {
                    let lhs = gi.mul(&rep.matrices[i].matrix()).mul(g).scale(xi);
                    if lhs != rep.matrices[j].matrix() {
                        defects.push(Defect::Compatibility { i, j });
                    }
                }
            }
        }
    }
    ValidationReport { defects }
}

/// Local frame change used to make a chart good.
#[derive(Clone, Debug, PartialEq)]
pub enum Refinement<F> {
    Identity,
    Swap,
    /// `[[1, 0], [p, 1]]`.
    Shear(F),
}

impl<F: Field> Refinement<F> {
    pub fn matrix(&self) -> Mat2<F> {
        match self {
            Refinement::Identity => Mat2::identity(),
            Refinement::Swap => Mat2::swap(),
            Refinement::Shear(p) => Mat2::lower(p.clone()),
        }
    }
}

/// A refined representation with the origin of each of its charts.
pub type Refined<F, C> = (AdmissiblePairRep<F, C>, Vec<RefinedChart<F>>);

/// Where each chart of a refined representation came from.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedChart<F> {
    pub parent: usize,
    pub frame: Mat2<F>,
}

/// Refines the cover: chart `i` is replaced by one subchart per entry of
/// `choices[i]`, on which the local frame is changed by the corresponding
/// matrix `A` and the chart is shrunk to where the new `a1` is a unit.
///
/// The caller is responsible for the subcharts still covering the base;
/// [`make_good`] uses a choice that always does.
pub fn refine_good<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    choices: &[Vec<Refinement<F>>],
) -> Result<Refined<F, C>> {
    if choices.len() != rep.len() {
        return Err(Error::MismatchedCovers(format!(
            "{} refinement lists for {} charts",
            choices.len(),
            rep.len()
        )));
    }
    let mut origin = Vec::new();
    let mut charts = Vec::new();
    let mut matrices = Vec::new();
    for (i, list) in choices.iter().enumerate() {
        for (k, r) in list.iter().enumerate() {
            let a = r.matrix();
            let ai = a.inverse().ok_or(Error::Singular)?;
            let m = ChartMatrix::from_matrix(&ai.mul(&rep.matrices[i].matrix()).mul(&a));
            if m.a1.is_zero() {
                return Err(Error::DegenerateRefinement(i));
            }
            let label = if list.len() == 1 {
                format!("{}*", rep.charts[i].label())
            } else {
                format!("{}*{}", rep.charts[i].label(), k + 1)
            };
            charts.push(rep.charts[i].refine(&m.a1, label));
            matrices.push(m);
            origin.push(RefinedChart {
                parent: i,
                frame: a,
            });
        }
    }
    let inverses: Vec<Mat2<F>> = origin
        .iter()
        .map(|o| o.frame.inverse().expect("checked"))
        .collect();
    let n = origin.len();
    let mut xi = vec![Vec::with_capacity(n); n];
    let mut transitions = vec![Vec::with_capacity(n); n];
    for a in 0..n {
        for b in 0..n {
            let (i, j) = (origin[a].parent, origin[b].parent);
            xi[a].push(rep.xi[i][j].clone());
            transitions[a].push(
                inverses[a]
                    .mul(&rep.transitions[i][j])
                    .mul(&origin[b].frame),
            );
        }
    }
    let branch = origin
        .iter()
        .map(|o| rep.branch[o.parent].clone())
        .collect();
    let out = AdmissiblePairRep {
        charts,
        xi,
        branch,
        transitions,
        matrices,
        is_good: true,
        is_normal: false,
    };
    Ok((out, origin))
}

/// The refinement that always covers: charts where `a1` is already a unit
/// are kept; otherwise the chart is split into the identity, swap and shear
/// frames for the listed `p`. With no `p` listed, a chart whose `a2` is a
/// unit is handled by the swap alone; anything else cannot be certified.
pub fn make_good<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    p_choices: &[Vec<F>],
) -> Result<Refined<F, C>> {
    if p_choices.len() != rep.len() {
        return Err(Error::MismatchedCovers(format!(
            "{} p-lists for {} charts",
            p_choices.len(),
            rep.len()
        )));
    }
    let mut choices = Vec::new();
    for (i, ps) in p_choices.iter().enumerate() {
        let chart = &rep.charts[i];
        let m = &rep.matrices[i];
        let list = if chart.is_unit(&m.a1) {
            vec![Refinement::Identity]
        } else if ps.is_empty() {
            if chart.is_unit(&m.a2) {
                vec![Refinement::Swap]
            } else {
                return Err(Error::CannotCertifyCovering(i));
            }
        } else {
            let mut v = vec![Refinement::Identity, Refinement::Swap];
            v.extend(ps.iter().cloned().map(Refinement::Shear));
            v
        };
        choices.push(list);
    }
    refine_good(rep, &choices)
}

fn require_good<F: Field, C: ChartDomain<F>>(rep: &AdmissiblePairRep<F, C>) -> Result<()> {
    match (0..rep.len()).find(|&i| !rep.charts[i].is_unit(&rep.matrices[i].a1)) {
        Some(i) => Err(Error::NotGood(i)),
        None => Ok(()),
    }
}

fn k_parts<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    i: usize,
    j: usize,
) -> (F, F, Mat2<F>) {
    let g = &rep.transitions[i][j];
    let m = &rep.matrices[i];
    let lin = m.a1.mul(&g.m[0][0]).sub(&m.a0.mul(&g.m[1][0]));
    let m0 = ChartMatrix::normal(&rep.branch[i]).matrix();
    (lin, g.m[1][0].clone(), m0)
}

/// `K+_ij = (1/a_i1) ((a_i1 g11 - a_i0 g21) E + g21 M0_i)` where
/// `M0_i = [[0, F_i], [1, 0]]`.
pub fn k_plus<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    i: usize,
    j: usize,
) -> Result<Mat2<F>> {
    let (lin, g21, m0) = k_parts(rep, i, j);
    let a1i = rep.matrices[i].a1.inv().ok_or(Error::NotGood(i))?;
    Ok(Mat2::scalar(lin).add(&m0.scale(&g21)).scale(&a1i))
}

/// `K-_ij = (xi_ij / (a_i1 det G_ij)) ((a_i1 g11 - a_i0 g21) E - g21 M0_i)`.
pub fn k_minus<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    i: usize,
    j: usize,
) -> Result<Mat2<F>> {
    let (lin, g21, m0) = k_parts(rep, i, j);
    let denom = rep.matrices[i].a1.mul(&rep.transitions[i][j].det());
    let c = rep.xi[i][j].div(&denom).ok_or(Error::NotGood(i))?;
    Ok(Mat2::scalar(lin).sub(&m0.scale(&g21)).scale(&c))
}

fn same_cover<F: Field, C: ChartDomain<F>>(
    a: &AdmissiblePairRep<F, C>,
    b: &AdmissiblePairRep<F, C>,
) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::MismatchedCovers(format!(
            "{} charts versus {}",
            a.len(),
            b.len()
        )));
    }
    if a.xi != b.xi {
        return Err(Error::MismatchedCovers("twist cocycles differ".into()));
    }
    if a.branch != b.branch {
        return Err(Error::MismatchedCovers("branch functions differ".into()));
    }
    Ok(())
}

/// Normal representation of `L_1^n_1 (x) ... (x) L_m^n_m` from good
/// representations of the `L_k` on a common cover.
pub fn group_law<F: Field, C: ChartDomain<F>>(
    reps: &[&AdmissiblePairRep<F, C>],
    n: &[i64],
) -> Result<AdmissiblePairRep<F, C>> {
    if reps.len() != n.len() {
        return Err(Error::ExponentLength {
            expected: reps.len(),
            got: n.len(),
        });
    }
    let first = *reps
        .first()
        .ok_or_else(|| Error::Input("no representations given".into()))?;
    for r in reps {
        same_cover(first, r)?;
        require_good(r)?;
    }
    let size = first.len();
    let mut transitions = vec![Vec::with_capacity(size); size];
    for (i, row) in transitions.iter_mut().enumerate() {
        for j in 0..size {
            let mut g = Mat2::identity();
            for (r, &nk) in reps.iter().zip(n) {
                let k = if nk >= 0 {
                    k_plus(r, i, j)?
                } else {
                    k_minus(r, i, j)?
                };
                g = g.mul(&k.pow(nk.unsigned_abs() as u32));
            }
            row.push(g.mul(&Mat2::diag(F::one(), first.xi[i][j].clone())));
        }
    }
    Ok(AdmissiblePairRep {
        charts: first.charts.clone(),
        xi: first.xi.clone(),
        branch: first.branch.clone(),
        transitions,
        matrices: first.branch.iter().map(ChartMatrix::normal).collect(),
        is_good: true,
        is_normal: true,
    })
}

/// Representation of the dual-twisted bundle `L^-1`: transitions become
/// `(xi_ij / det G_ij) G_ij` and `M` becomes `-M`.
pub fn inverse_pair<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
) -> Result<AdmissiblePairRep<F, C>> {
    let mut out = rep.clone();
    for i in 0..rep.len() {
        for j in 0..rep.len() {
            let g = &rep.transitions[i][j];
            let c = rep.xi[i][j].div(&g.det()).ok_or(Error::Singular)?;
            out.transitions[i][j] = g.scale(&c);
        }
    }
    out.matrices = rep.matrices.iter().map(ChartMatrix::neg).collect();
    out.is_normal = false;
    Ok(out)
}

/// Representation of the pull-back by the covering involution: `M -> -M`.
pub fn conjugate_pair<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
) -> AdmissiblePairRep<F, C> {
    let mut out = rep.clone();
    out.matrices = rep.matrices.iter().map(ChartMatrix::neg).collect();
    out.is_normal = false;
    out
}

/// The ramification line bundle: `G_ij = diag(xi_ij^-1, 1)`, `M` normal.
///
/// Fails unless `F_j = xi_ij^2 F_i` everywhere.
pub fn ramification_pair<F: Field, C: ChartDomain<F>>(
    charts: Vec<C>,
    branch: Vec<F>,
    xi: Vec<Vec<F>>,
) -> Result<AdmissiblePairRep<F, C>> {
    let transitions = xi
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| Ok(Mat2::diag(x.inv().ok_or(Error::DivisionByZero)?, F::one())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, row) in xi.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.mul(x).mul(&branch[i]) != branch[j] {
                return Err(Error::InconsistentCocycle(format!(
                    "F_{j} != xi_{i}{j}^2 F_{i}"
                )));
            }
        }
    }
    let matrices = branch.iter().map(ChartMatrix::normal).collect();
    Ok(AdmissiblePairRep {
        charts,
        xi,
        branch,
        transitions,
        matrices,
        is_good: true,
        is_normal: true,
    })
}

/// Local norms of a global section, see [`section_norm`].
#[derive(Clone, Debug, PartialEq)]
pub struct SectionNormResult<F> {
    pub h: Vec<F>,
    /// `(det G_ij / xi_ij) h_j = h_i` on every overlap.
    pub gluing_verified: bool,
}

/// For a section given chart-wise by `(x_i, y_i)` (the vector
/// `(x_i + a_i0 y_i, a_i1 y_i)` must transform by `G_ij`), returns the
/// local norms `h_i = a_i1 (x_i^2 - y_i^2 F_i)`, which glue via
/// `(det G_ij / xi_ij) h_j = h_i`.
pub fn section_norm<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    sections: &[(F, F)],
) -> Result<SectionNormResult<F>> {
    if sections.len() != rep.len() {
        return Err(Error::NotASection(format!(
            "{} local pieces for {} charts",
            sections.len(),
            rep.len()
        )));
    }
    let vecs: Vec<[F; 2]> = sections
        .iter()
        .zip(&rep.matrices)
        .map(|((x, y), m)| [x.add(&m.a0.mul(y)), m.a1.mul(y)])
        .collect();
    for i in 0..rep.len() {
        for j in 0..rep.len() {
            if rep.transitions[i][j].apply(&vecs[j]) != vecs[i] {
                return Err(Error::NotASection(format!(
                    "pieces on charts {i} and {j} do not glue"
                )));
            }
        }
    }
    let h: Vec<F> = sections
        .iter()
        .zip(&rep.matrices)
        .zip(&rep.branch)
        .map(|(((x, y), m), f)| m.a1.mul(&x.mul(x).sub(&y.mul(y).mul(f))))
        .collect();
    let mut gluing_verified = true;
    for i in 0..rep.len() {
        for j in 0..rep.len() {
            let c = rep.transitions[i][j]
                .det()
                .div(&rep.xi[i][j])
                .ok_or(Error::DivisionByZero)?;
            gluing_verified &= c.mul(&h[j]) == h[i];
        }
    }
    Ok(SectionNormResult { h, gluing_verified })
}

fn require_normal<F: Field, C: ChartDomain<F>>(rep: &AdmissiblePairRep<F, C>) -> Result<()> {
    match (0..rep.len()).find(|&i| rep.matrices[i] != ChartMatrix::normal(&rep.branch[i])) {
        Some(i) => Err(Error::NotNormal(i)),
        None => Ok(()),
    }
}

fn witness_matrix<F: Field>(alpha: &F, beta: &F, branch: &F) -> Mat2<F> {
    Mat2::new(alpha.clone(), beta.mul(branch), beta.clone(), alpha.clone())
}

/// Checks that `W_i = [[alpha_i, beta_i F_i], [beta_i, alpha_i]]`, with
/// `alpha_i^2 - beta_i^2 F_i` a unit on chart `i`, intertwines two normal
/// representations on the same cover: `W_i G_ij = H_ij W_j`.
pub fn verify_equivalence_witness<F: Field, C: ChartDomain<F>>(
    a: &AdmissiblePairRep<F, C>,
    b: &AdmissiblePairRep<F, C>,
    witness: &[(F, F)],
) -> Result<bool> {
    same_cover(a, b)?;
    require_normal(a)?;
    require_normal(b)?;
    if witness.len() != a.len() {
        return Err(Error::MismatchedCovers(format!(
            "{} witness pieces for {} charts",
            witness.len(),
            a.len()
        )));
    }
    let w: Vec<Mat2<F>> = witness
        .iter()
        .zip(&a.branch)
        .map(|((al, be), f)| witness_matrix(al, be, f))
        .collect();
    for (i, wi) in w.iter().enumerate() {
        if !a.charts[i].is_unit(&wi.det()) {
            return Ok(false);
        }
        for (j, wj) in w.iter().enumerate() {
            if wi.mul(&a.transitions[i][j]) != b.transitions[i][j].mul(wj) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Extends a witness prescribed on one chart to all charts through
/// `W_j = H_aj^-1 W_a G_aj`; `None` if some `W_j` is not of witness shape.
pub fn propagate_witness<F: Field, C: ChartDomain<F>>(
    a: &AdmissiblePairRep<F, C>,
    b: &AdmissiblePairRep<F, C>,
    anchor: usize,
    at_anchor: (F, F),
) -> Result<Option<Vec<(F, F)>>> {
    same_cover(a, b)?;
    let wa = witness_matrix(&at_anchor.0, &at_anchor.1, &a.branch[anchor]);
    let mut out = Vec::new();
    for j in 0..a.len() {
        let hi = b.transitions[anchor][j].inverse().ok_or(Error::Singular)?;
        let wj = hi.mul(&wa).mul(&a.transitions[anchor][j]);
        let (al, be) = (wj.m[0][0].clone(), wj.m[1][0].clone());
        if wj != witness_matrix(&al, &be, &a.branch[j]) {
            return Ok(None);
        }
        out.push((al, be));
    }
    Ok(Some(out))
}

/// Writes `F = a0^2 + a1 f` with `a0, a1` forms, when `F` restricted to the
/// line `f = 0` is a perfect square over Q. `a0` is normalized to contain
/// no monomial divisible by the highest-index variable occurring in `f`.
pub fn branch_decompose(big_f: &HomPoly3, f: &HomPoly3) -> Result<Option<(HomPoly3, HomPoly3)>> {
    if f.degree() != 1 || f.is_zero() {
        return Err(Error::NotLinear("the divisor"));
    }
    if big_f.degree() % 2 == 1 {
        return Err(Error::DegreeMismatch(format!(
            "branch form of odd degree {}",
            big_f.degree()
        )));
    }
    let l = big_f.degree() / 2;
    let coeff = |i: usize| {
        let mut e = [0; 3];
        e[i] = 1;
        f.coeff(&e)
    };
    let v = (0..3)
        .rev()
        .find(|&i| !num_traits::Zero::is_zero(&coeff(i)))
        .expect("nonzero linear form");
    let rest: Vec<usize> = (0..3).filter(|&i| i != v).collect();
    // On f = 0 parametrize by the two remaining variables: the line through
    // the points where one of them is 1 and the other 0.
    let point = |k: usize| -> [Rational; 3] {
        let mut p: [Rational; 3] = Default::default();
        p[k] = Rational::from_integer(1.into());
        p[v] = -coeff(k) / coeff(v);
        p
    };
    let (u, w) = (rest[0], rest[1]);
    // Points [p_w + t p_u] have (x_u, x_w) = (t, 1).
    let restricted = big_f.restrict_to_line(&point(w), &point(u))?;
    let Some(root) = restricted.sqrt_poly() else {
        return Ok(None);
    };
    let mut a0 = HomPoly3::zero(l);
    for (k, c) in root.coeffs().iter().enumerate() {
        let mut e = [0; 3];
        e[u] = k as u32;
        e[w] = l - k as u32;
        a0 = &a0 + &HomPoly3::monomial(c.clone(), e);
    }
    let rem = big_f - &(&a0 * &a0);
    let a1 = rem
        .div_exact(f)
        .ok_or_else(|| Error::Internal("restriction square did not lift".into()))?;
    Ok(Some((a0, a1)))
}
