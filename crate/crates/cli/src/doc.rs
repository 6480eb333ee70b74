//! Input documents and their conversion to library types.
//!
//! A document is a JSON object; each command reads the fields it needs and
//! rejects unknown ones. Polynomials are given either as expression strings
//! in the grammar of [`crate::poly`] or as the term lists the tool emits, so
//! any output fragment can be fed back as input. Functions are a polynomial
//! or `{"num": ..., "den": ...}`; matrices are 2x2 arrays of functions.
//!
//! The optional `"variables"` header declares the variable names. Plane
//! documents use `["x0", "x1", "x2"]`; documents about the projective line
//! use `["x"]` (the other chart's coordinate `y = 1/x` is implicit).

use dcover_core::conic_p2::{LineInP2, PlanePair};
use dcover_core::double_cover::{AdmissiblePairRep, ChartMatrix, P2Chart};
use dcover_core::exact_arith::rational::parse_rational;
use dcover_core::exact_arith::{
    DistinguishedOpen, HomPoly3, HomRatio, Mat2, RatFunc, Rational, UniPoly,
};
use serde::Deserialize;

use crate::poly::{parse_poly, Poly, LINE_VARS, PLANE_VARS};
use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CoeffIn {
    Int(i64),
    Str(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermIn {
    pub exponents: Vec<u32>,
    pub coeff: CoeffIn,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PolyIn {
    Int(i64),
    Expr(String),
    Terms(Vec<TermIn>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FuncIn {
    Frac { num: PolyIn, den: PolyIn },
    Poly(PolyIn),
}

pub type MatIn = Vec<Vec<FuncIn>>;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum LineIn {
    Coeffs(Vec<CoeffIn>),
    Form(PolyIn),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartIn {
    pub label: String,
    pub avoid: Vec<PolyIn>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartMatrixIn {
    pub a0: FuncIn,
    pub a1: FuncIn,
    pub a2: FuncIn,
}

/// Explicit data of a pair on the projective plane.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairData {
    pub charts: Vec<ChartIn>,
    pub xi: Vec<Vec<FuncIn>>,
    pub branch: Vec<FuncIn>,
    pub transitions: Vec<Vec<MatIn>>,
    pub matrices: Vec<ChartMatrixIn>,
    pub good: Option<bool>,
    pub normal: Option<bool>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PairIn {
    Named(String),
    Explicit(Box<PairData>),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub variables: Option<Vec<String>>,
    /// `split-p1`: one transition matrix in `x`.
    pub matrix: Option<MatIn>,
    /// `trivialize-a1`: the polynomials `h_i` of the opens `{h_i != 0}`.
    pub opens: Option<Vec<PolyIn>>,
    /// `trivialize-a1`: the full table `G_ij`.
    pub transitions: Option<Vec<Vec<MatIn>>>,
    /// `trivialize-a1`: only the matrices `G_i0`.
    pub to_base: Option<Vec<MatIn>>,
    /// `"conic"` (default) or `"two-point"`.
    pub cover: Option<String>,
    /// Branch conic; defaults to `x0^2 + x1*x2`.
    pub conic: Option<PolyIn>,
    pub pair: Option<PairIn>,
    pub pairs: Option<Vec<PairIn>>,
    pub exponents: Option<Vec<i64>>,
    pub line: Option<LineIn>,
    pub lines: Option<Vec<LineIn>>,
    /// `jumping-scan`: number of seeded random transversal lines.
    pub random: Option<usize>,
    /// `jumping-scan`: tangent-line parameters `b`.
    pub tangents: Option<Vec<CoeffIn>>,
    /// `jumping-scan`: also scan the tangents `x1 = 0`, `x2 = 0`.
    pub coordinate_tangents: Option<bool>,
    /// `branch-decompose`: the branch form `F`.
    pub form: Option<PolyIn>,
    /// `branch-decompose`: the linear form `f`.
    pub divisor: Option<PolyIn>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn parse_document(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| input(format!("malformed input document: {e}")))
}

impl InputDocument {
    /// Checks the `"variables"` header, if present, against `expected`.
    pub fn check_variables(&self, expected: &[&str]) -> Result<(), CliError> {
        match &self.variables {
            Some(v) if v.iter().map(String::as_str).ne(expected.iter().copied()) => {
                Err(input(format!(
                    "this command expects variables [{}], the document declares [{}]",
                    expected.join(", "),
                    v.join(", ")
                )))
            }
            _ => Ok(()),
        }
    }
}

pub fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    field
        .as_ref()
        .ok_or_else(|| input(format!("the input document needs a \"{name}\" field")))
}

pub fn coeff(c: &CoeffIn) -> Result<Rational, CliError> {
    match c {
        CoeffIn::Int(i) => Ok(Rational::from_integer((*i).into())),
        CoeffIn::Str(s) => {
            parse_rational(s).ok_or_else(|| input(format!("'{s}' is not a rational number p/q")))
        }
    }
}

pub fn poly(p: &PolyIn, vars: &[&str]) -> Result<Poly, CliError> {
    match p {
        PolyIn::Int(i) => Ok(Poly::constant(
            vars.len(),
            Rational::from_integer((*i).into()),
        )),
        PolyIn::Expr(s) => parse_poly(s, vars).map_err(|e| input(format!("in '{s}': {e}"))),
        PolyIn::Terms(ts) => {
            let mut terms = Vec::with_capacity(ts.len());
            for t in ts {
                if t.exponents.len() != vars.len() {
                    return Err(input(format!(
                        "exponent vector {:?} should have {} entries",
                        t.exponents,
                        vars.len()
                    )));
                }
                terms.push((t.exponents.clone(), coeff(&t.coeff)?));
            }
            Ok(Poly::from_terms(vars.len(), terms))
        }
    }
}

pub fn plane_poly(p: &PolyIn) -> Result<HomPoly3, CliError> {
    poly(p, &PLANE_VARS)?.to_hom().map_err(input)
}

pub fn line_poly(p: &PolyIn) -> Result<UniPoly, CliError> {
    poly(p, &LINE_VARS)?.to_uni().map_err(input)
}

fn split_func(f: &FuncIn) -> (&PolyIn, Option<&PolyIn>) {
    match f {
        FuncIn::Frac { num, den } => (num, Some(den)),
        FuncIn::Poly(p) => (p, None),
    }
}

pub fn ratfunc(f: &FuncIn) -> Result<RatFunc, CliError> {
    let (num, den) = split_func(f);
    let den = match den {
        Some(d) => line_poly(d)?,
        None => UniPoly::one(),
    };
    Ok(RatFunc::new(line_poly(num)?, den)?)
}

/// A degree-zero ratio of forms. A bare polynomial must be a constant.
pub fn homratio(f: &FuncIn) -> Result<HomRatio, CliError> {
    let (num, den) = split_func(f);
    let den = match den {
        Some(d) => plane_poly(d)?,
        None => HomPoly3::one(),
    };
    Ok(HomRatio::new(plane_poly(num)?, den)?)
}

pub fn matrix<F: dcover_core::exact_arith::Field>(
    m: &MatIn,
    entry: impl Fn(&FuncIn) -> Result<F, CliError>,
) -> Result<Mat2<F>, CliError> {
    if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
        return Err(input("matrices must be 2x2"));
    }
    Ok(Mat2::new(
        entry(&m[0][0])?,
        entry(&m[0][1])?,
        entry(&m[1][0])?,
        entry(&m[1][1])?,
    ))
}

pub fn open(h: &PolyIn) -> Result<DistinguishedOpen, CliError> {
    Ok(DistinguishedOpen::new(line_poly(h)?)?)
}

pub fn line(l: &LineIn) -> Result<LineInP2, CliError> {
    let form: [Rational; 3] = match l {
        LineIn::Coeffs(cs) => {
            if cs.len() != 3 {
                return Err(input("a line is given by 3 coefficients"));
            }
            [coeff(&cs[0])?, coeff(&cs[1])?, coeff(&cs[2])?]
        }
        LineIn::Form(p) => {
            let p = plane_poly(p)?;
            if p.degree() != 1 {
                return Err(input("a line must be a linear form"));
            }
            [0, 1, 2].map(|i| {
                let mut e = [0; 3];
                e[i] = 1;
                p.coeff(&e)
            })
        }
    };
    Ok(LineInP2::new(form)?)
}

pub fn plane_pair(d: &PairData) -> Result<PlanePair, CliError> {
    let n = d.charts.len();
    let square = |rows: usize, cols: &[usize]| rows == n && cols.iter().all(|c| *c == n);
    if !square(d.xi.len(), &d.xi.iter().map(Vec::len).collect::<Vec<_>>())
        || !square(
            d.transitions.len(),
            &d.transitions.iter().map(Vec::len).collect::<Vec<_>>(),
        )
        || d.branch.len() != n
        || d.matrices.len() != n
    {
        return Err(input(format!(
            "pair tables must be indexed by the {n} charts"
        )));
    }
    let charts = d
        .charts
        .iter()
        .map(|c| {
            Ok(P2Chart {
                label: c.label.clone(),
                avoid: c
                    .avoid
                    .iter()
                    .map(plane_poly)
                    .collect::<Result<_, CliError>>()?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let xi =
        d.xi.iter()
            .map(|row| row.iter().map(homratio).collect())
            .collect::<Result<Vec<Vec<_>>, CliError>>()?;
    let branch = d
        .branch
        .iter()
        .map(homratio)
        .collect::<Result<Vec<_>, CliError>>()?;
    let transitions = d
        .transitions
        .iter()
        .map(|row| row.iter().map(|m| matrix(m, homratio)).collect())
        .collect::<Result<Vec<Vec<_>>, CliError>>()?;
    let matrices = d
        .matrices
        .iter()
        .map(|m| {
            Ok(ChartMatrix::new(
                homratio(&m.a0)?,
                homratio(&m.a1)?,
                homratio(&m.a2)?,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut rep = AdmissiblePairRep {
        charts,
        xi,
        branch,
        transitions,
        matrices,
        is_good: false,
        is_normal: false,
    };
    rep.is_good = d.good.unwrap_or_else(|| rep.check_good());
    rep.is_normal = d.normal.unwrap_or_else(|| rep.check_normal());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dcover_core::exact_arith::rational::ratio;

    #[test]
    fn functions_in_both_spellings() {
        let doc = parse_document(
            r#"{"matrix": [["x^3", "0"], [{"num": [{"exponents": [0], "coeff": "1/2"}], "den": "x"}, 1]]}"#,
        )
        .unwrap();
        let m = matrix(doc.matrix.as_ref().unwrap(), ratfunc).unwrap();
        assert_eq!(m.m[1][0], RatFunc::x().inv().unwrap().scale(&ratio(1, 2)));
    }

    #[test]
    fn lines_from_coefficients_or_forms() {
        let doc = parse_document(r#"{"lines": [[1, "1/2", -3], "x0 + 1/2*x1 - 3*x2"]}"#).unwrap();
        let ls: Vec<_> = doc
            .lines
            .unwrap()
            .iter()
            .map(|l| line(l).unwrap())
            .collect();
        assert_eq!(ls[0], ls[1]);
    }

    #[test]
    fn unknown_fields_and_variables() {
        assert!(parse_document(r#"{"matrx": []}"#).is_err());
        let doc = parse_document(r#"{"variables": ["t"]}"#).unwrap();
        assert!(doc.check_variables(&LINE_VARS).is_err());
    }
}
