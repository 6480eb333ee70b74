use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use dcover_core::conic_p2::{
    coordinate_tangents, global_sections, jumping_scan, random_lines, restricted_for_pairs,
    standard_conic_pair, tangent_lines, two_point_cover_pair, working_line, ConicCover, LineInP2,
    LineKind, LinePair, PlanePair, RestrictedBundle,
};
use dcover_core::double_cover::{
    branch_decompose, conjugate_pair, group_law, ramification_pair, validate_admissible,
    AdmissiblePairRep, ChartDomain, P2Chart, ValidationReport,
};
use dcover_core::exact_arith::{Field, Rational};
use dcover_core::p1_bundles::{
    split_p1, trivialize_affine, verify_factorization, verify_trivialization, AffineCocycle,
    P1TransitionData, SplittingType,
};

use crate::doc::{self, InputDocument, PairIn};
use crate::poly::{Poly, LINE_VARS, PLANE_VARS};
use crate::tree::Node;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exact computations with rank-two bundles and double covers.
#[derive(Debug, Parser)]
#[command(name = "dcover", version)]
pub struct Cli {
    /// Input document (JSON); `-` or omitted reads standard input.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a bundle on P^1 given by one transition matrix ("matrix").
    SplitP1,
    /// Trivialize a cocycle on the affine line ("opens" and "transitions"
    /// or "to_base").
    TrivializeA1,
    /// Normal representation of a tensor product of pairs ("cover",
    /// "pairs", "exponents").
    Pushforward,
    /// Restrict a push-forward to a line ("line", "exponents", optional
    /// "pairs" and "conic").
    RestrictLine,
    /// Splitting types of phi_* O_X(0, n) over a batch of lines.
    JumpingScan {
        #[arg(long)]
        n: i64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Seed for the random lines.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Global sections of phi_* O_X(k1, k2) on the conic cover.
    Sections {
        /// `k1,k2` with k1 >= k2.
        #[arg(long, value_parser = parse_bidegree)]
        bidegree: (i64, i64),
        #[arg(long)]
        degree_bound: u32,
    },
    /// Find F = a0^2 + f a1 ("form" F, "divisor" f).
    BranchDecompose {
        /// The branch form, overriding the document.
        #[arg(long)]
        form: Option<String>,
        /// The linear form, overriding the document.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Check every identity of an admissible pair ("pair", "cover").
    Validate,
}

fn parse_bidegree(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected k1,k2")?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("'{x}': {e}"));
    Ok((p(a)?, p(b)?))
}

fn needs_input(c: &Command) -> bool {
    !matches!(
        c,
        Command::JumpingScan { .. } | Command::Sections { .. } | Command::BranchDecompose { .. }
    )
}

fn read_document(cli: &Cli, stdin: &mut dyn Read) -> Result<InputDocument, CliError> {
    let text = match cli.input.as_deref() {
        Some("-") => read_all(stdin)?,
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?,
        None if needs_input(&cli.command) => read_all(stdin)?,
        None => return Ok(InputDocument::default()),
    };
    doc::parse_document(&text)
}

fn read_all(stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut s = String::new();
    stdin
        .read_to_string(&mut s)
        .map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
    Ok(s)
}

type Failure = (CliError, Option<String>);

/// Runs the parsed command; on failure also returns any report that should
/// still be printed.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, Failure> {
    let doc = read_document(cli, stdin).map_err(|e| (e, None))?;
    let (node, rejection) = dispatch(cli, &doc).map_err(|e| (e, None))?;
    let rendered = match cli.format {
        Format::Json => format!("{:#}\n", node.to_json()),
        Format::Text => node.to_text(),
    };
    let printed = match &cli.output {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| (CliError::Io(format!("cannot write {path}: {e}")), None))?;
            String::new()
        }
        None => rendered,
    };
    match rejection {
        Some(e) => Err((e, Some(printed))),
        None => Ok(printed),
    }
}

fn dispatch(cli: &Cli, d: &InputDocument) -> Result<(Node, Option<CliError>), CliError> {
    let out = match &cli.command {
        Command::SplitP1 => split_p1_cmd(d)?,
        Command::TrivializeA1 => trivialize_cmd(d)?,
        Command::Pushforward => pushforward_cmd(d)?,
        Command::RestrictLine => restrict_line_cmd(d)?,
        Command::JumpingScan { n, jobs, seed } => jumping_scan_cmd(d, *n, *jobs, *seed)?,
        Command::Sections {
            bidegree,
            degree_bound,
        } => sections_cmd(*bidegree, *degree_bound)?,
        Command::BranchDecompose { form, divisor } => branch_decompose_cmd(d, form, divisor)?,
        Command::Validate => return validate_cmd(d),
    };
    Ok((out, None))
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn rat_list(xs: &[Rational]) -> Node {
    Node::List(xs.iter().cloned().map(Node::Rational).collect())
}

fn splitting_node(s: &SplittingType, verified: bool) -> Node {
    Node::map([
        ("e", Node::ints(&[s.e1, s.e2])),
        ("Ax", Node::matrix(&s.a_x, Node::ratfunc)),
        ("Ay", Node::matrix(&s.a_y, |f| Node::ratfunc_in(f, "y"))),
        ("verified", Node::Bool(verified)),
    ])
}

fn split_p1_cmd(d: &InputDocument) -> Result<Node, CliError> {
    d.check_variables(&LINE_VARS)?;
    let g = doc::matrix(doc::require(&d.matrix, "matrix")?, doc::ratfunc)?;
    let data = P1TransitionData::new(g)?;
    let s = split_p1(&data)?;
    let ok = verify_factorization(&data, &s);
    if !ok {
        return Err(dcover_core::Error::Internal("factorization does not verify".into()).into());
    }
    Ok(splitting_node(&s, ok))
}

fn trivialize_cmd(d: &InputDocument) -> Result<Node, CliError> {
    d.check_variables(&LINE_VARS)?;
    let opens = doc::require(&d.opens, "opens")?
        .iter()
        .map(doc::open)
        .collect::<Result<Vec<_>, _>>()?;
    let cocycle = match (&d.transitions, &d.to_base) {
        (Some(t), None) => {
            let table = t
                .iter()
                .map(|row| row.iter().map(|m| doc::matrix(m, doc::ratfunc)).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            if table.len() != opens.len() || table.iter().any(|r| r.len() != opens.len()) {
                return Err(input(
                    "\"transitions\" must be a square table indexed by the opens",
                ));
            }
            AffineCocycle::new(opens, table)?
        }
        (None, Some(b)) => {
            let to_base = b
                .iter()
                .map(|m| doc::matrix(m, doc::ratfunc))
                .collect::<Result<Vec<_>, _>>()?;
            AffineCocycle::from_base(opens, to_base)?
        }
        _ => return Err(input("give exactly one of \"transitions\" and \"to_base\"")),
    };
    let a = trivialize_affine(&cocycle)?;
    let ok = verify_trivialization(&cocycle, &a);
    if !ok {
        return Err(dcover_core::Error::Internal("trivialization does not verify".into()).into());
    }
    Ok(Node::map([
        (
            "A",
            Node::List(a.iter().map(|m| Node::matrix(m, Node::ratfunc)).collect()),
        ),
        ("verified", Node::Bool(ok)),
    ]))
}

enum Cover {
    Conic,
    TwoPoint,
}

fn cover_of(d: &InputDocument) -> Result<Cover, CliError> {
    match d.cover.as_deref() {
        None | Some("conic") => Ok(Cover::Conic),
        Some("two-point") => Ok(Cover::TwoPoint),
        Some(other) => Err(input(format!(
            "unknown cover '{other}' (expected conic or two-point)"
        ))),
    }
}

fn conic_cover(d: &InputDocument) -> Result<ConicCover, CliError> {
    match &d.conic {
        None => Ok(ConicCover::standard()),
        Some(p) => Ok(ConicCover::new(doc::plane_poly(p)?)?),
    }
}

fn named_plane_pair(name: &str) -> Result<PlanePair, CliError> {
    let std = standard_conic_pair();
    match name {
        "standard" => Ok(std),
        "conjugate" => Ok(conjugate_pair(&std)),
        "ramification" => Ok(ramification_pair(
            (0..3).map(P2Chart::standard).collect(),
            std.branch.clone(),
            std.xi.clone(),
        )?),
        other => Err(input(format!(
            "unknown pair '{other}' on the conic cover (expected standard, conjugate or ramification)"
        ))),
    }
}

fn named_line_pair(name: &str) -> Result<LinePair, CliError> {
    let std = two_point_cover_pair();
    match name {
        "standard" => Ok(std),
        "ramification" => Ok(ramification_pair(
            std.charts.clone(),
            std.branch.clone(),
            std.xi.clone(),
        )?),
        other => Err(input(format!(
            "unknown pair '{other}' on the two-point cover (expected standard or ramification)"
        ))),
    }
}

fn plane_pair(p: &PairIn) -> Result<PlanePair, CliError> {
    let pair = match p {
        PairIn::Named(name) => named_plane_pair(name)?,
        PairIn::Explicit(data) => doc::plane_pair(data)?,
    };
    let report = validate_admissible(&pair);
    if !report.is_valid() {
        return Err(input(format!(
            "the pair is not admissible: {}",
            defects(&report).join("; ")
        )));
    }
    Ok(pair)
}

fn line_pair(p: &PairIn) -> Result<LinePair, CliError> {
    match p {
        PairIn::Named(name) => named_line_pair(name),
        PairIn::Explicit(_) => Err(input("explicit pairs are accepted on the conic cover only")),
    }
}

fn defects(r: &ValidationReport) -> Vec<String> {
    r.defects.iter().map(ToString::to_string).collect()
}

fn pair_node<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    chart: impl Fn(&C) -> Node,
    func: impl Fn(&F) -> Node + Copy,
) -> Node {
    Node::map([
        ("charts", Node::List(rep.charts.iter().map(chart).collect())),
        (
            "xi",
            Node::List(
                rep.xi
                    .iter()
                    .map(|r| Node::List(r.iter().map(func).collect()))
                    .collect(),
            ),
        ),
        ("branch", Node::List(rep.branch.iter().map(func).collect())),
        (
            "transitions",
            Node::List(
                rep.transitions
                    .iter()
                    .map(|r| Node::List(r.iter().map(|m| Node::matrix(m, func)).collect()))
                    .collect(),
            ),
        ),
        (
            "matrices",
            Node::List(
                rep.matrices
                    .iter()
                    .map(|m| {
                        Node::map([
                            ("a0", func(&m.a0)),
                            ("a1", func(&m.a1)),
                            ("a2", func(&m.a2)),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("good", Node::Bool(rep.is_good)),
        ("normal", Node::Bool(rep.is_normal)),
    ])
}

fn plane_pair_node(rep: &PlanePair) -> Node {
    pair_node(
        rep,
        |c: &P2Chart| {
            Node::map([
                ("label", Node::str(c.label.clone())),
                (
                    "avoid",
                    Node::List(
                        c.avoid
                            .iter()
                            .map(|w| Node::plane_poly(&Poly::from_hom(w)))
                            .collect(),
                    ),
                ),
            ])
        },
        Node::homratio,
    )
}

fn line_pair_node(rep: &LinePair) -> Node {
    pair_node(
        rep,
        |c| {
            Node::map([
                ("label", Node::str(c.label.clone())),
                (
                    "avoid",
                    Node::List(
                        c.avoid
                            .iter()
                            .map(|w| {
                                Node::map([
                                    (
                                        "poly",
                                        Node::line_poly(&Poly::from_uni(&w.poly), LINE_VARS[0]),
                                    ),
                                    ("degree", Node::Int(w.degree.into())),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ])
        },
        Node::ratfunc,
    )
}

fn exponents(d: &InputDocument) -> Result<&Vec<i64>, CliError> {
    doc::require(&d.exponents, "exponents")
}

fn default_pairs() -> Vec<PairIn> {
    vec![PairIn::Named("standard".into())]
}

fn pushforward_cmd(d: &InputDocument) -> Result<Node, CliError> {
    let n = exponents(d)?;
    let pairs_in = d.pairs.clone().unwrap_or_else(default_pairs);
    match cover_of(d)? {
        Cover::Conic => {
            d.check_variables(&PLANE_VARS)?;
            let pairs = pairs_in
                .iter()
                .map(plane_pair)
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&PlanePair> = pairs.iter().collect();
            let normal = group_law(&refs, n)?;
            Ok(Node::map([
                ("cover", Node::str("conic")),
                ("exponents", Node::ints(n)),
                ("pair", plane_pair_node(&normal)),
            ]))
        }
        Cover::TwoPoint => {
            d.check_variables(&LINE_VARS)?;
            let pairs = pairs_in
                .iter()
                .map(line_pair)
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&LinePair> = pairs.iter().collect();
            let normal = group_law(&refs, n)?;
            let s = split_p1(&P1TransitionData::new(normal.transitions[0][1].clone())?)?;
            Ok(Node::map([
                ("cover", Node::str("two-point")),
                ("exponents", Node::ints(n)),
                ("pair", line_pair_node(&normal)),
                ("e", Node::ints(&[s.e1, s.e2])),
            ]))
        }
    }
}

fn kind_name(k: LineKind) -> &'static str {
    match k {
        LineKind::Transversal => "transversal",
        LineKind::Tangent => "tangent",
    }
}

fn cocycle_node(c: &AffineCocycle, var: &str) -> Node {
    Node::map([
        (
            "opens",
            Node::List(
                c.opens()
                    .iter()
                    .map(|o| Node::line_poly(&Poly::from_uni(o.h()), var))
                    .collect(),
            ),
        ),
        (
            "to_base",
            Node::List(
                c.transitions()
                    .iter()
                    .map(|row| Node::matrix(&row[0], |f| Node::ratfunc_in(f, var)))
                    .collect(),
            ),
        ),
    ])
}

fn restrict_line_cmd(d: &InputDocument) -> Result<Node, CliError> {
    d.check_variables(&PLANE_VARS)?;
    let cover = conic_cover(d)?;
    let line = doc::line(doc::require(&d.line, "line")?)?;
    let n = exponents(d)?;
    let pairs = d
        .pairs
        .clone()
        .unwrap_or_else(default_pairs)
        .iter()
        .map(plane_pair)
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&PlanePair> = pairs.iter().collect();
    let kind = cover.classify_line(&line)?;
    let working = working_line(&cover, &line)?;
    let bundle = restricted_for_pairs(&cover, &refs, n, &line)?;
    let g = bundle.to_p1()?;
    let s = split_p1(&g)?;
    let mut entries = vec![
        ("line", rat_list(&line.form)),
        ("kind", Node::str(kind_name(kind))),
        ("working_line", rat_list(&working.form)),
        (
            "parameterization",
            Node::map([("p", rat_list(&working.p)), ("q", rat_list(&working.q))]),
        ),
    ];
    match &bundle {
        RestrictedBundle::TwoChart { charts, .. } => {
            entries.push(("route", Node::str("two-chart")));
            entries.push(("charts", Node::ints(&[charts.0 as i64, charts.1 as i64])));
        }
        RestrictedBundle::Affine {
            charts,
            finite,
            at_infinity,
        } => {
            entries.push(("route", Node::str("affine")));
            entries.push((
                "charts",
                Node::ints(&charts.iter().map(|c| *c as i64).collect::<Vec<_>>()),
            ));
            entries.push(("finite", cocycle_node(finite, "t")));
            entries.push(("at_infinity", cocycle_node(at_infinity, "s")));
        }
    }
    entries.push((
        "transition",
        Node::matrix(g.matrix(), |f| Node::ratfunc_in(f, "t")),
    ));
    entries.push(("e", Node::ints(&[s.e1, s.e2])));
    Ok(Node::map(entries))
}

fn jumping_scan_cmd(d: &InputDocument, n: i64, jobs: usize, seed: u64) -> Result<Node, CliError> {
    d.check_variables(&PLANE_VARS)?;
    let cover = conic_cover(d)?;
    let mut lines: Vec<LineInP2> = Vec::new();
    for l in d.lines.iter().flatten() {
        lines.push(doc::line(l)?);
    }
    let defaults = d.lines.is_none();
    let tangents: Vec<Rational> = match &d.tangents {
        Some(ts) => ts.iter().map(doc::coeff).collect::<Result<_, _>>()?,
        None if defaults => ["1/2", "-1/2", "3"]
            .iter()
            .map(|s| dcover_core::exact_arith::rational::parse_rational(s).expect("literal"))
            .collect(),
        None => Vec::new(),
    };
    lines.extend(tangent_lines(&cover, &tangents)?);
    if d.coordinate_tangents.unwrap_or(false) {
        lines.extend(coordinate_tangents(&cover)?);
    }
    let random = d.random.unwrap_or(if defaults { 10 } else { 0 });
    lines.extend(random_lines(&cover, random, seed)?);
    let rows = jumping_scan(&cover, n, &lines, jobs)?;
    Ok(Node::map([
        ("n", Node::Int(n)),
        ("seed", Node::Int(seed as i64)),
        (
            "rows",
            Node::List(
                rows.iter()
                    .map(|r| {
                        Node::map([
                            ("line", rat_list(&r.line.form)),
                            ("kind", Node::str(kind_name(r.kind))),
                            ("e", Node::ints(&[r.splitting.0, r.splitting.1])),
                            ("jumping", Node::Bool(r.is_jumping)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ]))
}

fn sections_cmd((k1, k2): (i64, i64), bound: u32) -> Result<Node, CliError> {
    let b = global_sections(k1, k2, bound)?;
    Ok(Node::map([
        ("bidegree", Node::ints(&[k1, k2])),
        ("degree_bound", Node::Int(bound.into())),
        ("dimension", Node::Int(b.dimension as i64)),
        ("saturated", Node::Bool(b.saturated)),
        (
            "basis",
            Node::List(
                b.basis
                    .iter()
                    .map(|(s1, s2)| Node::List(vec![Node::homratio(s1), Node::homratio(s2)]))
                    .collect(),
            ),
        ),
    ]))
}

fn branch_decompose_cmd(
    d: &InputDocument,
    form: &Option<String>,
    divisor: &Option<String>,
) -> Result<Node, CliError> {
    d.check_variables(&PLANE_VARS)?;
    let pick = |flag: &Option<String>, field: &Option<doc::PolyIn>, name: &str| match flag {
        Some(s) => doc::plane_poly(&doc::PolyIn::Expr(s.clone())),
        None => doc::plane_poly(doc::require(field, name)?),
    };
    let big_f = pick(form, &d.form, "form")?;
    let f = pick(divisor, &d.divisor, "divisor")?;
    let result = match branch_decompose(&big_f, &f)? {
        Some((a0, a1)) => Node::map([
            ("a0", Node::plane_poly(&Poly::from_hom(&a0))),
            ("a1", Node::plane_poly(&Poly::from_hom(&a1))),
        ]),
        None => Node::str("none"),
    };
    Ok(Node::map([("decomposition", result)]))
}

fn validate_cmd(d: &InputDocument) -> Result<(Node, Option<CliError>), CliError> {
    let p = doc::require(&d.pair, "pair")?;
    let report = match cover_of(d)? {
        Cover::Conic => {
            d.check_variables(&PLANE_VARS)?;
            let pair = match p {
                PairIn::Named(name) => named_plane_pair(name)?,
                PairIn::Explicit(data) => doc::plane_pair(data)?,
            };
            validate_admissible(&pair)
        }
        Cover::TwoPoint => {
            d.check_variables(&LINE_VARS)?;
            validate_admissible(&line_pair(p)?)
        }
    };
    let node = Node::map([
        ("valid", Node::Bool(report.is_valid())),
        (
            "defects",
            Node::List(defects(&report).into_iter().map(Node::Str).collect()),
        ),
    ]);
    let rejection = (!report.is_valid())
        .then(|| CliError::Rejected(format!("{} defect(s) found", report.defects.len())));
    Ok((node, rejection))
}
