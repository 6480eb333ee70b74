use std::io::Write;
use std::process::{Command, Stdio};

use dcover_cli::poly::{parse_poly, Poly, PLANE_VARS};
use dcover_cli::{run, Outcome};
use dcover_core::exact_arith::rational::ratio;
use proptest::prelude::*;
use serde_json::Value;

fn dcover(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("dcover").chain(args.iter().copied());
    run(argv, &mut stdin.as_bytes())
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid JSON")
}

fn is_rational(v: &Value) -> bool {
    v.as_str().is_some_and(|s| {
        dcover_core::exact_arith::rational::parse_rational(s).is_some() && !s.contains('.')
    })
}

fn is_poly(v: &Value, nvars: usize) -> bool {
    v.as_array().is_some_and(|terms| {
        terms.iter().all(|t| {
            let Some(o) = t.as_object() else { return false };
            o.len() == 2
                && o["exponents"]
                    .as_array()
                    .is_some_and(|e| e.len() == nvars && e.iter().all(Value::is_u64))
                && is_rational(&o["coeff"])
        })
    })
}

fn is_func(v: &Value, nvars: usize) -> bool {
    v.as_object()
        .is_some_and(|o| o.len() == 2 && is_poly(&o["num"], nvars) && is_poly(&o["den"], nvars))
}

fn is_matrix(v: &Value, nvars: usize) -> bool {
    v.as_array().is_some_and(|rows| {
        rows.len() == 2
            && rows.iter().all(|r| {
                r.as_array()
                    .is_some_and(|r| r.len() == 2 && r.iter().all(|f| is_func(f, nvars)))
            })
    })
}

fn is_ints(v: &Value, len: usize) -> bool {
    v.as_array()
        .is_some_and(|xs| xs.len() == len && xs.iter().all(Value::is_i64))
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().expect("object").keys().cloned().collect()
}

/// Top-level keys of a text rendering, in order.
fn text_keys(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with(' ') && !l.starts_with('-'))
        .map(|l| l.split(':').next().unwrap().to_string())
        .collect()
}

const SPLIT_DOC: &str = r#"{"variables": ["x"], "matrix": [["0", "x^3"], ["x^3", "0"]]}"#;

#[test]
fn split_p1_on_scaled_swap() {
    let v = json(&dcover(&["split-p1"], SPLIT_DOC));
    assert_eq!(v["e"], serde_json::json!([3, 3]));
    assert!(is_matrix(&v["Ax"], 1) && is_matrix(&v["Ay"], 1));
    assert_eq!(v["verified"], Value::Bool(true));
}

#[test]
fn jumping_scan_flags_the_tangents() {
    let v = json(&dcover(
        &["jumping-scan", "--n", "5", "--jobs", "2", "--seed", "3"],
        "",
    ));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let flagged: Vec<&Value> = rows
        .iter()
        .filter(|r| r["jumping"] == Value::Bool(true))
        .collect();
    assert_eq!(flagged.len(), 3);
    for r in &flagged {
        assert_eq!(r["e"], serde_json::json!([4, 0]));
        assert_eq!(r["kind"], "tangent");
    }
    for r in rows {
        assert!(r["line"].as_array().unwrap().iter().all(is_rational));
        assert!(is_ints(&r["e"], 2));
    }
    // Identical inputs give identical outputs.
    let again = json(&dcover(
        &["jumping-scan", "--n", "5", "--jobs", "3", "--seed", "3"],
        "",
    ));
    assert_eq!(v, again);
}

#[test]
fn sections_of_bidegree_4_2() {
    let v = json(&dcover(
        &["sections", "--bidegree", "4,2", "--degree-bound", "5"],
        "",
    ));
    assert_eq!(v["dimension"], 15);
    assert_eq!(v["saturated"], Value::Bool(true));
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 15);
    assert!(basis
        .iter()
        .all(|s| s.as_array().unwrap().iter().all(|f| is_func(f, 3))));
}

#[test]
fn branch_decompose_examples() {
    let v = json(&dcover(
        &[
            "branch-decompose",
            "--form",
            "x0^2 + x1*x2",
            "--divisor",
            "x1",
        ],
        "",
    ));
    let a0 = &v["decomposition"]["a0"];
    let a1 = &v["decomposition"]["a1"];
    assert!(is_poly(a0, 3) && is_poly(a1, 3));
    assert_eq!(
        a0,
        &serde_json::json!([{"exponents": [1, 0, 0], "coeff": "1"}])
    );
    assert_eq!(
        a1,
        &serde_json::json!([{"exponents": [0, 0, 1], "coeff": "1"}])
    );
    let doc = r#"{"form": "x0^2 + x1*x2", "divisor": "x0"}"#;
    let v = json(&dcover(&["branch-decompose", "--input", "-"], doc));
    assert_eq!(v["decomposition"], "none");
}

#[test]
fn pushforward_output_validates_and_restricts() {
    let v = json(&dcover(&["pushforward"], r#"{"exponents": [3]}"#));
    let pair = &v["pair"];
    assert_eq!(pair["normal"], Value::Bool(true));
    for row in pair["transitions"].as_array().unwrap() {
        assert!(row.as_array().unwrap().iter().all(|m| is_matrix(m, 3)));
    }
    // The emitted pair is itself a valid input.
    let doc = serde_json::json!({"pair": pair}).to_string();
    let report = json(&dcover(&["validate"], &doc));
    assert_eq!(report["valid"], Value::Bool(true));
    let doc =
        serde_json::json!({"pairs": [pair], "exponents": [1], "line": [1, 2, -3]}).to_string();
    let r = json(&dcover(&["restrict-line"], &doc));
    assert_eq!(r["e"], serde_json::json!([1, 1]));
    assert!(is_matrix(&r["transition"], 1));
}

#[test]
fn two_point_pushforward() {
    for (n, e) in [(5, [2, 2]), (4, [2, 1]), (-3, [-2, -2])] {
        let doc = format!(r#"{{"cover": "two-point", "exponents": [{n}]}}"#);
        let v = json(&dcover(&["pushforward"], &doc));
        assert_eq!(v["e"], serde_json::json!(e));
    }
}

#[test]
fn restrict_line_routes() {
    let doc =
        r#"{"line": "x0 + 2*x1 - 3*x2", "exponents": [1, -1], "pairs": ["standard", "standard"]}"#;
    let v = json(&dcover(&["restrict-line"], doc));
    assert_eq!(v["kind"], "transversal");
    assert_eq!(v["e"], serde_json::json!([0, -1]));
    let doc = r#"{"line": [0, 0, 1], "exponents": [4]}"#;
    let v = json(&dcover(&["restrict-line"], doc));
    assert_eq!(v["kind"], "tangent");
    assert_eq!(v["e"], serde_json::json!([3, 0]));
    // A line through no convenient chart pair takes the chart-wise route.
    let doc = r#"{"line": [1, 0, 0], "exponents": [2]}"#;
    let v = json(&dcover(&["restrict-line"], doc));
    assert_eq!(v["e"], serde_json::json!([1, 0]));
    assert!(v["route"] == "affine" || v["route"] == "two-chart");
}

#[test]
fn trivialize_two_opens() {
    let doc = r#"{"opens": ["1", "x"], "to_base": [[["1", "0"], ["0", "1"]], [["x", "1"], ["0", {"num": "1", "den": "x"}]]]}"#;
    let v = json(&dcover(&["trivialize-a1"], doc));
    assert_eq!(v["verified"], Value::Bool(true));
    assert_eq!(v["A"].as_array().unwrap().len(), 2);
    assert!(v["A"].as_array().unwrap().iter().all(|m| is_matrix(m, 1)));
}

#[test]
fn text_mode_carries_the_same_tree() {
    let cases: [(&[&str], &str); 4] = [
        (&["split-p1"], SPLIT_DOC),
        (
            &["sections", "--bidegree", "1,1", "--degree-bound", "2"],
            "",
        ),
        (
            &["pushforward"],
            r#"{"cover": "two-point", "exponents": [2]}"#,
        ),
        (
            &["jumping-scan", "--n", "2"],
            r#"{"random": 2, "tangents": ["1/2"]}"#,
        ),
    ];
    for (args, doc) in cases {
        let j = json(&dcover(args, doc));
        let mut targs = args.to_vec();
        targs.extend(["--format", "text"]);
        let t = dcover(&targs, doc);
        assert_eq!(t.code, 0);
        assert_eq!(text_keys(&t.stdout), keys(&j), "{args:?}");
    }
    // Leaves are written in the input grammar.
    let t = dcover(&["split-p1", "--format", "text"], SPLIT_DOC);
    assert!(t.stdout.contains("e: [3, 3]"));
    let t = dcover(
        &[
            "branch-decompose",
            "--form",
            "x0^2 + x1*x2",
            "--divisor",
            "x2",
            "--format",
            "text",
        ],
        "",
    );
    let a1 = t
        .stdout
        .lines()
        .find_map(|l| l.trim().strip_prefix("a1: "))
        .unwrap();
    assert!(parse_poly(a1, &PLANE_VARS).is_ok());
}

#[test]
fn exit_codes() {
    let bad: [(&[&str], &str); 14] = [
        (&["split-p1"], ""),
        (&["split-p1"], "{"),
        (&["split-p1"], r#"{"matrix": [["x"]]}"#),
        (&["split-p1"], r#"{"matrix": [["x", "0"], ["0", "x +"]]}"#),
        (&["split-p1"], r#"{"matrix": [["x", "x"], ["x", "x"]]}"#),
        (
            &["split-p1"],
            r#"{"variables": ["x0"], "matrix": [["1", "0"], ["0", "1"]]}"#,
        ),
        (&["split-p1"], r#"{"matrix": [["1.5", "0"], ["0", "1"]]}"#),
        (&["validate"], r#"{"pair": "nonsense"}"#),
        (&["pushforward"], r#"{"exponents": [1, 2]}"#),
        (
            &["restrict-line"],
            r#"{"line": [0, 0, 0], "exponents": [1]}"#,
        ),
        (
            &["sections", "--bidegree", "1,2", "--degree-bound", "2"],
            "",
        ),
        (&["sections", "--bidegree", "x", "--degree-bound", "2"], ""),
        (
            &["branch-decompose", "--form", "x0^2 + x1", "--divisor", "x1"],
            "",
        ),
        (&["no-such-command"], ""),
    ];
    for (args, doc) in bad {
        let out = dcover(args, doc);
        assert_eq!(out.code, 1, "{args:?} {doc}: {}", out.stderr);
        assert!(!out.stderr.is_empty());
    }
    let help = dcover(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("jumping-scan"));
}

#[test]
fn failed_validation_prints_report_and_exits_1() {
    let v = json(&dcover(&["pushforward"], r#"{"exponents": [1]}"#));
    let mut pair = v["pair"].clone();
    pair["branch"][1] = serde_json::json!("2");
    let out = dcover(
        &["validate"],
        &serde_json::json!({"pair": pair}).to_string(),
    );
    assert_eq!(out.code, 1);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["valid"], Value::Bool(false));
    assert!(!report["defects"].as_array().unwrap().is_empty());
}

#[test]
fn binary_exit_codes_and_output_file() {
    let bin = env!("CARGO_BIN_EXE_dcover");
    let mut child = Command::new(bin)
        .args(["split-p1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"{ not json")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("dcover-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("in.json");
    let output = dir.join("out.json");
    std::fs::write(&input, SPLIT_DOC).unwrap();
    let status = Command::new(bin)
        .args([
            "split-p1",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["e"], serde_json::json!([3, 3]));
    std::fs::remove_dir_all(&dir).ok();
}

fn small_coeff() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, 1i64..=9)
}

fn plane_polynomial() -> impl Strategy<Value = Poly> {
    prop::collection::vec((small_coeff(), 0u32..=6, 0u32..=6, 0u32..=6), 0..8).prop_map(|terms| {
        Poly::from_terms(
            3,
            terms
                .into_iter()
                .filter(|(_, a, b, c)| a + b + c <= 6)
                .map(|((n, d), a, b, c)| (vec![a, b, c], ratio(n, d))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_parse_round_trip(p in plane_polynomial()) {
        let text = p.render(&PLANE_VARS);
        let back = parse_poly(&text, &PLANE_VARS).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn malformed_input_never_succeeds(junk in "[ -~]{0,40}") {
        prop_assume!(serde_json::from_str::<Value>(&junk).map_or(true, |v| !v.is_object()));
        let out = dcover(&["split-p1"], &junk);
        prop_assert_eq!(out.code, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn garbled_expressions_are_input_errors(junk in "[x0-2+*^() /.-]{1,16}") {
        let doc = serde_json::json!({"matrix": [[junk, "0"], ["0", "1"]]}).to_string();
        let out = dcover(&["split-p1"], &doc);
        prop_assert!(out.code == 0 || out.code == 1, "exit {}", out.code);
    }
}
