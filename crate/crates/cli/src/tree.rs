//! Output documents. Every command builds a [`Node`] tree, which is written
//! either as JSON or as an indented text rendering carrying the same data.
//!
//! JSON schema of the leaves:
//! - polynomial: `[{"exponents": [i, j, k], "coeff": "p/q"}, ...]`
//! - function: `{"num": polynomial, "den": polynomial}`
//! - matrix: a 2x2 array of functions
//! - rational scalar: the string `"p/q"` (or `"p"`)
//!
//! In text mode polynomials are written as expressions in the input
//! grammar, functions as `num/den` (compound parts parenthesized), and matrices as `[[a, b], [c, d]]`.

use dcover_core::exact_arith::{HomRatio, Mat2, RatFunc, Rational};
use serde_json::{json, Map, Value};

use crate::poly::{Poly, LINE_VARS, PLANE_VARS};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Bool(bool),
    Int(i64),
    Str(String),
    Rational(Rational),
    Poly {
        poly: Poly,
        vars: Vec<String>,
    },
    Frac {
        num: Poly,
        den: Poly,
        vars: Vec<String>,
    },
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Node {
        Node::Str(s.into())
    }

    pub fn ints(xs: &[i64]) -> Node {
        Node::List(xs.iter().map(|x| Node::Int(*x)).collect())
    }

    fn vars(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    pub fn plane_poly(p: &Poly) -> Node {
        Node::Poly {
            poly: p.clone(),
            vars: Self::vars(&PLANE_VARS),
        }
    }

    pub fn line_poly(p: &Poly, var: &str) -> Node {
        Node::Poly {
            poly: p.clone(),
            vars: vec![var.to_string()],
        }
    }

    pub fn homratio(f: &HomRatio) -> Node {
        Node::Frac {
            num: Poly::from_hom(f.num()),
            den: Poly::from_hom(f.den()),
            vars: Self::vars(&PLANE_VARS),
        }
    }

    /// A function of the line coordinate, written in `var`.
    pub fn ratfunc_in(f: &RatFunc, var: &str) -> Node {
        Node::Frac {
            num: Poly::from_uni(f.num()),
            den: Poly::from_uni(f.den()),
            vars: vec![var.to_string()],
        }
    }

    pub fn ratfunc(f: &RatFunc) -> Node {
        Self::ratfunc_in(f, LINE_VARS[0])
    }

    pub fn matrix<F>(m: &Mat2<F>, entry: impl Fn(&F) -> Node) -> Node {
        Node::List(
            m.m.iter()
                .map(|row| Node::List(row.iter().map(&entry).collect()))
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        match self {
            Node::Bool(b) => json!(b),
            Node::Int(i) => json!(i),
            Node::Str(s) => json!(s),
            Node::Rational(q) => json!(q.to_string()),
            Node::Poly { poly, .. } => poly_json(poly),
            Node::Frac { num, den, .. } => json!({"num": poly_json(num), "den": poly_json(den)}),
            Node::List(xs) => Value::Array(xs.iter().map(Node::to_json).collect()),
            Node::Map(entries) => {
                let mut m = Map::new();
                for (k, v) in entries {
                    m.insert(k.clone(), v.to_json());
                }
                Value::Object(m)
            }
        }
    }

    /// Inline rendering of leaves and lists of leaves; `None` for nodes that
    /// need their own block.
    fn inline(&self) -> Option<String> {
        match self {
            Node::Bool(b) => Some(b.to_string()),
            Node::Int(i) => Some(i.to_string()),
            Node::Str(s) => Some(s.clone()),
            Node::Rational(q) => Some(q.to_string()),
            Node::Poly { poly, vars } => Some(render(poly, vars)),
            Node::Frac { num, den, vars } => {
                if den.render(&refs(vars)) == "1" {
                    Some(render(num, vars))
                } else {
                    Some(format!(
                        "{}/{}",
                        wrap(render(num, vars)),
                        wrap(render(den, vars))
                    ))
                }
            }
            Node::List(xs) => {
                let parts: Option<Vec<String>> = xs.iter().map(Node::inline).collect();
                parts.map(|p| format!("[{}]", p.join(", ")))
            }
            Node::Map(_) => None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        match self {
            Node::Map(entries) => {
                for (k, v) in entries {
                    match v.inline() {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            v.write_text(indent + 2, out);
                        }
                    }
                }
            }
            Node::List(xs) if self.inline().is_none() => {
                for x in xs {
                    match x.inline() {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            x.write_text(indent + 2, out);
                        }
                    }
                }
            }
            leaf => {
                out.push_str(&pad);
                out.push_str(&leaf.inline().expect("leaf"));
                out.push('\n');
            }
        }
    }
}

fn refs(vars: &[String]) -> Vec<&str> {
    vars.iter().map(String::as_str).collect()
}

fn render(p: &Poly, vars: &[String]) -> String {
    p.render(&refs(vars))
}

/// Parenthesizes anything but a bare integer or power of a variable, so
/// that a quotient reads unambiguously.
fn wrap(s: String) -> String {
    if s.contains([' ', '/', '*']) {
        format!("({s})")
    } else {
        s
    }
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({"exponents": e, "coeff": c.to_string()}))
            .collect(),
    )
}
