//! Diagram terms: trees of named 2-cells glued vertically and horizontally.
//!
//! Grammar (whitespace separated, `;` starts a comment to end of line):
//!
//! ```text
//! term := NAME | "(" "v" term term+ ")" | "(" "h" term term+ ")" | "(" "dag" term ")"
//! ```
//!
//! `(v a b)` is `a` followed by `b`; `(h a b)` places `a` before `b` along the
//! 1-cell direction. Both nodes accept more than two children and associate left.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::span::{horizontal_compose, vertical_compose, Span2};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramTerm {
    Leaf(String),
    V(Vec<DiagramTerm>),
    H(Vec<DiagramTerm>),
    Dag(Box<DiagramTerm>),
}

impl fmt::Display for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, tag: &str, xs: &[DiagramTerm]| {
            write!(f, "({tag}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            DiagramTerm::Leaf(n) => write!(f, "{n}"),
            DiagramTerm::V(xs) => list(f, "v", xs),
            DiagramTerm::H(xs) => list(f, "h", xs),
            DiagramTerm::Dag(x) => write!(f, "(dag {x})"),
        }
    }
}

impl DiagramTerm {
    pub fn leaf(name: &str) -> DiagramTerm {
        DiagramTerm::Leaf(name.to_string())
    }

    pub fn parse(text: &str) -> Result<DiagramTerm> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let term = parse_at(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input at token {}: `{}`", pos, tokens[pos])));
        }
        Ok(term)
    }

    /// Leaf names in first-occurrence order.
    pub fn leaves(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<String>) {
        match self {
            DiagramTerm::Leaf(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            DiagramTerm::V(xs) | DiagramTerm::H(xs) => xs.iter().for_each(|x| x.collect_leaves(out)),
            DiagramTerm::Dag(x) => x.collect_leaves(out),
        }
    }

    /// Folds the tree; errors carry the path of the failing node, e.g. `root/v.1/h.0`.
    pub fn evaluate(&self, bindings: &HashMap<String, Span2>) -> Result<Span2> {
        self.eval_at(bindings, "root")
    }

    fn eval_at(&self, bindings: &HashMap<String, Span2>, path: &str) -> Result<Span2> {
        let at = |e: Error| match e {
            Error::TypeMismatch(m) => Error::TypeMismatch(format!("at {path}: {m}")),
            other => other,
        };
        match self {
            DiagramTerm::Leaf(n) => bindings
                .get(n)
                .cloned()
                .ok_or_else(|| Error::UnknownId(format!("{n} (at {path})"))),
            DiagramTerm::Dag(x) => Ok(x.eval_at(bindings, &format!("{path}/dag"))?.dagger()),
            DiagramTerm::V(xs) | DiagramTerm::H(xs) => {
                let tag = if matches!(self, DiagramTerm::V(_)) { "v" } else { "h" };
                let mut acc = xs[0].eval_at(bindings, &format!("{path}/{tag}.0"))?;
                for (i, x) in xs.iter().enumerate().skip(1) {
                    let next = x.eval_at(bindings, &format!("{path}/{tag}.{i}"))?;
                    acc = if tag == "v" {
                        vertical_compose(&acc, &next).map_err(at)?
                    } else {
                        horizontal_compose(&acc, &next).map_err(at)?
                    };
                }
                Ok(acc)
            }
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split(';').next().unwrap_or("");
        let spaced = line.replace('(', " ( ").replace(')', " ) ");
        out.extend(spaced.split_whitespace().map(str::to_string));
    }
    out
}

fn parse_at(tokens: &[String], pos: &mut usize) -> Result<DiagramTerm> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
    *pos += 1;
    if tok == ")" {
        return Err(Error::Parse(format!("unexpected `)` at token {}", *pos - 1)));
    }
    if tok != "(" {
        return Ok(DiagramTerm::Leaf(tok.clone()));
    }
    let head = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of input".into()))?.clone();
    *pos += 1;
    let mut children = Vec::new();
    while tokens.get(*pos).map(String::as_str) != Some(")") {
        if *pos >= tokens.len() {
            return Err(Error::Parse("unclosed `(`".into()));
        }
        children.push(parse_at(tokens, pos)?);
    }
    *pos += 1;
    match head.as_str() {
        "v" | "h" if children.len() >= 2 => Ok(if head == "v" {
            DiagramTerm::V(children)
        } else {
            DiagramTerm::H(children)
        }),
        "dag" if children.len() == 1 => Ok(DiagramTerm::Dag(Box::new(children.remove(0)))),
        "v" | "h" | "dag" => Err(Error::Parse(format!("wrong number of arguments to `{head}`"))),
        other => Err(Error::Parse(format!("unknown node kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::OneCell;
    use crate::profunctor::Profunctor;
    use std::sync::Arc;

    #[test]
    fn parse_and_print() {
        let t = DiagramTerm::parse("(v (h a b) ; comment\n (dag c))").unwrap();
        assert_eq!(t.to_string(), "(v (h a b) (dag c))");
        assert_eq!(t.leaves(), vec!["a", "b", "c"]);
        assert!(DiagramTerm::parse("(v a)").is_err());
        assert!(DiagramTerm::parse("(x a b)").is_err());
        assert!(DiagramTerm::parse("(v a b").is_err());
        assert!(DiagramTerm::parse("a b").is_err());
    }

    #[test]
    fn leaf_evaluates_to_binding() {
        let c = Arc::new(OneCell::single(Profunctor::set("X", ["0", "1"])));
        let id = Span2::identity(&c);
        let bindings = HashMap::from([("id".to_string(), id.clone())]);
        let out = DiagramTerm::leaf("id").evaluate(&bindings).unwrap();
        assert!(out.equals(&id).unwrap());
    }

    #[test]
    fn ill_typed_node_reports_path() {
        let x = Arc::new(OneCell::single(Profunctor::set("X", ["0"])));
        let y = Arc::new(OneCell::single(Profunctor::set("Y", ["0", "1"])));
        let bindings = HashMap::from([
            ("a".to_string(), Span2::identity(&x)),
            ("b".to_string(), Span2::identity(&y)),
        ]);
        let t = DiagramTerm::parse("(h a (v a b))").unwrap();
        match t.evaluate(&bindings) {
            Err(Error::TypeMismatch(m)) => assert!(m.starts_with("at root/h.1:"), "{m}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
