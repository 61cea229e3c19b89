//! JSON file formats for groupoids, profunctors and spans.
//!
//! Groupoid files take one of three shapes:
//!
//! ```json
//! {"group": "S3"}
//! {"cayley": [[0, 1], [1, 0]], "names": ["e", "x"]}
//! {"objects": ["0", "1"],
//!  "morphisms": [["(0,0)", "0", "0"], ...],
//!  "compose": [["f", "g", "f then g"], ...]}
//! ```
//!
//! and may be combined with `{"disjoint_union": [..]}` or `{"product": [..]}`.
//! A profunctor is either a boundary shorthand
//! `{"boundary": "left" | "right" | "hom", "groupoid": ..}` or a literal
//! with `source`, `target`, `elements` (name and stage as
//! `[target object, source object]`), and action tables `left` as
//! `[h, element, h·element]` and `right` as `[element, g, element·g]`.
//! A span file lists the factors of its source and target 1-cells and its
//! nonzero entries as `{"s": label, "t": label, "multiplicity": n}`, where a
//! label of a composite element joins the factor labels with `|`.
//! Unknown keys are rejected everywhere.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, GroupoidSpec};
use crate::path::OneCell;
use crate::profunctor::Profunctor;
use crate::span::Span2;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupoidFile {
    Named(NamedGroup),
    Cayley(CayleyTable),
    Explicit(ExplicitGroupoid),
    Union(UnionOf),
    Product(ProductOf),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedGroup {
    pub group: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CayleyTable {
    pub cayley: Vec<Vec<usize>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub compose: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnionOf {
    pub disjoint_union: Vec<GroupoidFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductOf {
    pub product: Vec<GroupoidFile>,
}

impl GroupoidFile {
    pub fn build(&self) -> Result<Groupoid> {
        match self {
            GroupoidFile::Named(n) => catalog::group(&n.group),
            GroupoidFile::Cayley(c) => Groupoid::from_cayley(&c.cayley, c.names.as_deref()),
            GroupoidFile::Explicit(e) => Groupoid::validate(&GroupoidSpec {
                objects: e.objects.clone(),
                morphisms: e.morphisms.clone(),
                compose: e.compose.clone(),
            }),
            GroupoidFile::Union(u) => fold(&u.disjoint_union, Groupoid::disjoint_union, Groupoid::empty()),
            GroupoidFile::Product(p) => fold(&p.product, Groupoid::product, Groupoid::trivial()),
        }
    }
}

fn fold(parts: &[GroupoidFile], op: fn(&Groupoid, &Groupoid) -> Groupoid, unit: Groupoid) -> Result<Groupoid> {
    let mut iter = parts.iter();
    let Some(first) = iter.next() else { return Ok(unit) };
    let mut acc = first.build()?;
    for p in iter {
        acc = op(&acc, &p.build()?);
    }
    Ok(acc)
}

/// Parses a groupoid file; the error names the first offending key or value.
pub fn parse_groupoid(text: &str) -> Result<Groupoid> {
    strict::<GroupoidFile>(text, "groupoid")?.build()
}

// untagged shapes report only "did not match any variant" on a bad key
fn strict<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Left,
    Right,
    Hom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProfunctorFile {
    Boundary(BoundaryFile),
    Literal(LiteralProfunctor),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFile {
    pub boundary: BoundaryKind,
    pub groupoid: GroupoidFile,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementRecord {
    pub name: String,
    pub stage: (String, String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralProfunctor {
    #[serde(default)]
    pub name: Option<String>,
    pub source: GroupoidFile,
    pub target: GroupoidFile,
    pub elements: Vec<ElementRecord>,
    #[serde(default)]
    pub left: Vec<(String, String, String)>,
    #[serde(default)]
    pub right: Vec<(String, String, String)>,
}

impl ProfunctorFile {
    pub fn build(&self) -> Result<Profunctor> {
        match self {
            ProfunctorFile::Boundary(b) => {
                let g = Arc::new(b.groupoid.build()?);
                match b.boundary {
                    BoundaryKind::Left => Profunctor::boundary_left(&g),
                    BoundaryKind::Right => Profunctor::boundary_right(&g),
                    BoundaryKind::Hom => Ok(Profunctor::hom(&g)),
                }
            }
            ProfunctorFile::Literal(l) => l.build(),
        }
    }
}

impl LiteralProfunctor {
    fn build(&self) -> Result<Profunctor> {
        let source = Arc::new(self.source.build()?);
        let target = Arc::new(self.target.build()?);
        let mut index = HashMap::new();
        let mut elements = Vec::with_capacity(self.elements.len());
        for (i, e) in self.elements.iter().enumerate() {
            if index.insert(e.name.as_str(), i).is_some() {
                return Err(Error::DuplicateId(e.name.clone()));
            }
            let a = target.find_object(&e.stage.0).ok_or_else(|| Error::UnknownId(e.stage.0.clone()))?;
            let b = source.find_object(&e.stage.1).ok_or_else(|| Error::UnknownId(e.stage.1.clone()))?;
            elements.push(((a, b), e.name.clone()));
        }
        let elem = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownId(name.to_string()));
        let mut left = HashMap::new();
        for (h, e, r) in &self.left {
            let h = target.find_morphism(h).ok_or_else(|| Error::UnknownId(h.clone()))?;
            left.insert((h, elem(e)?), elem(r)?);
        }
        let mut right = HashMap::new();
        for (e, g, r) in &self.right {
            let g = source.find_morphism(g).ok_or_else(|| Error::UnknownId(g.clone()))?;
            right.insert((elem(e)?, g), elem(r)?);
        }
        let name = self.name.clone().unwrap_or_else(|| "literal".into());
        Profunctor::from_actions(
            name,
            source,
            target,
            elements,
            |h, e| left.get(&(h, e)).copied(),
            |e, g| right.get(&(e, g)).copied(),
        )
    }
}

pub fn parse_profunctor(text: &str) -> Result<Profunctor> {
    strict::<ProfunctorFile>(text, "profunctor")?.build()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanEntry {
    pub s: String,
    pub t: String,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanFile {
    /// Factors of the source 1-cell, applied first to last.
    pub src: Vec<ProfunctorFile>,
    pub tgt: Vec<ProfunctorFile>,
    pub entries: Vec<SpanEntry>,
}

fn one_cell(factors: &[ProfunctorFile]) -> Result<Arc<OneCell>> {
    let ps = factors.iter().map(|f| f.build().map(Arc::new)).collect::<Result<Vec<_>>>()?;
    if ps.is_empty() {
        return Err(Error::Parse("a 1-cell needs at least one factor".into()));
    }
    Ok(Arc::new(OneCell::new(ps)?))
}

impl SpanFile {
    pub fn build(&self) -> Result<Span2> {
        let (src, tgt) = (one_cell(&self.src)?, one_cell(&self.tgt)?);
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let s = src.find_label(&e.s).ok_or_else(|| Error::UnknownId(e.s.clone()))?;
            let t = tgt.find_label(&e.t).ok_or_else(|| Error::UnknownId(e.t.clone()))?;
            entries.push(((s, t), e.multiplicity));
        }
        Span2::new(src, tgt, entries)
    }
}

pub fn parse_span(text: &str) -> Result<Span2> {
    strict::<SpanFile>(text, "span")?.build()
}

/// What a file holds, guessed from its top-level keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Groupoid,
    Profunctor,
    Span,
}

pub fn sniff(text: &str) -> Result<FileKind> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    Ok(if obj.contains_key("entries") {
        FileKind::Span
    } else if obj.contains_key("boundary") || obj.contains_key("elements") {
        FileKind::Profunctor
    } else {
        FileKind::Groupoid
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BITS: &str = r#"{
        "objects": ["0", "1"],
        "morphisms": [["(0,0)", "0", "0"], ["(1,1)", "0", "0"], ["(0,1)", "1", "1"], ["(1,0)", "1", "1"]],
        "compose": [
            ["(0,0)", "(0,0)", "(0,0)"], ["(0,0)", "(1,1)", "(1,1)"],
            ["(1,1)", "(0,0)", "(1,1)"], ["(1,1)", "(1,1)", "(0,0)"],
            ["(0,1)", "(0,1)", "(0,1)"], ["(0,1)", "(1,0)", "(1,0)"],
            ["(1,0)", "(0,1)", "(1,0)"], ["(1,0)", "(1,0)", "(0,1)"]
        ]
    }"#;

    #[test]
    fn shapes_parse() {
        assert_eq!(parse_groupoid(r#"{"group": "Z/2"}"#).unwrap().n_morphisms(), 2);
        assert_eq!(parse_groupoid(r#"{"cayley": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap().n_morphisms(), 3);
        let g = parse_groupoid(TWO_BITS).unwrap();
        assert_eq!((g.n_objects(), g.n_morphisms()), (2, 4));
        let u = parse_groupoid(r#"{"disjoint_union": [{"group": "S3"}, {"group": "Z2"}]}"#).unwrap();
        assert_eq!((u.n_objects(), u.n_morphisms()), (2, 8));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_groupoid(r#"{"group": "Z/2", "colour": 1}"#).is_err());
        assert!(parse_groupoid(r#"{"grop": "Z/2"}"#).is_err());
    }

    #[test]
    fn broken_inverse_rejected() {
        let bad = r#"{"objects": ["*"], "morphisms": [["0","*","*"],["1","*","*"]],
            "compose": [["0","0","0"],["0","1","1"],["1","0","1"],["1","1","1"]]}"#;
        assert!(matches!(parse_groupoid(bad), Err(Error::MissingInverse(_))));
    }

    #[test]
    fn literal_profunctor_matches_boundary() {
        // ◁ for Z/2: elements are the morphisms, h acts by h then x
        let lit = r#"{
            "source": {"cayley": [[0]], "names": ["id"]},
            "target": {"group": "Z/2"},
            "elements": [{"name": "0", "stage": ["*", "*"]}, {"name": "1", "stage": ["*", "*"]}],
            "left": [["0","0","0"],["0","1","1"],["1","0","1"],["1","1","0"]],
            "right": [["0","id","0"],["1","id","1"]]
        }"#;
        let p = parse_profunctor(lit).unwrap();
        let b = parse_profunctor(r#"{"boundary": "left", "groupoid": {"group": "Z/2"}}"#).unwrap();
        assert_eq!(p, b);
        let missing = lit.replace(r#"["1","1","0"]"#, "");
        assert!(parse_profunctor(&missing.replace(",]", "]")).is_err());
    }

    #[test]
    fn span_file_round_trip() {
        let text = r#"{
            "src": [{"boundary": "left", "groupoid": {"group": "Z/2"}}],
            "tgt": [{"boundary": "left", "groupoid": {"group": "Z/2"}}],
            "entries": [{"s": "0", "t": "0", "multiplicity": 1}, {"s": "1", "t": "1", "multiplicity": 1}]
        }"#;
        let s = parse_span(text).unwrap();
        assert!(s.is_unitary());
        assert_eq!(sniff(text).unwrap(), FileKind::Span);
        let bad = text.replace(r#"{"s": "1", "t": "1", "multiplicity": 1}"#, r#"{"s": "1", "t": "1", "multiplicity": 2}"#);
        assert!(matches!(parse_span(&bad), Err(Error::NaturalityViolation(_))));
    }
}
