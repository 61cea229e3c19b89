//! The four canonical cells of a skeletal groupoid and the snake equalities.
//!
//! With `◁: 1 -> G` and `▷: G -> 1` the cells are
//! `μ: ▷;◁ ⇒ id_G`, gluing two microstates of the same logical state, and
//! `ε: ◁;▷ ⇒ id_1`, destroying an identity microstate.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId};
use crate::path::OneCell;
use crate::profunctor::{ElemId, Profunctor};
use crate::span::{Difference, Span2};
use crate::term::DiagramTerm;

/// 1-cells built from the boundaries of one skeletal groupoid.
#[derive(Debug, Clone)]
pub struct Boundary {
    pub group: Arc<Groupoid>,
    pub left: Arc<Profunctor>,
    pub right: Arc<Profunctor>,
    /// `[◁]`
    pub l: Arc<OneCell>,
    /// `[▷]`
    pub r: Arc<OneCell>,
    /// `[◁, ▷]`, a set with one element per morphism
    pub lr: Arc<OneCell>,
    /// `[▷, ◁]`
    pub rl: Arc<OneCell>,
    /// identity on the groupoid
    pub id: Arc<OneCell>,
    /// identity on the trivial groupoid
    pub unit: Arc<OneCell>,
    // lr element -> morphism it stands for
    lr_label: Vec<MorId>,
    lr_of: Vec<ElemId>,
}

impl Boundary {
    pub fn new(g: &Arc<Groupoid>) -> Result<Boundary> {
        let left = Arc::new(Profunctor::boundary_left(g)?);
        let right = Arc::new(Profunctor::boundary_right(g)?);
        let l = Arc::new(OneCell::new(vec![left.clone()])?);
        let r = Arc::new(OneCell::new(vec![right.clone()])?);
        let lr = Arc::new(OneCell::new(vec![left.clone(), right.clone()])?);
        let rl = Arc::new(OneCell::new(vec![right.clone(), left.clone()])?);
        let one = left.source().clone();
        // x2 ; x1 is invariant under the junction moves; naming the class by its
        // inverse x1⁻¹ ; x2⁻¹ makes products of names read left to right
        let lr_label: Vec<MorId> = (0..lr.len())
            .map(|c| {
                let raw = lr.raw(c);
                g.inverse(g.compose(raw[1], raw[0]).expect("same object"))
            })
            .collect();
        let mut lr_of = vec![usize::MAX; g.n_morphisms()];
        for (c, &m) in lr_label.iter().enumerate() {
            lr_of[m] = c;
        }
        Ok(Boundary {
            group: g.clone(),
            id: Arc::new(OneCell::identity(g)),
            unit: Arc::new(OneCell::identity(&one)),
            left,
            right,
            l,
            r,
            lr,
            rl,
            lr_label,
            lr_of,
        })
    }

    /// The morphism named by an element of `[◁, ▷]`.
    pub fn morphism_of(&self, c: ElemId) -> MorId {
        self.lr_label[c]
    }

    /// The element of `[◁, ▷]` standing for a morphism.
    pub fn element_of(&self, m: MorId) -> ElemId {
        self.lr_of[m]
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalCells {
    pub boundary: Boundary,
    pub mu: Span2,
    pub mu_dagger: Span2,
    pub epsilon: Span2,
    pub epsilon_dagger: Span2,
}

impl CanonicalCells {
    pub fn new(g: &Arc<Groupoid>) -> Result<CanonicalCells> {
        let b = Boundary::new(g)?;
        // element (t, s) of ▷;◁ with t ∈ End(A), s ∈ End(B) glues to s ; t when A = B
        let n_left = b.left.len();
        let mu = Span2::from_fn(b.rl.clone(), b.id.clone(), |ts, x| {
            let (t, s) = (ts / n_left, ts % n_left);
            (g.compose(s, t) == Some(x)) as u64
        })?;
        let epsilon = Span2::from_fn(b.lr.clone(), b.unit.clone(), |c, _| g.is_identity(b.morphism_of(c)) as u64)?;
        Ok(CanonicalCells {
            mu_dagger: mu.dagger(),
            epsilon_dagger: epsilon.dagger(),
            boundary: b,
            mu,
            epsilon,
        })
    }

    /// Named cells for term evaluation.
    pub fn bindings(&self) -> HashMap<String, Span2> {
        let b = &self.boundary;
        HashMap::from([
            ("mu".to_string(), self.mu.clone()),
            ("mu_dag".to_string(), self.mu_dagger.clone()),
            ("eps".to_string(), self.epsilon.clone()),
            ("eps_dag".to_string(), self.epsilon_dagger.clone()),
            ("id_l".to_string(), Span2::identity(&b.l)),
            ("id_r".to_string(), Span2::identity(&b.r)),
        ])
    }
}

/// The snake composites, each read top to bottom.
pub const SNAKES: [(&str, &str); 4] = [
    ("left snake, cup by μ†", "(v (h id_l mu_dag) (h eps id_l))"),
    ("left snake, cup by ε†", "(v (h eps_dag id_l) (h id_l mu))"),
    ("right snake, cup by μ†", "(v (h mu_dag id_r) (h id_r eps))"),
    ("right snake, cup by ε†", "(v (h id_r eps_dag) (h mu id_r))"),
];

#[derive(Debug, Clone, Serialize)]
pub struct EqualityCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Difference>,
}

impl EqualityCheck {
    pub fn compare(name: impl Into<String>, a: &Span2, b: &Span2) -> EqualityCheck {
        let witness = match a.difference(b) {
            Ok(w) => w,
            Err(e) => {
                return EqualityCheck { name: format!("{} ({e})", name.into()), pass: false, witness: None }
            }
        };
        EqualityCheck { name: name.into(), pass: witness.is_none(), witness }
    }
}

/// The six equalities: each snake equals the identity, and the two snakes on
/// each side agree.
pub fn check_topological_axioms(cells: &CanonicalCells) -> Result<Vec<EqualityCheck>> {
    let bindings = cells.bindings();
    let mut evaluated = Vec::new();
    for (name, text) in SNAKES {
        evaluated.push((name, DiagramTerm::parse(text)?.evaluate(&bindings)?));
    }
    let id_l = &bindings["id_l"];
    let id_r = &bindings["id_r"];
    let mut out = Vec::new();
    for (i, (side, id)) in [("left", id_l), ("right", id_r)].into_iter().enumerate() {
        let (n1, s1) = &evaluated[2 * i];
        let (n2, s2) = &evaluated[2 * i + 1];
        out.push(EqualityCheck::compare(format!("{n1} = id"), s1, id));
        out.push(EqualityCheck::compare(format!("{n2} = id"), s2, id));
        out.push(EqualityCheck::compare(format!("{side} snakes agree"), s1, s2));
    }
    Ok(out)
}

/// Convenience wrapper: skeletalizes, builds the cells and runs the checks.
pub fn topological_axioms(g: &Groupoid) -> Result<Vec<EqualityCheck>> {
    let s = Arc::new(g.skeletalize().0);
    check_topological_axioms(&CanonicalCells::new(&s)?)
}

/// Replaces one entry of a cell, bypassing naturality; used for mutation tests.
pub fn corrupt(span: &Span2, s: ElemId, t: ElemId, value: u64) -> Span2 {
    let mut entries = span.entries().clone();
    if value == 0 {
        entries.remove(&(s, t));
    } else {
        entries.insert((s, t), value);
    }
    Span2::from_parts(span.src().clone(), span.tgt().clone(), entries)
}

pub(crate) fn require(check: &EqualityCheck) -> Result<()> {
    if check.pass {
        Ok(())
    } else {
        Err(Error::VerificationFailure(format!("{}: {:?}", check.name, check.witness)))
    }
}
