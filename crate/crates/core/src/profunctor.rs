//! Profunctors between finite groupoids, stored as dense action tables.
//!
//! A profunctor `S: G -> H` has a finite set of elements, each living at a
//! stage `(H-object, G-object)`. A morphism `h: X -> A` of `H` acts on the
//! left, sending stage `(A, B)` to `(X, B)`; a morphism `g: B -> B'` of `G`
//! acts on the right, sending `(A, B)` to `(A, B')`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId, ObjId};

pub type ElemId = usize;

/// `(target object, source object)`.
pub type Stage = (ObjId, ObjId);

#[derive(Clone)]
pub struct Profunctor {
    name: String,
    source: Arc<Groupoid>,
    target: Arc<Groupoid>,
    stage: Vec<Stage>,
    labels: Vec<String>,
    by_stage: Vec<Vec<ElemId>>,
    // left[h * n + e] = h·e, right[g * n + e] = e·g
    left: Vec<Option<ElemId>>,
    right: Vec<Option<ElemId>>,
}

impl fmt::Debug for Profunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profunctor")
            .field("name", &self.name)
            .field("elements", &self.labels.len())
            .finish()
    }
}

/// Name is cosmetic; two profunctors are equal when their data agree.
impl PartialEq for Profunctor {
    fn eq(&self, other: &Self) -> bool {
        same_groupoid(&self.source, &other.source)
            && same_groupoid(&self.target, &other.target)
            && self.stage == other.stage
            && self.left == other.left
            && self.right == other.right
    }
}

pub(crate) fn same_groupoid(a: &Arc<Groupoid>, b: &Arc<Groupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Profunctor {
    /// Builds the action tables from closures and checks every axiom.
    ///
    /// `left(h, e)` is consulted only when `tgt(h)` is the target object of
    /// `e`'s stage, `right(e, g)` only when `src(g)` is its source object.
    pub fn from_actions(
        name: impl Into<String>,
        source: Arc<Groupoid>,
        target: Arc<Groupoid>,
        elements: Vec<(Stage, String)>,
        left: impl Fn(MorId, ElemId) -> Option<ElemId>,
        right: impl Fn(ElemId, MorId) -> Option<ElemId>,
    ) -> Result<Profunctor> {
        let name = name.into();
        let n = elements.len();
        let (ns, nt) = (source.n_objects(), target.n_objects());
        let mut by_stage = vec![Vec::new(); nt * ns];
        let mut stage = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (e, ((a, b), label)) in elements.into_iter().enumerate() {
            if a >= nt || b >= ns {
                return Err(Error::StageMismatch(format!("{name}: element {label} has stage ({a}, {b})")));
            }
            by_stage[a * ns + b].push(e);
            stage.push((a, b));
            labels.push(label);
        }
        let violation = |what: String| Error::ActionViolation(format!("{name}: {what}"));
        let mut left_table = vec![None; target.n_morphisms() * n];
        for h in 0..target.n_morphisms() {
            for e in 0..n {
                let (a, b) = stage[e];
                if target.tgt(h) != a {
                    continue;
                }
                let r = left(h, e)
                    .ok_or_else(|| violation(format!("{}·{} undefined", target.name(h), labels[e])))?;
                if r >= n || stage[r] != (target.src(h), b) {
                    return Err(violation(format!("{}·{} lands in the wrong stage", target.name(h), labels[e])));
                }
                left_table[h * n + e] = Some(r);
            }
        }
        let mut right_table = vec![None; source.n_morphisms() * n];
        for g in 0..source.n_morphisms() {
            for e in 0..n {
                let (a, b) = stage[e];
                if source.src(g) != b {
                    continue;
                }
                let r = right(e, g)
                    .ok_or_else(|| violation(format!("{}·{} undefined", labels[e], source.name(g))))?;
                if r >= n || stage[r] != (a, source.tgt(g)) {
                    return Err(violation(format!("{}·{} lands in the wrong stage", labels[e], source.name(g))));
                }
                right_table[g * n + e] = Some(r);
            }
        }
        let p = Profunctor {
            name,
            source,
            target,
            stage,
            labels,
            by_stage,
            left: left_table,
            right: right_table,
        };
        p.validate()?;
        Ok(p)
    }

    /// Exhaustive check of functoriality on both sides and of commutation.
    pub fn validate(&self) -> Result<()> {
        let (g, h) = (&*self.source, &*self.target);
        let n = self.len();
        let violation = |what: String| Error::ActionViolation(format!("{}: {what}", self.name));
        for e in 0..n {
            let (a, b) = self.stage[e];
            if self.act_left(h.identity(a), e) != e || self.act_right(e, g.identity(b)) != e {
                return Err(violation(format!("identity moves {}", self.labels[e])));
            }
        }
        // (h1 ; h2)·e = h1·(h2·e)
        for h2 in 0..h.n_morphisms() {
            for h1 in h.into_object(h.src(h2)) {
                let h12 = h.compose(h1, h2).expect("composable");
                for &e in self.stage_elements_by_target(h.tgt(h2)).iter() {
                    if self.act_left(h12, e) != self.act_left(h1, self.act_left(h2, e)) {
                        return Err(violation(format!(
                            "left action not functorial at ({}, {}, {})",
                            h.name(h1),
                            h.name(h2),
                            self.labels[e]
                        )));
                    }
                }
            }
        }
        for g1 in 0..g.n_morphisms() {
            for g2 in g.from_object(g.tgt(g1)) {
                let g12 = g.compose(g1, g2).expect("composable");
                for &e in self.stage_elements_by_source(g.src(g1)).iter() {
                    if self.act_right(e, g12) != self.act_right(self.act_right(e, g1), g2) {
                        return Err(violation(format!(
                            "right action not functorial at ({}, {}, {})",
                            self.labels[e],
                            g.name(g1),
                            g.name(g2)
                        )));
                    }
                }
            }
        }
        for e in 0..n {
            let (a, b) = self.stage[e];
            for hh in h.into_object(a) {
                for gg in g.from_object(b) {
                    if self.act_right(self.act_left(hh, e), gg) != self.act_left(hh, self.act_right(e, gg)) {
                        return Err(violation(format!(
                            "actions do not commute at ({}, {}, {})",
                            h.name(hh),
                            self.labels[e],
                            g.name(gg)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The identity profunctor: stage `(A, B)` is `Hom(A, B)`.
    pub fn hom(g: &Arc<Groupoid>) -> Profunctor {
        let elements = (0..g.n_morphisms())
            .map(|f| ((g.src(f), g.tgt(f)), g.name(f).to_string()))
            .collect();
        Profunctor::from_actions(
            "hom",
            g.clone(),
            g.clone(),
            elements,
            |h, x| g.compose(h, x),
            |x, k| g.compose(x, k),
        )
        .expect("hom profunctor")
    }

    /// `◁: 1 -> G`, stage `(A, •)` holding `End(A)`, acted on by post-composition
    /// in the diagrammatic sense: `h·x = h ; x`.
    pub fn boundary_left(g: &Arc<Groupoid>) -> Result<Profunctor> {
        if !g.is_skeletal() {
            return Err(Error::NotSkeletal);
        }
        let one = Arc::new(Groupoid::trivial());
        let elements = (0..g.n_morphisms())
            .map(|f| ((g.src(f), 0), g.name(f).to_string()))
            .collect();
        Profunctor::from_actions("◁", one, g.clone(), elements, |h, x| g.compose(h, x), |x, _| Some(x))
    }

    /// `▷: G -> 1`, stage `(•, A)` holding `End(A)`, with `x·g = x ; g`.
    pub fn boundary_right(g: &Arc<Groupoid>) -> Result<Profunctor> {
        if !g.is_skeletal() {
            return Err(Error::NotSkeletal);
        }
        let one = Arc::new(Groupoid::trivial());
        let elements = (0..g.n_morphisms())
            .map(|f| ((0, g.src(f)), g.name(f).to_string()))
            .collect();
        Profunctor::from_actions("▷", g.clone(), one, elements, |_, x| Some(x), |x, k| g.compose(x, k))
    }

    /// As [`Profunctor::boundary_left`], skeletalizing first when needed.
    pub fn boundary_left_auto(g: &Groupoid) -> Profunctor {
        let s = Arc::new(g.skeletalize().0);
        Profunctor::boundary_left(&s).expect("skeletal")
    }

    /// As [`Profunctor::boundary_right`], skeletalizing first when needed.
    pub fn boundary_right_auto(g: &Groupoid) -> Profunctor {
        let s = Arc::new(g.skeletalize().0);
        Profunctor::boundary_right(&s).expect("skeletal")
    }

    /// A plain set viewed as a profunctor `1 -> 1`.
    pub fn set<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Profunctor {
        let one = Arc::new(Groupoid::trivial());
        let elements = labels.into_iter().map(|l| ((0, 0), l.into())).collect();
        Profunctor::from_actions(name, one.clone(), one, elements, |_, x| Some(x), |x, _| Some(x))
            .expect("set profunctor")
    }

    /// Stagewise cartesian product; element `(e1, e2)` has index `e1 * |T| + e2`.
    pub fn tensor(s: &Profunctor, t: &Profunctor) -> Profunctor {
        let source = Arc::new(Groupoid::product(&s.source, &t.source));
        let target = Arc::new(Groupoid::product(&s.target, &t.target));
        let (n2, ns2, nt2) = (t.len(), t.source.n_objects(), t.target.n_objects());
        let (mh2, mg2) = (t.target.n_morphisms(), t.source.n_morphisms());
        let mut elements = Vec::with_capacity(s.len() * n2);
        for e1 in 0..s.len() {
            for e2 in 0..n2 {
                let ((a1, b1), (a2, b2)) = (s.stage[e1], t.stage[e2]);
                elements.push(((a1 * nt2 + a2, b1 * ns2 + b2), format!("({},{})", s.labels[e1], t.labels[e2])));
            }
        }
        Profunctor::from_actions(
            format!("{}⊗{}", s.name, t.name),
            source,
            target,
            elements,
            |h, e| Some(s.act_left(h / mh2, e / n2) * n2 + t.act_left(h % mh2, e % n2)),
            |e, g| Some(s.act_right(e / n2, g / mg2) * n2 + t.act_right(e % n2, g % mg2)),
        )
        .expect("tensor of valid profunctors")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Profunctor {
        self.name = name.into();
        self
    }

    pub fn source(&self) -> &Arc<Groupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Groupoid> {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.stage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stage.is_empty()
    }

    pub fn stage(&self, e: ElemId) -> Stage {
        self.stage[e]
    }

    pub fn label(&self, e: ElemId) -> &str {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<ElemId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Elements at stage `(a, b)`.
    pub fn stage_elements(&self, a: ObjId, b: ObjId) -> &[ElemId] {
        &self.by_stage[a * self.source.n_objects() + b]
    }

    fn stage_elements_by_target(&self, a: ObjId) -> Vec<ElemId> {
        (0..self.source.n_objects()).flat_map(|b| self.stage_elements(a, b).iter().copied()).collect()
    }

    fn stage_elements_by_source(&self, b: ObjId) -> Vec<ElemId> {
        (0..self.target.n_objects()).flat_map(|a| self.stage_elements(a, b).iter().copied()).collect()
    }

    /// `h·e`; panics unless `tgt(h)` is the target object of `e`.
    pub fn act_left(&self, h: MorId, e: ElemId) -> ElemId {
        self.left[h * self.len() + e].expect("left action on mismatched stage")
    }

    /// `e·g`; panics unless `src(g)` is the source object of `e`.
    pub fn act_right(&self, e: ElemId, g: MorId) -> ElemId {
        self.right[g * self.len() + e].expect("right action on mismatched stage")
    }

    pub fn try_act_left(&self, h: MorId, e: ElemId) -> Option<ElemId> {
        self.left.get(h * self.len() + e).copied().flatten()
    }

    pub fn try_act_right(&self, e: ElemId, g: MorId) -> Option<ElemId> {
        self.right.get(g * self.len() + e).copied().flatten()
    }

    /// Number of elements in each stage, indexed `[a * |Ob(G)| + b]`.
    pub fn stage_counts(&self) -> Vec<usize> {
        self.by_stage.iter().map(Vec::len).collect()
    }
}
