//! Natural-number valued spans between parallel 1-cells.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::OneCell;
use crate::profunctor::{same_groupoid, ElemId, Stage};

/// A 2-cell `σ: src ⇒ tgt`, stored by its nonzero entries.
#[derive(Debug, Clone)]
pub struct Span2 {
    src: Arc<OneCell>,
    tgt: Arc<OneCell>,
    entries: BTreeMap<(ElemId, ElemId), u64>,
}

/// First position at which two parallel spans disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Difference {
    pub stage: Stage,
    pub s: ElemId,
    pub t: ElemId,
    pub s_label: String,
    pub t_label: String,
    pub left: u64,
    pub right: u64,
}

impl Span2 {
    /// Validated constructor: parallel cells, matching stages, naturality.
    pub fn new(
        src: Arc<OneCell>,
        tgt: Arc<OneCell>,
        entries: impl IntoIterator<Item = ((ElemId, ElemId), u64)>,
    ) -> Result<Span2> {
        check_parallel(&src, &tgt)?;
        let mut map = BTreeMap::new();
        for ((s, t), v) in entries {
            if s >= src.len() || t >= tgt.len() {
                return Err(Error::InvalidElement(format!("({s}, {t})")));
            }
            if src.stage(s) != tgt.stage(t) {
                return Err(Error::StageMismatch(format!(
                    "entry ({}, {}) pairs stages {:?} and {:?}",
                    src.label(s),
                    tgt.label(t),
                    src.stage(s),
                    tgt.stage(t)
                )));
            }
            if v != 0 {
                *map.entry((s, t)).or_insert(0) += v;
            }
        }
        let span = Span2 { src, tgt, entries: map };
        span.check_naturality()?;
        Ok(span)
    }

    /// Evaluates `f` on every stage-matched pair.
    pub fn from_fn(src: Arc<OneCell>, tgt: Arc<OneCell>, f: impl Fn(ElemId, ElemId) -> u64) -> Result<Span2> {
        check_parallel(&src, &tgt)?;
        let mut by_stage: HashMap<Stage, Vec<ElemId>> = HashMap::new();
        for t in 0..tgt.len() {
            by_stage.entry(tgt.stage(t)).or_default().push(t);
        }
        let mut entries = Vec::new();
        for s in 0..src.len() {
            for &t in by_stage.get(&src.stage(s)).map(Vec::as_slice).unwrap_or(&[]) {
                entries.push(((s, t), f(s, t)));
            }
        }
        Span2::new(src, tgt, entries)
    }

    pub(crate) fn from_parts(
        src: Arc<OneCell>,
        tgt: Arc<OneCell>,
        entries: BTreeMap<(ElemId, ElemId), u64>,
    ) -> Span2 {
        Span2 { src, tgt, entries }
    }

    pub fn identity(cell: &Arc<OneCell>) -> Span2 {
        let entries = (0..cell.len()).map(|e| ((e, e), 1)).collect();
        Span2 { src: cell.clone(), tgt: cell.clone(), entries }
    }

    pub fn zero(src: Arc<OneCell>, tgt: Arc<OneCell>) -> Result<Span2> {
        check_parallel(&src, &tgt)?;
        Ok(Span2 { src, tgt, entries: BTreeMap::new() })
    }

    pub fn src(&self) -> &Arc<OneCell> {
        &self.src
    }

    pub fn tgt(&self) -> &Arc<OneCell> {
        &self.tgt
    }

    pub fn get(&self, s: ElemId, t: ElemId) -> u64 {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(ElemId, ElemId), u64> {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// `(t, σ(s, t))` for every nonzero entry in row `s`.
    pub fn image(&self, s: ElemId) -> Vec<(ElemId, u64)> {
        self.entries.range((s, 0)..(s + 1, 0)).map(|(&(_, t), &v)| (t, v)).collect()
    }

    /// Each nonzero entry must be invariant under every single morphism acting
    /// on both legs; since the actions are bijective this covers zero entries too.
    pub fn check_naturality(&self) -> Result<()> {
        let (g, h) = (self.src.source(), self.src.target());
        for (&(s, t), &v) in &self.entries {
            let (a, b) = self.src.stage(s);
            for k in h.into_object(a) {
                let (s2, t2) = (self.src.act_left(k, s), self.tgt.act_left(k, t));
                if self.get(s2, t2) != v {
                    return Err(Error::NaturalityViolation(format!(
                        "acting on the left by {} sends ({}, {}) with value {} to ({}, {}) with value {}",
                        h.name(k),
                        self.src.label(s),
                        self.tgt.label(t),
                        v,
                        self.src.label(s2),
                        self.tgt.label(t2),
                        self.get(s2, t2)
                    )));
                }
            }
            for k in g.from_object(b) {
                let (s2, t2) = (self.src.act_right(s, k), self.tgt.act_right(t, k));
                if self.get(s2, t2) != v {
                    return Err(Error::NaturalityViolation(format!(
                        "acting on the right by {} sends ({}, {}) with value {} to ({}, {}) with value {}",
                        g.name(k),
                        self.src.label(s),
                        self.tgt.label(t),
                        v,
                        self.src.label(s2),
                        self.tgt.label(t2),
                        self.get(s2, t2)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `σ† : tgt ⇒ src`.
    pub fn dagger(&self) -> Span2 {
        let entries = self.entries.iter().map(|(&(s, t), &v)| ((t, s), v)).collect();
        Span2 { src: self.tgt.clone(), tgt: self.src.clone(), entries }
    }

    /// `self` followed by `next`, i.e. `next · self`.
    pub fn then(&self, next: &Span2) -> Result<Span2> {
        vertical_compose(self, next)
    }

    /// Entrywise comparison; `None` means equal.
    pub fn difference(&self, other: &Span2) -> Result<Option<Difference>> {
        if *self.src != *other.src || *self.tgt != *other.tgt {
            return Err(Error::TypeMismatch(format!(
                "comparing [{}] ⇒ [{}] with [{}] ⇒ [{}]",
                self.src.describe(),
                self.tgt.describe(),
                other.src.describe(),
                other.tgt.describe()
            )));
        }
        let keys = self.entries.keys().chain(other.entries.keys());
        let first = keys
            .filter(|k| self.entries.get(k) != other.entries.get(k))
            .min()
            .copied();
        Ok(first.map(|(s, t)| Difference {
            stage: self.src.stage(s),
            s,
            t,
            s_label: self.src.label(s),
            t_label: self.tgt.label(t),
            left: self.get(s, t),
            right: other.get(s, t),
        }))
    }

    pub fn equals(&self, other: &Span2) -> Result<bool> {
        Ok(self.difference(other)?.is_none())
    }

    /// Both `σ†·σ = id` and `σ·σ† = id`; the witness is the first failing entry.
    pub fn unitarity(&self) -> Option<Difference> {
        let forward = vertical_compose(self, &self.dagger()).expect("σ then σ† is composable");
        if let Some(d) = forward.difference(&Span2::identity(&self.src)).expect("parallel") {
            return Some(d);
        }
        let backward = vertical_compose(&self.dagger(), self).expect("σ† then σ is composable");
        backward.difference(&Span2::identity(&self.tgt)).expect("parallel")
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity().is_none()
    }

    /// Is every entry 0 or 1 and every row and column hit exactly once?
    pub fn as_bijection(&self) -> Option<Vec<ElemId>> {
        if !self.is_unitary() || self.entries.len() != self.src.len() {
            return None;
        }
        Some(self.entries.keys().map(|&(_, t)| t).collect())
    }
}

fn check_parallel(src: &OneCell, tgt: &OneCell) -> Result<()> {
    if same_groupoid(src.source(), tgt.source()) && same_groupoid(src.target(), tgt.target()) {
        Ok(())
    } else {
        Err(Error::TypeMismatch(format!(
            "[{}] and [{}] are not parallel",
            src.describe(),
            tgt.describe()
        )))
    }
}

/// `σ: S ⇒ T` then `τ: T ⇒ U`, with `(τ·σ)(s, u) = Σ_t σ(s, t) τ(t, u)`.
pub fn vertical_compose(sigma: &Span2, tau: &Span2) -> Result<Span2> {
    if *sigma.tgt != *tau.src {
        return Err(Error::TypeMismatch(format!(
            "vertical composite of [{}] ⇒ [{}] with [{}] ⇒ [{}]",
            sigma.src.describe(),
            sigma.tgt.describe(),
            tau.src.describe(),
            tau.tgt.describe()
        )));
    }
    let mut rows: HashMap<ElemId, Vec<(ElemId, u64)>> = HashMap::new();
    for (&(t, u), &v) in &tau.entries {
        rows.entry(t).or_default().push((u, v));
    }
    let mut entries = BTreeMap::new();
    for (&(s, t), &v) in &sigma.entries {
        for &(u, w) in rows.get(&t).map(Vec::as_slice).unwrap_or(&[]) {
            *entries.entry((s, u)).or_insert(0) += v * w;
        }
    }
    Ok(Span2::from_parts(sigma.src.clone(), tau.tgt.clone(), entries))
}

/// Glues elements of `p` and `r` into classes of `p ++ r` and back.
pub(crate) struct Gluing<'a> {
    p: &'a OneCell,
    r: &'a OneCell,
    pub(crate) pr: OneCell,
    split: Vec<(ElemId, ElemId)>,
}

impl<'a> Gluing<'a> {
    pub(crate) fn new(p: &'a OneCell, r: &'a OneCell) -> Result<Gluing<'a>> {
        let pr = p.concat(r)?;
        let mut g = Gluing { p, r, pr, split: Vec::new() };
        g.split = (0..g.pr.len()).map(|c| g.split_raw(c)).collect();
        Ok(g)
    }

    pub(crate) fn combine(&self, x: ElemId, y: ElemId) -> ElemId {
        match (self.p.is_identity(), self.r.is_identity()) {
            (true, true) => self.p.source().compose(y, x).expect("composable pair"),
            (true, false) => self.r.act_right(y, x),
            (false, true) => self.p.act_left(y, x),
            (false, false) => {
                let mut raw = self.p.raw(x);
                raw.extend(self.r.raw(y));
                self.pr.canonical(&raw)
            }
        }
    }

    fn split_raw(&self, c: ElemId) -> (ElemId, ElemId) {
        match (self.p.is_identity(), self.r.is_identity()) {
            (true, true) => (c, self.pr.source().identity(self.pr.source().src(c))),
            (true, false) => (self.p.source().identity(self.r.stage(c).1), c),
            (false, true) => (c, self.r.source().identity(self.p.stage(c).0)),
            (false, false) => {
                let raw = self.pr.raw(c);
                let k = self.p.factors().len();
                (self.p.canonical(&raw[..k]), self.r.canonical(&raw[k..]))
            }
        }
    }

    pub(crate) fn split(&self, c: ElemId) -> (ElemId, ElemId) {
        self.split[c]
    }

    /// Junction object of an element of `p` (its target-side object).
    fn junction_p(&self, x: ElemId) -> usize {
        self.p.stage(x).0
    }

    /// Junction object of an element of `r` (its source-side object).
    fn junction_r(&self, y: ElemId) -> usize {
        self.r.stage(y).1
    }
}

/// `σ: P ⇒ Q` over `G -> H` beside `τ: R ⇒ S` over `H -> J`, giving `P;R ⇒ Q;S`.
///
/// On canonical representatives `(p, r)` and `(q, s)` the entry is
/// `Σ_{f: H_p -> H_q} σ(p, f·q) τ(r·f, s)`.
pub fn horizontal_compose(sigma: &Span2, tau: &Span2) -> Result<Span2> {
    let (p, q, r, s) = (&*sigma.src, &*sigma.tgt, &*tau.src, &*tau.tgt);
    if !same_groupoid(p.target(), r.source()) {
        return Err(Error::TypeMismatch(format!(
            "horizontal composite of [{}] ⇒ [{}] with [{}] ⇒ [{}]: middle groupoids differ",
            p.describe(),
            q.describe(),
            r.describe(),
            s.describe()
        )));
    }
    let h = p.target().clone();
    let left = Gluing::new(p, r)?;
    let right = Gluing::new(q, s)?;
    let trivial = h.is_trivial();
    let mut by_junction_sigma: BTreeMap<usize, Vec<(ElemId, ElemId, u64)>> = BTreeMap::new();
    for (&(x, y), &v) in &sigma.entries {
        by_junction_sigma.entry(left.junction_p(x)).or_default().push((x, y, v));
    }
    let mut by_junction_tau: BTreeMap<usize, Vec<(ElemId, ElemId, u64)>> = BTreeMap::new();
    for (&(x, y), &v) in &tau.entries {
        by_junction_tau.entry(left.junction_r(x)).or_default().push((x, y, v));
    }
    let mut entries: BTreeMap<(ElemId, ElemId), u64> = BTreeMap::new();
    for (&a, sig) in &by_junction_sigma {
        for (&b, ta) in &by_junction_tau {
            for &f in h.hom(a, b) {
                let fi = h.inverse(f);
                for &(pp, q1, v) in sig {
                    let qq = q.act_left(fi, q1);
                    for &(r1, ss, w) in ta {
                        let rr = r.act_right(r1, fi);
                        let c1 = left.combine(pp, rr);
                        if !trivial && left.split(c1) != (pp, rr) {
                            continue;
                        }
                        let c2 = right.combine(qq, ss);
                        if !trivial && right.split(c2) != (qq, ss) {
                            continue;
                        }
                        *entries.entry((c1, c2)).or_insert(0) += v * w;
                    }
                }
            }
        }
    }
    Ok(Span2::from_parts(Arc::new(left.pr), Arc::new(right.pr), entries))
}

/// [`horizontal_compose`] followed by an exhaustive check that the value does
/// not depend on the representatives chosen, and that the result is natural.
pub fn horizontal_compose_checked(sigma: &Span2, tau: &Span2) -> Result<Span2> {
    let out = horizontal_compose(sigma, tau)?;
    let (p, q, r, s) = (&*sigma.src, &*sigma.tgt, &*tau.src, &*tau.tgt);
    let h = p.target().clone();
    let left = Gluing::new(p, r)?;
    let right = Gluing::new(q, s)?;
    // every raw pair, grouped by class
    let pairs = |g: &Gluing, a: &OneCell, b: &OneCell| {
        let mut classes: Vec<Vec<(ElemId, ElemId)>> = vec![Vec::new(); g.pr.len()];
        for x in 0..a.len() {
            for y in 0..b.len() {
                if a.stage(x).0 == b.stage(y).1 {
                    classes[g.combine(x, y)].push((x, y));
                }
            }
        }
        classes
    };
    let left_classes = pairs(&left, p, r);
    let right_classes = pairs(&right, q, s);
    let value = |(pp, rr): (ElemId, ElemId), (qq, ss): (ElemId, ElemId)| -> u64 {
        let (a, b) = (p.stage(pp).0, s.stage(ss).1);
        h.hom(a, b)
            .iter()
            .map(|&f| sigma.get(pp, q.act_left(f, qq)) * tau.get(r.act_right(rr, f), ss))
            .sum()
    };
    for c1 in 0..left.pr.len() {
        for c2 in 0..right.pr.len() {
            if left.pr.stage(c1) != right.pr.stage(c2) {
                continue;
            }
            let expected = out.get(c1, c2);
            for &x in &left_classes[c1] {
                for &y in &right_classes[c2] {
                    let v = value(x, y);
                    if v != expected {
                        return Err(Error::WellDefinednessFailure(format!(
                            "classes ({}, {}) give {} on representatives {:?}, {:?} but {} canonically",
                            left.pr.label(c1),
                            right.pr.label(c2),
                            v,
                            x,
                            y,
                            expected
                        )));
                    }
                }
            }
        }
    }
    out.check_naturality()?;
    Ok(out)
}
