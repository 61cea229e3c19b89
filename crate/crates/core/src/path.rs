//! Composable strings of profunctors and their coend realization.
//!
//! A [`OneCell`] is a list of profunctors in diagrammatic order; the empty list
//! stands for the identity profunctor on a groupoid. Keeping the list flat makes
//! composition strictly associative and unital, so no coherence cells are needed.
//!
//! The realization identifies tuples related by moving a morphism across a
//! junction, `(.., x_i, x_{i+1}, ..) ~ (.., h·x_i, x_{i+1}·h⁻¹, ..)`, and picks
//! the lexicographically least tuple of each class as its representative.
//! Junctions at the trivial groupoid identify nothing, so the list is cut into
//! segments there and the realization is the product of the segment realizations.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId};
use crate::profunctor::{same_groupoid, ElemId, Profunctor, Stage};

/// A maximal run of factors whose internal junctions are nontrivial.
#[derive(Clone)]
struct Segment {
    start: usize,
    end: usize,
    prof: Profunctor,
    reps: Vec<Vec<ElemId>>,
    class_of: HashMap<Vec<ElemId>, ElemId>,
}

#[derive(Clone)]
pub struct OneCell {
    source: Arc<Groupoid>,
    target: Arc<Groupoid>,
    factors: Vec<Arc<Profunctor>>,
    segments: Vec<Segment>,
    // strides[j] for segment j; segment 0 is most significant
    strides: Vec<usize>,
    len: usize,
}

impl fmt::Debug for OneCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OneCell[{}]", self.describe())
    }
}

impl PartialEq for OneCell {
    fn eq(&self, other: &Self) -> bool {
        same_groupoid(&self.source, &other.source)
            && same_groupoid(&self.target, &other.target)
            && self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }
}

impl OneCell {
    /// The identity 1-cell on `g`, realized as `hom(g)`.
    pub fn identity(g: &Arc<Groupoid>) -> OneCell {
        let prof = Profunctor::hom(g);
        let n = prof.len();
        let segment = Segment {
            start: 0,
            end: 0,
            reps: (0..n).map(|e| vec![e]).collect(),
            class_of: HashMap::new(),
            prof,
        };
        OneCell {
            source: g.clone(),
            target: g.clone(),
            factors: Vec::new(),
            segments: vec![segment],
            strides: vec![1],
            len: n,
        }
    }

    /// A nonempty composable list of profunctors, first factor applied first.
    pub fn new(factors: Vec<Arc<Profunctor>>) -> Result<OneCell> {
        if factors.is_empty() {
            return Err(Error::TypeMismatch("empty factor list; use OneCell::identity".into()));
        }
        for (i, w) in factors.windows(2).enumerate() {
            if !same_groupoid(w[0].target(), w[1].source()) {
                return Err(Error::TypeMismatch(format!(
                    "factor {} ({}) does not end where factor {} ({}) starts",
                    i,
                    w[0].name(),
                    i + 1,
                    w[1].name()
                )));
            }
        }
        let mut cuts = vec![0];
        for (i, f) in factors.iter().enumerate().take(factors.len() - 1) {
            if f.target().is_trivial() {
                cuts.push(i + 1);
            }
        }
        cuts.push(factors.len());
        let segments: Vec<Segment> = cuts
            .windows(2)
            .map(|w| realize_segment(&factors, w[0], w[1]))
            .collect();
        let mut strides = vec![1; segments.len()];
        for j in (0..segments.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * segments[j + 1].prof.len();
        }
        let len = strides[0] * segments[0].prof.len();
        Ok(OneCell {
            source: factors[0].source().clone(),
            target: factors[factors.len() - 1].target().clone(),
            factors,
            segments,
            strides,
            len,
        })
    }

    pub fn single(p: Profunctor) -> OneCell {
        OneCell::new(vec![Arc::new(p)]).expect("single factor")
    }

    pub fn from_profunctors(ps: &[&Arc<Profunctor>]) -> Result<OneCell> {
        OneCell::new(ps.iter().map(|p| (*p).clone()).collect())
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &OneCell) -> Result<OneCell> {
        if !same_groupoid(&self.target, &other.source) {
            return Err(Error::TypeMismatch(format!(
                "cannot compose [{}] with [{}]",
                self.describe(),
                other.describe()
            )));
        }
        if self.is_identity() {
            return Ok(other.clone());
        }
        if other.is_identity() {
            return Ok(self.clone());
        }
        OneCell::new(self.factors.iter().chain(&other.factors).cloned().collect())
    }

    pub fn concat_all(cells: &[&OneCell]) -> Result<OneCell> {
        let mut it = cells.iter();
        let first = (*it.next().expect("nonempty list")).clone();
        it.try_fold(first, |acc, c| acc.concat(c))
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn source(&self) -> &Arc<Groupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Groupoid> {
        &self.target
    }

    pub fn factors(&self) -> &[Arc<Profunctor>] {
        &self.factors
    }

    /// Number of realized elements.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Human-readable factor list, e.g. `◁;▷`.
    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return "id".into();
        }
        self.factors.iter().map(|f| f.name()).collect::<Vec<_>>().join(";")
    }

    fn decode(&self, e: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        self.segments
            .iter()
            .zip(&self.strides)
            .map(move |(s, &st)| (e / st) % s.prof.len())
    }

    fn last_part(&self, e: ElemId) -> ElemId {
        e % self.segments.last().expect("segments").prof.len()
    }

    fn first_part(&self, e: ElemId) -> ElemId {
        e / self.strides[0]
    }

    pub fn stage(&self, e: ElemId) -> Stage {
        let first = &self.segments[0].prof;
        let last = &self.segments[self.segments.len() - 1].prof;
        (last.stage(self.last_part(e)).0, first.stage(self.first_part(e)).1)
    }

    /// `h·e` for `h` a morphism of the target groupoid.
    pub fn act_left(&self, h: MorId, e: ElemId) -> ElemId {
        let last = &self.segments[self.segments.len() - 1].prof;
        let c = self.last_part(e);
        e - c + last.act_left(h, c)
    }

    /// `e·g` for `g` a morphism of the source groupoid.
    pub fn act_right(&self, e: ElemId, g: MorId) -> ElemId {
        let c = self.first_part(e);
        let st = self.strides[0];
        e - c * st + self.segments[0].prof.act_right(c, g) * st
    }

    /// Canonical tuple of factor elements representing `e`; empty for identity cells.
    pub fn raw(&self, e: ElemId) -> Vec<ElemId> {
        if self.is_identity() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.factors.len());
        for (seg, c) in self.segments.iter().zip(self.decode(e)) {
            out.extend_from_slice(&seg.reps[c]);
        }
        out
    }

    /// Class of an arbitrary stage-consistent tuple of factor elements.
    pub fn canonical(&self, raw: &[ElemId]) -> ElemId {
        debug_assert_eq!(raw.len(), self.factors.len());
        let mut e = 0;
        for (seg, &st) in self.segments.iter().zip(&self.strides) {
            let part = &raw[seg.start..seg.end];
            let c = if seg.end - seg.start == 1 {
                part[0]
            } else {
                *seg.class_of.get(part).expect("stage-consistent tuple")
            };
            e += c * st;
        }
        e
    }

    pub fn label(&self, e: ElemId) -> String {
        let parts: Vec<&str> = self
            .segments
            .iter()
            .zip(self.decode(e))
            .map(|(s, c)| s.prof.label(c))
            .collect();
        parts.join("|")
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len).map(|e| self.label(e)).collect()
    }

    pub fn find_label(&self, label: &str) -> Option<ElemId> {
        (0..self.len).find(|&e| self.label(e) == label)
    }

    /// Elements at the given stage, in increasing order.
    pub fn stage_elements(&self, stage: Stage) -> Vec<ElemId> {
        (0..self.len).filter(|&e| self.stage(e) == stage).collect()
    }

    /// Dense profunctor with the same elements and actions.
    pub fn to_profunctor(&self) -> Profunctor {
        if self.segments.len() == 1 {
            return self.segments[0].prof.clone();
        }
        let elements = (0..self.len).map(|e| (self.stage(e), self.label(e))).collect();
        Profunctor::from_actions(
            self.describe(),
            self.source.clone(),
            self.target.clone(),
            elements,
            |h, e| Some(self.act_left(h, e)),
            |e, g| Some(self.act_right(e, g)),
        )
        .expect("realized 1-cell is a profunctor")
    }
}

/// Enumerates stage-consistent tuples of `factors[start..end]` and their classes.
fn realize_segment(factors: &[Arc<Profunctor>], start: usize, end: usize) -> Segment {
    let fs = &factors[start..end];
    if fs.len() == 1 {
        let prof = (*fs[0]).clone();
        let n = prof.len();
        return Segment {
            start,
            end,
            reps: (0..n).map(|e| vec![e]).collect(),
            class_of: HashMap::new(),
            prof,
        };
    }
    let k = fs.len();
    // tuples[i] holds x_0..x_i with matching junction objects
    let mut raw_tuples: Vec<Vec<ElemId>> = (0..fs[0].len()).map(|e| vec![e]).collect();
    for i in 1..k {
        let prev = &fs[i - 1];
        let cur = &fs[i];
        let mut by_source: HashMap<usize, Vec<ElemId>> = HashMap::new();
        for e in 0..cur.len() {
            by_source.entry(cur.stage(e).1).or_default().push(e);
        }
        let mut next = Vec::new();
        for t in &raw_tuples {
            let junction = prev.stage(t[i - 1]).0;
            for &e in by_source.get(&junction).map(Vec::as_slice).unwrap_or(&[]) {
                let mut u = t.clone();
                u.push(e);
                next.push(u);
            }
        }
        raw_tuples = next;
    }
    let mut class_of: HashMap<Vec<ElemId>, usize> = HashMap::with_capacity(raw_tuples.len());
    let mut orbit_reps: Vec<Vec<ElemId>> = Vec::new();
    for t in &raw_tuples {
        if class_of.contains_key(t) {
            continue;
        }
        let orbit = orbit_of(fs, t);
        let id = orbit_reps.len();
        orbit_reps.push(orbit.iter().min().expect("nonempty orbit").clone());
        for u in orbit {
            class_of.insert(u, id);
        }
    }
    let stage_of = |t: &[ElemId]| (fs[k - 1].stage(t[k - 1]).0, fs[0].stage(t[0]).1);
    let mut order: Vec<usize> = (0..orbit_reps.len()).collect();
    order.sort_by(|&a, &b| {
        (stage_of(&orbit_reps[a]), &orbit_reps[a]).cmp(&(stage_of(&orbit_reps[b]), &orbit_reps[b]))
    });
    let mut renumber = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    for v in class_of.values_mut() {
        *v = renumber[*v];
    }
    let reps: Vec<Vec<ElemId>> = order.iter().map(|&old| orbit_reps[old].clone()).collect();
    let elements = reps
        .iter()
        .map(|t| {
            let label = t.iter().zip(fs).map(|(&x, f)| f.label(x)).collect::<Vec<_>>().join(",");
            (stage_of(t), format!("({label})"))
        })
        .collect();
    let name = fs.iter().map(|f| f.name()).collect::<Vec<_>>().join(";");
    let prof = Profunctor::from_actions(
        name,
        fs[0].source().clone(),
        fs[k - 1].target().clone(),
        elements,
        |h, c| {
            let mut t = reps[c].clone();
            t[k - 1] = fs[k - 1].act_left(h, t[k - 1]);
            class_of.get(&t).copied()
        },
        |c, g| {
            let mut t = reps[c].clone();
            t[0] = fs[0].act_right(t[0], g);
            class_of.get(&t).copied()
        },
    )
    .expect("segment realization is a profunctor");
    Segment { start, end, prof, reps, class_of }
}

/// All tuples reachable by moving morphisms across the internal junctions.
fn orbit_of(fs: &[Arc<Profunctor>], t: &[ElemId]) -> Vec<Vec<ElemId>> {
    let k = fs.len();
    // choices[i] = morphisms into the object at junction i (between x_i and x_{i+1})
    let choices: Vec<Vec<MorId>> = (0..k - 1)
        .map(|i| {
            let g = fs[i].target();
            g.into_object(fs[i].stage(t[i]).0).collect()
        })
        .collect();
    let mut idx = vec![0; k - 1];
    let mut out = Vec::new();
    loop {
        let mut u = t.to_vec();
        for i in 0..k - 1 {
            let h = choices[i][idx[i]];
            let g = fs[i].target();
            u[i] = fs[i].act_left(h, u[i]);
            u[i + 1] = fs[i + 1].act_right(u[i + 1], g.inverse(h));
        }
        out.push(u);
        let mut j = 0;
        while j < k - 1 {
            idx[j] += 1;
            if idx[j] < choices[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == k - 1 {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Profunctor composite `s` then `t`, together with the map sending any raw
/// pair `(x, y)`, `x ∈ s`, `y ∈ t`, to its class.
pub fn compose_profunctors(s: &Arc<Profunctor>, t: &Arc<Profunctor>) -> Result<(Profunctor, RepresentativeMap)> {
    let cell = OneCell::new(vec![s.clone(), t.clone()])?;
    Ok((cell.to_profunctor(), RepresentativeMap { cell }))
}

pub struct RepresentativeMap {
    cell: OneCell,
}

impl RepresentativeMap {
    pub fn class(&self, x: ElemId, y: ElemId) -> ElemId {
        self.cell.canonical(&[x, y])
    }

    pub fn representative(&self, c: ElemId) -> (ElemId, ElemId) {
        let r = self.cell.raw(c);
        (r[0], r[1])
    }
}
