//! Controlled operations: cells `[▷G, S] ⇒ [▷G, S]` where `S` is a free system.
//!
//! Bending the boundary leg down turns such a cell into `S ⇒ [◁G, ▷G, S]`,
//! which is a span of sets `S → Mor(G) × S` because `[◁G, ▷G]` is the set of
//! morphisms. So a controlled operation is, per logical state and per state of
//! `S`, a rule that multiplies the microstate by a group element and updates `S`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId, ObjId};
use crate::path::OneCell;
use crate::profunctor::{ElemId, Profunctor};
use crate::span::{horizontal_compose as h, Span2};
use crate::structures::cells::CanonicalCells;

/// Default bound on the number of candidates [`ControlledSetting::classify`] will stream.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// One entry of the curried form: free state `s` goes to `(m, s2)` with multiplicity `mult`.
///
/// Uncurried, the entry sends `(x, s)` to `(m⁻¹ ; x, s2)` for every microstate
/// `x` of the logical state of `m`; the bubble `m` is glued on the outside of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ControlEntry {
    pub s: usize,
    pub m: MorId,
    pub s2: usize,
    pub mult: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Per logical state and per free state, exactly one `(m, s2)`.
    Functions,
    /// Every 0/1 span `S → Mor(G) × S`.
    Relations,
    /// Entries in `0..=max`.
    Multiplicities { max: u64 },
}

/// The six properties of logical states and microstates under local operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Phenomenon {
    LogicalStateRobust,
    MicrostatePerturbed,
    LogicalStateControls,
    MicrostateCannotControl,
    LogicalStateAscertained,
    MicrostateCannotBeAscertained,
}

#[derive(Debug, Clone)]
pub struct ControlledOp {
    pub data: Vec<ControlEntry>,
    pub sigma: Span2,
    pub tags: BTreeSet<Phenomenon>,
}

/// A skeletal groupoid together with a free system and the 1-cells around them.
#[derive(Debug, Clone)]
pub struct ControlledSetting {
    pub cells: CanonicalCells,
    pub free: Arc<Profunctor>,
    /// `[S]`
    pub s: Arc<OneCell>,
    /// `[▷, S]`, the type of a controlled operation
    pub rs: Arc<OneCell>,
    /// `[◁, ▷, S]`, the type of its curried form
    pub lrs: Arc<OneCell>,
    // uncurried span of each basis entry (s, m, s2), flattened
    basis: Vec<BTreeMap<(ElemId, ElemId), u64>>,
}

impl ControlledSetting {
    pub fn new(g: &Arc<Groupoid>, s_size: usize) -> Result<ControlledSetting> {
        if s_size == 0 {
            return Err(Error::EmptySet);
        }
        let cells = CanonicalCells::new(g)?;
        let free = Arc::new(Profunctor::set("S", (0..s_size).map(|i| format!("s{i}"))));
        let b = &cells.boundary;
        let s = Arc::new(OneCell::new(vec![free.clone()])?);
        let rs = Arc::new(OneCell::new(vec![b.right.clone(), free.clone()])?);
        let lrs = Arc::new(OneCell::new(vec![b.left.clone(), b.right.clone(), free.clone()])?);
        let mut out = ControlledSetting { cells, free, s, rs, lrs, basis: Vec::new() };
        let n = g.n_morphisms();
        let mut basis = Vec::with_capacity(s_size * n * s_size);
        for si in 0..s_size {
            for m in 0..n {
                for s2 in 0..s_size {
                    let e = ControlEntry { s: si, m, s2, mult: 1 };
                    basis.push(out.uncurry(&out.curried(&[e])?)?.entries().clone());
                }
            }
        }
        out.basis = basis;
        Ok(out)
    }

    pub fn group(&self) -> &Arc<Groupoid> {
        &self.cells.boundary.group
    }

    pub fn s_size(&self) -> usize {
        self.free.len()
    }

    /// Element of `[◁, ▷, S]` for the microstate `m` and free state `s`.
    pub fn curried_element(&self, m: MorId, s: usize) -> ElemId {
        let b = &self.cells.boundary;
        let mut raw = b.lr.raw(b.element_of(m));
        raw.push(s);
        self.lrs.canonical(&raw)
    }

    /// Decodes an element of `[◁, ▷, S]` into `(m, s)`.
    pub fn curried_parts(&self, e: ElemId) -> (MorId, usize) {
        let b = &self.cells.boundary;
        let raw = self.lrs.raw(e);
        let s = raw[2];
        (b.morphism_of(b.lr.canonical(&raw[..2])), s)
    }

    /// The curried cell `S ⇒ [◁, ▷, S]` with the given entries.
    pub fn curried(&self, data: &[ControlEntry]) -> Result<Span2> {
        let n = self.group().n_morphisms();
        let entries = data.iter().map(|e| {
            if e.s >= self.s_size() || e.s2 >= self.s_size() || e.m >= n {
                return Err(Error::InvalidElement(format!("{e:?}")));
            }
            Ok(((e.s, self.curried_element(e.m, e.s2)), e.mult))
        });
        Span2::new(self.s.clone(), self.lrs.clone(), entries.collect::<Result<Vec<_>>>()?)
    }

    /// Reads the span of sets `S → Mor(G) × S` off a curried cell.
    pub fn data(&self, curried: &Span2) -> Vec<ControlEntry> {
        curried
            .entries()
            .iter()
            .map(|(&(s, t), &mult)| {
                let (m, s2) = self.curried_parts(t);
                ControlEntry { s, m, s2, mult }
            })
            .collect()
    }

    /// `σ′ = (ε† ∘ id_S) ; (id_◁ ∘ σ)`.
    pub fn curry(&self, sigma: &Span2) -> Result<Span2> {
        self.expect(sigma, &self.rs, &self.rs)?;
        let c = &self.cells;
        let first = h(&c.epsilon_dagger, &Span2::identity(&self.s))?;
        first.then(&h(&Span2::identity(&c.boundary.l), sigma)?)
    }

    /// `σ = (id_▷ ∘ σ′) ; (μ ∘ id_▷ ∘ id_S)`.
    pub fn uncurry(&self, curried: &Span2) -> Result<Span2> {
        self.expect(curried, &self.s, &self.lrs)?;
        let c = &self.cells;
        let first = h(&Span2::identity(&c.boundary.r), curried)?;
        first.then(&h(&h(&c.mu, &Span2::identity(&c.boundary.r))?, &Span2::identity(&self.s))?)
    }

    fn expect(&self, span: &Span2, src: &Arc<OneCell>, tgt: &Arc<OneCell>) -> Result<()> {
        if span.src().as_ref() != src.as_ref() || span.tgt().as_ref() != tgt.as_ref() {
            return Err(Error::TypeMismatch(format!(
                "expected {} ⇒ {}, got {} ⇒ {}",
                src.describe(),
                tgt.describe(),
                span.src().describe(),
                span.tgt().describe()
            )));
        }
        Ok(())
    }

    /// The controlled operation with the given curried data, assembled from
    /// precomputed uncurried basis cells.
    pub fn operation(&self, data: &[ControlEntry]) -> Result<Span2> {
        let (n, k) = (self.group().n_morphisms(), self.s_size());
        let mut entries: BTreeMap<(ElemId, ElemId), u64> = BTreeMap::new();
        for e in data {
            if e.s >= k || e.s2 >= k || e.m >= n {
                return Err(Error::InvalidElement(format!("{e:?}")));
            }
            for (&key, &v) in &self.basis[(e.s * n + e.m) * k + e.s2] {
                *entries.entry(key).or_insert(0) += v * e.mult;
            }
        }
        Span2::new(self.rs.clone(), self.rs.clone(), entries)
    }

    /// Number of candidates the given mode would stream.
    pub fn candidate_count(&self, mode: EnumerationMode) -> Option<u128> {
        let g = self.group();
        let k = self.s_size() as u32;
        match mode {
            EnumerationMode::Functions => (0..g.n_objects()).try_fold(1u128, |acc, a| {
                let choices = (g.end(a).len() * self.s_size()) as u128;
                acc.checked_mul(choices.checked_pow(k)?)
            }),
            EnumerationMode::Relations => 2u128.checked_pow(self.slots()),
            EnumerationMode::Multiplicities { max } => (max as u128).checked_add(1)?.checked_pow(self.slots()),
        }
    }

    fn slots(&self) -> u32 {
        (self.s_size() * self.s_size() * self.group().n_morphisms()) as u32
    }

    /// Streams every controlled operation of the given mode, or fails when the
    /// candidate count exceeds `cap`.
    pub fn classify(&self, mode: EnumerationMode, cap: u128) -> Result<ControlledOps<'_>> {
        let total = self.candidate_count(mode).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::CapExceeded(total, cap));
        }
        Ok(ControlledOps { setting: self, mode, next: 0, total })
    }

    /// Decodes candidate number `index` of a mode into curried data.
    fn decode(&self, mode: EnumerationMode, mut index: u128) -> Vec<ControlEntry> {
        let g = self.group();
        let (n, k) = (g.n_morphisms(), self.s_size());
        let mut out = Vec::new();
        match mode {
            EnumerationMode::Functions => {
                for a in 0..g.n_objects() {
                    let end = g.end(a);
                    let radix = (end.len() * k) as u128;
                    for s in 0..k {
                        let d = (index % radix) as usize;
                        index /= radix;
                        out.push(ControlEntry { s, m: end[d / k], s2: d % k, mult: 1 });
                    }
                }
            }
            EnumerationMode::Relations | EnumerationMode::Multiplicities { .. } => {
                let radix = match mode {
                    EnumerationMode::Multiplicities { max } => max as u128 + 1,
                    _ => 2,
                };
                for s in 0..k {
                    for m in 0..n {
                        for s2 in 0..k {
                            let mult = (index % radix) as u64;
                            index /= radix;
                            if mult > 0 {
                                out.push(ControlEntry { s, m, s2, mult });
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Checks an operation against the properties and returns the ones it witnesses.
    /// Fails if the logical state changes or the cell is not natural.
    pub fn phenomenology(&self, data: &[ControlEntry], sigma: &Span2) -> Result<BTreeSet<Phenomenon>> {
        if let Some(e) = self.logical_state_violation(sigma) {
            return Err(Error::VerificationFailure(format!("logical state changed by entry {e:?}")));
        }
        sigma.check_naturality()?;
        let g = self.group();
        let mut tags = BTreeSet::from([
            Phenomenon::LogicalStateRobust,
            Phenomenon::MicrostateCannotControl,
            Phenomenon::MicrostateCannotBeAscertained,
        ]);
        if data.iter().any(|e| !g.is_identity(e.m)) {
            tags.insert(Phenomenon::MicrostatePerturbed);
        }
        // behaviour on the free system, per logical state
        let mut per_object: Vec<BTreeMap<(usize, usize), u64>> = vec![BTreeMap::new(); g.n_objects()];
        for e in data {
            *per_object[g.src(e.m)].entry((e.s, e.s2)).or_insert(0) += e.mult;
        }
        if per_object.windows(2).any(|w| w[0] != w[1]) {
            tags.insert(Phenomenon::LogicalStateControls);
        }
        if g.n_objects() > 1 && (0..self.s_size()).any(|s| self.separates(&per_object, s)) {
            tags.insert(Phenomenon::LogicalStateAscertained);
        }
        Ok(tags)
    }

    // Starting from `s`, every logical state reaches some free state and no two share one.
    fn separates(&self, per_object: &[BTreeMap<(usize, usize), u64>], s: usize) -> bool {
        let mut seen = BTreeSet::new();
        for rel in per_object {
            let reached: Vec<usize> = rel.keys().filter(|(a, _)| *a == s).map(|&(_, b)| b).collect();
            if reached.is_empty() || reached.iter().any(|b| !seen.insert(*b)) {
                return false;
            }
        }
        true
    }

    /// First entry whose input and output logical states differ.
    pub fn logical_state_violation(&self, sigma: &Span2) -> Option<(ElemId, ElemId)> {
        let cell = sigma.src();
        sigma.entries().keys().copied().find(|&(s, t)| cell.stage(s) != sigma.tgt().stage(t))
    }

    /// Element of `[▷, S]` for microstate `x` (an endomorphism) and free state `s`.
    pub fn element(&self, x: MorId, s: usize) -> ElemId {
        self.rs.canonical(&[x, s])
    }

    /// Logical state of an element of `[▷, S]`.
    pub fn logical_state(&self, e: ElemId) -> ObjId {
        self.rs.stage(e).1
    }

    /// Random relational data with about `density` of the slots filled.
    pub fn random_data<R: Rng>(&self, rng: &mut R, density: f64) -> Vec<ControlEntry> {
        let (n, k) = (self.group().n_morphisms(), self.s_size());
        let mut out = Vec::new();
        for s in 0..k {
            for m in 0..n {
                for s2 in 0..k {
                    if rng.gen_bool(density) {
                        out.push(ControlEntry { s, m, s2, mult: rng.gen_range(1..=2) });
                    }
                }
            }
        }
        out
    }
}

pub struct ControlledOps<'a> {
    setting: &'a ControlledSetting,
    mode: EnumerationMode,
    next: u128,
    total: u128,
}

impl ControlledOps<'_> {
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl Iterator for ControlledOps<'_> {
    type Item = Result<ControlledOp>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let data = self.setting.decode(self.mode, self.next);
        self.next += 1;
        Some(self.setting.operation(&data).and_then(|sigma| {
            let tags = self.setting.phenomenology(&data, &sigma)?;
            Ok(ControlledOp { data, sigma, tags })
        }))
    }
}

/// A would-be operation that flips the free state exactly when the microstate
/// is an identity. It reads the microstate, so it is not natural; returned
/// unvalidated for inspection.
pub fn microstate_reader(setting: &ControlledSetting) -> BTreeMap<(ElemId, ElemId), u64> {
    let g = setting.group();
    let k = setting.s_size();
    let mut entries = BTreeMap::new();
    for x in 0..g.n_morphisms() {
        if g.src(x) != g.tgt(x) {
            continue;
        }
        for s in 0..k {
            let s2 = if g.is_identity(x) { (s + 1) % k } else { s };
            entries.insert((setting.element(x, s), setting.element(x, s2)), 1);
        }
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setting(name: &str, k: usize) -> ControlledSetting {
        ControlledSetting::new(&Arc::new(catalog::group(name).unwrap()), k).unwrap()
    }

    #[test]
    fn identity_curries_to_identity_microstates() {
        let st = setting("Z/2", 2);
        let c = st.curry(&Span2::identity(&st.rs)).unwrap();
        let data = st.data(&c);
        assert_eq!(data.len(), 2);
        for e in data {
            assert_eq!((e.m, e.s2, e.mult), (0, e.s, 1));
        }
    }

    #[test]
    fn round_trip_both_ways() {
        let st = setting("S3", 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let data = st.random_data(&mut rng, 0.3);
            let curried = st.curried(&data).unwrap();
            let sigma = st.uncurry(&curried).unwrap();
            assert!(st.curry(&sigma).unwrap().equals(&curried).unwrap());
            assert!(st.operation(&data).unwrap().equals(&sigma).unwrap());
        }
    }

    #[test]
    fn uncurried_entry_multiplies_the_microstate() {
        let g = catalog::group("S3").unwrap();
        let st = setting("S3", 2);
        for m in 0..g.n_morphisms() {
            let sigma = st.operation(&[ControlEntry { s: 0, m, s2: 1, mult: 1 }]).unwrap();
            for x in 0..g.n_morphisms() {
                let img = sigma.image(st.element(x, 0));
                let y = g.compose(g.inverse(m), x).unwrap();
                assert_eq!(img, vec![(st.element(y, 1), 1)]);
                assert!(sigma.image(st.element(x, 1)).is_empty());
            }
        }
    }

    #[test]
    fn function_counts() {
        assert_eq!(setting("Z/2", 1).candidate_count(EnumerationMode::Functions), Some(2));
        assert_eq!(setting("Z/2", 2).candidate_count(EnumerationMode::Functions), Some(16));
        let u = Groupoid::disjoint_union(&catalog::cyclic(2), &catalog::cyclic(3));
        let st = ControlledSetting::new(&Arc::new(u), 1).unwrap();
        assert_eq!(st.candidate_count(EnumerationMode::Functions), Some(6));
    }

    #[test]
    fn trivial_group_gives_spans_of_s() {
        let st = ControlledSetting::new(&Arc::new(Groupoid::trivial()), 2).unwrap();
        let ops: Vec<_> = st.classify(EnumerationMode::Relations, DEFAULT_CAP).unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(ops.len(), 16);
        for op in &ops {
            assert!(!op.tags.contains(&Phenomenon::MicrostatePerturbed));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let st = setting("S3", 2);
        match st.classify(EnumerationMode::Relations, DEFAULT_CAP) {
            Err(Error::CapExceeded(n, cap)) => assert_eq!((n, cap), (1 << 24, DEFAULT_CAP)),
            other => panic!("unexpected {:?}", other.map(|o| o.total())),
        }
    }

    #[test]
    fn microstate_reader_is_rejected_and_never_enumerated() {
        let st = setting("Z/2", 2);
        let entries = microstate_reader(&st);
        let err = Span2::new(st.rs.clone(), st.rs.clone(), entries.clone()).unwrap_err();
        assert!(matches!(err, Error::NaturalityViolation(_)), "{err:?}");
        for op in st.classify(EnumerationMode::Relations, DEFAULT_CAP).unwrap() {
            assert_ne!(op.unwrap().sigma.entries(), &entries);
        }
    }

    #[test]
    fn logical_state_can_be_read_but_not_changed() {
        let u = Groupoid::disjoint_union(&catalog::cyclic(2), &catalog::cyclic(2));
        let st = ControlledSetting::new(&Arc::new(u), 2).unwrap();
        let mut ascertained = 0;
        for op in st.classify(EnumerationMode::Functions, DEFAULT_CAP).unwrap() {
            let op = op.unwrap();
            for (&(s, t), _) in op.sigma.entries() {
                assert_eq!(st.logical_state(s), st.logical_state(t));
            }
            ascertained += op.tags.contains(&Phenomenon::LogicalStateAscertained) as usize;
        }
        assert!(ascertained > 0);
    }
}
