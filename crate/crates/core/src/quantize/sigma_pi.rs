//! The comparison between a linearized profunctor composite and the
//! composite of linearized profunctors, orbit pair by orbit pair.
//!
//! For `t` in `T` (acted on the right by the middle groupoid) and `s` in `S`
//! (acted on the left), the pairs drawn from the two orbits modulo the coend
//! relation span one space, and intertwiners `L` from the orbit of `t` to the
//! orbit of `s` span the other. `π(L) = (t, L(t))`, and `σ` averages over the
//! stabilizer of `t`. Both composites are checked to be identities in exact
//! rational arithmetic, along with the well-definedness of `σ`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId, ObjId};
use crate::profunctor::{ElemId, Profunctor};
use crate::quantize::matrix::QCheck;

pub type Q = Ratio<i64>;
/// A vector over elements of a profunctor, with exact rational coefficients.
pub type RationalVector = BTreeMap<ElemId, Q>;

fn add(v: &mut RationalVector, e: ElemId, c: Q) {
    let x = v.entry(e).or_insert_with(Q::zero);
    *x += c;
    if x.is_zero() {
        v.remove(&e);
    }
}

/// An intertwiner, given by its value on every element of the orbit of `t`.
pub type Intertwiner = BTreeMap<ElemId, RationalVector>;

/// One pair of orbits with everything needed to evaluate `σ` and `π`.
#[derive(Debug, Clone)]
pub struct OrbitPair {
    pub t0: ElemId,
    /// Elements of the orbit of `t0`, each with one `h` such that `t0·h` is it.
    pub t_orbit: BTreeMap<ElemId, MorId>,
    pub s_orbit: BTreeSet<ElemId>,
    pub stabilizer: Vec<MorId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaPiReport {
    pub orbit_pairs: usize,
    pub classes: usize,
    /// Stabilizer order of the representative of each orbit pair.
    pub stabilizer_orders: Vec<usize>,
    pub checks: Vec<QCheck>,
}

impl SigmaPiReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Evaluates `σ` and `π` for one middle groupoid.
pub struct SigmaPi<'a> {
    pub middle: &'a Groupoid,
    pub s: &'a Profunctor,
    pub t: &'a Profunctor,
}

impl<'a> SigmaPi<'a> {
    /// `s: G -> H` and `t: H -> J` over a common `H`.
    pub fn new(s: &'a Profunctor, t: &'a Profunctor) -> Result<SigmaPi<'a>> {
        if !crate::profunctor::same_groupoid(s.target(), t.source()) {
            return Err(Error::TypeMismatch(format!("{} and {} do not share a middle groupoid", s.name(), t.name())));
        }
        Ok(SigmaPi { middle: t.source().as_ref(), s, t })
    }

    fn t_obj(&self, t: ElemId) -> ObjId {
        self.t.stage(t).1
    }

    fn s_obj(&self, s: ElemId) -> ObjId {
        self.s.stage(s).0
    }

    /// All pairs of orbits with matching outer objects.
    pub fn orbit_pairs(&self) -> Vec<OrbitPair> {
        let h = self.middle;
        let mut t_seen = BTreeSet::new();
        let mut t_orbits = Vec::new();
        for t0 in 0..self.t.len() {
            if t_seen.contains(&t0) {
                continue;
            }
            let mut orbit = BTreeMap::from([(t0, h.identity(self.t_obj(t0)))]);
            let mut frontier = vec![t0];
            while let Some(x) = frontier.pop() {
                let hx = orbit[&x];
                for k in h.from_object(self.t_obj(x)) {
                    let y = self.t.act_right(x, k);
                    if !orbit.contains_key(&y) {
                        orbit.insert(y, h.compose(hx, k).expect("composable"));
                        frontier.push(y);
                    }
                }
            }
            t_seen.extend(orbit.keys().copied());
            let stabilizer = h.end(self.t_obj(t0)).iter().copied().filter(|&k| self.t.act_right(t0, k) == t0).collect();
            t_orbits.push(OrbitPair { t0, t_orbit: orbit, s_orbit: BTreeSet::new(), stabilizer });
        }
        let mut s_seen = BTreeSet::new();
        let mut s_orbits = Vec::new();
        for s0 in 0..self.s.len() {
            if s_seen.contains(&s0) {
                continue;
            }
            let mut orbit = BTreeSet::from([s0]);
            let mut frontier = vec![s0];
            while let Some(x) = frontier.pop() {
                for k in h.into_object(self.s_obj(x)) {
                    let y = self.s.act_left(k, x);
                    if orbit.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            s_seen.extend(orbit.iter().copied());
            s_orbits.push(orbit);
        }
        let mut out = Vec::new();
        for tp in &t_orbits {
            for so in &s_orbits {
                let s0 = *so.iter().next().expect("nonempty orbit");
                // both orbits must meet the same component of the middle groupoid
                let connected = tp.t_orbit.keys().any(|&t| self.t_obj(t) == self.s_obj(s0))
                    || so.iter().any(|&s| self.s_obj(s) == self.t_obj(tp.t0));
                if connected {
                    out.push(OrbitPair { s_orbit: so.clone(), ..tp.clone() });
                }
            }
        }
        out
    }

    /// Normal form of the pair `(t, s)` as an element `x` with `(t, s) ~ (t0, x)`,
    /// minimized over the stabilizer.
    pub fn class(&self, p: &OrbitPair, t: ElemId, s: ElemId) -> ElemId {
        let x = self.s.act_left(p.t_orbit[&t], s);
        p.stabilizer.iter().map(|&h0| self.s.act_left(h0, x)).min().expect("stabilizer contains the identity")
    }

    /// The classes of one orbit pair.
    pub fn classes(&self, p: &OrbitPair) -> BTreeSet<ElemId> {
        let mut out = BTreeSet::new();
        for &t in p.t_orbit.keys() {
            for &s in &p.s_orbit {
                if self.t_obj(t) == self.s_obj(s) {
                    out.insert(self.class(p, t, s));
                }
            }
        }
        out
    }

    /// `σ(t0·h, s)(t0·h′) = |Stab(t0)|⁻¹ Σ_{h0 ∈ Stab(t0)} h′⁻¹·h0·h·s`, using the
    /// given `h′` for the target point.
    fn sigma_at(&self, p: &OrbitPair, h: MorId, s: ElemId, h_prime: MorId) -> RationalVector {
        let g = self.middle;
        let weight = Q::new(1, p.stabilizer.len() as i64);
        let mut v = RationalVector::new();
        let x = self.s.act_left(h, s);
        for &h0 in &p.stabilizer {
            let y = self.s.act_left(g.inverse(h_prime), self.s.act_left(h0, x));
            add(&mut v, y, weight);
        }
        v
    }

    /// `σ(t, s)` as an intertwiner on the whole orbit of `t0`.
    pub fn sigma(&self, p: &OrbitPair, t: ElemId, s: ElemId) -> Intertwiner {
        let h = p.t_orbit[&t];
        p.t_orbit.iter().map(|(&t2, &h2)| (t2, self.sigma_at(p, h, s, h2))).collect()
    }

    /// `π(L) = (t0, L(t0))`, as a combination of classes.
    pub fn pi(&self, p: &OrbitPair, l: &Intertwiner) -> RationalVector {
        let mut out = RationalVector::new();
        for (&x, &c) in &l[&p.t0] {
            add(&mut out, self.class(p, p.t0, x), c);
        }
        out
    }

    /// Runs every check on one orbit pair, returning the first failure.
    pub fn check_pair(&self, p: &OrbitPair) -> std::result::Result<(), String> {
        let g = self.middle;
        let pairs: Vec<(ElemId, ElemId)> = p
            .t_orbit
            .keys()
            .flat_map(|&t| p.s_orbit.iter().map(move |&s| (t, s)))
            .filter(|&(t, s)| self.t_obj(t) == self.s_obj(s))
            .collect();

        // the value at t0·h′ does not depend on which h′ is used
        for &(t, s) in &pairs {
            let h = p.t_orbit[&t];
            for (&t2, &h2) in &p.t_orbit {
                let reference = self.sigma_at(p, h, s, h2);
                for &h0 in &p.stabilizer {
                    let other = g.compose(h0, h2).expect("composable");
                    if self.t.act_right(p.t0, other) != t2 {
                        return Err(format!("{} is not a representative of {}", g.name(other), self.t.label(t2)));
                    }
                    if self.sigma_at(p, h, s, other) != reference {
                        return Err(format!(
                            "σ({}, {}) at {} depends on the representative {}",
                            self.t.label(t),
                            self.s.label(s),
                            self.t.label(t2),
                            g.name(other)
                        ));
                    }
                }
            }
        }

        // σ agrees on equivalent pairs, and π undoes it
        let mut by_class: BTreeMap<ElemId, Intertwiner> = BTreeMap::new();
        for &(t, s) in &pairs {
            let c = self.class(p, t, s);
            let l = self.sigma(p, t, s);
            if let Some(prev) = by_class.get(&c) {
                if prev != &l {
                    return Err(format!("σ differs on representatives of the class of ({}, {})", self.t.label(t), self.s.label(s)));
                }
            } else {
                by_class.insert(c, l.clone());
            }
            let back = self.pi(p, &l);
            if back != RationalVector::from([(c, Q::one())]) {
                return Err(format!("π(σ({}, {})) = {:?}", self.t.label(t), self.s.label(s), back));
            }
        }

        // a basis of intertwiners: indicator of a stabilizer orbit at t0, transported
        let at_t0: Vec<ElemId> = p.s_orbit.iter().copied().filter(|&s| self.s_obj(s) == self.t_obj(p.t0)).collect();
        let mut done = BTreeSet::new();
        for &x in &at_t0 {
            if !done.insert(self.class(p, p.t0, x)) {
                continue;
            }
            let mut base = RationalVector::new();
            for &h0 in &p.stabilizer {
                base.insert(self.s.act_left(h0, x), Q::one());
            }
            let l: Intertwiner = p
                .t_orbit
                .iter()
                .map(|(&t2, &h2)| (t2, base.iter().map(|(&y, &c)| (self.s.act_left(g.inverse(h2), y), c)).collect()))
                .collect();
            // intertwiner property on every single morphism
            for (&t2, v) in &l {
                for k in g.from_object(self.t_obj(t2)) {
                    let moved: RationalVector = v.iter().map(|(&y, &c)| (self.s.act_left(g.inverse(k), y), c)).collect();
                    if l[&self.t.act_right(t2, k)] != moved {
                        return Err(format!("basis intertwiner fails at {} moved by {}", self.t.label(t2), g.name(k)));
                    }
                }
            }
            let mut round = Intertwiner::new();
            for (&y, &c) in &l[&p.t0] {
                for (t2, v) in self.sigma(p, p.t0, y) {
                    let slot = round.entry(t2).or_default();
                    for (z, d) in v {
                        add(slot, z, c * d);
                    }
                }
            }
            if round != l {
                return Err(format!("σ(π(L)) ≠ L for the intertwiner based at {}", self.s.label(x)));
            }
        }
        Ok(())
    }

    pub fn report(&self) -> SigmaPiReport {
        let pairs = self.orbit_pairs();
        let mut checks = Vec::new();
        let mut classes = 0;
        for (i, p) in pairs.iter().enumerate() {
            classes += self.classes(p).len();
            let witness = self.check_pair(p).err();
            checks.push(QCheck {
                name: format!("orbit pair {i:03}: σ and π inverse, σ well defined"),
                pass: witness.is_none(),
                witness: witness.map(|description| crate::quantize::matrix::QWitness { description }),
            });
        }
        SigmaPiReport {
            orbit_pairs: pairs.len(),
            classes,
            stabilizer_orders: pairs.iter().map(|p| p.stabilizer.len()).collect(),
            checks,
        }
    }
}

pub fn sigma_pi_check(s: &Profunctor, t: &Profunctor) -> Result<SigmaPiReport> {
    Ok(SigmaPi::new(s, t)?.report())
}

/// The subgroup generated by one element of a group.
pub fn cyclic_subgroup(g: &Groupoid, x: MorId) -> Vec<MorId> {
    let mut out = vec![g.identity(g.src(x))];
    let mut y = x;
    while !g.is_identity(y) {
        out.push(y);
        y = g.compose(y, x).expect("endomorphism");
    }
    out.sort();
    out
}

/// Cosets of a subgroup as a profunctor over the group: left cosets `x;K` with
/// the group acting on the left (a profunctor `1 -> G`), or right cosets `K;x`
/// with the group acting on the right (a profunctor `G -> 1`).
pub fn coset_profunctor(g: &Arc<Groupoid>, subgroups: &[Vec<MorId>], left: bool) -> Result<Profunctor> {
    let one = Arc::new(Groupoid::trivial());
    let mut cosets: Vec<BTreeSet<MorId>> = Vec::new();
    for k in subgroups {
        let mut seen: Vec<BTreeSet<MorId>> = Vec::new();
        for x in 0..g.n_morphisms() {
            let c: BTreeSet<MorId> =
                k.iter().map(|&y| if left { g.compose(x, y) } else { g.compose(y, x) }.expect("group")).collect();
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        cosets.extend(seen);
    }
    let name = |c: &BTreeSet<MorId>| {
        let parts: Vec<&str> = c.iter().map(|&m| g.name(m)).collect();
        format!("{{{}}}", parts.join(","))
    };
    let elements = cosets.iter().map(|c| ((0, 0), name(c))).collect();
    let find = |c: BTreeSet<MorId>| cosets.iter().position(|d| *d == c);
    let shift = |h: MorId, e: usize, on_left: bool| {
        find(cosets[e].iter().map(|&m| if on_left { g.compose(h, m) } else { g.compose(m, h) }.expect("group")).collect())
    };
    if left {
        Profunctor::from_actions("left cosets", one.clone(), g.clone(), elements, |h, e| shift(h, e, true), |e, _| Some(e))
    } else {
        Profunctor::from_actions("right cosets", g.clone(), one, elements, |_, e| Some(e), |e, h| shift(h, e, false))
    }
}

/// The S3 fixture: cosets of a subgroup of order 2 and of order 3 on both sides,
/// plus the regular action on the left.
pub fn s3_fixture() -> Result<(Profunctor, Profunctor)> {
    let g = Arc::new(crate::catalog::group("S3")?);
    let two = (0..g.n_morphisms()).find(|&x| g.order(x) == 2).expect("S3 has an involution");
    let three = (0..g.n_morphisms()).find(|&x| g.order(x) == 3).expect("S3 has a 3-cycle");
    let subgroups = [cyclic_subgroup(&g, two), cyclic_subgroup(&g, three)];
    let identity = vec![g.identity(0)];
    let s = coset_profunctor(&g, &[subgroups[0].clone(), subgroups[1].clone(), identity], true)?;
    let t = coset_profunctor(&g, &subgroups, false)?;
    Ok((s, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn s3_fixture_has_both_stabilizer_orders() {
        let (s, t) = s3_fixture().unwrap();
        let r = sigma_pi_check(&s, &t).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        let orders: BTreeSet<usize> = r.stabilizer_orders.iter().copied().collect();
        assert_eq!(orders, BTreeSet::from([2, 3]));
        assert_eq!(r.orbit_pairs, 6);
    }

    #[test]
    fn classes_match_the_realized_composite() {
        let (s, t) = s3_fixture().unwrap();
        let sp = SigmaPi::new(&s, &t).unwrap();
        let total: usize = sp.orbit_pairs().iter().map(|p| sp.classes(p).len()).sum();
        let (composite, _) = crate::path::compose_profunctors(&Arc::new(s.clone()), &Arc::new(t.clone())).unwrap();
        assert_eq!(total, composite.len());
    }

    #[test]
    fn trivial_action_averages_over_the_stabilizer() {
        let g = Arc::new(catalog::cyclic(2));
        let s = coset_profunctor(&g, &[vec![0]], true).unwrap();
        let t = coset_profunctor(&g, &[vec![0, 1]], false).unwrap();
        let sp = SigmaPi::new(&s, &t).unwrap();
        let pairs = sp.orbit_pairs();
        assert_eq!(pairs.len(), 1);
        let p = &pairs[0];
        assert_eq!(p.stabilizer.len(), 2);
        let l = sp.sigma(p, p.t0, 0);
        let half = Q::new(1, 2);
        assert_eq!(l[&p.t0], RationalVector::from([(0, half), (s.act_left(1, 0), half)]));
        assert!(sp.report().pass());
    }

    #[test]
    fn trivial_middle_gives_bijections() {
        let s = Profunctor::set("S", ["a", "b"]);
        let t = Profunctor::set("T", ["x", "y", "z"]);
        let r = sigma_pi_check(&s, &t).unwrap();
        assert!(r.pass());
        assert_eq!((r.orbit_pairs, r.classes), (6, 6));
        assert!(r.stabilizer_orders.iter().all(|&o| o == 1));
    }
}
