//! Complementary structure of a group: the bijection between the morphisms of
//! `G` and the objects of the discrete groupoid `|G|`, and its partial transpose.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId};
use crate::path::OneCell;
use crate::span::{horizontal_compose, Span2};
use crate::structures::cells::{CanonicalCells, EqualityCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
pub struct ComplementaryStructure {
    /// Cells of the group `G`.
    pub group: CanonicalCells,
    /// Cells of `|G|`, whose object `i` is the element `i` of `G`.
    pub discrete: CanonicalCells,
    /// `δ: [◁G, ▷G] ⇒ [◁|G|, ▷|G|]`.
    pub delta: Span2,
}

/// The discrete groupoid on the elements of a group, in element order.
pub fn underlying_set(g: &Groupoid) -> Result<Groupoid> {
    let names: Vec<&str> = g.morphisms().iter().map(|m| m.name.as_str()).collect();
    Groupoid::discrete(&names)
}

pub fn build_delta(g: &Groupoid) -> Result<ComplementaryStructure> {
    if !g.is_group() {
        return Err(Error::NotAGroup(format!("{} objects", g.n_objects())));
    }
    let group = CanonicalCells::new(&Arc::new(g.clone()))?;
    let discrete = CanonicalCells::new(&Arc::new(underlying_set(g)?))?;
    let entries = (0..g.n_morphisms())
        .map(|m| ((group.boundary.element_of(m), discrete.boundary.element_of(m)), 1));
    let delta = Span2::new(group.boundary.lr.clone(), discrete.boundary.lr.clone(), entries)?;
    Ok(ComplementaryStructure { group, discrete, delta })
}

impl ComplementaryStructure {
    pub fn order(&self) -> usize {
        self.group.boundary.group.n_morphisms()
    }

    /// Element of `[◁G, ▷G]` naming `g`.
    pub fn g_elem(&self, g: MorId) -> usize {
        self.group.boundary.element_of(g)
    }

    /// Element of `[◁|G|, ▷|G|]` naming `δ(g)`.
    pub fn d_elem(&self, g: MorId) -> usize {
        self.discrete.boundary.element_of(g)
    }

    /// `δ` bent along the given side; see [`partial_transpose`].
    pub fn delta_transpose(&self, side: Side) -> Result<Span2> {
        partial_transpose(&self.delta, &self.group, &self.discrete, side)
    }

    /// Unitarity of `δ`, of its partial transpose, and the bend round trip.
    pub fn check(&self) -> Result<Vec<EqualityCheck>> {
        let mut out = Vec::new();
        out.push(unitarity_check("δ unitary", &self.delta));
        let pt = self.delta_transpose(Side::Right)?;
        out.push(unitarity_check("partial transpose of δ unitary", &pt));
        let back = untranspose(&pt, &self.group, &self.discrete)?;
        out.push(EqualityCheck::compare("bending δ back recovers δ", &back, &self.delta));
        Ok(out)
    }
}

pub fn unitarity_check(name: &str, span: &Span2) -> EqualityCheck {
    let witness = span.unitarity();
    EqualityCheck { name: name.to_string(), pass: witness.is_none(), witness }
}

/// Bends `σ: [◁X, ▷X] ⇒ [◁Y, ▷Y]` into an endomorphism.
///
/// `Right` gives an endomorphism of `[▷X, ◁Y]`:
/// `(μ†_X ∘ id) ; (id_▷X ∘ σ ∘ id_◁Y) ; (id ∘ μ_Y)`.
/// `Left` gives an endomorphism of `[▷Y, ◁X]`:
/// `(id ∘ μ†_X) ; (id_▷Y ∘ σ ∘ id_◁X) ; (μ_Y ∘ id)`.
pub fn partial_transpose(sigma: &Span2, x: &CanonicalCells, y: &CanonicalCells, side: Side) -> Result<Span2> {
    check_e_typed(sigma, x, y)?;
    let (bx, by) = (&x.boundary, &y.boundary);
    let h = horizontal_compose;
    match side {
        Side::Right => {
            let mid = Arc::new(OneCell::new(vec![bx.right.clone(), by.left.clone()])?);
            let id_mid = Span2::identity(&mid);
            let step1 = h(&x.mu_dagger, &id_mid)?;
            let step2 = h(&h(&Span2::identity(&bx.r), sigma)?, &Span2::identity(&by.l))?;
            let step3 = h(&id_mid, &y.mu)?;
            step1.then(&step2)?.then(&step3)
        }
        Side::Left => {
            let mid = Arc::new(OneCell::new(vec![by.right.clone(), bx.left.clone()])?);
            let id_mid = Span2::identity(&mid);
            let step1 = h(&id_mid, &x.mu_dagger)?;
            let step2 = h(&h(&Span2::identity(&by.r), sigma)?, &Span2::identity(&bx.l))?;
            let step3 = h(&y.mu, &id_mid)?;
            step1.then(&step2)?.then(&step3)
        }
    }
}

/// Inverse of the `Right` bend: from an endomorphism of `[▷X, ◁Y]` back to
/// `[◁X, ▷X] ⇒ [◁Y, ▷Y]`, using `ε†_Y` and `ε_X`.
pub fn untranspose(rho: &Span2, x: &CanonicalCells, y: &CanonicalCells) -> Result<Span2> {
    let (bx, by) = (&x.boundary, &y.boundary);
    let mid = OneCell::new(vec![bx.right.clone(), by.left.clone()])?;
    if **rho.src() != mid || **rho.tgt() != mid {
        return Err(Error::TypeMismatch(format!(
            "expected an endomorphism of [{}], got [{}] ⇒ [{}]",
            mid.describe(),
            rho.src().describe(),
            rho.tgt().describe()
        )));
    }
    let h = horizontal_compose;
    let step1 = h(&Span2::identity(&bx.lr), &y.epsilon_dagger)?;
    let step2 = h(&h(&Span2::identity(&bx.l), rho)?, &Span2::identity(&by.r))?;
    let step3 = h(&x.epsilon, &Span2::identity(&by.lr))?;
    step1.then(&step2)?.then(&step3)
}

fn check_e_typed(sigma: &Span2, x: &CanonicalCells, y: &CanonicalCells) -> Result<()> {
    if **sigma.src() != *x.boundary.lr || **sigma.tgt() != *y.boundary.lr {
        return Err(Error::TypeMismatch(format!(
            "partial transpose needs [◁X, ▷X] ⇒ [◁Y, ▷Y], got [{}] ⇒ [{}]",
            sigma.src().describe(),
            sigma.tgt().describe()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::structures::cells::corrupt;

    #[test]
    fn delta_checks_pass() {
        for name in ["Z/2", "Z/4", "S3"] {
            let cs = build_delta(&catalog::group(name).unwrap()).unwrap();
            for c in cs.check().unwrap() {
                assert!(c.pass, "{name}: {} {:?}", c.name, c.witness);
            }
            assert!(unitarity_check("left", &cs.delta_transpose(Side::Left).unwrap()).pass);
        }
    }

    #[test]
    fn delta_is_a_permutation_for_z4() {
        let cs = build_delta(&catalog::cyclic(4)).unwrap();
        let perm = cs.delta.as_bijection().unwrap();
        for g in 0..4 {
            assert_eq!(perm[cs.g_elem(g)], cs.d_elem(g));
        }
    }

    #[test]
    fn non_groups_are_rejected() {
        let d = Groupoid::discrete(&["a", "b"]).unwrap();
        assert!(matches!(build_delta(&d), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn transpose_chase_for_z2() {
        // on [▷G, ◁|G|] the bent δ sends (t, δ(g′)) to (g′ ; t, δ(g′))
        let g = catalog::cyclic(2);
        let cs = build_delta(&g).unwrap();
        let pt = cs.delta_transpose(Side::Right).unwrap();
        let cell = pt.src().clone();
        let n = g.n_morphisms();
        for t in 0..n {
            for gp in 0..n {
                let e = cell.canonical(&[t, gp]);
                let out = pt.image(e);
                let expect = cell.canonical(&[g.compose(gp, t).unwrap(), gp]);
                assert_eq!(out, vec![(expect, 1)]);
            }
        }
    }

    #[test]
    fn transpose_chase_for_s3() {
        let g = catalog::group("S3").unwrap();
        let cs = build_delta(&g).unwrap();
        let pt = cs.delta_transpose(Side::Right).unwrap();
        let cell = pt.src().clone();
        let mut moved = 0;
        for t in 0..6 {
            for gp in 0..6 {
                let out = pt.image(cell.canonical(&[t, gp]));
                assert_eq!(out.len(), 1);
                let raw = cell.raw(out[0].0);
                assert_eq!(raw[1], gp);
                assert_eq!(raw[0], g.compose(gp, t).unwrap());
                moved += (raw[0] != t) as usize;
            }
        }
        assert_eq!(moved, 30);
    }

    #[test]
    fn mutated_delta_fails() {
        let cs = build_delta(&catalog::cyclic(3)).unwrap();
        let mut bad = cs.clone();
        bad.delta = corrupt(&cs.delta, cs.g_elem(1), cs.d_elem(2), 1);
        let checks = bad.check().unwrap();
        assert!(!checks[0].pass);
    }

    #[test]
    fn transpose_rejects_wrong_typing() {
        let cs = build_delta(&catalog::cyclic(2)).unwrap();
        let r = partial_transpose(&cs.delta.dagger(), &cs.group, &cs.discrete, Side::Right);
        assert!(matches!(r, Err(Error::TypeMismatch(_))));
    }
}
