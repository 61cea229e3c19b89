//! Communication structure built from a complementary structure.
//!
//! With `A = G`, `B = |G|` and `D = |G| × G`, the cell
//! `λ: [◁A, ▷A, ◁B, ▷B] ⇒ [◁D, ▷D]` is the composite
//! `W ; (δ ∘ δ†) ; X`, where `W` inserts the bent `δ` between the two bubbles
//! and `X` merges the two bubbles into one bubble of `D`. On elements it sends
//! `(g, δ(g′))` to `(δ(g g′), g′)`.

use std::sync::Arc;

use crate::error::Result;
use crate::groupoid::{Groupoid, MorId};
use crate::span::{horizontal_compose as h, Span2};
use crate::structures::cells::{require, CanonicalCells, EqualityCheck};
use crate::structures::complementary::{
    build_delta, partial_transpose, unitarity_check, ComplementaryStructure, Side,
};

#[derive(Debug, Clone)]
pub struct CommunicationStructure {
    pub complementary: ComplementaryStructure,
    /// Cells of `D = |G| × G`; morphism `(δ(x), y)` has index `x·|G| + y`.
    pub product: CanonicalCells,
    /// `id_◁A ∘ δ′ ∘ id_▷B`.
    pub w: Span2,
    /// `δ ∘ δ†`.
    pub swap_delta: Span2,
    /// `[◁B, ▷B, ◁A, ▷A] ⇒ [◁D, ▷D]`.
    pub merge: Span2,
    pub lambda: Span2,
    /// `λ′: [▷D, ◁B, ▷B] ⇒ [▷D, ◁A, ▷A]`, the bend of `λ†` that turns one leg
    /// of `D` into an input and hands the `B` bubble back out as a cap.
    pub lambda_transpose: Span2,
}

impl CommunicationStructure {
    pub fn group(&self) -> &Arc<Groupoid> {
        &self.complementary.group.boundary.group
    }

    pub fn order(&self) -> usize {
        self.complementary.order()
    }

    /// Input element `(g, δ(g′))` of `λ`.
    pub fn input(&self, g: MorId, key: MorId) -> usize {
        let cs = &self.complementary;
        self.lambda.src().canonical(&input_raw(cs, g, key))
    }

    /// Decodes an element of `[◁D, ▷D]` into `(x, y)` with label `(δ(x), y)`.
    pub fn output_pair(&self, e: usize) -> (MorId, MorId) {
        let m = self.product.boundary.morphism_of(e);
        (m / self.order(), m % self.order())
    }

    /// Element of `[◁D, ▷D]` with label `(δ(x), y)`.
    pub fn output(&self, x: MorId, y: MorId) -> usize {
        self.product.boundary.element_of(x * self.order() + y)
    }

    /// Unitarity of `λ` and `λ′`.
    pub fn check(&self) -> Vec<EqualityCheck> {
        vec![
            unitarity_check("λ unitary", &self.lambda),
            unitarity_check("λ′ unitary", &self.lambda_transpose),
        ]
    }

    /// The stepwise chain `λ;λ† = W;δδ†;X;X†;(δδ†)†;W† = W;δδ†;(δδ†)†;W† = W;W† = id`.
    pub fn unitarity_chain(&self) -> Result<Vec<EqualityCheck>> {
        let (w, dd, x) = (&self.w, &self.swap_delta, &self.merge);
        let t0 = self.lambda.then(&self.lambda.dagger())?;
        let t1 = w.then(dd)?.then(x)?.then(&x.dagger())?.then(&dd.dagger())?.then(&w.dagger())?;
        let t2 = w.then(dd)?.then(&dd.dagger())?.then(&w.dagger())?;
        let t3 = w.then(&w.dagger())?;
        let t4 = Span2::identity(self.lambda.src());
        Ok(vec![
            EqualityCheck::compare("λ;λ† equals its unfolded definition", &t0, &t1),
            EqualityCheck::compare("merge cancels against its dagger", &t1, &t2),
            EqualityCheck::compare("δ ∘ δ† cancels (δ unitary)", &t2, &t3),
            EqualityCheck::compare("W cancels (bent δ unitary)", &t3, &t4),
        ])
    }
}

fn input_raw(cs: &ComplementaryStructure, g: MorId, key: MorId) -> Vec<usize> {
    let mut raw = cs.group.boundary.lr.raw(cs.g_elem(g));
    raw.extend(cs.discrete.boundary.lr.raw(cs.d_elem(key)));
    raw
}

/// `[] ⇒ [◁X, ▷X, ◁X, ▷X]`, two nested bubbles created from nothing.
pub fn bundle_cup(x: &CanonicalCells) -> Result<Span2> {
    let b = &x.boundary;
    let inner = h(&h(&Span2::identity(&b.l), &x.mu_dagger)?, &Span2::identity(&b.r))?;
    x.epsilon_dagger.then(&inner)
}

/// `[◁X, ▷X, ◁X, ▷X] ⇒ []`, the dagger of [`bundle_cup`].
pub fn bundle_cap(x: &CanonicalCells) -> Result<Span2> {
    Ok(bundle_cup(x)?.dagger())
}

pub fn build_lambda(g: &Groupoid) -> Result<CommunicationStructure> {
    lambda_from(build_delta(g)?)
}

pub fn lambda_from(cs: ComplementaryStructure) -> Result<CommunicationStructure> {
    let (a, b) = (&cs.group, &cs.discrete);
    let n = cs.order();
    let d_group = Groupoid::product(&b.boundary.group, &a.boundary.group);
    let product = CanonicalCells::new(&Arc::new(d_group))?;

    // the bend of δ† along its left leg, an endomorphism of [▷A, ◁B]
    let bent = partial_transpose(&cs.delta.dagger(), b, a, Side::Left)?;
    let w = h(&h(&Span2::identity(&a.boundary.l), &bent)?, &Span2::identity(&b.boundary.r))?;
    let swap_delta = h(&cs.delta, &cs.delta.dagger())?;
    let ba = swap_delta.tgt().clone();
    let nb = b.boundary.lr.len();
    let na = a.boundary.lr.len();
    let mut merge_entries = Vec::with_capacity(nb * na);
    for cb in 0..nb {
        for ca in 0..na {
            let raw = [b.boundary.lr.raw(cb), a.boundary.lr.raw(ca)].concat();
            let m = b.boundary.morphism_of(cb) * n + a.boundary.morphism_of(ca);
            merge_entries.push(((ba.canonical(&raw), product.boundary.element_of(m)), 1));
        }
    }
    let merge = Span2::new(ba, product.boundary.lr.clone(), merge_entries)?;
    let lambda = w.then(&swap_delta)?.then(&merge)?;

    // λ′ = (μ†_D ∘ id_▷D ∘ id_B) ; (id_▷D ∘ λ† ∘ id_B) ; (id_▷D ∘ id_A ∘ cap_B)
    let pd = &product.boundary;
    let (id_rd, id_b) = (Span2::identity(&pd.r), Span2::identity(&b.boundary.lr));
    let step1 = h(&h(&product.mu_dagger, &id_rd)?, &id_b)?;
    let step2 = h(&h(&id_rd, &lambda.dagger())?, &id_b)?;
    let step3 = h(&h(&id_rd, &Span2::identity(&a.boundary.lr))?, &bundle_cap(b)?)?;
    let lambda_transpose = step1.then(&step2)?.then(&step3)?;

    let out = CommunicationStructure { complementary: cs, product, w, swap_delta, merge, lambda, lambda_transpose };
    for c in out.check() {
        require(&c)?;
    }
    Ok(out)
}
