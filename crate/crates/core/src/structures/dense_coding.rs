//! The dense-coding equation: one bubble of `G` carries a message from the
//! `n²`-element set `[▷D]`, given a shared pair of `|G|` bubbles.
//!
//! Left side, top to bottom: create two `|G|` bubbles, feed the first with
//! the message through `λ′`, then merge the resulting `G` bubble with the
//! second `|G|` bubble through `λ`. Right side: split the message, `μ†_D ∘ id_▷D`.

use std::collections::BTreeSet;
use serde::Serialize;

use crate::error::Result;
use crate::span::{horizontal_compose as h, Span2};
use crate::structures::cells::EqualityCheck;
use crate::structures::communication::{bundle_cup, CommunicationStructure};

#[derive(Debug, Clone, Serialize)]
pub struct DenseCodingReport {
    pub equation: EqualityCheck,
    /// Elements of the bubble that travels between the parties.
    pub channel_size: usize,
    /// Messages whose image under both sides agrees.
    pub messages_agreeing: usize,
    /// Distinct images among all messages; equal to the message count when decoding is faithful.
    pub distinct_images: usize,
    pub message_count: usize,
}

impl DenseCodingReport {
    pub fn pass(&self) -> bool {
        self.equation.pass && self.messages_agreeing == self.message_count && self.distinct_images == self.message_count
    }
}

/// Both sides of the equation, `(lhs, rhs)`, as cells `[▷D] ⇒ [▷D, ◁D, ▷D]`.
pub fn dense_coding_sides(c: &CommunicationStructure) -> Result<(Span2, Span2)> {
    let d = &c.product;
    let id_rd = Span2::identity(&d.boundary.r);
    let id_b = Span2::identity(&c.complementary.discrete.boundary.lr);

    let lhs = h(&id_rd, &bundle_cup(&c.complementary.discrete)?)?
        .then(&h(&c.lambda_transpose, &id_b)?)?
        .then(&h(&id_rd, &c.lambda)?)?;
    let rhs = h(&d.mu_dagger, &id_rd)?;
    Ok((lhs, rhs))
}

pub fn check_dense_coding(c: &CommunicationStructure) -> Result<DenseCodingReport> {
    let (lhs, rhs) = dense_coding_sides(c)?;
    let equation = EqualityCheck::compare("dense coding: both sides agree", &lhs, &rhs);
    let n_msgs = lhs.src().len();
    let agreeing = (0..n_msgs).filter(|&m| lhs.image(m) == rhs.image(m)).count();
    let images: BTreeSet<Vec<(usize, u64)>> = (0..n_msgs).map(|m| lhs.image(m)).collect();
    Ok(DenseCodingReport {
        equation,
        channel_size: c.complementary.group.boundary.lr.len(),
        messages_agreeing: agreeing,
        distinct_images: images.len(),
        message_count: n_msgs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::structures::cells::corrupt;
    use crate::structures::communication::build_lambda;

    #[test]
    fn z2_dense_coding() {
        let c = build_lambda(&catalog::cyclic(2)).unwrap();
        let r = check_dense_coding(&c).unwrap();
        assert!(r.equation.pass, "{:?}", r.equation.witness);
        assert_eq!((r.channel_size, r.message_count, r.distinct_images), (2, 4, 4));
        assert!(r.pass());
    }

    #[test]
    fn s3_dense_coding() {
        let c = build_lambda(&catalog::group("S3").unwrap()).unwrap();
        let r = check_dense_coding(&c).unwrap();
        assert!(r.pass(), "{:?}", r.equation.witness);
    }

    #[test]
    fn corrupted_lambda_breaks_the_equation() {
        let mut c = build_lambda(&catalog::cyclic(2)).unwrap();
        let (&(s, t), _) = c.lambda.entries().iter().next().unwrap();
        c.lambda = corrupt(&c.lambda, s, t, 0);
        let r = check_dense_coding(&c).unwrap();
        assert!(!r.equation.pass);
        assert!(r.equation.witness.is_some());
    }
}
