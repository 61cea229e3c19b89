//! Thermodynamic walkthroughs: encryption with a heat output, uniformity of
//! the ciphertext, loss of erased information to environmental perturbation,
//! and the heat accounting of one encryption.
//!
//! Everything is computed by pushing elements through cells with the span
//! engine; the closed forms appear only as assertions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId};
use crate::path::OneCell;
use crate::profunctor::ElemId;
use crate::span::{horizontal_compose as h, Span2};
use crate::structures::cells::Boundary;
use crate::structures::communication::{build_lambda, CommunicationStructure};
use crate::structures::complementary::{build_delta, ComplementaryStructure};
use crate::structures::controlled::{ControlledOp, ControlledSetting, EnumerationMode, DEFAULT_CAP};

/// One intermediate state of the encryption composite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub after: String,
    pub cell: String,
    /// The state as a pair of bubble names, e.g. `((12), δ(e))`.
    pub state: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EncryptionTranscript {
    #[serde(skip)]
    pub group: Arc<Groupoid>,
    pub plaintext: MorId,
    pub key: MorId,
    pub stage_trace: Vec<TraceStep>,
    /// Object of `|G|`, named by an element of `G`.
    pub ciphertext: MorId,
    /// Microstate left in `G`.
    pub heat: MorId,
}

impl EncryptionTranscript {
    pub fn describe(&self) -> String {
        let g = &self.group;
        format!(
            "plaintext {} key {} -> ciphertext δ({}) heat {}",
            g.name(self.plaintext),
            g.name(self.key),
            g.name(self.ciphertext),
            g.name(self.heat)
        )
    }
}

/// The encryption cell `λ` of a group together with the cells it is built from.
#[derive(Debug, Clone)]
pub struct Cipher {
    pub comm: CommunicationStructure,
}

impl Cipher {
    pub fn new(g: &Groupoid) -> Result<Cipher> {
        Ok(Cipher { comm: build_lambda(g)? })
    }

    pub fn group(&self) -> &Arc<Groupoid> {
        self.comm.group()
    }

    fn check_element(&self, m: MorId) -> Result<()> {
        if m >= self.comm.order() {
            return Err(Error::InvalidElement(format!("{m} is not an element of a group of order {}", self.comm.order())));
        }
        Ok(())
    }

    /// Names the two bubbles of an element of a 1-cell made of two boundary pairs.
    fn pair_label(&self, cell: &OneCell, e: ElemId, first: &Boundary, second: &Boundary) -> String {
        let raw = cell.raw(e);
        let discrete = &self.comm.complementary.discrete.boundary.group;
        let name = |b: &Boundary, raw: &[ElemId]| {
            let m = b.morphism_of(b.lr.canonical(raw));
            if Arc::ptr_eq(&b.group, discrete) {
                format!("δ({})", b.group.object_name(b.group.src(m)))
            } else {
                b.group.name(m).to_string()
            }
        };
        format!("({}, {})", name(first, &raw[..2]), name(second, &raw[2..]))
    }

    fn step(&self, span: &Span2, e: ElemId) -> Result<ElemId> {
        match span.image(e).as_slice() {
            [(t, 1)] => Ok(*t),
            other => Err(Error::VerificationFailure(format!("expected a single image, got {other:?}"))),
        }
    }

    pub fn encrypt(&self, plaintext: MorId, key: MorId) -> Result<EncryptionTranscript> {
        self.check_element(plaintext)?;
        self.check_element(key)?;
        let c = &self.comm;
        let (a, b) = (&c.complementary.group.boundary, &c.complementary.discrete.boundary);
        let mut trace = Vec::new();
        let mut e = c.input(plaintext, key);
        trace.push(TraceStep {
            after: "input".into(),
            cell: c.lambda.src().describe(),
            state: self.pair_label(c.lambda.src(), e, a, b),
        });
        e = self.step(&c.w, e)?;
        trace.push(TraceStep {
            after: "bent δ".into(),
            cell: c.w.tgt().describe(),
            state: self.pair_label(c.w.tgt(), e, a, b),
        });
        e = self.step(&c.swap_delta, e)?;
        trace.push(TraceStep {
            after: "δ ∘ δ†".into(),
            cell: c.swap_delta.tgt().describe(),
            state: self.pair_label(c.swap_delta.tgt(), e, b, a),
        });
        e = self.step(&c.merge, e)?;
        let (ciphertext, heat) = c.output_pair(e);
        let g = self.group();
        trace.push(TraceStep {
            after: "merge".into(),
            cell: c.merge.tgt().describe(),
            state: format!("(δ({}), {})", g.name(ciphertext), g.name(heat)),
        });
        // the composite itself must agree with the stepwise trace
        if c.lambda.image(c.input(plaintext, key)) != vec![(e, 1)] {
            return Err(Error::VerificationFailure("λ disagrees with its stepwise trace".into()));
        }
        let expected = (g.compose(plaintext, key).expect("group"), key);
        if (ciphertext, heat) != expected {
            return Err(Error::VerificationFailure(format!(
                "encryption gave (δ({}), {}), closed form (δ({}), {})",
                g.name(ciphertext),
                g.name(heat),
                g.name(expected.0),
                g.name(expected.1)
            )));
        }
        Ok(EncryptionTranscript { group: g.clone(), plaintext, key, stage_trace: trace, ciphertext, heat })
    }

    /// Runs `λ†` on `(δ(ciphertext), key)` and reads off the plaintext.
    pub fn decrypt(&self, ciphertext: MorId, key: MorId) -> Result<MorId> {
        self.check_element(ciphertext)?;
        self.check_element(key)?;
        let c = &self.comm;
        let back = self.step(&c.lambda.dagger(), c.output(ciphertext, key))?;
        let g = self.group();
        let plaintext = (0..c.order())
            .find(|&p| c.input(p, key) == back)
            .ok_or_else(|| Error::VerificationFailure("λ† left the key register".into()))?;
        if plaintext != g.compose(ciphertext, g.inverse(key)).expect("group") {
            return Err(Error::VerificationFailure("λ† disagrees with the closed-form inverse".into()));
        }
        Ok(plaintext)
    }

    /// Number of keys sending `plaintext` to each ciphertext.
    pub fn ciphertext_distribution(&self, plaintext: MorId) -> Result<Vec<u64>> {
        self.check_element(plaintext)?;
        let c = &self.comm;
        let mut counts = vec![0; c.order()];
        for key in 0..c.order() {
            for (t, mult) in c.lambda.image(c.input(plaintext, key)) {
                counts[c.output_pair(t).0] += mult;
            }
        }
        Ok(counts)
    }
}

pub fn encrypt(g: &Groupoid, plaintext: MorId, key: MorId) -> Result<EncryptionTranscript> {
    Cipher::new(g)?.encrypt(plaintext, key)
}

pub fn decrypt(g: &Groupoid, ciphertext: MorId, key: MorId) -> Result<MorId> {
    Cipher::new(g)?.decrypt(ciphertext, key)
}

pub fn ciphertext_distribution(g: &Groupoid, plaintext: MorId) -> Result<Vec<u64>> {
    Cipher::new(g)?.ciphertext_distribution(plaintext)
}

#[derive(Debug, Clone, Serialize)]
pub struct DecoherenceTrial {
    pub encoded: MorId,
    /// Curried data of each environment operation, in order.
    pub perturbations: Vec<Vec<(MorId, u64)>>,
    pub retrieval_success: bool,
    pub trials: u64,
    pub successes: u64,
    pub seed: u64,
}

/// Erasure by `δ†` followed by environment operations on the `G` bubble and
/// retrieval by `δ`. The environment acts through controlled operations with
/// a one-state free system.
#[derive(Debug, Clone)]
pub struct Decoherence {
    pub setting: ControlledSetting,
    pub complementary: ComplementaryStructure,
    encode: Span2,
    retrieve: Span2,
    id_left: Span2,
    n: usize,
}

impl Decoherence {
    pub fn new(g: &Groupoid) -> Result<Decoherence> {
        let cs = build_delta(g)?;
        let setting = ControlledSetting::new(&cs.group.boundary.group, 1)?;
        let id_s = Span2::identity(&setting.s);
        let encode = h(&cs.delta.dagger(), &id_s)?;
        let retrieve = h(&cs.delta, &id_s)?;
        let id_left = Span2::identity(&cs.group.boundary.l);
        let n = cs.order();
        Ok(Decoherence { setting, complementary: cs, encode, retrieve, id_left, n })
    }

    /// Every environment operation of function type: one per group element.
    pub fn environment(&self) -> Result<Vec<ControlledOp>> {
        self.setting.classify(EnumerationMode::Functions, DEFAULT_CAP)?.collect()
    }

    /// Distribution over retrieved values after the given operations.
    pub fn retrieve_distribution(&self, info: MorId, ops: &[ControlledOp]) -> Result<BTreeMap<MorId, u64>> {
        if info >= self.n {
            return Err(Error::InvalidElement(format!("{info}")));
        }
        let b = &self.complementary.discrete.boundary;
        let mut raw = b.lr.raw(b.element_of(info));
        raw.push(0);
        let start = self.encode.src().canonical(&raw);
        let mut process = self.encode.clone();
        for op in ops {
            process = process.then(&h(&self.id_left, &op.sigma)?)?;
        }
        process = process.then(&self.retrieve)?;
        let mut out = BTreeMap::new();
        for (t, mult) in process.image(start) {
            let raw = process.tgt().raw(t);
            *out.entry(b.morphism_of(b.lr.canonical(&raw[..2]))).or_insert(0) += mult;
        }
        Ok(out)
    }

    /// Samples `trials` retrievals after the operations, drawing among multiple
    /// outcomes by multiplicity with a seeded generator.
    pub fn trial(&self, info: MorId, ops: &[ControlledOp], trials: u64, seed: u64) -> Result<DecoherenceTrial> {
        let dist = self.retrieve_distribution(info, ops)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut successes = 0;
        if !dist.is_empty() {
            let keys: Vec<MorId> = dist.keys().copied().collect();
            let pick = WeightedIndex::new(dist.values().copied()).expect("positive weights");
            for _ in 0..trials {
                successes += (keys[pick.sample(&mut rng)] == info) as u64;
            }
        }
        Ok(DecoherenceTrial {
            encoded: info,
            perturbations: ops.iter().map(|op| op.data.iter().map(|e| (e.m, e.mult)).collect()).collect(),
            retrieval_success: trials > 0 && successes == trials,
            trials,
            successes,
            seed,
        })
    }

    /// Exact `(successes, cases)` over every value and every single environment operation.
    pub fn exact_success(&self) -> Result<(u64, u64)> {
        let env = self.environment()?;
        let (mut ok, mut total) = (0, 0);
        for info in 0..self.n {
            for op in &env {
                let dist = self.retrieve_distribution(info, std::slice::from_ref(op))?;
                total += dist.values().sum::<u64>();
                ok += dist.get(&info).copied().unwrap_or(0);
            }
        }
        Ok((ok, total))
    }
}

pub fn decoherence_trial(
    g: &Groupoid,
    info: MorId,
    environment_ops: &[ControlledOp],
    trials: u64,
    seed: u64,
) -> Result<DecoherenceTrial> {
    Decoherence::new(g)?.trial(info, environment_ops, trials, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputKind {
    /// Indexed by objects: readable by local operations.
    Logical,
    /// Indexed by morphisms of a one-object groupoid: pure microstate.
    Thermal,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputFactor {
    pub factor: String,
    pub kind: OutputKind,
    pub value: String,
    pub alphabet_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LandauerReport {
    pub outputs: Vec<OutputFactor>,
    pub heat_alphabet_size: usize,
    pub heat_bits: f64,
    pub heat_equals_key: bool,
    /// Every plaintext gives the same ciphertext counts under a uniform key.
    pub ciphertext_hiding: bool,
    pub ciphertext_counts: Vec<u64>,
}

pub fn landauer_report(cipher: &Cipher, t: &EncryptionTranscript) -> Result<LandauerReport> {
    let g = cipher.group();
    let n = g.n_morphisms();
    let reference = cipher.ciphertext_distribution(0)?;
    let mut hiding = reference.iter().all(|&c| c == reference[0]);
    for p in 1..n {
        hiding &= cipher.ciphertext_distribution(p)? == reference;
    }
    // |G| is discrete, so its elements are objects; G has one object, so its elements are microstates
    let d = &cipher.comm.complementary.discrete.boundary.group;
    let kind = |gp: &Groupoid| if gp.n_objects() == 1 { OutputKind::Thermal } else { OutputKind::Logical };
    let outputs = vec![
        OutputFactor {
            factor: "|G|".into(),
            kind: kind(d),
            value: format!("δ({})", g.name(t.ciphertext)),
            alphabet_size: d.n_objects(),
        },
        OutputFactor { factor: "G".into(), kind: kind(g), value: g.name(t.heat).into(), alphabet_size: n },
    ];
    Ok(LandauerReport {
        outputs,
        heat_alphabet_size: n,
        heat_bits: (n as f64).log2(),
        heat_equals_key: t.heat == t.key,
        ciphertext_hiding: hiding,
        ciphertext_counts: reference,
    })
}
