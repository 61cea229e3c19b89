//! State-vector simulations of teleportation and dense coding for an abelian
//! group `G` of order `n`, on `C^n` with basis `|g⟩`.
//!
//! `X^a |g⟩ = |g·a⟩` translates, `Z^k |g⟩ = χ_k(g) |g⟩` multiplies by a
//! character. The resource is `|Φ⟩ = n^{-1/2} Σ_g |g⟩|g⟩`, and the Bell basis
//! is `|Φ_{a,k}⟩ = (X^a Z^k ⊗ 1) |Φ⟩`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId};
use crate::quantize::characters::{character_table, CharacterTable, TOLERANCE};

pub type State = Vec<Complex64>;

/// `|⟨a, b⟩|`, the overlap modulo global phase.
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// A group with its characters, ready for simulation.
#[derive(Debug, Clone)]
pub struct Qudit {
    pub group: Groupoid,
    pub characters: CharacterTable,
}

impl Qudit {
    pub fn new(g: &Groupoid) -> Result<Qudit> {
        Ok(Qudit { characters: character_table(g)?, group: g.clone() })
    }

    pub fn dim(&self) -> usize {
        self.group.n_morphisms()
    }

    /// `X^a`.
    pub fn translate(&self, a: MorId, v: &[Complex64]) -> State {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (x, &c) in v.iter().enumerate() {
            out[self.group.compose(x, a).expect("group")] += c;
        }
        out
    }

    /// `Z^k`.
    pub fn phase(&self, k: usize, v: &[Complex64]) -> State {
        v.iter().enumerate().map(|(x, &c)| c * self.characters.value(k, x)).collect()
    }

    /// `X^a Z^k`, the correction (and encoding) unitary indexed by `(a, k)`.
    pub fn correction(&self, a: MorId, k: usize, v: &[Complex64]) -> State {
        self.translate(a, &self.phase(k, v))
    }

    /// Two-system state, index `x·n + y`.
    pub fn resource(&self) -> State {
        let n = self.dim();
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for x in 0..n {
            out[x * n + x] = amp;
        }
        out
    }

    /// `(U ⊗ 1)` applied to a two-system state, with `U` given on vectors.
    fn on_first(&self, psi: &[Complex64], u: impl Fn(&[Complex64]) -> State) -> State {
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for y in 0..n {
            let col: State = (0..n).map(|x| psi[x * n + y]).collect();
            for (x, c) in u(&col).into_iter().enumerate() {
                out[x * n + y] = c;
            }
        }
        out
    }

    pub fn bell(&self, a: MorId, k: usize) -> State {
        self.on_first(&self.resource(), |v| self.correction(a, k, v))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    pub a: String,
    pub k: usize,
    pub probability: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportReport {
    pub n: usize,
    pub branches: Vec<Branch>,
    /// Largest of `|p - 1/n²|` and `1 - fidelity` over the branches.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Teleports `state` and reports every measurement branch.
pub fn teleport(q: &Qudit, state: &[Complex64]) -> Result<TeleportReport> {
    let n = q.dim();
    if state.len() != n {
        return Err(Error::InvalidElement(format!("state of length {} for dimension {n}", state.len())));
    }
    let nrm = norm(state);
    if (nrm - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized(nrm));
    }
    let resource = q.resource();
    let mut branches = Vec::with_capacity(n * n);
    let mut worst: f64 = 0.0;
    let target_p = 1.0 / (n * n) as f64;
    for a in 0..n {
        for k in 0..n {
            let bell = q.bell(a, k);
            // Bob's unnormalized state: (⟨Φ_{a,k}|_{12} ⊗ 1)(|ψ⟩_1 |Φ⟩_{23})
            let mut bob = vec![Complex64::new(0.0, 0.0); n];
            for x in 0..n {
                for y in 0..n {
                    let b = bell[x * n + y].conj();
                    if b.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (z, slot) in bob.iter_mut().enumerate() {
                        *slot += b * state[x] * resource[y * n + z];
                    }
                }
            }
            let p = norm(&bob).powi(2);
            let corrected = q.correction(a, k, &bob);
            let fidelity = overlap(&corrected, state) / norm(&corrected);
            worst = worst.max((p - target_p).abs()).max(1.0 - fidelity);
            branches.push(Branch { a: q.group.name(a).to_string(), k, probability: p, fidelity });
        }
    }
    Ok(TeleportReport { n, branches, max_deviation: worst, pass: worst <= TOLERANCE })
}

/// A normalized state with coordinates drawn uniformly from the unit square.
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> State {
    loop {
        let v: State = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let r = norm(&v);
        if r > 1e-3 {
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DenseCodingSimulation {
    pub n: usize,
    pub messages: usize,
    pub decoded_exactly: usize,
    /// Largest `1 - P(correct outcome)` over the messages.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Sends each message `(a, k)` by applying `X^a Z^k` to the first half of the
/// resource and decodes with a Bell measurement.
pub fn dense_coding_simulation(q: &Qudit) -> DenseCodingSimulation {
    let n = q.dim();
    let basis: Vec<State> = (0..n * n).map(|m| q.bell(m / n, m % n)).collect();
    let mut worst: f64 = 0.0;
    let mut exact = 0;
    for m in 0..n * n {
        let sent = q.on_first(&q.resource(), |v| q.correction(m / n, m % n, v));
        let probs: Vec<f64> = basis.iter().map(|b| overlap(b, &sent).powi(2)).collect();
        let best = (0..n * n).max_by(|&i, &j| probs[i].total_cmp(&probs[j])).expect("nonempty");
        let dev = 1.0 - probs[m];
        worst = worst.max(dev);
        if best == m && dev <= TOLERANCE {
            exact += 1;
        }
    }
    DenseCodingSimulation { n, messages: n * n, decoded_exactly: exact, max_deviation: worst, pass: exact == n * n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_textbook_bell_states() {
        let q = Qudit::new(&catalog::cyclic(2)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (a, k) = (0,0) Φ+, (1,0) Ψ+, (0,1) Φ-, (1,1) -Ψ-
        let expect = [
            ((0, 0), [h, 0.0, 0.0, h]),
            ((1, 0), [0.0, h, h, 0.0]),
            ((0, 1), [h, 0.0, 0.0, -h]),
            ((1, 1), [0.0, -h, h, 0.0]),
        ];
        for ((a, k), v) in expect {
            let b = q.bell(a, k);
            let want: State = v.iter().map(|&x| c(x, 0.0)).collect();
            assert!(overlap(&b, &want) > 1.0 - 1e-12, "({a},{k})");
        }
        let r = teleport(&q, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(r.pass);
        assert_eq!(r.branches.len(), 4);
    }

    #[test]
    fn random_states_teleport() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 4] {
            let q = Qudit::new(&catalog::cyclic(n)).unwrap();
            for _ in 0..10 {
                let r = teleport(&q, &random_state(n, &mut rng)).unwrap();
                assert!(r.pass, "n={n} deviation {}", r.max_deviation);
            }
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let q = Qudit::new(&catalog::cyclic(2)).unwrap();
        assert!(matches!(teleport(&q, &[c(1.0, 0.0), c(1.0, 0.0)]), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn dense_coding_decodes_every_message() {
        for n in [2, 3, 4] {
            let q = Qudit::new(&catalog::cyclic(n)).unwrap();
            let r = dense_coding_simulation(&q);
            assert!(r.pass, "n={n}");
            assert_eq!(r.messages, n * n);
        }
        let q = Qudit::new(&catalog::group("V4").unwrap()).unwrap();
        assert!(dense_coding_simulation(&q).pass);
    }
}
