//! Quantization: spans become integer matrices, profunctor composition is
//! compared with composition of linear maps through the σ/π construction, and
//! abelian groups are realized on state vectors through their characters.

pub mod characters;
pub mod matrix;
pub mod protocols;
pub mod sigma_pi;

pub use characters::{character_table, check_mub, CharacterTable, MubReport, TOLERANCE};
pub use matrix::{check_q_naturality, check_q_vertical, q_span, random_natural_span, NatMatrix, QCheck};
pub use protocols::{dense_coding_simulation, random_state, teleport, DenseCodingSimulation, Qudit, TeleportReport};
pub use sigma_pi::{sigma_pi_check, s3_fixture, SigmaPiReport};
