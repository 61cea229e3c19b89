//! Structures assembled from the canonical cells.

pub mod cells;
pub mod communication;
pub mod complementary;
pub mod controlled;
pub mod dense_coding;

pub use cells::{check_topological_axioms, topological_axioms, Boundary, CanonicalCells, EqualityCheck};
pub use complementary::{build_delta, partial_transpose, untranspose, ComplementaryStructure, Side};
pub use communication::{build_lambda, bundle_cap, bundle_cup, CommunicationStructure};
pub use controlled::{
    microstate_reader, ControlEntry, ControlledOp, ControlledOps, ControlledSetting, EnumerationMode, Phenomenon,
    DEFAULT_CAP,
};
pub use dense_coding::{check_dense_coding, DenseCodingReport};
