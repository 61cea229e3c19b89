//! Exact finite models of groupoids, profunctors between them and
//! natural transformations of spans, together with the structures built
//! from them: complementary and communication structures, controlled
//! operations, and their quantization.

pub mod catalog;
pub mod error;
pub mod format;
pub mod groupoid;
pub mod path;
pub mod quantize;
pub mod profunctor;
pub mod span;
pub mod structures;
pub mod term;
pub mod thermal;

#[cfg(test)]
mod test_fixtures;

pub use error::{Error, Result};
pub use groupoid::{Groupoid, GroupoidSpec, MorId, ObjId};
pub use path::{compose_profunctors, OneCell};
pub use profunctor::{ElemId, Profunctor, Stage};
pub use span::{horizontal_compose, horizontal_compose_checked, vertical_compose, Difference, Span2};
