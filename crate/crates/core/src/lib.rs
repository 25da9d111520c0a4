//! Flexsymmetric qutrit ZX-calculus: diagrams, tensor semantics, rewriting,
//! gate-level circuits and synthesis of diagonal qutrit gates.

pub mod circuits;
pub mod diagram;
pub mod error;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod phase;
pub mod report;
pub mod scalar;
pub mod rewrite;
pub mod semantics;
pub mod synth;

pub use diagram::{Diagram, Generator, VertexId};
pub use error::{Error, Result};
pub use matrix::{scalar_equiv, EquivMode, Matrix, ScalarEquivalence, Verdict};
pub use phase::{phase_add, Phase, Rational};
pub use scalar::Scalar;
