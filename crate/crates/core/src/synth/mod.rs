//! Circuit constructions for diagonal and controlled qutrit gates, each
//! packaged with its diagram and the reference it must reproduce.

mod constructions;
mod emulation;
mod registry;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::circuits::{circuit_matrix, count_resources, Circuit, Counts};
use crate::diagram::Diagram;
use crate::error::Result;
use crate::matrix::{scalar_equiv_tol, EquivMode, Matrix};
use crate::oracle::{check_emulation_dims, diag_matrix, DiagonalSpec};
use crate::semantics::eval;

pub use constructions::{
    controlled_on, controlled_phase, controlled_phase_solution, phase_block, phase_block_cases, phase_gadget,
    phase_gadget_circuit, phase_gadget_wrong_pairing, phase_multiplier, square_control, square_phase_gate,
    square_phase_pair, Term,
};
pub use emulation::{emulate_ccu, emulate_ccz, emulate_ket2_qubit_phase, emulate_qubit_diag, ket2_solution};
pub use registry::{build_named, BuildParams, CONSTRUCTIONS};

/// What a construction must implement.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Diagonal(DiagonalSpec),
    Unitary(Matrix),
    /// Restricted to the lowest `dims[i]` levels of wire `i`, the circuit
    /// must equal `matrix` up to a global phase, with no leakage.
    Emulation { matrix: Matrix, dims: Vec<usize> },
}

impl Target {
    pub fn describe(&self) -> String {
        match self {
            Target::Diagonal(s) => format!("diagonal {}", s.name),
            Target::Unitary(m) => format!("unitary {}x{}", m.rows(), m.cols()),
            Target::Emulation { dims, .. } => format!("emulation on levels {dims:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthResult {
    pub name: String,
    pub circuit: Circuit,
    pub diagram: Diagram,
    pub counts: Counts,
    pub target: Target,
    pub metadata: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub passed: bool,
    pub circuit_vs_diagram: f64,
    pub circuit_vs_target: f64,
    pub diagram_vs_target: f64,
    pub leakage: f64,
}

impl VerifyReport {
    pub fn max_residual(&self) -> f64 {
        self.circuit_vs_diagram.max(self.circuit_vs_target).max(self.diagram_vs_target).max(self.leakage)
    }
}

impl SynthResult {
    pub(crate) fn new(name: impl Into<String>, circuit: Circuit, diagram: Diagram, target: Target) -> Self {
        let counts = count_resources(&circuit);
        SynthResult { name: name.into(), circuit, diagram, counts, target, metadata: BTreeMap::new() }
    }

    pub(crate) fn from_circuit(name: impl Into<String>, circuit: Circuit, target: Target) -> Result<Self> {
        let diagram = crate::circuits::to_diagram(&circuit)?;
        Ok(SynthResult::new(name, circuit, diagram, target))
    }

    pub(crate) fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn control_level(&self) -> Option<u8> {
        self.metadata.get("control_level").and_then(Value::as_u64).map(|l| l as u8)
    }

    /// Check the circuit, the diagram and the target pairwise, up to a
    /// nonzero scalar.
    pub fn verify(&self, tol: f64) -> Result<VerifyReport> {
        let cm = circuit_matrix(&self.circuit)?;
        let dm = eval(&self.diagram)?;
        let cd = scalar_equiv_tol(&cm, &dm, EquivMode::AnyNonzero, tol)?;
        let mut report = VerifyReport {
            name: self.name.clone(),
            passed: cd.is_equivalent(),
            circuit_vs_diagram: cd.residual,
            circuit_vs_target: 0.0,
            diagram_vs_target: 0.0,
            leakage: 0.0,
        };
        let full = match &self.target {
            Target::Diagonal(s) => Some(diag_matrix(s)),
            Target::Unitary(m) => Some(m.clone()),
            Target::Emulation { .. } => None,
        };
        if let Some(t) = full {
            let ct = scalar_equiv_tol(&cm, &t, EquivMode::AnyNonzero, tol)?;
            let dt = scalar_equiv_tol(&dm, &t, EquivMode::AnyNonzero, tol)?;
            report.passed &= ct.is_equivalent() && dt.is_equivalent();
            report.circuit_vs_target = ct.residual;
            report.diagram_vs_target = dt.residual;
        } else if let Target::Emulation { matrix, dims } = &self.target {
            let ct = check_emulation_dims(&cm, matrix, dims, tol)?;
            let dt = check_emulation_dims(&dm.scale(unit(&cm, &dm)), matrix, dims, tol)?;
            report.passed &= ct.passed && dt.passed;
            report.circuit_vs_target = ct.residual;
            report.diagram_vs_target = dt.residual;
            report.leakage = ct.leakage.max(dt.leakage);
        }
        Ok(report)
    }
}

/// The factor taking `dm` to the same normalization as `cm`.
fn unit(cm: &Matrix, dm: &Matrix) -> num_complex::Complex64 {
    let scale = cm.max_abs() / dm.max_abs();
    num_complex::Complex64::new(scale, 0.0)
}

#[cfg(test)]
mod tests;
