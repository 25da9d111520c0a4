use super::constructions::{
    controlled_on, controlled_phase, phase_gadget, phase_multiplier, square_control, square_phase_gate, square_phase_pair,
};
use super::emulation::{emulate_ccu, emulate_ccz, emulate_ket2_qubit_phase, emulate_qubit_diag};
use super::{SynthResult, Target};
use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::oracle::DiagonalSpec;
use crate::phase::{format_rational, int, Phase, Rational};

/// Every construction reachable by name.
pub const CONSTRUCTIONS: &[&str] = &[
    "phase-gadget",
    "square-phase-gate",
    "controlled-phase",
    "square-control",
    "square-phase-pair",
    "phase-multiplier",
    "qubit-diag-emulation",
    "ket2-qubit-phase",
    "ccu-emulation",
    "ccz-emulation",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildParams {
    pub n: Option<usize>,
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub theta: Option<Rational>,
    pub phi: Option<Rational>,
    pub eta: Option<Rational>,
    /// Control level for `controlled-phase`; 2 when absent.
    pub level: Option<u8>,
    pub alphas: Vec<Rational>,
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, name: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Precondition(format!("{name} needs --{flag}")))
}

pub fn build_named(name: &str, p: &BuildParams) -> Result<SynthResult> {
    match name {
        "phase-gadget" => {
            let alpha = need(&p.alpha, "alpha", name)?;
            let beta = p.beta.clone().unwrap_or_else(|| alpha * int(2));
            phase_gadget(*need(&p.n, "n", name)?, alpha, &beta)
        }
        "square-phase-gate" => {
            let alpha = need(&p.alpha, "alpha", name)?;
            let mut c = Circuit::new(1);
            c.push(square_phase_gate(alpha));
            let p = Phase::new(alpha.clone(), alpha.clone());
            let spec = DiagonalSpec::from_fn("square-phase", 1, |x| p.component(x[0] as i64));
            Ok(SynthResult::from_circuit(name, c, Target::Diagonal(spec))?.with("alpha", format_rational(alpha)))
        }
        "controlled-phase" => {
            let base = controlled_phase(need(&p.theta, "theta", name)?, need(&p.phi, "phi", name)?)?;
            controlled_on(p.level.unwrap_or(2), &base)
        }
        "square-control" => square_control(),
        "square-phase-pair" => square_phase_pair(need(&p.alpha, "alpha", name)?),
        "phase-multiplier" => phase_multiplier(*need(&p.n, "n", name)?, need(&p.alpha, "alpha", name)?),
        "qubit-diag-emulation" => emulate_qubit_diag(&p.alphas),
        "ket2-qubit-phase" => emulate_ket2_qubit_phase(need(&p.eta, "eta", name)?),
        "ccu-emulation" => emulate_ccu(&emulate_ket2_qubit_phase(need(&p.eta, "eta", name)?)?),
        "ccz-emulation" => emulate_ccz(),
        other => Err(Error::Precondition(format!(
            "unknown construction {other:?}; expected one of {}",
            CONSTRUCTIONS.join(", ")
        ))),
    }
}
