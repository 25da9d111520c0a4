use num_traits::Zero;

use super::constructions::{phase_block, phase_multiplier};
use super::{SynthResult, Target};
use crate::circuits::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::oracle::{ket2_qubit_phase, qubit_ccu, qubit_diag};
use crate::phase::{format_rational, int, mod3, omega_pow, Phase, Rational};

/// `(α, β, k)` with `2α − β = 3k` and `α + β = η`. When `2η/3` is an integer
/// the solution `β = 0` is taken, otherwise `k = 0`.
pub fn ket2_solution(eta: &Rational) -> (Rational, Rational, Rational) {
    let k = eta * int(2) / int(3);
    if k.is_integer() {
        return (eta.clone(), Rational::zero(), k);
    }
    (eta / int(3), eta * int(2) / int(3), Rational::zero())
}

/// `|2⟩`-controlled `diag(1, ω^η)` on a qutrit control and an emulated qubit.
pub fn emulate_ket2_qubit_phase(eta: &Rational) -> Result<SynthResult> {
    let (alpha, beta, k) = ket2_solution(eta);
    let target = Target::Emulation { matrix: ket2_qubit_phase(eta), dims: vec![3, 2] };
    Ok(SynthResult::from_circuit("ket2-qubit-phase", phase_block(&alpha, &beta), target)?
        .with("control_level", 2)
        .with("eta", format_rational(eta))
        .with("alpha", format_rational(&alpha))
        .with("beta", format_rational(&beta))
        .with("k", format_rational(&k)))
}

/// The qubit gate a `|2⟩`-controlled construction applies when its control is `|2⟩`.
fn ket2_block(inner: &SynthResult) -> Result<Matrix> {
    let pick = |m: &Matrix, base: usize| Matrix::from_fn(2, 2, |r, c| m.get(base + r, base + c));
    match &inner.target {
        Target::Diagonal(spec) => Ok(Matrix::diagonal(&[omega_pow(spec.exponent(&[2, 0])), omega_pow(spec.exponent(&[2, 1]))])),
        Target::Unitary(m) => Ok(pick(m, 6)),
        Target::Emulation { matrix, dims } if dims == &[3, 2] => Ok(pick(matrix, 4)),
        Target::Emulation { dims, .. } => Err(Error::Precondition(format!("cannot read a qubit gate from levels {dims:?}"))),
    }
}

/// Qubit CCU from a `|2⟩`-controlled U: the first two qubits are summed
/// into the middle wire, which reaches `|2⟩` only on `|11⟩`.
pub fn emulate_ccu(inner: &SynthResult) -> Result<SynthResult> {
    if inner.circuit.n_wires != 2 || inner.control_level() != Some(2) {
        return Err(Error::Precondition(format!("{} is not a two-qutrit |2⟩-controlled construction", inner.name)));
    }
    let u = ket2_block(inner)?;
    let mut c = Circuit::new(3);
    c.push(Gate::cx(0, 1)).extend_mapped(&inner.circuit, &[1, 2]).push(Gate::cxdg(0, 1));
    let target = Target::Emulation { matrix: qubit_ccu(&u)?, dims: vec![2, 2, 2] };
    let mut out = SynthResult::from_circuit("ccu-emulation", c, target)?;
    out.metadata = inner.metadata.clone();
    out.metadata.remove("control_level");
    Ok(out.with("inner", inner.name.clone()))
}

/// Ancilla-free CCZ on three emulated qubits.
pub fn emulate_ccz() -> Result<SynthResult> {
    let mut r = emulate_ccu(&emulate_ket2_qubit_phase(&Rational::new(3.into(), 2.into()))?)?;
    r.name = "ccz-emulation".into();
    Ok(r)
}

/// `diag(ω^{α₀}, …, ω^{α_{2ⁿ−1}})` on `n` emulated qubits: one phase
/// multiplier per basis state, with `X₀₁` on the wires where that state has a 0.
pub fn emulate_qubit_diag(alphas: &[Rational]) -> Result<SynthResult> {
    if alphas.len() < 2 || !alphas.len().is_power_of_two() {
        return Err(Error::Precondition(format!("need 2^n phases with n ≥ 1, got {}", alphas.len())));
    }
    let n = alphas.len().trailing_zeros() as usize;
    let mut c = Circuit::new(n);
    for (b, alpha) in alphas.iter().enumerate() {
        if mod3(alpha).is_zero() {
            continue;
        }
        let zeros: Vec<usize> = (0..n).filter(|k| (b >> (n - 1 - k)) & 1 == 0).collect();
        for &w in &zeros {
            c.push(Gate::one(GateKind::X01, w));
        }
        if n == 1 {
            c.push(Gate::zphase(Phase::new(alpha.clone(), alpha.clone()), 0));
        } else {
            c.extend(&phase_multiplier(n, alpha)?.circuit);
        }
        for &w in &zeros {
            c.push(Gate::one(GateKind::X01, w));
        }
    }
    let target = Target::Emulation { matrix: qubit_diag(alphas), dims: vec![2; n] };
    Ok(SynthResult::from_circuit("qubit-diag-emulation", c, target)?
        .with("alphas", alphas.iter().map(format_rational).collect::<Vec<_>>()))
}

