use serde_json::json;

use super::{SynthResult, Target};
use crate::circuits::{Circuit, Gate, GateKind};
use crate::diagram::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::oracle::{controlled_phase_spec, gadget_spec, multiplier_spec, square_control_matrix, square_pair_spec, DiagonalSpec};
use crate::phase::{format_rational, int, Phase, Rational};

/// Single-wire `Z(α,α)`: `|x⟩ ↦ ω^{α·(x² mod 3)}|x⟩`.
pub fn square_phase_gate(alpha: &Rational) -> Gate {
    Gate::zphase(Phase::new(alpha.clone(), alpha.clone()), 0)
}

fn zph(a: Rational, b: Rational, w: usize) -> Gate {
    Gate::zphase(Phase::new(a, b), w)
}

/// CX ladder onto the last wire, `Z(α,β)` there, then `uncompute` back.
pub fn phase_gadget_circuit(n: usize, alpha: &Rational, beta: &Rational, uncompute: GateKind) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Precondition("a phase gadget needs at least one wire".into()));
    }
    let last = n - 1;
    let mut c = Circuit::new(n);
    for i in 0..last {
        c.push(Gate::cx(i, last));
    }
    c.push(zph(alpha.clone(), beta.clone(), last));
    for i in (0..last).rev() {
        c.push(Gate::two(uncompute.clone(), i, last));
    }
    Ok(c)
}

/// Same ladder but uncomputing with CX instead of CX†.
pub fn phase_gadget_wrong_pairing(n: usize, alpha: &Rational, beta: &Rational) -> Result<Circuit> {
    phase_gadget_circuit(n, alpha, beta, GateKind::CX)
}

/// `|x⟩ ↦ ω^{f(Σx mod 3)}|x⟩` with `f = (0, α, β)`. The diagram is the fused
/// gadget: one Z spider per wire, an X hub and a one-legged `Z(β,α)` leaf.
pub fn phase_gadget(n: usize, alpha: &Rational, beta: &Rational) -> Result<SynthResult> {
    let circuit = phase_gadget_circuit(n, alpha, beta, GateKind::CXdag)?;
    let mut d = Diagram::new();
    let ins: Vec<_> = (0..n).map(|_| d.add_input()).collect();
    let hub = d.add_vertex(Generator::X(Phase::zero()));
    let leaf = d.add_vertex(Generator::Z(Phase::new(beta.clone(), alpha.clone())));
    d.connect(hub, leaf);
    for i in ins {
        let z = d.add_vertex(Generator::Z(Phase::zero()));
        let o = d.add_output();
        d.connect(i, z);
        d.connect(z, o);
        d.connect(z, hub);
    }
    Ok(SynthResult::new("phase-gadget", circuit, d, Target::Diagonal(gadget_spec(n, alpha, beta)))
        .with("n", n)
        .with("alpha", format_rational(alpha))
        .with("beta", format_rational(beta)))
}

/// `Z(α,β)` on both wires, then `CX · Z(−α,−β)_t · CX†`.
pub fn phase_block(alpha: &Rational, beta: &Rational) -> Circuit {
    let mut c = Circuit::new(2);
    c.push(zph(alpha.clone(), beta.clone(), 0))
        .push(zph(alpha.clone(), beta.clone(), 1))
        .push(Gate::cx(0, 1))
        .push(zph(-alpha, -beta, 1))
        .push(Gate::cxdg(0, 1));
    c
}

/// The phase gate the block applies to the target for control `|0⟩, |1⟩, |2⟩`.
pub fn phase_block_cases(alpha: &Rational, beta: &Rational) -> [Phase; 3] {
    [
        Phase::zero(),
        Phase::new(int(2) * alpha - beta, alpha + beta),
        Phase::new(alpha + beta, int(2) * beta - alpha),
    ]
}

/// `(α, β, γ, δ)` for which the doubled block is `|2⟩`-controlled `Z(θ,φ)`.
pub fn controlled_phase_solution(theta: &Rational, phi: &Rational) -> [Rational; 4] {
    let three = int(3);
    [(theta - phi) / &three, theta / &three, phi / &three, (phi - theta) / &three]
}

fn controlled_phase_circuit(theta: &Rational, phi: &Rational) -> Circuit {
    let [a, b, g, d] = controlled_phase_solution(theta, phi);
    let x12 = || Gate::one(GateKind::X12, 0);
    let mut c = Circuit::new(2);
    c.push(zph(&a + &d, &b + &g, 0))
        .push(zph(&a + &g, &b + &d, 1))
        .push(Gate::cx(0, 1))
        .push(zph(-&a, -&b, 1))
        .push(Gate::cxdg(0, 1))
        .push(x12())
        .push(Gate::cx(0, 1))
        .push(zph(-&g, -&d, 1))
        .push(Gate::cxdg(0, 1))
        .push(x12());
    c
}

/// `|2⟩`-controlled `Z(θ,φ)`, control on wire 0.
pub fn controlled_phase(theta: &Rational, phi: &Rational) -> Result<SynthResult> {
    let sol = controlled_phase_solution(theta, phi);
    let target = Target::Diagonal(controlled_phase_spec(2, theta, phi));
    Ok(SynthResult::from_circuit("controlled-phase", controlled_phase_circuit(theta, phi), target)?
        .with("control_level", 2)
        .with("theta", format_rational(theta))
        .with("phi", format_rational(phi))
        .with("solution", sol.iter().map(format_rational).collect::<Vec<_>>()))
}

fn shift_control_matrix(m: &Matrix, s: usize) -> Matrix {
    let b = m.rows() / 3;
    let src = |i: usize| ((i / b + s) % 3) * b + i % b;
    Matrix::from_fn(m.rows(), m.cols(), |r, c| m.get(src(r), src(c)))
}

/// Retarget a `|2⟩`-controlled construction (control on wire 0) to fire on
/// `|level⟩` by conjugating the control with `X₋₁` or `X₊₁`.
pub fn controlled_on(level: u8, inner: &SynthResult) -> Result<SynthResult> {
    if inner.control_level() != Some(2) {
        return Err(Error::Precondition(format!("{} is not a |2⟩-controlled construction", inner.name)));
    }
    if level > 2 {
        return Err(Error::Precondition(format!("control level {level} is not a trit")));
    }
    if level == 2 {
        return Ok(inner.clone());
    }
    let (pre, post) = if level == 0 { (GateKind::Xm1, GateKind::Xp1) } else { (GateKind::Xp1, GateKind::Xm1) };
    let mut c = Circuit::new(inner.circuit.n_wires);
    c.push(Gate::one(pre, 0)).extend(&inner.circuit).push(Gate::one(post, 0));
    let s = (2 - level) as usize;
    let target = match &inner.target {
        Target::Diagonal(spec) => Target::Diagonal(DiagonalSpec::from_fn(
            format!("{} on |{level}⟩", spec.name),
            spec.n,
            |x| {
                let mut y = x.to_vec();
                y[0] = (y[0] + s) % 3;
                spec.exponent(&y).clone()
            },
        )),
        Target::Unitary(m) => Target::Unitary(shift_control_matrix(m, s)),
        Target::Emulation { matrix, dims } => {
            if dims[0] != 3 {
                return Err(Error::Precondition("the control must be a full qutrit".into()));
            }
            Target::Emulation { matrix: shift_control_matrix(matrix, s), dims: dims.clone() }
        }
    };
    let mut out = SynthResult::from_circuit(format!("{}@{level}", inner.name), c, target)?;
    out.metadata = inner.metadata.clone();
    Ok(out.with("control_level", level))
}

fn square_control_circuit() -> Result<Circuit> {
    let cz = controlled_on(0, &controlled_phase(&int(1), &int(2))?)?;
    let mut c = Circuit::new(2);
    c.push(Gate::one(GateKind::Xp1, 1)).push(Gate::one(GateKind::Hdag, 1));
    c.extend(&cz.circuit);
    c.push(Gate::one(GateKind::H, 1));
    Ok(c)
}

/// `|x, y⟩ ↦ |x, y + x²⟩`: `X₊₁` on the target, undone by a `|0⟩`-controlled
/// `X₋₁` written as a controlled Z between Hadamards.
pub fn square_control() -> Result<SynthResult> {
    SynthResult::from_circuit("square-control", square_control_circuit()?, Target::Unitary(square_control_matrix()))
}

/// `|x, y⟩ ↦ ω^{α·(y + x²)²}|x, y⟩`.
pub fn square_phase_pair(alpha: &Rational) -> Result<SynthResult> {
    let sc = square_control_circuit()?;
    let mut c = Circuit::new(2);
    c.extend(&sc).push(zph(alpha.clone(), alpha.clone(), 1)).extend(&sc.inverse());
    Ok(SynthResult::from_circuit("square-phase-pair", c, Target::Diagonal(square_pair_spec(alpha)))?
        .with("alpha", format_rational(alpha)))
}

/// One `±α·s²` term: a `Z(±α,±α)` on `wire` while it holds `register`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub sign: i8,
    pub wire: usize,
    pub register: String,
}

enum Op {
    Gate(Gate),
    Term(Term),
}

fn multiplier_ops(n: usize, sc: &Circuit) -> Vec<Op> {
    let term = |sign, wire, register: String| Op::Term(Term { sign, wire, register });
    if n == 2 {
        return vec![
            term(1, 0, "x0".into()),
            term(1, 1, "x1".into()),
            Op::Gate(Gate::cx(0, 1)),
            term(-1, 1, "x0+x1".into()),
            Op::Gate(Gate::cxdg(0, 1)),
        ];
    }
    let z = n - 1;
    let mut ops = Vec::new();
    for op in multiplier_ops(n - 1, sc) {
        let inserted = match &op {
            Op::Term(t) => Some(t.clone()),
            Op::Gate(_) => None,
        };
        ops.push(op);
        if let Some(t) = inserted {
            ops.extend(sc.gates.iter().map(|g| Op::Gate(remap(g, &[t.wire, z]))));
            ops.push(term(-t.sign, z, format!("x{z}+({})^2", t.register)));
            ops.extend(sc.inverse().gates.iter().map(|g| Op::Gate(remap(g, &[t.wire, z]))));
        }
    }
    ops.push(term(1, z, format!("x{z}")));
    ops
}

fn remap(g: &Gate, map: &[usize]) -> Gate {
    Gate { kind: g.kind.clone(), wires: g.wires.iter().map(|&w| map[w]).collect() }
}

/// `|x₁…xₙ⟩ ↦ ω^{α·(x₁⋯xₙ mod 3)}`, written as `2ⁿ − 1` signed square terms.
///
/// Each term multiplies `α` by `s² mod 3 ∈ {0, 1}` and the terms sum to the
/// product only modulo 3, so for `n ≥ 3` the phases agree with the target
/// exactly when `α` is an integer or on the `{|0⟩,|1⟩}` subspace.
pub fn phase_multiplier(n: usize, alpha: &Rational) -> Result<SynthResult> {
    if n < 2 {
        return Err(Error::Precondition(format!("a phase multiplier needs n ≥ 2, got {n}")));
    }
    let sc = square_control_circuit()?;
    let mut c = Circuit::new(n);
    let mut terms = Vec::new();
    for op in multiplier_ops(n, &sc) {
        match op {
            Op::Gate(g) => {
                c.push(g);
            }
            Op::Term(t) => {
                let a = alpha * int(t.sign as i64);
                c.push(zph(a.clone(), a, t.wire));
                terms.push(t);
            }
        }
    }
    let listed: Vec<_> = terms
        .iter()
        .map(|t| json!({"sign": if t.sign > 0 { "+" } else { "-" }, "wire": t.wire, "register": t.register}))
        .collect();
    Ok(SynthResult::from_circuit("phase-multiplier", c, Target::Diagonal(multiplier_spec(n, alpha)))?
        .with("n", n)
        .with("alpha", format_rational(alpha))
        .with("term_count", terms.len())
        .with("terms", listed))
}
