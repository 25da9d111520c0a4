//! Gate counting and Clifford+T+R decomposition of phase gates.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, GateKind};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub t_count: usize,
    pub r_count: usize,
    /// Phase gates with a non-integer label, T and R included.
    pub nonclifford_phase_count: usize,
    /// Non-integer phases that are not Clifford+T+R.
    pub arbitrary_phase_count: usize,
    pub clifford_count: usize,
    pub undecomposed_controls: usize,
    pub total_gates: usize,
}

/// Where an R-type reflection sits: `Z(0,3/2)`, `Z(3/2,0)` or `Z(3/2,3/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reflection {
    On2,
    On1,
    On12,
}

/// `Z(a,b) = Z(integer part) · T^t · reflection`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhaseClass {
    Clifford,
    CliffordTR { t: u8, reflection: Option<Reflection>, integer: Phase },
    Arbitrary,
}

fn is_integral(p: &Phase) -> bool {
    p.a().denom().is_one() && p.b().denom().is_one()
}

fn reflection_phase(r: Option<Reflection>) -> Phase {
    match r {
        None => Phase::zero(),
        Some(Reflection::On2) => Phase::r(),
        Some(Reflection::On1) => Phase::r().swapped(),
        Some(Reflection::On12) => Phase::ratios((3, 2), (3, 2)),
    }
}

pub fn classify_phase(p: &Phase) -> PhaseClass {
    if is_integral(p) {
        return PhaseClass::Clifford;
    }
    let ts = [(0u8, Phase::zero()), (1, Phase::t()), (2, Phase::tdg())];
    for r in [None, Some(Reflection::On2), Some(Reflection::On1), Some(Reflection::On12)] {
        for (t, tp) in &ts {
            let rest = &(p - &reflection_phase(r)) - tp;
            if is_integral(&rest) {
                return PhaseClass::CliffordTR { t: *t, reflection: r, integer: rest };
            }
        }
    }
    PhaseClass::Arbitrary
}

pub fn count_resources(c: &Circuit) -> Counts {
    let mut n = Counts { total_gates: c.gates.len(), ..Counts::default() };
    for g in &c.gates {
        match &g.kind {
            GateKind::Controlled { .. } => n.undecomposed_controls += 1,
            GateKind::Zphase(p) => match classify_phase(p) {
                PhaseClass::Clifford => n.clifford_count += 1,
                PhaseClass::CliffordTR { t, reflection, .. } => {
                    n.nonclifford_phase_count += 1;
                    n.t_count += usize::from(t > 0);
                    n.r_count += usize::from(reflection.is_some());
                }
                PhaseClass::Arbitrary => {
                    n.nonclifford_phase_count += 1;
                    n.arbitrary_phase_count += 1;
                }
            },
            _ => n.clifford_count += 1,
        }
    }
    n
}

/// Rewrite every Clifford+T+R phase gate into integer phases, T, T† and R
/// conjugated by permutations. Arbitrary phases and other gates are kept.
/// The result equals the input up to a global phase of ±1.
pub fn decompose_phases(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.n_wires);
    for g in &c.gates {
        let GateKind::Zphase(p) = &g.kind else {
            out.push(g.clone());
            continue;
        };
        let w = g.wires[0];
        let PhaseClass::CliffordTR { t, reflection, integer } = classify_phase(p) else {
            out.push(g.clone());
            continue;
        };
        if !integer.is_zero() {
            out.push(Gate::zphase(integer, w));
        }
        match t {
            1 => out.push(Gate::one(GateKind::t(), w)),
            2 => out.push(Gate::one(GateKind::tdg(), w)),
            _ => &mut out,
        };
        let conj = match reflection {
            None => continue,
            Some(Reflection::On2) => None,
            Some(Reflection::On1) => Some(GateKind::X12),
            Some(Reflection::On12) => Some(GateKind::X02),
        };
        if let Some(k) = &conj {
            out.push(Gate::one(k.clone(), w));
        }
        out.push(Gate::one(GateKind::r(), w));
        if let Some(k) = conj {
            out.push(Gate::one(k, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::circuit_matrix;
    use crate::matrix::{scalar_equiv, EquivMode};
    use crate::phase::rat;

    #[test]
    fn t_tdg_s() {
        let c = Circuit::parse("T 0\nTDG 0\nS 0\n").unwrap();
        let n = count_resources(&c);
        assert_eq!((n.t_count, n.clifford_count, n.r_count), (2, 1, 0));
        assert_eq!(n.nonclifford_phase_count, 2);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_phase(&Phase::s()), PhaseClass::Clifford);
        let t2 = classify_phase(&Phase::ratios((2, 3), (-2, 3)));
        assert!(matches!(t2, PhaseClass::CliffordTR { t: 2, reflection: None, .. }));
        let r1 = classify_phase(&Phase::ratios((3, 2), (0, 1)));
        assert!(matches!(r1, PhaseClass::CliffordTR { t: 0, reflection: Some(Reflection::On1), .. }));
        let both = classify_phase(&Phase::new(rat(1, 3) + rat(3, 2), rat(-1, 3)));
        assert!(matches!(both, PhaseClass::CliffordTR { t: 1, reflection: Some(Reflection::On1), .. }));
        assert_eq!(classify_phase(&Phase::ratios((1, 4), (0, 1))), PhaseClass::Arbitrary);
        assert_eq!(classify_phase(&Phase::ratios((1, 3), (1, 3))), PhaseClass::Arbitrary);
    }

    #[test]
    fn decomposition_preserves_the_unitary() {
        let mut phases = Vec::new();
        for a in -6..6 {
            for b in -6..6 {
                phases.push(Phase::ratios((a, 6), (b, 6)));
            }
        }
        for p in phases {
            let mut c = Circuit::new(1);
            c.push(Gate::zphase(p.clone(), 0));
            let d = decompose_phases(&c);
            let r = scalar_equiv(&circuit_matrix(&d).unwrap(), &circuit_matrix(&c).unwrap(), EquivMode::AnyNonzero).unwrap();
            assert!(r.is_equivalent(), "{p}");
            assert!((r.c.re.abs() - 1.0).abs() < 1e-12 && r.c.im.abs() < 1e-12, "{p}: {}", r.c);
            let before = count_resources(&c);
            let after = count_resources(&d);
            assert_eq!((before.t_count, before.r_count), (after.t_count, after.r_count), "{p}");
            assert_eq!(after.arbitrary_phase_count, before.arbitrary_phase_count);
            assert!(d.gates.iter().all(|g| match &g.kind {
                GateKind::Zphase(q) => is_integral(q) || *q == Phase::t() || *q == Phase::tdg() || *q == Phase::r()
                    || classify_phase(q) == PhaseClass::Arbitrary,
                _ => true,
            }));
        }
    }

    #[test]
    fn controls_are_counted_separately() {
        let c = Circuit::parse("C2 Z 0 1\nH 1\n").unwrap();
        let n = count_resources(&c);
        assert_eq!((n.undecomposed_controls, n.clifford_count, n.total_gates), (1, 1, 2));
    }
}
