use proptest::prelude::*;

use qutrit_zx::circuits::{circuit_matrix, count_resources, decompose_phases, to_diagram, Circuit, Gate, GateKind};
use qutrit_zx::matrix::{scalar_equiv, EquivMode, Matrix, Verdict};
use qutrit_zx::phase::Phase;
use qutrit_zx::semantics::eval;

fn kind() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        Just(GateKind::Xp1),
        Just(GateKind::Xm1),
        Just(GateKind::X01),
        Just(GateKind::X12),
        Just(GateKind::X02),
        Just(GateKind::H),
        Just(GateKind::Hdag),
        Just(GateKind::CX),
        Just(GateKind::CXdag),
        (-12i64..12, 1i64..7, -12i64..12, 1i64..7).prop_map(|(a, b, c, d)| GateKind::Zphase(Phase::ratios((a, b), (c, d)))),
    ]
}

fn circuit(n: usize, len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec((kind(), 0..n, 1..n), 0..len).prop_map(move |gs| {
        let mut c = Circuit::new(n);
        for (k, w, off) in gs {
            let wires = if k.arity() == 2 { vec![w, (w + off) % n] } else { vec![w] };
            c.push(Gate::new(k, wires).unwrap());
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagram_matches_circuit(c in circuit(3, 12)) {
        let r = scalar_equiv(&eval(&to_diagram(&c).unwrap()).unwrap(), &circuit_matrix(&c).unwrap(), EquivMode::AnyNonzero).unwrap();
        prop_assert_eq!(r.verdict, Verdict::EqualExact);
    }

    #[test]
    fn text_roundtrip(c in circuit(3, 16)) {
        prop_assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn inverse_undoes(c in circuit(2, 16)) {
        let mut both = c.clone();
        both.extend(&c.inverse());
        prop_assert!(circuit_matrix(&both).unwrap().max_diff(&Matrix::identity(9)) < 1e-9);
    }

    #[test]
    fn decomposition_keeps_counts_and_unitary(c in circuit(2, 10)) {
        let d = decompose_phases(&c);
        let r = scalar_equiv(&circuit_matrix(&d).unwrap(), &circuit_matrix(&c).unwrap(), EquivMode::AnyNonzero).unwrap();
        prop_assert!(r.is_equivalent());
        let (a, b) = (count_resources(&c), count_resources(&d));
        prop_assert_eq!((a.t_count, a.r_count, a.arbitrary_phase_count), (b.t_count, b.r_count, b.arbitrary_phase_count));
    }
}

#[test]
fn gate_examples() {
    let cx = Circuit::parse("CX 0 1").unwrap();
    let m = circuit_matrix(&cx).unwrap();
    assert_eq!(m.get(2 * 3 + 1, 2 * 3 + 2).re, 1.0);
    let cc = Circuit::parse("C2 S 0 1").unwrap();
    let m = circuit_matrix(&cc).unwrap();
    assert!((m.get(5, 5).re - 1.0).abs() < 1e-12);
    let w = qutrit_zx::phase::omega_pow(&qutrit_zx::phase::int(1));
    assert!((m.get(8, 8) - w).norm() < 1e-12);
    let pair = Circuit::parse("CX 0 1\nCXDG 0 1").unwrap();
    assert_eq!(circuit_matrix(&pair).unwrap(), Matrix::identity(9));
    let ttt = Circuit::parse("T 0\nT 0\nT 0").unwrap();
    let z = Circuit::parse("Z 0").unwrap();
    assert!(circuit_matrix(&ttt).unwrap().max_diff(&circuit_matrix(&z).unwrap()) < 1e-12);
    assert_eq!(circuit_matrix(&Circuit::new(2)).unwrap(), Matrix::identity(9));
}
