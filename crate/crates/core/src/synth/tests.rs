use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::circuits::{circuit_matrix, count_resources, to_diagram, GateKind};
use crate::matrix::{qubit_subspace_restrict, scalar_equiv, trit_index, EquivMode, Verdict};
use crate::oracle::{check_emulation, multiplier_spec, qubit_ccz};
use crate::phase::{int, omega_pow, rat, Phase, Rational};
use crate::rewrite::simplify;
use crate::rewrite::verify::random_rational;

const TOL: f64 = 1e-9;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn assert_verified(r: &SynthResult) {
    let v = r.verify(TOL).unwrap();
    assert!(v.passed, "{v:?}");
}

fn diag_entry(m: &Matrix, x: &[usize]) -> Complex64 {
    let i = trit_index(x);
    m.get(i, i)
}

#[test]
fn gadget_examples() {
    let g = phase_gadget(2, &int(1), &int(2)).unwrap();
    let m = circuit_matrix(&g.circuit).unwrap();
    assert!((diag_entry(&m, &[1, 2]) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    let a = rat(2, 7);
    let g4 = phase_gadget(4, &a, &(&a * int(2))).unwrap();
    let m4 = circuit_matrix(&g4.circuit).unwrap();
    assert!((diag_entry(&m4, &[1, 1, 1, 1]) - omega_pow(&a)).norm() < 1e-12);
    assert_eq!(g4.diagram.interior_count(), 4 + 2);
}

#[test]
fn gadgets_agree_with_oracle() {
    let mut r = rng(3);
    for n in 1..=4 {
        for _ in 0..4 {
            let (a, b) = (random_rational(&mut r), random_rational(&mut r));
            assert_verified(&phase_gadget(n, &a, &b).unwrap());
        }
    }
}

#[test]
fn wrong_pairing_is_not_a_gadget() {
    let (a, b) = (rat(1, 5), rat(3, 7));
    let bad = circuit_matrix(&phase_gadget_wrong_pairing(2, &a, &b).unwrap()).unwrap();
    let good = circuit_matrix(&phase_gadget(2, &a, &b).unwrap().circuit).unwrap();
    assert!(!scalar_equiv(&bad, &good, EquivMode::AnyNonzero).unwrap().is_equivalent());
}

#[test]
fn ladder_simplifies_to_the_gadget() {
    let (a, b) = (rat(1, 4), rat(-2, 3));
    let g = phase_gadget(3, &a, &b).unwrap();
    let d = simplify(&to_diagram(&g.circuit).unwrap());
    let r = scalar_equiv(&crate::semantics::eval(&d).unwrap(), &circuit_matrix(&g.circuit).unwrap(), EquivMode::AnyNonzero)
        .unwrap();
    assert!(r.is_equivalent());
}

#[test]
fn square_phase_gate_matrix() {
    let a = rat(3, 2);
    let mut c = Circuit::new(1);
    c.push(square_phase_gate(&a));
    let d = circuit_matrix(&c).unwrap().diag();
    assert!((d[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    assert!((d[1] + Complex64::new(1.0, 0.0)).norm() < 1e-12);
    assert!((d[2] + Complex64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn block_case_table() {
    let mut r = rng(11);
    for _ in 0..20 {
        let (a, b) = (random_rational(&mut r), random_rational(&mut r));
        let m = circuit_matrix(&phase_block(&a, &b)).unwrap();
        let cases = phase_block_cases(&a, &b);
        for (c, case) in cases.iter().enumerate() {
            for t in 0..3 {
                let want = omega_pow(&case.component(t as i64));
                assert!((diag_entry(&m, &[c, t]) - want).norm() < 1e-9, "c={c} t={t}");
            }
        }
    }
}

#[test]
fn controlled_phase_matches_oracle() {
    let mut r = rng(5);
    for _ in 0..10 {
        let (t, p) = (random_rational(&mut r), random_rational(&mut r));
        let cp = controlled_phase(&t, &p).unwrap();
        assert_verified(&cp);
        assert_eq!(cp.circuit.gates.iter().filter(|g| matches!(g.kind, GateKind::CX | GateKind::CXdag)).count(), 4);
        assert_eq!(cp.circuit.gates.iter().filter(|g| matches!(g.kind, GateKind::Zphase(_))).count(), 4);
    }
}

#[test]
fn controlled_z_has_t_count_three() {
    let cz = controlled_phase(&int(1), &int(2)).unwrap();
    assert_eq!(controlled_phase_solution(&int(1), &int(2)), [rat(-1, 3), rat(1, 3), rat(2, 3), rat(1, 3)]);
    assert_eq!(cz.counts.t_count, 3);
    assert_eq!(cz.counts.undecomposed_controls, 0);
    let id = controlled_phase(&int(0), &int(0)).unwrap();
    assert!(circuit_matrix(&id.circuit).unwrap().max_diff(&Matrix::identity(9)) < 1e-12);
}

#[test]
fn retargeted_controls() {
    let cp = controlled_phase(&rat(1, 4), &rat(5, 6)).unwrap();
    assert_eq!(controlled_on(2, &cp).unwrap(), cp);
    for level in [0, 1] {
        let r = controlled_on(level, &cp).unwrap();
        assert_verified(&r);
        let m = circuit_matrix(&r.circuit).unwrap();
        assert!((diag_entry(&m, &[level as usize, 1]) - omega_pow(&rat(1, 4))).norm() < 1e-12);
        assert!((diag_entry(&m, &[2, 1]) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
    assert!(controlled_on(0, &square_control().unwrap()).is_err());
}

#[test]
fn square_control_examples() {
    let sc = square_control().unwrap();
    assert_verified(&sc);
    let m = circuit_matrix(&sc.circuit).unwrap();
    let image = |x: &[usize]| (0..9).find(|&r| m.get(r, trit_index(x)).norm() > 0.5).unwrap();
    assert_eq!(image(&[0, 1]), trit_index(&[0, 1]));
    assert_eq!(image(&[2, 2]), trit_index(&[2, 0]));
    assert_eq!(image(&[1, 0]), trit_index(&[1, 1]));
    assert_eq!(sc.counts.undecomposed_controls, 0);
}

#[test]
fn square_phase_pairs() {
    let mut r = rng(9);
    for _ in 0..5 {
        assert_verified(&square_phase_pair(&random_rational(&mut r)).unwrap());
    }
}

fn term_signs(r: &SynthResult) -> Vec<String> {
    r.metadata["terms"].as_array().unwrap().iter().map(|t| t["sign"].as_str().unwrap().to_string()).collect()
}

#[test]
fn multiplier_term_counts_and_labels() {
    let a = rat(2, 7);
    for n in 2..=5 {
        let m = phase_multiplier(n, &a).unwrap();
        assert_eq!(m.metadata["term_count"], (1usize << n) - 1);
        for g in &m.circuit.gates {
            if let GateKind::Zphase(p) = &g.kind {
                let plus = Phase::new(a.clone(), a.clone());
                let is_term = *p == plus || *p == -&plus;
                let is_gadget = p.has_denominator_dividing(3);
                assert!(is_term || is_gadget, "unexpected label {p}");
            }
        }
    }
    let m2 = phase_multiplier(2, &a).unwrap();
    assert_eq!(term_signs(&m2), ["+", "+", "-"]);
    let mut s3 = term_signs(&phase_multiplier(3, &a).unwrap());
    s3.sort();
    assert_eq!(s3.iter().filter(|s| *s == "+").count(), 4);
    assert!(matches!(phase_multiplier(1, &a), Err(crate::Error::Precondition(_))));
}

#[test]
fn two_qutrit_multiplier_is_exact() {
    let mut r = rng(21);
    for _ in 0..5 {
        assert_verified(&phase_multiplier(2, &random_rational(&mut r)).unwrap());
    }
}

#[test]
fn multiplier_terms_agree_only_modulo_three() {
    // On |2,1,2⟩ the seven terms contribute 4α rather than (4 mod 3)α.
    let a = rat(1, 3);
    let m = phase_multiplier(3, &a).unwrap();
    let u = circuit_matrix(&m.circuit).unwrap();
    assert!((diag_entry(&u, &[2, 1, 2]) - omega_pow(&(&a * int(4)))).norm() < 1e-9);
    assert!(!m.verify(TOL).unwrap().passed);
    let whole = phase_multiplier(3, &int(1)).unwrap();
    assert_verified(&whole);
    let qubits = qubit_subspace_restrict(&u, 3).unwrap();
    let oracle = qubit_subspace_restrict(&crate::oracle::diag_matrix(&multiplier_spec(3, &a)), 3).unwrap();
    assert!(qubits.matrix.max_diff(&oracle.matrix) < 1e-9);
}

#[test]
fn multiplier_t_counts() {
    let r = rat(3, 2);
    assert_eq!(phase_multiplier(2, &r).unwrap().counts.t_count, 0);
    assert_eq!(phase_multiplier(3, &r).unwrap().counts.t_count, 18);
    assert_eq!(phase_multiplier(4, &r).unwrap().counts.t_count, 60);
}

#[test]
fn ket2_qubit_phase() {
    let (a, b, k) = ket2_solution(&rat(3, 2));
    assert_eq!((a, b, k), (rat(3, 2), Rational::from_integer(0.into()), int(1)));
    let e = emulate_ket2_qubit_phase(&rat(3, 2)).unwrap();
    assert_eq!((e.counts.r_count, e.counts.t_count), (3, 0));
    assert_verified(&e);
    let zero = emulate_ket2_qubit_phase(&int(0)).unwrap();
    assert!(circuit_matrix(&zero.circuit).unwrap().max_diff(&Matrix::identity(9)) < 1e-12);
    let mut r = rng(17);
    for _ in 0..10 {
        assert_verified(&emulate_ket2_qubit_phase(&random_rational(&mut r)).unwrap());
    }
}

#[test]
fn ccz() {
    let e = emulate_ccz().unwrap();
    assert_eq!(e.circuit.n_wires, 3);
    assert_eq!((e.counts.r_count, e.counts.t_count), (3, 0));
    assert_verified(&e);
    let rep = check_emulation(&circuit_matrix(&e.circuit).unwrap(), &qubit_ccz(), 1e-12).unwrap();
    assert!(rep.passed && rep.leakage <= 1e-12);
}

#[test]
fn ccu_keeps_the_non_clifford_cost() {
    let mut r = rng(23);
    for _ in 0..5 {
        let inner = emulate_ket2_qubit_phase(&random_rational(&mut r)).unwrap();
        let outer = emulate_ccu(&inner).unwrap();
        assert_verified(&outer);
        assert_eq!(outer.counts.nonclifford_phase_count, inner.counts.nonclifford_phase_count);
    }
    let cp = controlled_phase(&int(0), &rat(3, 2)).unwrap();
    assert_verified(&emulate_ccu(&cp).unwrap());
    assert!(emulate_ccu(&square_control().unwrap()).is_err());
}

#[test]
fn qubit_diagonals() {
    let mut r = rng(29);
    for n in 1..=3 {
        let alphas: Vec<Rational> = (0..1 << n).map(|_| random_rational(&mut r)).collect();
        assert_verified(&emulate_qubit_diag(&alphas).unwrap());
    }
    let a = rat(2, 5);
    let diag = emulate_qubit_diag(&[int(0), int(0), int(0), a.clone()]).unwrap();
    let mult = phase_multiplier(2, &a).unwrap();
    let lhs = qubit_subspace_restrict(&circuit_matrix(&diag.circuit).unwrap(), 2).unwrap();
    let rhs = qubit_subspace_restrict(&circuit_matrix(&mult.circuit).unwrap(), 2).unwrap();
    assert_eq!(scalar_equiv(&lhs.matrix, &rhs.matrix, EquivMode::AnyNonzero).unwrap().verdict, Verdict::EqualExact);
    assert!(emulate_qubit_diag(&[int(1), int(2), int(0)]).is_err());
}

#[test]
fn every_named_construction_builds() {
    let p = BuildParams {
        n: Some(2),
        alpha: Some(rat(1, 3)),
        beta: Some(rat(1, 2)),
        theta: Some(int(1)),
        phi: Some(int(2)),
        eta: Some(rat(3, 2)),
        level: Some(0),
        alphas: vec![int(0), rat(1, 2)],
    };
    for name in CONSTRUCTIONS {
        let r = build_named(name, &p).unwrap();
        assert_verified(&r);
        assert_eq!(count_resources(&r.circuit), r.counts);
    }
    assert!(build_named("nope", &p).is_err());
    assert!(build_named("phase-gadget", &BuildParams::default()).is_err());
}
