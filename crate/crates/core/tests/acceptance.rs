//! Acceptance checks. Runs as a plain binary so every line is printed; exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qutrit_zx::circuits::{circuit_matrix, count_resources, decompose_phases, GateKind};
use qutrit_zx::matrix::{pow3, scalar_equiv_tol, trit_index, EquivMode};
use qutrit_zx::oracle::{check_emulation, check_emulation_dims, diag_matrix, ket2_qubit_phase, multiplier_spec, qubit_ccz, qubit_diag, square_control_matrix};
use qutrit_zx::phase::{int, omega_pow, rat, Phase, Rational};
use qutrit_zx::report::{algebraic_identities, full_report};
use qutrit_zx::rewrite::verify::random_rational;
use qutrit_zx::rewrite::{replay, verify_all, ProofScript, RuleName};
use qutrit_zx::synth::*;

const TOL: f64 = 1e-9;
const SEED: u64 = 7;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_mul(1000) + salt)
}

fn rule_soundness() -> Outcome {
    let start = Instant::now();
    let reports = verify_all(200, SEED);
    let elapsed = start.elapsed();
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed() || r.max_residual > TOL).map(|r| r.rule.clone()).collect();
    let names: Vec<_> = reports.iter().map(|r| r.rule.as_str()).collect();
    let all_present = RuleName::all().iter().all(|r| names.contains(&r.as_str()));
    outcome(
        failed.is_empty() && all_present && elapsed < Duration::from_secs(60),
        format!("{} rules x 200 trials, max residual {worst:.1e}, {:.2}s, failing {failed:?}", reports.len(), elapsed.as_secs_f64()),
    )
}

fn proof_replay() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../proofs");
    let mut derived = Vec::new();
    let mut problems = Vec::new();
    let mut entries: Vec<_> = match std::fs::read_dir(&dir) {
        Ok(rd) => rd.filter_map(|e| e.ok()).map(|e| e.path()).collect(),
        Err(e) => return outcome(false, format!("cannot read {}: {e}", dir.display())),
    };
    entries.sort();
    for path in entries.iter().filter(|p| p.extension().is_some_and(|x| x == "json")) {
        let text = std::fs::read_to_string(path).unwrap_or_default();
        match ProofScript::from_json(&text).and_then(|s| replay(&s)) {
            Ok(r) if r.max_residual <= TOL => derived.push(r.derives),
            Ok(r) => problems.push(format!("{}: residual {:.1e}", r.name, r.max_residual)),
            Err(e) => problems.push(format!("{}: {e}", path.display())),
        }
    }
    let wanted = [RuleName::ID, RuleName::H2, RuleName::H4, RuleName::SX, RuleName::P1Prime, RuleName::P2Prime, RuleName::EUPrime];
    let missing: Vec<_> = wanted.iter().filter(|r| !derived.contains(r)).collect();
    outcome(
        problems.is_empty() && missing.is_empty(),
        format!("{} scripts replayed, missing {missing:?}, problems {problems:?}", derived.len()),
    )
}

fn phase_gadgets() -> Outcome {
    let mut r = rng(3);
    let (mut checked, mut bad, mut wrong_flagged, mut wrong_total) = (0, 0, 0, 0);
    for n in 1..=4 {
        for _ in 0..20 {
            let (a, b) = (random_rational(&mut r), random_rational(&mut r));
            let g = phase_gadget(n, &a, &b).unwrap();
            checked += 1;
            if !g.verify(TOL).unwrap().passed {
                bad += 1;
            }
            if n >= 2 {
                wrong_total += 1;
                let wrong = circuit_matrix(&phase_gadget_wrong_pairing(n, &a, &b).unwrap()).unwrap();
                let e = scalar_equiv_tol(&wrong, &diag_matrix(&qutrit_zx::oracle::gadget_spec(n, &a, &b)), EquivMode::AnyNonzero, TOL).unwrap();
                if !e.is_equivalent() {
                    wrong_flagged += 1;
                }
            }
        }
    }
    outcome(
        bad == 0 && wrong_flagged == wrong_total,
        format!("{checked} gadgets, {bad} mismatches; CX/CX ladder flagged {wrong_flagged}/{wrong_total}"),
    )
}

fn controlled_phases() -> Outcome {
    let mut r = rng(4);
    let mut table_bad = 0;
    for _ in 0..50 {
        let (a, b) = (random_rational(&mut r), random_rational(&mut r));
        let m = circuit_matrix(&phase_block(&a, &b)).unwrap();
        let cases = phase_block_cases(&a, &b);
        for (c, case) in cases.iter().enumerate() {
            for t in 0..3 {
                let i = trit_index(&[c, t]);
                if (m.get(i, i) - omega_pow(&case.component(t as i64))).norm() > TOL {
                    table_bad += 1;
                }
            }
        }
    }
    let mut oracle_bad = 0;
    for _ in 0..50 {
        let (t, p) = (random_rational(&mut r), random_rational(&mut r));
        if !controlled_phase(&t, &p).unwrap().verify(TOL).unwrap().passed {
            oracle_bad += 1;
        }
    }
    let cz = controlled_phase(&int(1), &int(2)).unwrap();
    let t = count_resources(&decompose_phases(&cz.circuit)).t_count;
    outcome(
        table_bad == 0 && oracle_bad == 0 && t == 3,
        format!("case table mismatches {table_bad}/450, oracle failures {oracle_bad}/50, controlled-Z T-count {t}"),
    )
}

fn allowed_labels(alpha: &Rational) -> Vec<Phase> {
    let sc = square_control().unwrap();
    let mut labels: Vec<Phase> = sc
        .circuit
        .gates
        .iter()
        .filter_map(|g| match &g.kind {
            GateKind::Zphase(p) => Some(p.clone()),
            _ => None,
        })
        .flat_map(|p| [p.clone(), -p])
        .collect();
    let plus = Phase::new(alpha.clone(), alpha.clone());
    labels.push(-&plus);
    labels.push(plus);
    labels
}

fn phase_multipliers() -> Outcome {
    let mut r = rng(5);
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=4usize {
        let alpha = random_rational(&mut r);
        let m = phase_multiplier(n, &alpha).unwrap();
        let u = circuit_matrix(&m.circuit).unwrap();
        let spec = multiplier_spec(n, &alpha);
        let wrong = (0..pow3(n)).filter(|&i| (u.get(i, i) - omega_pow(&spec.exponents[i])).norm() > TOL).count();
        let terms = m.metadata["term_count"].as_u64().unwrap_or(0) as usize;
        let allowed = allowed_labels(&alpha);
        let stray = m.circuit.gates.iter().filter(|g| matches!(&g.kind, GateKind::Zphase(p) if !allowed.contains(p))).count();
        ok &= wrong == 0 && terms == (1 << n) - 1 && stray == 0;
        notes.push(format!("n={n} alpha={alpha}: {wrong}/{} basis states off, {terms} terms, {stray} stray labels", pow3(n)));
    }
    for (n, want) in [(3usize, 18usize), (4, 42)] {
        let m = phase_multiplier(n, &rat(3, 2)).unwrap();
        let t = count_resources(&decompose_phases(&m.circuit)).t_count;
        ok &= t == want;
        notes.push(format!("n={n} T-count {t} (want {want})"));
    }
    outcome(ok, notes.join("; "))
}

fn square_gadgets() -> Outcome {
    let sc = square_control().unwrap();
    let m = circuit_matrix(&sc.circuit).unwrap();
    let control_ok = m.max_diff(&square_control_matrix()) <= TOL;
    let mut r = rng(6);
    let mut bad = 0;
    for _ in 0..20 {
        if !square_phase_pair(&random_rational(&mut r)).unwrap().verify(TOL).unwrap().passed {
            bad += 1;
        }
    }
    outcome(control_ok && bad == 0, format!("square control exact on 9 states: {control_ok}; pair failures {bad}/20"))
}

fn emulations() -> Outcome {
    let mut r = rng(7);
    let mut ket2_bad = 0;
    for _ in 0..20 {
        let eta = random_rational(&mut r);
        let e = emulate_ket2_qubit_phase(&eta).unwrap();
        let rep = check_emulation_dims(&circuit_matrix(&e.circuit).unwrap(), &ket2_qubit_phase(&eta), &[3, 2], TOL).unwrap();
        if !rep.passed {
            ket2_bad += 1;
        }
    }
    let half = emulate_ket2_qubit_phase(&rat(3, 2)).unwrap();
    let half_r = count_resources(&decompose_phases(&half.circuit)).r_count;
    let ccz = emulate_ccz().unwrap();
    let rep = check_emulation(&circuit_matrix(&ccz.circuit).unwrap(), &qubit_ccz(), 1e-12).unwrap();
    let counts = count_resources(&ccz.circuit);
    let ccz_ok = rep.passed && rep.leakage <= 1e-12 && ccz.circuit.n_wires == 3 && counts.r_count == 3 && counts.t_count == 0;
    let mut diag_bad = 0;
    for n in 1..=2 {
        for _ in 0..10 {
            let alphas: Vec<Rational> = (0..1 << n).map(|_| random_rational(&mut r)).collect();
            let e = emulate_qubit_diag(&alphas).unwrap();
            if !check_emulation(&circuit_matrix(&e.circuit).unwrap(), &qubit_diag(&alphas), TOL).unwrap().passed {
                diag_bad += 1;
            }
        }
    }
    outcome(
        ket2_bad == 0 && half_r == 3 && ccz_ok && diag_bad == 0,
        format!(
            "ket2 failures {ket2_bad}/20, eta=3/2 R-count {half_r}; CCZ leakage {:.1e}, wires {}, R {} T {}; diag failures {diag_bad}/20",
            rep.leakage, ccz.circuit.n_wires, counts.r_count, counts.t_count
        ),
    )
}

fn identities() -> Outcome {
    let ids = algebraic_identities();
    let failing: Vec<String> = ids
        .iter()
        .filter(|i| i.name != "H^2 = X12" && !i.holds)
        .map(|i| match i.factor {
            Some(f) => format!("{} (holds up to factor {:.3}{:+.3}i)", i.name, f[0], f[1]),
            None => i.name.clone(),
        })
        .collect();
    outcome(failing.is_empty(), format!("{} identities, failing {failing:?}", ids.len() - 1))
}

fn determinism() -> Outcome {
    let a = full_report(SEED, 20, TOL).map(|r| r.to_json());
    let b = full_report(SEED, 20, TOL).map(|r| r.to_json());
    match (a, b) {
        (Ok(a), Ok(b)) => outcome(a == b, format!("two reports of {} bytes, identical: {}", a.len(), a == b)),
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("rule soundness", rule_soundness),
        ("derivation replay", proof_replay),
        ("phase gadgets", phase_gadgets),
        ("controlled phases", controlled_phases),
        ("phase multipliers", phase_multipliers),
        ("square gadgets", square_gadgets),
        ("emulation", emulations),
        ("algebraic identities", identities),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.passed);
        println!("criterion {} {name}: {} ({})", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
