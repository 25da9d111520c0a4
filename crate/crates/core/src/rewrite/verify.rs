//! Numerical soundness checks by random instantiation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{apply, find_matches, Params, RuleName};
use crate::diagram::{Diagram, Generator, VertexId};
use crate::matrix::{scalar_equiv_tol, EquivMode, Verdict, DEFAULT_TOL};
use crate::phase::{rat, Phase, Rational};
use crate::semantics::eval;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleReport {
    pub rule: String,
    pub trials: usize,
    /// Individual comparisons (trials times trit values and variants).
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    /// True when every passing check held with factor exactly 1.
    pub exact: bool,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Random rational with denominator at most 24, in `[-3, 3]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let den = rng.gen_range(1..=24i64);
    let num = rng.gen_range(-3 * den..=3 * den);
    rat(num, den)
}

pub fn random_phase(rng: &mut impl Rng) -> Phase {
    Phase::new(random_rational(rng), random_rational(rng))
}

/// Stable per-trial seed.
pub fn trial_seed(seed: u64, salt: u64, trial: u64) -> u64 {
    let mut x = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ trial.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 31;
    x.wrapping_mul(0x94D0_49BB_1331_11EB)
}

fn leg(d: &mut Diagram, v: VertexId, rng: &mut impl Rng) {
    let b = if rng.gen_bool(0.5) { d.add_input() } else { d.add_output() };
    d.connect(b, v);
}

fn legs(d: &mut Diagram, v: VertexId, n: usize, rng: &mut impl Rng) {
    for _ in 0..n {
        leg(d, v, rng);
    }
}

/// A single left-hand instance: the diagram plus where the rule should match.
struct Instance {
    diagram: Diagram,
    anchor: Vec<VertexId>,
    variant: u8,
    params: Params,
}

fn inst(diagram: Diagram, anchor: Vec<VertexId>, variant: u8, params: Params) -> Instance {
    Instance { diagram, anchor, variant, params }
}

/// `box_kind` on one boundary leg of `v`.
fn boxed_leg(d: &mut Diagram, v: VertexId, g: Generator, rng: &mut impl Rng) -> VertexId {
    let b = d.add_vertex(g);
    d.connect(v, b);
    leg(d, b, rng);
    b
}

fn instances(rule: RuleName, rng: &mut ChaCha8Rng) -> Vec<Instance> {
    let mut out = Vec::new();
    let none = Params::default;
    match rule {
        RuleName::SZ => {
            let mut d = Diagram::new();
            let u = d.add_vertex(Generator::Z(random_phase(rng)));
            let v = d.add_vertex(Generator::Z(random_phase(rng)));
            for _ in 0..rng.gen_range(1..=2) {
                d.connect(u, v);
            }
            if rng.gen_bool(0.25) {
                d.connect(u, u);
            }
            let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            legs(&mut d, u, a, rng);
            legs(&mut d, v, b, rng);
            out.push(inst(d, vec![u, v], 0, none()));
        }
        RuleName::H | RuleName::HPrime => {
            let mut d = Diagram::new();
            let p = random_phase(rng);
            let u = d.add_vertex(if rule == RuleName::H { Generator::X(p) } else { Generator::Z(p) });
            for _ in 0..rng.gen_range(1..=4) {
                boxed_leg(&mut d, u, Generator::H, rng);
            }
            out.push(inst(d, vec![u], 0, none()));
        }
        RuleName::B1 => {
            let mut d = Diagram::new();
            let z = d.add_vertex(Generator::Z(Phase::zero()));
            let v = d.add_vertex(Generator::X(Phase::zero()));
            d.connect(z, v);
            let n = rng.gen_range(0..=4);
            legs(&mut d, v, n, rng);
            out.push(inst(d, vec![z, v], 0, none()));
        }
        RuleName::B2 => {
            let mut d = Diagram::new();
            let u = d.add_vertex(Generator::Z(Phase::zero()));
            let v = d.add_vertex(Generator::X(Phase::zero()));
            d.connect(u, v);
            let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            legs(&mut d, u, a, rng);
            legs(&mut d, v, b, rng);
            out.push(inst(d, vec![u, v], 0, none()));
        }
        RuleName::SP => {
            let mut d = Diagram::new();
            let u = d.add_vertex(Generator::Z(random_phase(rng)));
            d.connect(u, u);
            let n = rng.gen_range(0..=3);
            legs(&mut d, u, n, rng);
            out.push(inst(d, vec![u], 0, none()));

            let mut d = Diagram::new();
            let u = d.add_vertex(Generator::Z(Phase::zero()));
            let v = d.add_vertex(Generator::Z(Phase::zero()));
            d.connect(u, v);
            d.connect(u, v);
            leg(&mut d, u, rng);
            leg(&mut d, v, rng);
            out.push(inst(d, vec![u, v], 1, none()));
        }
        RuleName::P1 | RuleName::P1Prime => {
            for x in 0..3 {
                let mut d = Diagram::new();
                let (s, v) = if rule == RuleName::P1 {
                    (d.add_vertex(Generator::Z(Phase::pauli(x))), d.add_vertex(Generator::X(random_phase(rng))))
                } else {
                    (d.add_vertex(Generator::X(Phase::pauli(x))), d.add_vertex(Generator::Z(random_phase(rng))))
                };
                d.connect(s, v);
                let n = rng.gen_range(0..=4);
                legs(&mut d, v, n, rng);
                out.push(inst(d, vec![s, v], 0, Params::trit(x)));
            }
        }
        RuleName::P2 | RuleName::P2Prime => {
            for x in 0..3 {
                let mut d = Diagram::new();
                let (w, u) = if rule == RuleName::P2 {
                    (d.add_vertex(Generator::X(Phase::pauli(x))), d.add_vertex(Generator::Z(random_phase(rng))))
                } else {
                    (d.add_vertex(Generator::Z(Phase::pauli(x))), d.add_vertex(Generator::X(random_phase(rng))))
                };
                d.connect(w, u);
                leg(&mut d, w, rng);
                let n = rng.gen_range(0..=3);
                legs(&mut d, u, n, rng);
                out.push(inst(d, vec![w, u], 0, Params::trit(x)));
            }
        }
        RuleName::IN => {
            let mut d = Diagram::new();
            let w = d.add_vertex(Generator::X(Phase::zero()));
            let u = d.add_vertex(Generator::Z(random_phase(rng)));
            d.connect(w, u);
            leg(&mut d, w, rng);
            let n = rng.gen_range(0..=3);
            legs(&mut d, u, n, rng);
            out.push(inst(d, vec![w, u], 0, none()));

            let mut d = Diagram::new();
            let a = d.add_vertex(Generator::X(Phase::zero()));
            let b = d.add_vertex(Generator::X(Phase::zero()));
            d.connect(a, b);
            leg(&mut d, a, rng);
            leg(&mut d, b, rng);
            out.push(inst(d, vec![a, b], 1, none()));
        }
        RuleName::EU | RuleName::EUPrime => {
            let kinds: &[(Generator, u8)] = if rule == RuleName::EU {
                &[(Generator::H, 0)]
            } else {
                &[(Generator::HDag, 0), (Generator::H, 1)]
            };
            for (g, variant) in kinds {
                let mut d = Diagram::new();
                let h = d.add_vertex(g.clone());
                leg(&mut d, h, rng);
                leg(&mut d, h, rng);
                out.push(inst(d, vec![h], *variant, none()));
            }
        }
        RuleName::ID => {
            let mut d = Diagram::new();
            let z = d.add_vertex(Generator::Z(Phase::zero()));
            leg(&mut d, z, rng);
            leg(&mut d, z, rng);
            out.push(inst(d, vec![z], 0, none()));
        }
        RuleName::H2 => {
            for (g1, g2) in [
                (Generator::H, Generator::H),
                (Generator::HDag, Generator::HDag),
                (Generator::H, Generator::HDag),
                (Generator::HDag, Generator::H),
            ] {
                let mut d = Diagram::new();
                let a = d.add_vertex(g1);
                let b = d.add_vertex(g2);
                d.connect(a, b);
                leg(&mut d, a, rng);
                leg(&mut d, b, rng);
                out.push(inst(d, vec![a, b], 0, none()));
            }
        }
        RuleName::H4 => {
            for g in [Generator::H, Generator::HDag] {
                let mut d = Diagram::new();
                let hs: Vec<VertexId> = (0..4).map(|_| d.add_vertex(g.clone())).collect();
                for w in hs.windows(2) {
                    d.connect(w[0], w[1]);
                }
                leg(&mut d, hs[0], rng);
                leg(&mut d, hs[3], rng);
                out.push(inst(d, hs, 0, none()));
            }
        }
        RuleName::SX => {
            let mut d = Diagram::new();
            let u = d.add_vertex(Generator::X(random_phase(rng)));
            let v = d.add_vertex(Generator::X(random_phase(rng)));
            d.connect(u, v);
            let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            legs(&mut d, u, a, rng);
            legs(&mut d, v, b, rng);
            let anchor = if rng.gen_bool(0.5) { vec![u, v] } else { vec![v, u] };
            out.push(inst(d, anchor, 0, none()));
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    max_residual: f64,
    exact: bool,
}

fn compare(lhs: &Diagram, rhs: &Diagram, tol: f64) -> (bool, f64, bool) {
    match (eval(lhs), eval(rhs)) {
        (Ok(a), Ok(b)) => match scalar_equiv_tol(&a, &b, EquivMode::PositiveReal, tol) {
            Ok(r) => (r.is_equivalent(), r.residual, r.verdict == Verdict::EqualExact),
            Err(_) => (false, f64::INFINITY, false),
        },
        _ => (false, f64::INFINITY, false),
    }
}

/// Compare pairs of diagrams produced by `build` over `trials` seeded trials.
pub fn verify_instances<F>(name: &str, trials: usize, seed: u64, build: F) -> RuleReport
where
    F: Fn(&mut ChaCha8Rng) -> Vec<(Diagram, Diagram)> + Sync,
{
    let salt = name.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let tallies: Vec<Tally> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, salt, t));
            let mut tally = Tally { exact: true, ..Tally::default() };
            for (lhs, rhs) in build(&mut rng) {
                let (ok, residual, exact) = compare(&lhs, &rhs, DEFAULT_TOL);
                tally.checks += 1;
                if ok {
                    tally.max_residual = tally.max_residual.max(residual);
                    tally.exact &= exact;
                } else {
                    tally.failures += 1;
                    tally.max_residual = f64::max(tally.max_residual, residual);
                    tally.exact = false;
                }
            }
            tally
        })
        .collect();
    let mut report = RuleReport {
        rule: name.to_string(),
        trials,
        checks: 0,
        failures: 0,
        max_residual: 0.0,
        exact: true,
    };
    for t in tallies {
        report.checks += t.checks;
        report.failures += t.failures;
        report.max_residual = report.max_residual.max(t.max_residual);
        report.exact &= t.exact;
    }
    report
}

/// Instantiate the rule's left-hand side with random phases (and every
/// trit value where the rule has one), rewrite it with the engine, and
/// compare semantics before and after in positive-real mode.
pub fn verify_rule(rule: RuleName, trials: usize, seed: u64) -> RuleReport {
    verify_instances(rule.as_str(), trials.max(1), seed, |rng| {
        instances(rule, rng)
            .into_iter()
            .map(|i| {
                let found = find_matches(&i.diagram, rule)
                    .into_iter()
                    .find(|m| m.anchor == i.anchor && m.variant == i.variant && m.params == i.params);
                let rhs = match found {
                    Some(m) => apply(&i.diagram, &m).unwrap_or_else(|_| Diagram::new()),
                    // A missing match is reported as a failed comparison.
                    None => Diagram::new(),
                };
                (i.diagram, rhs)
            })
            .collect()
    })
}

/// Every basic and derived rule, in a fixed order.
pub fn verify_all(trials: usize, seed: u64) -> Vec<RuleReport> {
    RuleName::all().into_iter().map(|r| verify_rule(r, trials, seed)).collect()
}
