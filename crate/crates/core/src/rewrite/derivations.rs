//! Derivations of the derived rules from the basic ones, as replayable
//! proof scripts.
//!
//! Each script starts from a concrete left-hand side (generic phases where
//! the rule has them) and ends at the right-hand side carrying the rule's
//! scalar. H–H† cancellation is used as the definition of H†.

use std::collections::BTreeSet;

use super::{apply, find_matches, Direction, Match, Params, ProofScript, ProofStep, RuleName};
use crate::diagram::{Diagram, Generator, VertexId};
use crate::error::{Error, Result};
use crate::phase::{rat, Phase};
use crate::scalar::Scalar;

struct Recorder {
    start: Diagram,
    cur: Diagram,
    steps: Vec<ProofStep>,
}

impl Recorder {
    fn new(start: Diagram) -> Self {
        Recorder { cur: start.clone(), start, steps: Vec::new() }
    }

    fn run(&mut self, m: Match) -> Result<Vec<VertexId>> {
        let before: BTreeSet<VertexId> = self.cur.vertex_ids().into_iter().collect();
        self.cur = apply(&self.cur, &m)?;
        self.steps.push(ProofStep {
            rule: m.rule,
            direction: m.direction,
            variant: m.variant,
            anchor: m.anchor.clone(),
            params: if m.direction == Direction::Forward && m.params.trit.is_none() { Params::default() } else { m.params },
        });
        Ok(self.cur.vertex_ids().into_iter().filter(|v| !before.contains(v)).collect())
    }

    fn fwd(&mut self, rule: RuleName, keep: impl Fn(&Match) -> bool) -> Result<Vec<VertexId>> {
        let m = find_matches(&self.cur, rule)
            .into_iter()
            .find(|m| keep(m))
            .ok_or_else(|| Error::NoMatch(format!("{rule} found nowhere suitable")))?;
        self.run(m)
    }

    fn at(&mut self, rule: RuleName, anchor: &[VertexId]) -> Result<Vec<VertexId>> {
        self.fwd(rule, |m| m.anchor == anchor)
    }

    fn bwd(&mut self, rule: RuleName, variant: u8, anchor: Vec<VertexId>, params: Params) -> Result<Vec<VertexId>> {
        let m = Match::backward(&self.cur, rule, variant, anchor, params);
        self.run(m)
    }

    fn finish(self, name: &str, derives: RuleName, target: Diagram) -> ProofScript {
        ProofScript { name: name.to_string(), derives, start: self.start, target, steps: self.steps }
    }

    fn gen(&self, v: VertexId) -> Option<&Generator> {
        self.cur.generator(v)
    }
}

fn chain(gs: &[Generator], outputs: usize) -> (Diagram, Vec<VertexId>) {
    let mut d = Diagram::new();
    let i = d.add_input();
    let mut prev = i;
    let mut ids = Vec::new();
    for g in gs {
        let v = d.add_vertex(g.clone());
        d.connect(prev, v);
        prev = v;
        ids.push(v);
    }
    for _ in 0..outputs {
        let o = d.add_output();
        d.connect(prev, o);
    }
    (d, ids)
}

fn with_scalar(mut d: Diagram, s: Scalar) -> Diagram {
    d.set_scalar(s);
    d
}

fn generic() -> Phase {
    Phase::ratios((1, 5), (-2, 7))
}

fn generic2() -> Phase {
    Phase::ratios((3, 4), (1, 9))
}

fn dualizer() -> Generator {
    Generator::X(Phase::zero())
}

fn id_rule() -> Result<ProofScript> {
    let (start, ids) = chain(&[Generator::Z(Phase::zero())], 1);
    let z = ids[0];
    let o = 2;
    let mut r = Recorder::new(start);
    r.bwd(RuleName::SP, 0, vec![z], Params::default())?;
    let w = r.bwd(RuleName::SZ, 0, vec![z], Params { phase: Some(Phase::zero()), legs: vec![o, z], ..Params::default() })?[0];
    r.at(RuleName::SP, &[z, w])?;
    Ok(r.finish("ID", RuleName::ID, Diagram::identity(1)))
}

fn h2_rule() -> Result<ProofScript> {
    let (start, ids) = chain(&[Generator::H, Generator::H], 1);
    let mut r = Recorder::new(start);
    let z = r.bwd(RuleName::ID, 0, vec![ids[0], ids[1]], Params::default())?[0];
    r.at(RuleName::HPrime, &[z])?;
    Ok(r.finish("H2", RuleName::H2, chain(&[dualizer()], 1).0))
}

fn h4_rule() -> Result<ProofScript> {
    let (start, h) = chain(&[Generator::H, Generator::H, Generator::H, Generator::H], 1);
    let mut r = Recorder::new(start);
    let dd = r.at(RuleName::H2, &[h[1], h[2]])?[0];
    r.at(RuleName::H, &[dd])?;
    r.at(RuleName::ID, &[dd])?;
    Ok(r.finish("H4", RuleName::H4, Diagram::identity(1)))
}

/// A dualizer pushed through a Z spider is the Pauli push with `x = 0`.
fn in_push() -> Result<ProofScript> {
    let p = generic();
    let (start, ids) = chain(&[dualizer(), Generator::Z(p.clone())], 2);
    let mut r = Recorder::new(start);
    r.fwd(RuleName::P2, |m| m.anchor == ids && m.params.trit == Some(0))?;
    let mut target = Diagram::new();
    let i = target.add_input();
    let u = target.add_vertex(Generator::Z(p.swapped()));
    target.connect(i, u);
    for _ in 0..2 {
        let b = target.add_vertex(dualizer());
        let o = target.add_output();
        target.connect(u, b);
        target.connect(b, o);
    }
    Ok(r.finish("IN-push", RuleName::IN, target))
}

fn in_cancel() -> Result<ProofScript> {
    let (start, ids) = chain(&[dualizer(), dualizer()], 1);
    let mut r = Recorder::new(start);
    r.bwd(RuleName::H2, 0, vec![ids[0]], Params::default())?;
    r.bwd(RuleName::H2, 0, vec![ids[1]], Params::default())?;
    r.fwd(RuleName::H4, |_| true)?;
    Ok(r.finish("IN-cancel", RuleName::IN, Diagram::identity(1)))
}

fn sx_rule() -> Result<ProofScript> {
    let (p, q) = (generic(), generic2());
    let mut start = Diagram::new();
    let i = start.add_input();
    let u = start.add_vertex(Generator::X(p.clone()));
    let v = start.add_vertex(Generator::X(q.clone()));
    start.connect(i, u);
    start.connect(u, v);
    for _ in 0..2 {
        let o = start.add_output();
        start.connect(v, o);
    }
    let mut r = Recorder::new(start);
    let ub = r.bwd(RuleName::HPrime, 0, vec![u], Params::default())?;
    let hu = *ub.iter().find(|&&b| r.cur.neighbours(b).contains(&v)).expect("box on the u-v edge");
    let vb = r.bwd(RuleName::HPrime, 0, vec![v], Params::default())?;
    let hv = *vb.iter().find(|&&b| r.cur.neighbours(b).contains(&hu)).expect("box next to hu");
    let dd = r.at(RuleName::H2, &[hu.min(hv), hu.max(hv)])?[0];
    let pushed = r.at(RuleName::IN, &[dd, v])?;
    r.at(RuleName::SZ, &[u, v])?;
    for e in pushed {
        r.bwd(RuleName::H2, 0, vec![e], Params::default())?;
    }
    r.at(RuleName::HPrime, &[u])?;
    while r.fwd(RuleName::H2, |_| true).is_ok() {}

    let mut target = Diagram::new();
    let i = target.add_input();
    let u = target.add_vertex(Generator::X(Phase::new(p.a() + q.b(), p.b() + q.a())));
    target.connect(i, u);
    for _ in 0..2 {
        let b = target.add_vertex(dualizer());
        let o = target.add_output();
        target.connect(u, b);
        target.connect(b, o);
    }
    Ok(r.finish("SX", RuleName::SX, target))
}

fn p1_prime(x: i64) -> Result<ProofScript> {
    let p = generic();
    let mut start = Diagram::new();
    let s = start.add_vertex(Generator::X(Phase::pauli(x)));
    let v = start.add_vertex(Generator::Z(p.clone()));
    start.connect(s, v);
    for _ in 0..2 {
        let o = start.add_output();
        start.connect(v, o);
    }
    let mut r = Recorder::new(start);
    let hs = r.bwd(RuleName::HPrime, 0, vec![s], Params::default())?[0];
    let vb = r.bwd(RuleName::H, 0, vec![v], Params::default())?;
    let hv = *vb.iter().find(|&&b| r.cur.neighbours(b).contains(&hs)).expect("box next to hs");
    let dd = r.at(RuleName::H2, &[hs.min(hv), hs.max(hv)])?[0];
    r.at(RuleName::IN, &[dd, s])?;
    let states = r.fwd(RuleName::P1, |m| m.anchor == [s, v])?;
    for t in states {
        r.at(RuleName::HPrime, &[t])?;
    }
    let mut target = Diagram::new();
    for _ in 0..2 {
        let t = target.add_vertex(Generator::X(Phase::pauli(x)));
        let o = target.add_output();
        target.connect(t, o);
    }
    Ok(r.finish(&format!("P1'-x{x}"), RuleName::P1Prime, with_scalar(target, Scalar::omega(p.component(x)))))
}

fn p2_prime(x: i64) -> Result<ProofScript> {
    let p = generic();
    let (start, ids) = chain(&[Generator::Z(Phase::pauli(x)), Generator::X(p.clone())], 2);
    let (w, v) = (ids[0], ids[1]);
    let mut r = Recorder::new(start);
    let wb = r.bwd(RuleName::H, 0, vec![w], Params::default())?;
    let hb = *wb.iter().find(|&&b| r.cur.neighbours(b).contains(&v)).expect("box on the w-v edge");
    let vb = r.bwd(RuleName::HPrime, 0, vec![v], Params::default())?;
    let hc = *vb.iter().find(|&&b| r.cur.neighbours(b).contains(&hb)).expect("box next to hb");
    let dd = r.at(RuleName::H2, &[hb.min(hc), hb.max(hc)])?[0];
    let pushed = r.at(RuleName::IN, &[dd, v])?;
    let boxes = r.fwd(RuleName::P2, |m| m.anchor == [w, v])?;
    for b in boxes {
        r.bwd(RuleName::HPrime, 0, vec![b], Params::default())?;
    }
    for e in pushed {
        r.bwd(RuleName::H2, 0, vec![e], Params::default())?;
    }
    while r.fwd(RuleName::H4, |_| true).is_ok() {}
    r.at(RuleName::HPrime, &[v])?;

    let q = Phase::new(p.component(x + 1) - p.component(x), p.component(x + 2) - p.component(x));
    let mut target = Diagram::new();
    let i = target.add_input();
    let u = target.add_vertex(Generator::X(q));
    target.connect(i, u);
    for _ in 0..2 {
        let b = target.add_vertex(Generator::Z(Phase::pauli(-x)));
        let o = target.add_output();
        target.connect(u, b);
        target.connect(b, o);
    }
    Ok(r.finish(&format!("P2'-x{x}"), RuleName::P2Prime, with_scalar(target, Scalar::omega(p.component(x)))))
}

/// `H† = i · Z(2,2) X(2,2) Z(2,2)`: insert the inverse of the Euler chain
/// next to `H†`, fold half of it back into `H` and cancel.
fn eu_prime_dagger() -> Result<ProofScript> {
    let one = Phase::ints(1, 1);
    let two = Phase::ints(2, 2);
    let (start, ids) = chain(&[Generator::HDag], 1);
    let (hd, o) = (ids[0], 2);
    let mut r = Recorder::new(start);
    let z0 = r.bwd(RuleName::ID, 0, vec![hd, o], Params::default())?[0];
    let w = r.bwd(RuleName::SZ, 0, vec![z0], Params { phase: Some(one.clone()), legs: vec![hd], ..Params::default() })?[0];
    let ds = r.bwd(RuleName::IN, 1, vec![w, z0], Params::default())?;
    let (d1, d2) = if r.cur.neighbours(ds[0]).contains(&w) { (ds[0], ds[1]) } else { (ds[1], ds[0]) };
    let v = r.bwd(RuleName::SX, 0, vec![d1], Params { phase: Some(two.clone()), legs: vec![d2], ..Params::default() })?[0];
    let z1 = r.bwd(RuleName::ID, 0, vec![d1, v], Params::default())?[0];
    let w2 = r.bwd(RuleName::SZ, 0, vec![z1], Params { phase: Some(one), legs: vec![d1], ..Params::default() })?[0];
    let h = r.bwd(RuleName::EU, 0, vec![w, d1, w2], Params::default())?[0];
    r.at(RuleName::H2, &[hd.min(h), hd.max(h)])?;
    let target = chain(&[Generator::Z(two.clone()), Generator::X(two.clone()), Generator::Z(two)], 1).0;
    Ok(r.finish("EU'-dagger", RuleName::EUPrime, with_scalar(target, Scalar::omega(rat(3, 4)))))
}

/// `H = i · X(2,2) Z(2,2) X(2,2)` via `H = H H† H` and colour changes.
fn eu_prime_x() -> Result<ProofScript> {
    let two = Phase::ints(2, 2);
    let (start, ids) = chain(&[Generator::H], 1);
    let (h, o) = (ids[0], 2);
    let mut r = Recorder::new(start);
    let pair = r.bwd(RuleName::H2, 2, vec![o, h], Params::default())?;
    let hd = *pair.iter().find(|&&b| r.gen(b) == Some(&Generator::HDag)).expect("inserted H dagger");
    let zxz = r.fwd(RuleName::EUPrime, |m| m.anchor == [hd] && m.variant == 0)?;
    let xx = *zxz.iter().find(|&&b| matches!(r.gen(b), Some(Generator::X(_)))).expect("middle X");
    r.bwd(RuleName::HPrime, 0, vec![xx], Params::default())?;
    for z in zxz.into_iter().filter(|&b| b != xx) {
        r.at(RuleName::HPrime, &[z])?;
    }
    let target = chain(&[Generator::X(two.clone()), Generator::Z(two.clone()), Generator::X(two)], 1).0;
    Ok(r.finish("EU'-H", RuleName::EUPrime, with_scalar(target, Scalar::omega(rat(3, 4)))))
}

/// Every derivation, in dependency order.
pub fn derivations() -> Result<Vec<ProofScript>> {
    let mut out = vec![id_rule()?, h2_rule()?, h4_rule()?, in_push()?, in_cancel()?, sx_rule()?];
    for x in 0..3 {
        out.push(p1_prime(x)?);
    }
    for x in 0..3 {
        out.push(p2_prime(x)?);
    }
    out.push(eu_prime_dagger()?);
    out.push(eu_prime_x()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::replay;

    #[test]
    fn every_derivation_replays() {
        let scripts = derivations().unwrap();
        for s in &scripts {
            let back = ProofScript::from_json(&s.to_json()).unwrap();
            let report = replay(&back).unwrap_or_else(|e| panic!("{}: {e}", s.name));
            assert!(report.steps > 0);
        }
        let covered: BTreeSet<RuleName> = scripts.iter().map(|s| s.derives).collect();
        for r in RuleName::DERIVED {
            assert!(covered.contains(&r), "{r}");
        }
    }

    #[test]
    fn derivations_only_use_rules_proved_earlier() {
        let mut proved: BTreeSet<RuleName> = RuleName::BASIC.into_iter().collect();
        let scripts = derivations().unwrap();
        for s in &scripts {
            for step in &s.steps {
                assert!(proved.contains(&step.rule), "{} uses {}", s.name, step.rule);
            }
            proved.insert(s.derives);
        }
    }
}
