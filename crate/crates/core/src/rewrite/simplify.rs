//! A terminating simplification strategy.
//!
//! Each step strictly decreases `(vertices, H-boxes, edges)` in
//! lexicographic order:
//!
//! * self-loop removal on Z spiders (one edge fewer),
//! * ID, SZ, H4, H2 and the double-dualizer cancellation (vertices),
//! * a dualizer pair around a two-legged Z spider, removed by IN followed by
//!   double-dualizer cancellation (two vertices),
//! * harvestman fusion of an X spider with a one-legged X neighbour.
//!
//! B1, B2, EU, EU', the Pauli pushes and the colour changes H/H' can all grow
//! the diagram, so they are only ever applied explicitly.

use super::{apply, find_matches, Match, RuleName};
use crate::diagram::{Diagram, Generator, VertexId};
use crate::phase::Phase;

fn first_step(d: &Diagram) -> Option<Vec<Match>> {
    let pick = |rule: RuleName, keep: &dyn Fn(&Match) -> bool| find_matches(d, rule).into_iter().find(|m| keep(m));
    if let Some(m) = pick(RuleName::SP, &|m| m.variant == 0) {
        return Some(vec![m]);
    }
    for rule in [RuleName::ID, RuleName::SZ, RuleName::H4, RuleName::H2] {
        if let Some(m) = pick(rule, &|_| true) {
            return Some(vec![m]);
        }
    }
    if let Some(m) = pick(RuleName::IN, &|m| m.variant == 1) {
        return Some(vec![m]);
    }
    if let Some(m) = sandwich(d) {
        return Some(vec![m]);
    }
    pick(RuleName::SX, &|m| d.degree(m.anchor[1]) == 1).map(|m| vec![m])
}

/// IN at a dualizer whose Z spider has exactly one other leg, also a dualizer.
fn sandwich(d: &Diagram) -> Option<Match> {
    let is_dualizer = |v: VertexId| d.generator(v) == Some(&Generator::X(Phase::zero())) && d.degree(v) == 2;
    find_matches(d, RuleName::IN).into_iter().find(|m| {
        if m.variant != 0 {
            return false;
        }
        let (w, u) = (m.anchor[0], m.anchor[1]);
        let legs = d.incident(u);
        legs.len() == 2 && legs.iter().all(|&o| o != w && is_dualizer(o) || o == w) && legs.iter().any(|&o| o != w)
    })
}

/// Rewrite to the fixpoint, recording `(rule, anchor)` for each step.
pub fn simplify_traced(d: &Diagram) -> (Diagram, Vec<(RuleName, Vec<VertexId>)>) {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    while let Some(first) = first_step(&cur) {
        let m = &first[0];
        trace.push((m.rule, m.anchor.clone()));
        cur = apply(&cur, m).expect("fresh match applies");
        if m.rule == RuleName::IN && m.variant == 0 {
            // Finish the sandwich: the pushed dualizer now meets the other one.
            let pushed = cur.next_id() - 1;
            let pair = find_matches(&cur, RuleName::IN)
                .into_iter()
                .find(|n| n.variant == 1 && n.anchor.contains(&pushed));
            if let Some(n) = pair {
                trace.push((n.rule, n.anchor.clone()));
                cur = apply(&cur, &n).expect("fresh match applies");
            }
        }
    }
    (cur, trace)
}

pub fn simplify(d: &Diagram) -> Diagram {
    simplify_traced(d).0
}
