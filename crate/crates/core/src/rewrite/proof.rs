//! Machine-checkable derivations: a start diagram, a list of rule
//! applications and the diagram they must end at.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{apply, find_matches, Direction, Match, Params, RuleName};
use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::matrix::{scalar_equiv, EquivMode, Verdict};
use crate::semantics::eval;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStep {
    pub rule: RuleName,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default)]
    pub variant: u8,
    pub anchor: Vec<VertexId>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofScript {
    pub name: String,
    pub derives: RuleName,
    pub start: Diagram,
    pub target: Diagram,
    pub steps: Vec<ProofStep>,
}

impl ProofScript {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof script always serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayReport {
    pub name: String,
    pub derives: RuleName,
    pub steps: usize,
    /// Largest residual of any intermediate diagram against the start.
    pub max_residual: f64,
    pub rules_used: Vec<RuleName>,
}

/// Resolve a step against the current diagram.
pub fn step_match(d: &Diagram, step: &ProofStep) -> Result<Match> {
    match step.direction {
        Direction::Backward => Ok(Match::backward(d, step.rule, step.variant, step.anchor.clone(), step.params.clone())),
        Direction::Forward => find_matches(d, step.rule)
            .into_iter()
            .find(|m| {
                m.anchor == step.anchor
                    && m.variant == step.variant
                    && (step.params.trit.is_none() || m.params.trit == step.params.trit)
            })
            .ok_or_else(|| Error::NoMatch(format!("{} has no match at {:?}", step.rule, step.anchor))),
    }
}

/// Apply every step, checking semantics after each one, then require the
/// result to be isomorphic to the target.
pub fn replay(script: &ProofScript) -> Result<ReplayReport> {
    let reference = eval(&script.start)?;
    let mut cur = script.start.clone();
    let mut max_residual: f64 = 0.0;
    let mut rules_used = Vec::new();
    for (i, step) in script.steps.iter().enumerate() {
        let m = step_match(&cur, step).map_err(|e| Error::Replay(format!("step {i}: {e}")))?;
        cur = apply(&cur, &m).map_err(|e| Error::Replay(format!("step {i} ({}): {e}", step.rule)))?;
        let r = scalar_equiv(&eval(&cur)?, &reference, EquivMode::AnyNonzero)?;
        if r.verdict != Verdict::EqualExact {
            return Err(Error::Replay(format!(
                "step {i} ({}) changed the semantics (residual {:.3e})",
                step.rule, r.residual
            )));
        }
        max_residual = max_residual.max(r.residual);
        if !rules_used.contains(&step.rule) {
            rules_used.push(step.rule);
        }
    }
    if !isomorphic(&cur, &script.target) {
        return Err(Error::Replay(format!("{}: final diagram does not match the target", script.name)));
    }
    let r = scalar_equiv(&eval(&script.target)?, &reference, EquivMode::AnyNonzero)?;
    if r.verdict != Verdict::EqualExact {
        return Err(Error::Replay(format!("{}: target differs from start semantically", script.name)));
    }
    Ok(ReplayReport { name: script.name.clone(), derives: script.derives, steps: script.steps.len(), max_residual, rules_used })
}

/// Graph isomorphism preserving generators, edge multiplicities, boundary
/// positions and the scalar.
pub fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
    if a.scalar() != b.scalar()
        || a.num_vertices() != b.num_vertices()
        || a.num_edges() != b.num_edges()
        || a.inputs().len() != b.inputs().len()
        || a.outputs().len() != b.outputs().len()
    {
        return false;
    }
    let mut map = BTreeMap::new();
    let mut used = BTreeMap::new();
    for (x, y) in a.inputs().iter().zip(b.inputs()).chain(a.outputs().iter().zip(b.outputs())) {
        map.insert(*x, *y);
        used.insert(*y, *x);
    }
    let order: Vec<VertexId> = a.vertex_ids().into_iter().filter(|v| !map.contains_key(v)).collect();
    extend(a, b, &order, 0, &mut map, &mut used)
}

fn consistent(a: &Diagram, b: &Diagram, v: VertexId, w: VertexId, map: &BTreeMap<VertexId, VertexId>) -> bool {
    if a.generator(v) != b.generator(w) || a.degree(v) != b.degree(w) || a.loop_count(v) != b.loop_count(w) {
        return false;
    }
    map.iter().all(|(&x, &y)| a.edge_multiplicity(v, x) == b.edge_multiplicity(w, y))
}

fn extend(
    a: &Diagram,
    b: &Diagram,
    order: &[VertexId],
    i: usize,
    map: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeMap<VertexId, VertexId>,
) -> bool {
    if i == order.len() {
        return a.edges().iter().all(|&(x, y)| a.edge_multiplicity(x, y) == b.edge_multiplicity(map[&x], map[&y]));
    }
    let v = order[i];
    for w in b.vertex_ids() {
        if used.contains_key(&w) || !consistent(a, b, v, w, map) {
            continue;
        }
        map.insert(v, w);
        used.insert(w, v);
        if extend(a, b, order, i + 1, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}
