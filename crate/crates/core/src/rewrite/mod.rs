//! Local rewrite rules, matching and application.
//!
//! A rule relates a left-hand pattern to a right-hand pattern together with
//! an exact scalar `delta` such that `eval(lhs) = delta · eval(rhs)`.
//! Applying a rule left to right multiplies the diagram scalar by `delta`, and
//! right to left by its inverse, so every application preserves semantics
//! exactly, factors of `√3` included.

mod rules;
pub mod derivations;
pub mod proof;
pub mod simplify;
pub mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, Generator, VertexId};
use crate::error::{Error, Result};
use crate::phase::Phase;

pub use proof::{replay, ProofScript, ProofStep, ReplayReport};
pub use simplify::{simplify, simplify_traced};
pub use verify::{verify_all, verify_instances, verify_rule, RuleReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    SZ,
    H,
    HPrime,
    B1,
    B2,
    SP,
    P1,
    P2,
    EU,
    ID,
    H2,
    H4,
    IN,
    P2Prime,
    P1Prime,
    SX,
    EUPrime,
}

impl RuleName {
    pub const BASIC: [RuleName; 9] = [
        RuleName::SZ,
        RuleName::H,
        RuleName::HPrime,
        RuleName::B1,
        RuleName::B2,
        RuleName::SP,
        RuleName::P1,
        RuleName::P2,
        RuleName::EU,
    ];

    pub const DERIVED: [RuleName; 8] = [
        RuleName::ID,
        RuleName::H2,
        RuleName::H4,
        RuleName::IN,
        RuleName::P2Prime,
        RuleName::P1Prime,
        RuleName::SX,
        RuleName::EUPrime,
    ];

    pub fn all() -> Vec<RuleName> {
        RuleName::BASIC.iter().chain(RuleName::DERIVED.iter()).copied().collect()
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleName::SZ => "SZ",
            RuleName::H => "H",
            RuleName::HPrime => "H'",
            RuleName::B1 => "B1",
            RuleName::B2 => "B2",
            RuleName::SP => "SP",
            RuleName::P1 => "P1",
            RuleName::P2 => "P2",
            RuleName::EU => "EU",
            RuleName::ID => "ID",
            RuleName::H2 => "H2",
            RuleName::H4 => "H4",
            RuleName::IN => "IN",
            RuleName::P2Prime => "P2'",
            RuleName::P1Prime => "P1'",
            RuleName::SX => "SX",
            RuleName::EUPrime => "EU'",
        }
    }

    /// Whether the rule has a trit parameter `x`.
    pub fn has_trit(&self) -> bool {
        matches!(self, RuleName::P1 | RuleName::P2 | RuleName::P1Prime | RuleName::P2Prime)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RuleName::all()
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = RuleName::all().iter().map(|r| r.as_str()).collect();
                Error::Parse(format!("unknown rule {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl Serialize for RuleName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RuleName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

/// Variable bindings of a match. Forward matches fill these in from the
/// diagram; backward steps supply whatever the created pattern needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trit: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub legs: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl Params {
    pub fn trit(x: i64) -> Self {
        Params { trit: Some(x), ..Params::default() }
    }

    pub fn phase(p: Phase) -> Self {
        Params { phase: Some(p), ..Params::default() }
    }
}

type Snapshot = Vec<(VertexId, Option<Generator>, Vec<VertexId>)>;

/// A located rule instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub rule: RuleName,
    pub direction: Direction,
    pub variant: u8,
    /// Bound diagram vertices in pattern order.
    pub anchor: Vec<VertexId>,
    pub params: Params,
    snapshot: Snapshot,
}

impl Match {
    fn with_snapshot(d: &Diagram, rule: RuleName, direction: Direction, variant: u8, anchor: Vec<VertexId>, params: Params) -> Self {
        let snapshot = take_snapshot(d, &anchor);
        Match { rule, direction, variant, anchor, params, snapshot }
    }

    /// A right-to-left application site. Validity is checked by [`apply`].
    pub fn backward(d: &Diagram, rule: RuleName, variant: u8, anchor: Vec<VertexId>, params: Params) -> Self {
        Match::with_snapshot(d, rule, Direction::Backward, variant, anchor, params)
    }

    /// A left-to-right site given explicitly rather than via [`find_matches`].
    pub fn forward(d: &Diagram, rule: RuleName, variant: u8, anchor: Vec<VertexId>, params: Params) -> Self {
        Match::with_snapshot(d, rule, Direction::Forward, variant, anchor, params)
    }
}

fn take_snapshot(d: &Diagram, anchor: &[VertexId]) -> Snapshot {
    anchor
        .iter()
        .map(|&v| (v, d.generator(v).cloned(), if d.contains(v) { d.incident(v) } else { Vec::new() }))
        .collect()
}

/// Adjacency lists (other endpoint per edge-end) for every vertex.
pub(crate) type Adjacency = BTreeMap<VertexId, Vec<VertexId>>;

pub(crate) fn adjacency(d: &Diagram) -> Adjacency {
    let mut adj: Adjacency = d.vertex_ids().into_iter().map(|v| (v, Vec::new())).collect();
    for &(a, b) in d.edges() {
        adj.get_mut(&a).unwrap().push(b);
        adj.get_mut(&b).unwrap().push(a);
    }
    adj
}

/// All left-to-right matches of `rule`, sorted by anchor (lowest ids first).
pub fn find_matches(d: &Diagram, rule: RuleName) -> Vec<Match> {
    let adj = adjacency(d);
    let mut found = rules::find(d, &adj, rule);
    found.sort_by(|a, b| (&a.anchor, a.variant).cmp(&(&b.anchor, b.variant)));
    found
        .into_iter()
        .map(|c| Match::with_snapshot(d, rule, Direction::Forward, c.variant, c.anchor, c.params))
        .collect()
}

/// Apply a match, returning the rewritten diagram.
pub fn apply(d: &Diagram, m: &Match) -> Result<Diagram> {
    if take_snapshot(d, &m.anchor) != m.snapshot {
        return Err(Error::StaleMatch(format!("{} at {:?}", m.rule, m.anchor)));
    }
    let mut out = d.clone();
    let adj = adjacency(d);
    let delta = match m.direction {
        Direction::Forward => {
            let current = rules::find(d, &adj, m.rule);
            let ok = current
                .iter()
                .any(|c| c.anchor == m.anchor && c.variant == m.variant && c.params == m.params);
            if !ok {
                return Err(Error::NoMatch(format!("{} does not match at {:?}", m.rule, m.anchor)));
            }
            rules::apply_forward(&mut out, &adj, m)?
        }
        Direction::Backward => rules::apply_backward(&mut out, &adj, m)?.inverse(),
    };
    out.mul_scalar(&delta);
    Ok(out)
}

/// Apply the first match of `rule` anchored exactly at `anchor`.
pub fn apply_at(d: &Diagram, rule: RuleName, anchor: &[VertexId]) -> Result<Diagram> {
    let m = find_matches(d, rule)
        .into_iter()
        .find(|m| m.anchor == anchor)
        .ok_or_else(|| Error::NoMatch(format!("{rule} has no match at {anchor:?}")))?;
    apply(d, &m)
}

#[cfg(test)]
mod tests;
