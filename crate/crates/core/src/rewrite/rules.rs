//! Pattern recognition and replacement for each rule.

use super::{Adjacency, Direction, Match, Params, RuleName};
use crate::diagram::{Diagram, Generator, VertexId};
use crate::error::{Error, Result};
use crate::phase::{rat, Phase};
use crate::scalar::Scalar;

pub(crate) struct Candidate {
    pub variant: u8,
    pub anchor: Vec<VertexId>,
    pub params: Params,
}

fn cand(variant: u8, anchor: Vec<VertexId>, params: Params) -> Candidate {
    Candidate { variant, anchor, params }
}

fn z_phase(d: &Diagram, v: VertexId) -> Option<Phase> {
    match d.generator(v) {
        Some(Generator::Z(p)) => Some(p.clone()),
        _ => None,
    }
}

fn x_phase(d: &Diagram, v: VertexId) -> Option<Phase> {
    match d.generator(v) {
        Some(Generator::X(p)) => Some(p.clone()),
        _ => None,
    }
}

fn is_gen(d: &Diagram, v: VertexId, g: &Generator) -> bool {
    d.generator(v) == Some(g)
}

fn legs(adj: &Adjacency, v: VertexId) -> &[VertexId] {
    adj.get(&v).map(|l| l.as_slice()).unwrap_or(&[])
}

fn has_loop(adj: &Adjacency, v: VertexId) -> bool {
    legs(adj, v).contains(&v)
}

fn mult(adj: &Adjacency, a: VertexId, b: VertexId) -> usize {
    legs(adj, a).iter().filter(|&&w| w == b).count()
}

/// Legs of `v` with one occurrence of `w` removed.
fn legs_except(adj: &Adjacency, v: VertexId, w: VertexId) -> Vec<VertexId> {
    let mut l = legs(adj, v).to_vec();
    if let Some(pos) = l.iter().position(|&x| x == w) {
        l.remove(pos);
    }
    l
}

/// The far end of a degree-2 vertex `b` reached from `from`.
fn other_end(adj: &Adjacency, b: VertexId, from: VertexId) -> Option<VertexId> {
    match legs(adj, b) {
        [x, y] if *x == from => Some(*y),
        [x, y] if *y == from => Some(*x),
        _ => None,
    }
}

/// Degree-2, loop-free, singly attached to `hub`: returns the far end.
fn box_on(d: &Diagram, adj: &Adjacency, b: VertexId, hub: VertexId, g: &Generator) -> Option<VertexId> {
    if !is_gen(d, b, g) || legs(adj, b).len() != 2 || has_loop(adj, b) || mult(adj, b, hub) != 1 {
        return None;
    }
    other_end(adj, b, hub)
}

fn dualizer() -> Generator {
    Generator::X(Phase::zero())
}

fn x_pauli(x: i64) -> Generator {
    Generator::X(Phase::pauli(x))
}

fn z_pauli(x: i64) -> Generator {
    Generator::Z(Phase::pauli(x))
}

/// `ω^{9/4} = -i`.
fn minus_i() -> Scalar {
    Scalar::omega(rat(9, 4))
}

fn plus_i() -> Scalar {
    Scalar::omega(rat(3, 4))
}

/// Phase map of the Z-side Pauli push: `q_j = φ_{x-j} - φ_x`. An involution.
fn pauli_push_z(p: &Phase, x: i64) -> Phase {
    let base = p.component(x);
    Phase::new(p.component(x - 1) - &base, p.component(x - 2) - &base)
}

/// Phase map of the X-side Pauli push: `q_j = φ_{j+x} - φ_x`.
fn pauli_push_x(p: &Phase, x: i64) -> Phase {
    let base = p.component(x);
    Phase::new(p.component(x + 1) - &base, p.component(x + 2) - &base)
}

fn harvest(p: &Phase, q: &Phase) -> Phase {
    Phase::new(p.a() + q.b(), p.b() + q.a())
}

/// Each leg of `u` passes through a distinct box of kind `g` whose far end
/// lies outside the pattern. Returns `(box, far end)` pairs.
fn boxed_legs(d: &Diagram, adj: &Adjacency, u: VertexId, g: &Generator) -> Option<Vec<(VertexId, VertexId)>> {
    let l = legs(adj, u);
    if l.is_empty() || has_loop(adj, u) {
        return None;
    }
    let mut out = Vec::new();
    for &b in l {
        let far = box_on(d, adj, b, u, g)?;
        out.push((b, far));
    }
    let boxes: Vec<VertexId> = out.iter().map(|x| x.0).collect();
    if out.iter().any(|(_, far)| boxes.contains(far)) {
        return None;
    }
    Some(out)
}

/// Every leg of `u` except one edge to `bare` carries a box of kind `g`.
fn boxed_except(
    d: &Diagram,
    adj: &Adjacency,
    u: VertexId,
    bare: VertexId,
    g: &Generator,
) -> Option<Vec<(VertexId, VertexId)>> {
    if has_loop(adj, u) || mult(adj, u, bare) == 0 {
        return None;
    }
    let mut out = Vec::new();
    for b in legs_except(adj, u, bare) {
        let far = box_on(d, adj, b, u, g)?;
        out.push((b, far));
    }
    let boxes: Vec<VertexId> = out.iter().map(|x| x.0).collect();
    if out.iter().any(|(_, far)| boxes.contains(far)) || boxes.contains(&bare) {
        return None;
    }
    Some(out)
}

fn pauli_of(p: &Phase) -> Option<i64> {
    p.pauli_power()
}

// ---------------------------------------------------------------- matching

pub(crate) fn find(d: &Diagram, adj: &Adjacency, rule: RuleName) -> Vec<Candidate> {
    let mut out = Vec::new();
    let ids: Vec<VertexId> = d.vertex_ids();
    let none = Params::default;
    match rule {
        RuleName::SZ => {
            for &u in &ids {
                if z_phase(d, u).is_none() {
                    continue;
                }
                let mut ns: Vec<VertexId> = legs(adj, u).iter().copied().filter(|&v| v > u).collect();
                ns.dedup();
                ns.sort_unstable();
                ns.dedup();
                for v in ns {
                    if z_phase(d, v).is_some() {
                        out.push(cand(0, vec![u, v], none()));
                    }
                }
            }
        }
        RuleName::H | RuleName::HPrime => {
            for &u in &ids {
                let ok = if rule == RuleName::H { x_phase(d, u) } else { z_phase(d, u) };
                if ok.is_some() && boxed_legs(d, adj, u, &Generator::H).is_some() {
                    out.push(cand(0, vec![u], none()));
                }
            }
        }
        RuleName::B1 | RuleName::P1 | RuleName::P1Prime => {
            for &s in &ids {
                let (state_phase, want_hub_z) = match rule {
                    RuleName::P1Prime => (x_phase(d, s), true),
                    _ => (z_phase(d, s), false),
                };
                let Some(sp) = state_phase else { continue };
                let Some(x) = pauli_of(&sp) else { continue };
                if rule == RuleName::B1 && x != 0 {
                    continue;
                }
                let [v] = legs(adj, s) else { continue };
                let v = *v;
                if v == s || has_loop(adj, v) {
                    continue;
                }
                let hub = if want_hub_z { z_phase(d, v) } else { x_phase(d, v) };
                let Some(hp) = hub else { continue };
                if rule == RuleName::B1 && !hp.is_zero() {
                    continue;
                }
                let params = if rule == RuleName::B1 { none() } else { Params::trit(x) };
                out.push(cand(0, vec![s, v], params));
            }
        }
        RuleName::B2 => {
            for &u in &ids {
                if z_phase(d, u) != Some(Phase::zero()) || has_loop(adj, u) {
                    continue;
                }
                let mut ns = legs(adj, u).to_vec();
                ns.sort_unstable();
                ns.dedup();
                for v in ns {
                    if x_phase(d, v) == Some(Phase::zero()) && !has_loop(adj, v) && mult(adj, u, v) == 1 {
                        out.push(cand(0, vec![u, v], none()));
                    }
                }
            }
        }
        RuleName::SP => {
            for &u in &ids {
                if z_phase(d, u).is_some() && has_loop(adj, u) {
                    out.push(cand(0, vec![u], none()));
                }
            }
            for &u in &ids {
                if z_phase(d, u) != Some(Phase::zero()) || legs(adj, u).len() != 3 || has_loop(adj, u) {
                    continue;
                }
                let mut ns = legs(adj, u).to_vec();
                ns.sort_unstable();
                ns.dedup();
                for v in ns {
                    if v > u
                        && z_phase(d, v) == Some(Phase::zero())
                        && legs(adj, v).len() == 3
                        && !has_loop(adj, v)
                        && mult(adj, u, v) == 2
                    {
                        out.push(cand(1, vec![u, v], none()));
                    }
                }
            }
        }
        RuleName::P2 | RuleName::P2Prime | RuleName::IN => {
            for &w in &ids {
                let (box_phase, hub_is_z) = match rule {
                    RuleName::P2Prime => (z_phase(d, w), false),
                    _ => (x_phase(d, w), true),
                };
                let Some(bp) = box_phase else { continue };
                let Some(x) = pauli_of(&bp) else { continue };
                if rule == RuleName::IN && x != 0 {
                    continue;
                }
                if legs(adj, w).len() != 2 || has_loop(adj, w) {
                    continue;
                }
                let mut ns = legs(adj, w).to_vec();
                ns.sort_unstable();
                ns.dedup();
                for u in ns {
                    let hub = if hub_is_z { z_phase(d, u) } else { x_phase(d, u) };
                    if hub.is_none() || has_loop(adj, u) || mult(adj, w, u) != 1 {
                        continue;
                    }
                    let params = if rule == RuleName::IN { none() } else { Params::trit(x) };
                    out.push(cand(0, vec![w, u], params));
                }
            }
            if rule == RuleName::IN {
                for &a in &ids {
                    if legs(adj, a).len() != 2 || has_loop(adj, a) || !is_gen(d, a, &dualizer()) {
                        continue;
                    }
                    for &b in legs(adj, a) {
                        if b > a && box_on(d, adj, b, a, &dualizer()).is_some() && mult(adj, a, b) == 1 {
                            out.push(cand(1, vec![a, b], none()));
                        }
                    }
                }
            }
        }
        RuleName::EU => {
            for &h in &ids {
                if is_gen(d, h, &Generator::H) {
                    out.push(cand(0, vec![h], none()));
                }
            }
        }
        RuleName::EUPrime => {
            for &h in &ids {
                match d.generator(h) {
                    Some(Generator::HDag) => out.push(cand(0, vec![h], none())),
                    Some(Generator::H) => out.push(cand(1, vec![h], none())),
                    _ => {}
                }
            }
        }
        RuleName::ID => {
            for &z in &ids {
                if z_phase(d, z) == Some(Phase::zero()) && legs(adj, z).len() == 2 && !has_loop(adj, z) {
                    out.push(cand(0, vec![z], none()));
                }
            }
        }
        RuleName::H2 => {
            for &a in &ids {
                if !d.generator(a).is_some_and(|g| g.is_hbox()) || has_loop(adj, a) {
                    continue;
                }
                for &b in legs(adj, a) {
                    if b > a && d.generator(b).is_some_and(|g| g.is_hbox()) && !has_loop(adj, b) && mult(adj, a, b) == 1 {
                        out.push(cand(0, vec![a, b], none()));
                    }
                }
            }
        }
        RuleName::H4 => {
            for &h1 in &ids {
                let Some(g) = d.generator(h1).filter(|g| g.is_hbox()).cloned() else { continue };
                if has_loop(adj, h1) {
                    continue;
                }
                for &h2 in legs(adj, h1) {
                    if let Some(path) = h4_path(d, adj, &g, h1, h2) {
                        if path[0] < path[3] {
                            out.push(cand(0, path, none()));
                        }
                    }
                }
            }
        }
        RuleName::SX => {
            for &u in &ids {
                if x_phase(d, u).is_none() {
                    continue;
                }
                let mut ns = legs(adj, u).to_vec();
                ns.sort_unstable();
                ns.dedup();
                for v in ns {
                    if v != u && x_phase(d, v).is_some() && !has_loop(adj, v) && mult(adj, u, v) == 1 {
                        out.push(cand(0, vec![u, v], none()));
                    }
                }
            }
        }
    }
    out
}

/// Four distinct boxes of kind `g` in a row starting `h1 → h2`, with both
/// far ends outside the path.
fn h4_path(d: &Diagram, adj: &Adjacency, g: &Generator, h1: VertexId, h2: VertexId) -> Option<Vec<VertexId>> {
    let mut path = vec![h1];
    let mut prev = h1;
    let mut cur = h2;
    while path.len() < 4 {
        if path.contains(&cur) || !is_gen(d, cur, g) || legs(adj, cur).len() != 2 || mult(adj, prev, cur) != 1 {
            return None;
        }
        path.push(cur);
        if path.len() < 4 {
            let next = other_end(adj, cur, prev)?;
            prev = cur;
            cur = next;
        }
    }
    if legs(adj, h1).len() != 2 {
        return None;
    }
    let a = other_end(adj, h1, path[1])?;
    let b = other_end(adj, path[3], path[2])?;
    if path.contains(&a) || path.contains(&b) {
        return None;
    }
    Some(path)
}

// ---------------------------------------------------------------- editing

fn remove_edge(d: &mut Diagram, a: VertexId, b: VertexId) -> Result<()> {
    if d.remove_edge(a, b) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("no edge between {a} and {b}")))
    }
}

/// Replace a degree-2 vertex by a chain of fresh generators.
fn replace_with_chain(d: &mut Diagram, b: VertexId, chain: &[Generator]) -> Vec<VertexId> {
    let ends = d.incident(b);
    let (a, c) = (ends[0], ends[1]);
    d.remove_vertex(b);
    let ids: Vec<VertexId> = chain.iter().map(|g| d.add_vertex(g.clone())).collect();
    let mut prev = a;
    for &v in &ids {
        d.connect(prev, v);
        prev = v;
    }
    // A box looped onto itself is excluded by matching, so `a`, `c` survive.
    d.connect(prev, c);
    ids
}

/// Put a chain of fresh generators on one `a`–`b` edge.
fn insert_chain(d: &mut Diagram, a: VertexId, b: VertexId, chain: &[Generator]) -> Result<Vec<VertexId>> {
    remove_edge(d, a, b)?;
    let ids: Vec<VertexId> = chain.iter().map(|g| d.add_vertex(g.clone())).collect();
    let mut prev = a;
    for &v in &ids {
        d.connect(prev, v);
        prev = v;
    }
    d.connect(prev, b);
    Ok(ids)
}

/// Remove a degree-2 vertex and join its two ends.
fn splice_out(d: &mut Diagram, b: VertexId) {
    let ends = d.incident(b);
    d.remove_vertex(b);
    d.connect(ends[0], ends[1]);
}

/// Move every edge of `from` onto `to` and delete `from`.
fn redirect(d: &mut Diagram, from: VertexId, to: VertexId) {
    let moved: Vec<(VertexId, VertexId)> = d.edges().iter().copied().filter(|&(a, b)| a == from || b == from).collect();
    d.remove_vertex(from);
    for (a, b) in moved {
        let a = if a == from { to } else { a };
        let b = if b == from { to } else { b };
        d.connect(a, b);
    }
}

fn expect_phase(d: &Diagram, v: VertexId, z: bool) -> Result<Phase> {
    let p = if z { z_phase(d, v) } else { x_phase(d, v) };
    p.ok_or_else(|| Error::Precondition(format!("vertex {v} is not a {} spider", if z { "Z" } else { "X" })))
}

fn trit(params: &Params) -> Result<i64> {
    params
        .trit
        .map(|x| x.rem_euclid(3))
        .ok_or_else(|| Error::Precondition("missing trit parameter".into()))
}

fn precondition<T>(o: Option<T>, what: &str) -> Result<T> {
    o.ok_or_else(|| Error::Precondition(what.to_string()))
}

// ---------------------------------------------------------------- forward

pub(crate) fn apply_forward(d: &mut Diagram, adj: &Adjacency, m: &Match) -> Result<Scalar> {
    debug_assert_eq!(m.direction, Direction::Forward);
    let a = &m.anchor;
    Ok(match m.rule {
        RuleName::SZ => {
            let (u, v) = (a[0], a[1]);
            let p = &expect_phase(d, u, true)? + &expect_phase(d, v, true)?;
            while d.remove_edge(u, v) {}
            redirect(d, v, u);
            d.set_generator(u, Generator::Z(p));
            Scalar::one()
        }
        RuleName::H | RuleName::HPrime => {
            let u = a[0];
            let to_z = m.rule == RuleName::H;
            let p = expect_phase(d, u, !to_z)?;
            let boxes = precondition(boxed_legs(d, adj, u, &Generator::H), "legs are not all Hadamard boxes")?;
            for (b, far) in &boxes {
                d.remove_vertex(*b);
                d.connect(u, *far);
            }
            let k = boxes.len() as i32;
            if to_z {
                d.set_generator(u, Generator::Z(p));
                Scalar::sqrt3(k - 2)
            } else {
                d.set_generator(u, Generator::X(p.swapped()));
                Scalar::sqrt3(2 - k)
            }
        }
        RuleName::B1 | RuleName::P1 | RuleName::P1Prime => {
            let (s, v) = (a[0], a[1]);
            let x = if m.rule == RuleName::B1 { 0 } else { trit(&m.params)? };
            let hub_is_z = m.rule == RuleName::P1Prime;
            let p = expect_phase(d, v, hub_is_z)?;
            let others = legs_except(adj, v, s);
            d.remove_vertex(s);
            d.remove_vertex(v);
            for o in others {
                let g = if hub_is_z { x_pauli(x) } else { z_pauli(-x) };
                let n = d.add_vertex(g);
                d.connect(n, o);
            }
            Scalar::omega(p.component(x))
        }
        RuleName::B2 => {
            let (u, v) = (a[0], a[1]);
            let us = legs_except(adj, u, v);
            let vs = legs_except(adj, v, u);
            d.remove_vertex(u);
            d.remove_vertex(v);
            let xs: Vec<VertexId> = us
                .iter()
                .map(|&o| {
                    let n = d.add_vertex(Generator::X(Phase::zero()));
                    d.connect(n, o);
                    n
                })
                .collect();
            let zs: Vec<VertexId> = vs
                .iter()
                .map(|&o| {
                    let n = d.add_vertex(Generator::Z(Phase::zero()));
                    d.connect(n, o);
                    n
                })
                .collect();
            for &x in &xs {
                for &z in &zs {
                    d.connect(x, z);
                }
            }
            Scalar::one()
        }
        RuleName::SP => {
            if m.variant == 0 {
                remove_edge(d, a[0], a[0])?;
            } else {
                let (u, v) = (a[0], a[1]);
                let x = legs_except(adj, u, v);
                let x = legs_except_vec(&x, v)[0];
                let y = legs_except(adj, v, u);
                let y = legs_except_vec(&y, u)[0];
                d.remove_vertex(u);
                d.remove_vertex(v);
                d.connect(x, y);
            }
            Scalar::one()
        }
        RuleName::P2 | RuleName::IN | RuleName::P2Prime if m.variant == 0 => {
            let (w, u) = (a[0], a[1]);
            let x = if m.rule == RuleName::IN { 0 } else { trit(&m.params)? };
            let z_hub = m.rule != RuleName::P2Prime;
            let p = expect_phase(d, u, z_hub)?;
            let (q, boxes) = if z_hub {
                (pauli_push_z(&p, x), x_pauli(x))
            } else {
                (pauli_push_x(&p, x), z_pauli(-x))
            };
            let t = precondition(other_end(adj, w, u), "box is not singly attached")?;
            let others = legs_except(adj, u, w);
            d.remove_vertex(w);
            for o in others {
                insert_chain(d, u, o, std::slice::from_ref(&boxes))?;
            }
            d.connect(u, t);
            d.set_generator(u, if z_hub { Generator::Z(q) } else { Generator::X(q) });
            Scalar::omega(p.component(x))
        }
        RuleName::IN => {
            let (b1, b2) = (a[0], a[1]);
            let x = precondition(other_end(adj, b1, b2), "dualizer is not singly attached")?;
            let y = precondition(other_end(adj, b2, b1), "dualizer is not singly attached")?;
            d.remove_vertex(b1);
            d.remove_vertex(b2);
            d.connect(x, y);
            Scalar::one()
        }
        RuleName::P2 | RuleName::P2Prime => unreachable!("single-variant rules"),
        RuleName::EU => {
            let one = Phase::ints(1, 1);
            replace_with_chain(d, a[0], &[Generator::Z(one.clone()), Generator::X(one.clone()), Generator::Z(one)]);
            minus_i()
        }
        RuleName::EUPrime => {
            let two = Phase::ints(2, 2);
            let chain = if m.variant == 0 {
                [Generator::Z(two.clone()), Generator::X(two.clone()), Generator::Z(two)]
            } else {
                [Generator::X(two.clone()), Generator::Z(two.clone()), Generator::X(two)]
            };
            replace_with_chain(d, a[0], &chain);
            plus_i()
        }
        RuleName::ID => {
            splice_out(d, a[0]);
            Scalar::one()
        }
        RuleName::H2 => {
            let (h1, h2) = (a[0], a[1]);
            let same = d.generator(h1) == d.generator(h2);
            let x = precondition(other_end(adj, h1, h2), "box is not singly attached")?;
            let y = precondition(other_end(adj, h2, h1), "box is not singly attached")?;
            d.remove_vertex(h1);
            d.remove_vertex(h2);
            if same {
                let n = d.add_vertex(dualizer());
                d.connect(x, n);
                d.connect(n, y);
            } else {
                d.connect(x, y);
            }
            Scalar::one()
        }
        RuleName::H4 => {
            let x = precondition(other_end(adj, a[0], a[1]), "bad path")?;
            let y = precondition(other_end(adj, a[3], a[2]), "bad path")?;
            for v in a {
                d.remove_vertex(*v);
            }
            d.connect(x, y);
            Scalar::one()
        }
        RuleName::SX => {
            let (u, v) = (a[0], a[1]);
            let p = expect_phase(d, u, false)?;
            let q = expect_phase(d, v, false)?;
            let others = legs_except(adj, v, u);
            d.remove_vertex(v);
            for o in others {
                let n = d.add_vertex(dualizer());
                d.connect(u, n);
                d.connect(n, o);
            }
            d.set_generator(u, Generator::X(harvest(&p, &q)));
            Scalar::one()
        }
    })
}

fn legs_except_vec(l: &[VertexId], w: VertexId) -> Vec<VertexId> {
    let mut l = l.to_vec();
    if let Some(pos) = l.iter().position(|&x| x == w) {
        l.remove(pos);
    }
    l
}

// ---------------------------------------------------------------- backward

fn expect_anchor(a: &[VertexId], n: usize, rule: RuleName) -> Result<()> {
    if a.len() == n {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{rule} backward needs {n} anchor vertices, got {}", a.len())))
    }
}

fn expect_edge(d: &Diagram, a: VertexId, b: VertexId) -> Result<()> {
    if d.edge_multiplicity(a, b) == 0 {
        Err(Error::Precondition(format!("no edge between {a} and {b}")))
    } else {
        Ok(())
    }
}

/// Check a chain `c0 – c1 – c2` of degree-2 vertices with the given kinds.
fn expect_chain(d: &Diagram, adj: &Adjacency, a: &[VertexId], kinds: &[Generator]) -> Result<(VertexId, VertexId)> {
    expect_anchor(a, kinds.len(), RuleName::EU)?;
    for (v, g) in a.iter().zip(kinds) {
        if !is_gen(d, *v, g) || legs(adj, *v).len() != 2 || has_loop(adj, *v) {
            return Err(Error::Precondition(format!("vertex {v} is not a degree-2 {g}")));
        }
    }
    for w in a.windows(2) {
        if mult(adj, w[0], w[1]) != 1 {
            return Err(Error::Precondition(format!("{} and {} are not adjacent once", w[0], w[1])));
        }
    }
    let x = precondition(other_end(adj, a[0], a[1]), "bad chain")?;
    let y = precondition(other_end(adj, a[a.len() - 1], a[a.len() - 2]), "bad chain")?;
    if a.contains(&x) || a.contains(&y) {
        return Err(Error::Precondition("chain closes on itself".into()));
    }
    Ok((x, y))
}

/// States of kind `g` (degree 1) hanging off distinct outside vertices.
fn expect_states(d: &Diagram, adj: &Adjacency, a: &[VertexId], g: &Generator) -> Result<Vec<VertexId>> {
    let mut far = Vec::new();
    for &s in a {
        if !is_gen(d, s, g) {
            return Err(Error::Precondition(format!("vertex {s} is not {g}")));
        }
        match legs(adj, s) {
            [o] if !a.contains(o) => far.push(*o),
            _ => return Err(Error::Precondition(format!("vertex {s} is not a state"))),
        }
    }
    Ok(far)
}

pub(crate) fn apply_backward(d: &mut Diagram, adj: &Adjacency, m: &Match) -> Result<Scalar> {
    let a = &m.anchor;
    let params = &m.params;
    Ok(match m.rule {
        RuleName::SZ => {
            expect_anchor(a, 1, m.rule)?;
            let u = a[0];
            let p = expect_phase(d, u, true)?;
            let q = params.phase.clone().unwrap_or_default();
            let w = d.add_vertex(Generator::Z(q.clone()));
            for &o in &params.legs {
                remove_edge(d, u, o)?;
                d.connect(w, if o == u { u } else { o });
            }
            d.connect(u, w);
            d.set_generator(u, Generator::Z(&p - &q));
            Scalar::one()
        }
        RuleName::H | RuleName::HPrime => {
            expect_anchor(a, 1, m.rule)?;
            let u = a[0];
            let to_x = m.rule == RuleName::H;
            let p = expect_phase(d, u, to_x)?;
            if has_loop(adj, u) {
                return Err(Error::Precondition("cannot box a self-loop".into()));
            }
            let others = legs(adj, u).to_vec();
            for o in &others {
                insert_chain(d, u, *o, &[Generator::H])?;
            }
            let k = others.len() as i32;
            if to_x {
                d.set_generator(u, Generator::X(p));
                Scalar::sqrt3(k - 2)
            } else {
                d.set_generator(u, Generator::Z(p.swapped()));
                Scalar::sqrt3(2 - k)
            }
        }
        RuleName::B1 | RuleName::P1 | RuleName::P1Prime => {
            let x = if m.rule == RuleName::B1 { 0 } else { trit(params)? };
            let p = if m.rule == RuleName::B1 { Phase::zero() } else { params.phase.clone().unwrap_or_default() };
            let z_hub = m.rule == RuleName::P1Prime;
            let state = if z_hub { x_pauli(x) } else { z_pauli(-x) };
            let far = expect_states(d, adj, a, &state)?;
            for &s in a {
                d.remove_vertex(s);
            }
            let hub = d.add_vertex(if z_hub { Generator::Z(p.clone()) } else { Generator::X(p.clone()) });
            for o in far {
                d.connect(hub, o);
            }
            let s = d.add_vertex(if z_hub { x_pauli(x) } else { z_pauli(x) });
            d.connect(s, hub);
            Scalar::omega(p.component(x))
        }
        RuleName::B2 => {
            let m_count = precondition(params.count, "B2 backward needs the number of X spiders")?;
            if m_count == 0 || m_count >= a.len() {
                return Err(Error::Precondition("B2 backward needs at least one spider of each colour".into()));
            }
            let (xs, zs) = a.split_at(m_count);
            let mut x_far = Vec::new();
            let mut z_far = Vec::new();
            for (group, other, g, far) in [(xs, zs, dualizer(), &mut x_far), (zs, xs, Generator::Z(Phase::zero()), &mut z_far)] {
                for &v in group {
                    if !is_gen(d, v, &g) || has_loop(adj, v) || legs(adj, v).len() != other.len() + 1 {
                        return Err(Error::Precondition(format!("vertex {v} does not fit the bipartite pattern")));
                    }
                    for &w in other {
                        if mult(adj, v, w) != 1 {
                            return Err(Error::Precondition(format!("{v} and {w} are not joined once")));
                        }
                    }
                    let rest: Vec<VertexId> = legs(adj, v).iter().copied().filter(|o| !other.contains(o)).collect();
                    if rest.len() != 1 || a.contains(&rest[0]) {
                        return Err(Error::Precondition(format!("vertex {v} needs one outside leg")));
                    }
                    far.push(rest[0]);
                }
            }
            for &v in a.iter() {
                d.remove_vertex(v);
            }
            let u = d.add_vertex(Generator::Z(Phase::zero()));
            let v = d.add_vertex(dualizer());
            for o in x_far {
                d.connect(u, o);
            }
            for o in z_far {
                d.connect(v, o);
            }
            d.connect(u, v);
            Scalar::one()
        }
        RuleName::SP => {
            if m.variant == 0 {
                expect_anchor(a, 1, m.rule)?;
                expect_phase(d, a[0], true)?;
                d.connect(a[0], a[0]);
            } else {
                expect_anchor(a, 2, m.rule)?;
                remove_edge(d, a[0], a[1])?;
                let u = d.add_vertex(Generator::Z(Phase::zero()));
                let v = d.add_vertex(Generator::Z(Phase::zero()));
                d.connect(a[0], u);
                d.connect(u, v);
                d.connect(u, v);
                d.connect(v, a[1]);
            }
            Scalar::one()
        }
        RuleName::P2 | RuleName::P2Prime | RuleName::IN if m.rule != RuleName::IN || m.variant == 0 => {
            expect_anchor(a, 2, m.rule)?;
            let (u, bare) = (a[0], a[1]);
            let x = if m.rule == RuleName::IN { 0 } else { trit(params)? };
            let z_hub = m.rule != RuleName::P2Prime;
            let q = expect_phase(d, u, z_hub)?;
            let box_gen = if z_hub { x_pauli(x) } else { z_pauli(-x) };
            let boxes = precondition(boxed_except(d, adj, u, bare, &box_gen), "legs do not carry the expected boxes")?;
            let p = if z_hub {
                pauli_push_z(&q, x)
            } else {
                let shift = q.component(-x);
                Phase::new(q.component(1 - x) - &shift, q.component(2 - x) - &shift)
            };
            for (b, _) in &boxes {
                splice_out(d, *b);
            }
            let created = if z_hub { x_pauli(x) } else { z_pauli(x) };
            insert_chain(d, u, bare, &[created])?;
            d.set_generator(u, if z_hub { Generator::Z(p.clone()) } else { Generator::X(p.clone()) });
            Scalar::omega(p.component(x))
        }
        RuleName::IN => {
            expect_anchor(a, 2, m.rule)?;
            expect_edge(d, a[0], a[1])?;
            insert_chain(d, a[0], a[1], &[dualizer(), dualizer()])?;
            Scalar::one()
        }
        RuleName::P2 | RuleName::P2Prime => unreachable!("single-variant rules"),
        RuleName::EU | RuleName::EUPrime => {
            let (kinds, result, delta) = match (m.rule, m.variant) {
                (RuleName::EU, _) => {
                    let one = Phase::ints(1, 1);
                    ([Generator::Z(one.clone()), Generator::X(one.clone()), Generator::Z(one)], Generator::H, minus_i())
                }
                (_, 0) => {
                    let two = Phase::ints(2, 2);
                    ([Generator::Z(two.clone()), Generator::X(two.clone()), Generator::Z(two)], Generator::HDag, plus_i())
                }
                _ => {
                    let two = Phase::ints(2, 2);
                    ([Generator::X(two.clone()), Generator::Z(two.clone()), Generator::X(two)], Generator::H, plus_i())
                }
            };
            let (x, y) = expect_chain(d, adj, a, &kinds)?;
            for v in a {
                d.remove_vertex(*v);
            }
            let h = d.add_vertex(result);
            d.connect(x, h);
            d.connect(h, y);
            delta
        }
        RuleName::ID => {
            expect_anchor(a, 2, m.rule)?;
            insert_chain(d, a[0], a[1], &[Generator::Z(Phase::zero())])?;
            Scalar::one()
        }
        RuleName::H2 => {
            match m.variant {
                0 | 1 => {
                    expect_anchor(a, 1, m.rule)?;
                    let b = a[0];
                    if !is_gen(d, b, &dualizer()) || legs(adj, b).len() != 2 || has_loop(adj, b) {
                        return Err(Error::Precondition(format!("vertex {b} is not a dualizer")));
                    }
                    let g = if m.variant == 0 { Generator::H } else { Generator::HDag };
                    replace_with_chain(d, b, &[g.clone(), g]);
                }
                _ => {
                    expect_anchor(a, 2, m.rule)?;
                    insert_chain(d, a[0], a[1], &[Generator::H, Generator::HDag])?;
                }
            }
            Scalar::one()
        }
        RuleName::H4 => {
            expect_anchor(a, 2, m.rule)?;
            let g = if m.variant == 0 { Generator::H } else { Generator::HDag };
            insert_chain(d, a[0], a[1], &[g.clone(), g.clone(), g.clone(), g])?;
            Scalar::one()
        }
        RuleName::SX => {
            expect_anchor(a, 1, m.rule)?;
            let u = a[0];
            let r = expect_phase(d, u, false)?;
            let q = params.phase.clone().unwrap_or_default();
            let mut far = Vec::new();
            for &b in &params.legs {
                let o = precondition(box_on(d, adj, b, u, &dualizer()), "listed vertex is not a dualizer on the spider")?;
                if params.legs.contains(&o) || o == u {
                    return Err(Error::Precondition("dualizers must lead outside".into()));
                }
                far.push(o);
            }
            let mut sorted = params.legs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != params.legs.len() {
                return Err(Error::Precondition("dualizers listed twice".into()));
            }
            for &b in &params.legs {
                d.remove_vertex(b);
            }
            let v = d.add_vertex(Generator::X(q.clone()));
            for o in far {
                d.connect(v, o);
            }
            d.connect(u, v);
            let p = Phase::new(r.a() - q.b(), r.b() - q.a());
            d.set_generator(u, Generator::X(p));
            Scalar::one()
        }
    })
}
