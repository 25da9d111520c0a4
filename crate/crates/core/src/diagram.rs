//! Open multigraphs of flexsymmetric generators.
//!
//! Spiders are undirected: every leg is equivalent, so a diagram is an
//! undirected multigraph (self-loops and parallel edges allowed) plus two
//! ordered lists of boundary vertices. Matrices are read with the outputs as
//! rows and the inputs as columns, first listed boundary most significant.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::scalar::Scalar;

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Z(Phase),
    X(Phase),
    /// The qutrit Hadamard, a symmetric degree-2 box.
    H,
    /// Its adjoint `H† = H³`.
    HDag,
    Boundary,
}

impl Generator {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Generator::Z(_) => "Z",
            Generator::X(_) => "X",
            Generator::H => "H",
            Generator::HDag => "Hdag",
            Generator::Boundary => "B",
        }
    }

    pub fn phase(&self) -> Option<&Phase> {
        match self {
            Generator::Z(p) | Generator::X(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_spider(&self) -> bool {
        matches!(self, Generator::Z(_) | Generator::X(_))
    }

    pub fn is_hbox(&self) -> bool {
        matches!(self, Generator::H | Generator::HDag)
    }

    /// Complex conjugate of the generator's tensor.
    ///
    /// Z labels negate. The X basis states are permuted by conjugation, so an
    /// X label `(a, b)` becomes `(-b, -a)`.
    pub fn conjugate(&self) -> Generator {
        match self {
            Generator::Z(p) => Generator::Z(-p),
            Generator::X(p) => Generator::X(-p.swapped()),
            Generator::H => Generator::HDag,
            Generator::HDag => Generator::H,
            Generator::Boundary => Generator::Boundary,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Z(p) => write!(f, "Z({p})"),
            Generator::X(p) => write!(f, "X({p})"),
            other => f.write_str(other.kind_name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    vertices: BTreeMap<VertexId, Generator>,
    /// Sorted list of `(min, max)` endpoint pairs; repeats are parallel edges.
    edges: Vec<(VertexId, VertexId)>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    scalar: Scalar,
    next_id: VertexId,
}

impl Default for Diagram {
    fn default() -> Self {
        Diagram::new()
    }
}

fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Diagram {
    pub fn new() -> Self {
        Diagram {
            vertices: BTreeMap::new(),
            edges: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            scalar: Scalar::one(),
            next_id: 0,
        }
    }

    /// `n` bare wires.
    pub fn identity(n: usize) -> Self {
        let mut d = Diagram::new();
        for _ in 0..n {
            let i = d.add_input();
            let o = d.add_output();
            d.connect(i, o);
        }
        d
    }

    /// A single generator with `n_in` input legs and `n_out` output legs.
    pub fn single(g: Generator, n_in: usize, n_out: usize) -> Self {
        let mut d = Diagram::new();
        let ins: Vec<_> = (0..n_in).map(|_| d.add_input()).collect();
        let v = d.add_vertex(g);
        let outs: Vec<_> = (0..n_out).map(|_| d.add_output()).collect();
        for b in ins.into_iter().chain(outs) {
            d.connect(b, v);
        }
        d
    }

    pub fn add_vertex(&mut self, g: Generator) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        self.vertices.insert(id, g);
        id
    }

    /// Insert a vertex under a caller-chosen id (used by deserialization).
    pub(crate) fn insert_vertex_with_id(&mut self, id: VertexId, g: Generator) {
        self.vertices.insert(id, g);
        self.next_id = self.next_id.max(id + 1);
    }

    pub fn add_input(&mut self) -> VertexId {
        let v = self.add_vertex(Generator::Boundary);
        self.inputs.push(v);
        v
    }

    pub fn add_output(&mut self) -> VertexId {
        let v = self.add_vertex(Generator::Boundary);
        self.outputs.push(v);
        v
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        for v in [a, b] {
            if !self.vertices.contains_key(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        self.connect(a, b);
        Ok(())
    }

    /// `add_edge` for ids known to exist.
    pub(crate) fn connect(&mut self, a: VertexId, b: VertexId) {
        let e = ordered(a, b);
        let pos = self.edges.partition_point(|x| *x <= e);
        self.edges.insert(pos, e);
    }

    /// Remove one edge between `a` and `b`; false if there is none.
    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        let e = ordered(a, b);
        match self.edges.binary_search(&e) {
            Ok(pos) => {
                self.edges.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// Remove a vertex and all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
        self.edges.retain(|&(a, b)| a != v && b != v);
        self.inputs.retain(|&x| x != v);
        self.outputs.retain(|&x| x != v);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn generator(&self, v: VertexId) -> Option<&Generator> {
        self.vertices.get(&v)
    }

    pub fn set_generator(&mut self, v: VertexId, g: Generator) {
        if let Some(slot) = self.vertices.get_mut(&v) {
            *slot = g;
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &Generator)> + '_ {
        self.vertices.iter().map(|(k, g)| (*k, g))
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    pub(crate) fn set_boundaries(&mut self, inputs: Vec<VertexId>, outputs: Vec<VertexId>) {
        self.inputs = inputs;
        self.outputs = outputs;
    }

    pub fn scalar(&self) -> &Scalar {
        &self.scalar
    }

    pub fn set_scalar(&mut self, s: Scalar) {
        self.scalar = s;
    }

    pub fn mul_scalar(&mut self, s: &Scalar) {
        self.scalar = &self.scalar * s;
    }

    /// Other endpoint of every edge-end at `v`; a self-loop shows up twice.
    pub fn incident(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v && b == v {
                out.push(v);
                out.push(v);
            } else if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    /// Distinct neighbours other than `v` itself, ascending.
    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        let mut n: Vec<_> = self.incident(v).into_iter().filter(|&w| w != v).collect();
        n.dedup();
        n.sort_unstable();
        n.dedup();
        n
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn edge_multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        let e = ordered(a, b);
        self.edges.iter().filter(|&&x| x == e).count()
    }

    pub fn loop_count(&self, v: VertexId) -> usize {
        self.edge_multiplicity(v, v)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Non-boundary vertices.
    pub fn interior_count(&self) -> usize {
        self.vertices.values().filter(|g| **g != Generator::Boundary).count()
    }

    pub fn spider_count(&self) -> usize {
        self.vertices.values().filter(|g| g.is_spider()).count()
    }

    pub fn hbox_count(&self) -> usize {
        self.vertices.values().filter(|g| g.is_hbox()).count()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn next_id(&self) -> VertexId {
        self.next_id
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        for &(a, b) in &self.edges {
            for v in [a, b] {
                if !self.vertices.contains_key(&v) {
                    return Err(Error::InvalidDiagram(format!("edge references missing vertex {v}")));
                }
            }
        }
        let mut seen = BTreeMap::new();
        for &b in self.inputs.iter().chain(&self.outputs) {
            if seen.insert(b, ()).is_some() {
                return Err(Error::InvalidDiagram(format!("boundary {b} listed twice")));
            }
            if self.vertices.get(&b) != Some(&Generator::Boundary) {
                return Err(Error::InvalidDiagram(format!("{b} is not a boundary vertex")));
            }
        }
        for (&v, g) in &self.vertices {
            let deg = self.degree(v);
            match g {
                Generator::Boundary => {
                    if !seen.contains_key(&v) {
                        return Err(Error::InvalidDiagram(format!("boundary {v} is not listed")));
                    }
                    if deg != 1 {
                        return Err(Error::InvalidDiagram(format!("boundary {v} has degree {deg}")));
                    }
                }
                Generator::H | Generator::HDag if deg != 2 => {
                    return Err(Error::InvalidDiagram(format!("H-box {v} has degree {deg}")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Sequential composition: `self` first, then `other`.
    pub fn compose(&self, other: &Diagram) -> Result<Diagram> {
        if self.outputs.len() != other.inputs.len() {
            return Err(Error::Arity(format!(
                "cannot compose {} outputs with {} inputs",
                self.outputs.len(),
                other.inputs.len()
            )));
        }
        let mut d = self.clone();
        let map = d.absorb(other);
        let glued: Vec<(VertexId, VertexId)> = self
            .outputs
            .iter()
            .zip(&other.inputs)
            .map(|(&o, &i)| (o, map[&i]))
            .collect();
        for (o, i) in glued {
            let p = d.incident(o)[0];
            let r = d.incident(i)[0];
            d.remove_vertex(o);
            d.remove_vertex(i);
            if p == i {
                // A closed wire: trace of the identity.
                d.mul_scalar(&crate::scalar::three());
            } else {
                d.connect(p, r);
            }
        }
        d.inputs = self.inputs.clone();
        d.outputs = other.outputs.iter().map(|o| map[o]).collect();
        Ok(d)
    }

    /// Parallel composition.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let mut d = self.clone();
        let map = d.absorb(other);
        d.inputs.extend(other.inputs.iter().map(|v| map[v]));
        d.outputs.extend(other.outputs.iter().map(|v| map[v]));
        d
    }

    /// Copy all vertices, edges and the scalar of `other` under fresh ids.
    /// Boundary lists are left untouched; returns the id translation.
    pub(crate) fn absorb(&mut self, other: &Diagram) -> BTreeMap<VertexId, VertexId> {
        let mut map = BTreeMap::new();
        for (&v, g) in &other.vertices {
            map.insert(v, self.add_vertex(g.clone()));
        }
        for &(a, b) in &other.edges {
            self.connect(map[&a], map[&b]);
        }
        self.mul_scalar(&other.scalar);
        map
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Diagram {
        let mut d = self.transpose();
        for g in d.vertices.values_mut() {
            *g = g.conjugate();
        }
        d.scalar = self.scalar.conj();
        d
    }

    /// Swap the roles of inputs and outputs. Flexsymmetry makes this purely
    /// structural.
    pub fn transpose(&self) -> Diagram {
        let mut d = self.clone();
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d
    }

    /// Renumber vertices `0..n` in ascending id order.
    pub fn compacted(&self) -> Diagram {
        let map: BTreeMap<VertexId, VertexId> = self
            .vertices
            .keys()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut d = Diagram::new();
        for (&v, g) in &self.vertices {
            d.insert_vertex_with_id(map[&v], g.clone());
        }
        for &(a, b) in &self.edges {
            d.connect(map[&a], map[&b]);
        }
        d.inputs = self.inputs.iter().map(|v| map[v]).collect();
        d.outputs = self.outputs.iter().map(|v| map[v]).collect();
        d.scalar = self.scalar.clone();
        d
    }

    /// Replace the edge `a`–`b` by `a`–`v`–`b` with a fresh vertex `v`.
    pub fn insert_on_edge(&mut self, a: VertexId, b: VertexId, g: Generator) -> Option<VertexId> {
        if !self.remove_edge(a, b) {
            return None;
        }
        let v = self.add_vertex(g);
        self.connect(a, v);
        self.connect(v, b);
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dangling_edge_is_rejected() {
        let mut d = Diagram::new();
        let v = d.add_vertex(Generator::Z(Phase::zero()));
        assert!(matches!(d.add_edge(v, 42), Err(Error::UnknownVertex(42))));
    }

    #[test]
    fn compose_arity_mismatch() {
        let a = Diagram::identity(2);
        let b = Diagram::identity(1);
        assert!(matches!(a.compose(&b), Err(Error::Arity(_))));
    }

    #[test]
    fn compose_with_identity_keeps_shape() {
        let d = Diagram::single(Generator::Z(Phase::t()), 1, 1);
        let c = Diagram::identity(1).compose(&d).unwrap();
        assert_eq!(c.interior_count(), 1);
        assert_eq!(c.num_edges(), 2);
        c.validate().unwrap();
    }

    #[test]
    fn closed_loop_contributes_three() {
        let cup = {
            let mut d = Diagram::new();
            let a = d.add_output();
            let b = d.add_output();
            d.connect(a, b);
            d
        };
        let cap = cup.transpose();
        let s = cup.compose(&cap).unwrap();
        assert_eq!(s.num_vertices(), 0);
        assert_eq!(*s.scalar(), crate::scalar::three());
    }

    #[test]
    fn adjoint_of_t_spider() {
        let d = Diagram::single(Generator::Z(Phase::t()), 1, 1);
        let a = d.adjoint();
        let g = a.vertices().find(|(_, g)| g.is_spider()).unwrap().1.clone();
        assert_eq!(g, Generator::Z(Phase::ratios((8, 3), (1, 3))));
        assert_eq!(g, Generator::Z(Phase::ratios((-1, 3), (1, 3))));
    }

    #[test]
    fn adjoint_swaps_hboxes() {
        let d = Diagram::single(Generator::H, 1, 1);
        let a = d.adjoint();
        assert_eq!(a.hbox_count(), 1);
        assert!(a.vertices().any(|(_, g)| *g == Generator::HDag));
    }

    #[test]
    fn transpose_is_involution() {
        let mut d = Diagram::single(Generator::X(Phase::t()), 2, 1);
        d.mul_scalar(&Scalar::sqrt3(1));
        assert_eq!(d.transpose().transpose(), d);
    }

    #[test]
    fn validate_catches_bad_hbox() {
        let d = Diagram::single(Generator::H, 2, 1);
        assert!(d.validate().is_err());
    }
}
