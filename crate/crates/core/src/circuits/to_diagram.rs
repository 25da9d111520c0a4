//! Gate-by-gate translation of circuits into diagrams.

use super::{Circuit, GateKind};
use crate::diagram::{Diagram, Generator, VertexId};
use crate::error::{Error, Result};
use crate::phase::Phase;

fn dualizer() -> Generator {
    Generator::X(Phase::zero())
}

/// Append a chain of one-in one-out generators to the open end `end`.
fn chain(d: &mut Diagram, end: VertexId, gs: &[Generator]) -> VertexId {
    gs.iter().fold(end, |prev, g| {
        let v = d.add_vertex(g.clone());
        d.connect(prev, v);
        v
    })
}

/// Translate a circuit without controlled gates. The diagram's semantics
/// equal the circuit's unitary exactly.
pub fn to_diagram(c: &Circuit) -> Result<Diagram> {
    c.validate()?;
    let mut d = Diagram::new();
    let mut ends: Vec<VertexId> = (0..c.n_wires).map(|_| d.add_input()).collect();
    for g in &c.gates {
        let w = &g.wires;
        match &g.kind {
            GateKind::Zphase(p) => ends[w[0]] = chain(&mut d, ends[w[0]], &[Generator::Z(p.clone())]),
            GateKind::X12 => ends[w[0]] = chain(&mut d, ends[w[0]], &[dualizer()]),
            GateKind::X01 => ends[w[0]] = chain(&mut d, ends[w[0]], &[Generator::X(Phase::pauli(1))]),
            GateKind::X02 => ends[w[0]] = chain(&mut d, ends[w[0]], &[Generator::X(Phase::pauli(2))]),
            GateKind::Xp1 => ends[w[0]] = chain(&mut d, ends[w[0]], &[dualizer(), Generator::X(Phase::pauli(1))]),
            GateKind::Xm1 => ends[w[0]] = chain(&mut d, ends[w[0]], &[dualizer(), Generator::X(Phase::pauli(2))]),
            GateKind::H => ends[w[0]] = chain(&mut d, ends[w[0]], &[Generator::H]),
            GateKind::Hdag => ends[w[0]] = chain(&mut d, ends[w[0]], &[Generator::HDag]),
            GateKind::CX | GateKind::CXdag => {
                let (c_w, t_w) = (w[0], w[1]);
                let copy = d.add_vertex(Generator::Z(Phase::zero()));
                d.connect(ends[c_w], copy);
                let hub = d.add_vertex(dualizer());
                if g.kind == GateKind::CXdag {
                    let flip = chain(&mut d, copy, &[dualizer()]);
                    d.connect(flip, hub);
                } else {
                    d.connect(copy, hub);
                }
                d.connect(ends[t_w], hub);
                ends[c_w] = copy;
                ends[t_w] = chain(&mut d, hub, &[dualizer()]);
            }
            GateKind::Controlled { .. } => {
                return Err(Error::Unsupported(format!(
                    "{} has no direct diagram; expand controlled gates first",
                    g.kind.name()
                )))
            }
        }
    }
    for end in ends {
        let o = d.add_output();
        d.connect(end, o);
    }
    Ok(d)
}
