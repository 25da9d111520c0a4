//! Gate-level qutrit circuits.
//!
//! Text format, one gate per line, `#` starts a comment:
//!
//! ```text
//! qutrits 2
//! CX 0 1
//! ZPH 1 1/3 -1/3
//! C2 Z 0 1
//! ```
//!
//! A controlled gate is written `C<level>` followed by the inner gate's
//! name, the control wire, then the inner gate's wires and parameters.

mod resources;
mod sim;
mod to_diagram;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::phase::{format_rational, parse_rational, Phase};

pub use resources::{classify_phase, count_resources, decompose_phases, Counts, PhaseClass};
pub use sim::{apply_gate, circuit_matrix, gate_matrix};
pub use to_diagram::to_diagram;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// `|t⟩ ↦ |t+1⟩`
    Xp1,
    /// `|t⟩ ↦ |t-1⟩`
    Xm1,
    X01,
    X12,
    X02,
    H,
    Hdag,
    /// `|i,j⟩ ↦ |i, i+j⟩`
    CX,
    CXdag,
    /// `diag(1, ω^a, ω^b)`. S, T, T† and R are aliases of this.
    Zphase(Phase),
    /// Applies `inner` on the remaining wires iff the first wire is `|level⟩`.
    Controlled { level: u8, inner: Box<GateKind> },
}

impl GateKind {
    pub fn s() -> Self {
        GateKind::Zphase(Phase::s())
    }

    pub fn t() -> Self {
        GateKind::Zphase(Phase::t())
    }

    pub fn tdg() -> Self {
        GateKind::Zphase(Phase::tdg())
    }

    pub fn r() -> Self {
        GateKind::Zphase(Phase::r())
    }

    /// The Pauli `Z = Z(1,2)`.
    pub fn z() -> Self {
        GateKind::Zphase(Phase::pauli(1))
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::CX | GateKind::CXdag => 2,
            GateKind::Controlled { inner, .. } => 1 + inner.arity(),
            _ => 1,
        }
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::Xp1 => GateKind::Xm1,
            GateKind::Xm1 => GateKind::Xp1,
            GateKind::H => GateKind::Hdag,
            GateKind::Hdag => GateKind::H,
            GateKind::CX => GateKind::CXdag,
            GateKind::CXdag => GateKind::CX,
            GateKind::Zphase(p) => GateKind::Zphase(-p),
            GateKind::Controlled { level, inner } => GateKind::Controlled { level: *level, inner: Box::new(inner.inverse()) },
            other => other.clone(),
        }
    }

    pub fn is_controlled(&self) -> bool {
        matches!(self, GateKind::Controlled { .. })
    }

    /// Mnemonic used by the text format.
    pub fn name(&self) -> String {
        match self {
            GateKind::Xp1 => "XP1".into(),
            GateKind::Xm1 => "XM1".into(),
            GateKind::X01 => "X01".into(),
            GateKind::X12 => "X12".into(),
            GateKind::X02 => "X02".into(),
            GateKind::H => "H".into(),
            GateKind::Hdag => "HDG".into(),
            GateKind::CX => "CX".into(),
            GateKind::CXdag => "CXDG".into(),
            GateKind::Zphase(p) => match alias(p) {
                Some(a) => a.into(),
                None => "ZPH".into(),
            },
            GateKind::Controlled { level, inner } => format!("C{level} {}", inner.name()),
        }
    }

    fn params(&self) -> Option<&Phase> {
        match self {
            GateKind::Zphase(p) if alias(p).is_none() => Some(p),
            GateKind::Controlled { inner, .. } => inner.params(),
            _ => None,
        }
    }
}

fn alias(p: &Phase) -> Option<&'static str> {
    [
        (Phase::zero(), "I"),
        (Phase::s(), "S"),
        (Phase::t(), "T"),
        (Phase::tdg(), "TDG"),
        (Phase::r(), "R"),
        (Phase::pauli(1), "Z"),
        (Phase::pauli(2), "ZDG"),
    ]
    .into_iter()
    .find(|(q, _)| q == p)
    .map(|(_, n)| n)
}

fn kind_from_name(name: &str) -> Option<GateKind> {
    Some(match name {
        "XP1" | "X" => GateKind::Xp1,
        "XM1" | "XDG" => GateKind::Xm1,
        "X01" => GateKind::X01,
        "X12" => GateKind::X12,
        "X02" => GateKind::X02,
        "H" => GateKind::H,
        "HDG" => GateKind::Hdag,
        "CX" => GateKind::CX,
        "CXDG" => GateKind::CXdag,
        "I" => GateKind::Zphase(Phase::zero()),
        "S" => GateKind::s(),
        "T" => GateKind::t(),
        "TDG" => GateKind::tdg(),
        "R" => GateKind::r(),
        "Z" => GateKind::z(),
        "ZDG" => GateKind::Zphase(Phase::pauli(2)),
        _ => return None,
    })
}

const GATE_NAMES: &str = "XP1, XM1, X01, X12, X02, H, HDG, CX, CXDG, ZPH, I, S, T, TDG, R, Z, ZDG, C0/C1/C2 <gate>";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    /// Control first for controlled kinds; control then target for CX.
    pub wires: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, wires: Vec<usize>) -> Result<Self> {
        if wires.len() != kind.arity() {
            return Err(Error::Arity(format!("{} acts on {} wires, got {:?}", kind.name(), kind.arity(), wires)));
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wires.len() {
            return Err(Error::Arity(format!("repeated wire in {wires:?}")));
        }
        Ok(Gate { kind, wires })
    }

    pub fn one(kind: GateKind, w: usize) -> Self {
        Gate::new(kind, vec![w]).expect("single-wire gate")
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Gate::new(kind, vec![a, b]).expect("two distinct wires")
    }

    pub fn zphase(p: Phase, w: usize) -> Self {
        Gate::one(GateKind::Zphase(p), w)
    }

    pub fn cx(c: usize, t: usize) -> Self {
        Gate::two(GateKind::CX, c, t)
    }

    pub fn cxdg(c: usize, t: usize) -> Self {
        Gate::two(GateKind::CXdag, c, t)
    }

    pub fn inverse(&self) -> Gate {
        Gate { kind: self.kind.inverse(), wires: self.wires.clone() }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        if let Some(p) = self.kind.params() {
            write!(f, " {} {}", format_rational(p.a()), format_rational(p.b()))?;
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse(format!("{msg} in {line:?}"));
        let mut i = 0;
        let mut levels = Vec::new();
        while let Some(l) = toks.get(i).and_then(|t| t.strip_prefix('C')).filter(|l| l.len() == 1 && l.as_bytes()[0].is_ascii_digit()) {
            let level: u8 = l.parse().map_err(|_| bad("bad control level"))?;
            if level > 2 {
                return Err(bad("control level must be 0, 1 or 2"));
            }
            levels.push(level);
            i += 1;
        }
        let name = toks.get(i).ok_or_else(|| bad("missing gate name"))?.to_uppercase();
        i += 1;
        let mut kind = if name == "ZPH" {
            GateKind::Zphase(Phase::zero())
        } else {
            kind_from_name(&name).ok_or_else(|| Error::Parse(format!("unknown gate {name:?}; expected one of {GATE_NAMES}")))?
        };
        for &level in levels.iter().rev() {
            kind = GateKind::Controlled { level, inner: Box::new(kind) };
        }
        let n = kind.arity();
        let wires = toks
            .get(i..i + n)
            .ok_or_else(|| bad("missing wire index"))?
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| bad("bad wire index")))
            .collect::<Result<Vec<_>>>()?;
        i += n;
        if name == "ZPH" {
            let [a, b] = toks.get(i..i + 2).ok_or_else(|| bad("ZPH needs two phase labels"))? else { unreachable!() };
            let p = Phase::new(parse_rational(a)?, parse_rational(b)?);
            kind = set_phase(kind, p);
            i += 2;
        }
        if i != toks.len() {
            return Err(bad("trailing tokens"));
        }
        Gate::new(kind, wires)
    }
}

fn set_phase(kind: GateKind, p: Phase) -> GateKind {
    match kind {
        GateKind::Controlled { level, inner } => GateKind::Controlled { level, inner: Box::new(set_phase(*inner, p)) },
        _ => GateKind::Zphase(p),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub n_wires: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_wires: usize) -> Self {
        Circuit { n_wires, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        assert!(g.wires.iter().all(|&w| w < self.n_wires), "gate {g} outside {} wires", self.n_wires);
        self.gates.push(g);
        self
    }

    pub fn extend(&mut self, other: &Circuit) -> &mut Self {
        assert!(other.n_wires <= self.n_wires);
        for g in &other.gates {
            self.push(g.clone());
        }
        self
    }

    /// Append `other` with its wire `k` placed on `map[k]`.
    pub fn extend_mapped(&mut self, other: &Circuit, map: &[usize]) -> &mut Self {
        for g in &other.gates {
            let wires = g.wires.iter().map(|&w| map[w]).collect();
            self.push(Gate { kind: g.kind.clone(), wires });
        }
        self
    }

    pub fn inverse(&self) -> Circuit {
        Circuit { n_wires: self.n_wires, gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if let Some(w) = g.wires.iter().find(|&&w| w >= self.n_wires) {
                return Err(Error::Arity(format!("gate {g} uses wire {w} of {}", self.n_wires)));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("qutrits {}\n", self.n_wires);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parse the text format. Without a `qutrits` header the wire count is
    /// one more than the largest index used.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut declared = None;
        let mut gates = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("qutrits") {
                let n = rest.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad header {line:?}")))?;
                declared = Some(n);
                continue;
            }
            gates.push(line.parse::<Gate>()?);
        }
        let used = gates.iter().flat_map(|g| g.wires.iter()).map(|w| w + 1).max().unwrap_or(0);
        let n_wires = declared.unwrap_or(used);
        let c = Circuit { n_wires, gates };
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::rat;

    #[test]
    fn text_roundtrip() {
        let text = "qutrits 3\nCX 0 1\nZPH 2 1/3 -1/3\nC2 Z 0 1\nC0 ZPH 2 1 1/4 1/2\nHDG 2\nR 0\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.gates[1].kind, GateKind::t());
        assert_eq!(c.gates[2].kind, GateKind::Controlled { level: 2, inner: Box::new(GateKind::z()) });
        assert_eq!(c.gates[3].kind, GateKind::Controlled {
            level: 0,
            inner: Box::new(GateKind::Zphase(Phase::new(rat(1, 4), rat(1, 2)))),
        });
        let again = Circuit::parse(&c.to_text()).unwrap();
        assert_eq!(again, c);
        assert!(c.to_text().contains("T 2\n"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Circuit::parse("FOO 0"), Err(Error::Parse(_))));
        assert!(matches!(Circuit::parse("CX 0 0"), Err(Error::Arity(_))));
        assert!(matches!(Circuit::parse("qutrits 1\nCX 0 1"), Err(Error::Arity(_))));
        assert!(matches!(Circuit::parse("ZPH 0 1/0 1"), Err(Error::Parse(_))));
        assert!(matches!(Circuit::parse("C3 Z 0 1"), Err(Error::Parse(_))));
        assert!(matches!(Circuit::parse("T 0 1"), Err(Error::Parse(_))));
    }

    #[test]
    fn aliases_are_canonical() {
        assert_eq!(GateKind::Zphase(Phase::ratios((1, 3), (-1, 3))), GateKind::t());
        assert_eq!(GateKind::s(), GateKind::Zphase(Phase::ints(0, 1)));
        assert_eq!(GateKind::r(), GateKind::Zphase(Phase::ratios((0, 1), (3, 2))));
        assert_eq!(GateKind::t().inverse(), GateKind::tdg());
    }
}
