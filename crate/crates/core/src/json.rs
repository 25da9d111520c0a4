//! JSON document format for diagrams.
//!
//! ```json
//! {"scalar": {"omega_exp": "0/1", "sqrt3_exp": 0, "sign": 1},
//!  "vertices": {"0": {"kind": "B"}, "1": {"kind": "Z", "phase": ["1/3", "8/3"]}},
//!  "edges": [["0", "1"]], "inputs": ["0"], "outputs": []}
//! ```
//!
//! Vertices are keyed by their id as a string; kinds are `Z`, `X`, `H`,
//! `Hdag` and `B` (boundary). Rationals are written `"num/den"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, Generator, VertexId};
use crate::error::{Error, Result};
use crate::phase::{format_rational_strict, parse_rational, Phase};
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
struct ScalarDoc {
    omega_exp: String,
    sqrt3_exp: i32,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    scalar: ScalarDoc,
    vertices: BTreeMap<String, VertexDoc>,
    edges: Vec<[String; 2]>,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

fn phase_doc(p: &Phase) -> [String; 2] {
    [format_rational_strict(p.a()), format_rational_strict(p.b())]
}

/// Serialize with ids compacted to `0..n`, so equal diagrams built in
/// different orders still print identically once renumbered.
pub fn to_json(d: &Diagram) -> String {
    serde_json::to_string_pretty(d).expect("diagram document always serializes")
}

fn to_doc(d: &Diagram) -> DiagramDoc {
    let d = d.compacted();
    let s = d.scalar();
    DiagramDoc {
        scalar: ScalarDoc {
            omega_exp: format_rational_strict(s.omega_exp()),
            sqrt3_exp: s.sqrt3_exp(),
            sign: if s.is_negative() { -1 } else { 1 },
        },
        vertices: d
            .vertices()
            .map(|(v, g)| {
                let phase = g.phase().map(phase_doc);
                (v.to_string(), VertexDoc { kind: g.kind_name().to_string(), phase })
            })
            .collect(),
        edges: d.edges().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        inputs: d.inputs().iter().map(|v| v.to_string()).collect(),
        outputs: d.outputs().iter().map(|v| v.to_string()).collect(),
    }
}

fn parse_generator(v: &VertexDoc) -> Result<Generator> {
    let phase = || -> Result<Phase> {
        match &v.phase {
            Some([a, b]) => Phase::parse(a, b),
            None => Ok(Phase::zero()),
        }
    };
    Ok(match v.kind.as_str() {
        "Z" => Generator::Z(phase()?),
        "X" => Generator::X(phase()?),
        "H" => Generator::H,
        "Hdag" => Generator::HDag,
        "B" => Generator::Boundary,
        other => return Err(Error::Parse(format!("unknown generator kind {other:?}"))),
    })
}

/// Parse and validate a diagram document.
pub fn from_json(text: &str) -> Result<Diagram> {
    let doc: DiagramDoc = serde_json::from_str(text)?;
    from_doc(doc)
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_doc(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        from_doc(DiagramDoc::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn from_doc(doc: DiagramDoc) -> Result<Diagram> {
    let numeric = doc.vertices.keys().all(|k| k.parse::<VertexId>().is_ok());
    let ids: BTreeMap<&str, VertexId> = if numeric {
        doc.vertices.keys().map(|k| (k.as_str(), k.parse().unwrap())).collect()
    } else {
        doc.vertices.keys().enumerate().map(|(i, k)| (k.as_str(), i)).collect()
    };
    let lookup = |k: &str| -> Result<VertexId> {
        ids.get(k)
            .copied()
            .ok_or_else(|| Error::InvalidDiagram(format!("reference to unknown vertex {k:?}")))
    };
    let mut d = Diagram::new();
    for (k, v) in &doc.vertices {
        d.insert_vertex_with_id(ids[k.as_str()], parse_generator(v)?);
    }
    for [a, b] in &doc.edges {
        d.add_edge(lookup(a)?, lookup(b)?)?;
    }
    let inputs = doc.inputs.iter().map(|k| lookup(k)).collect::<Result<Vec<_>>>()?;
    let outputs = doc.outputs.iter().map(|k| lookup(k)).collect::<Result<Vec<_>>>()?;
    d.set_boundaries(inputs, outputs);
    let negative = match doc.scalar.sign {
        1 => false,
        -1 => true,
        s => return Err(Error::Parse(format!("scalar sign must be 1 or -1, got {s}"))),
    };
    d.set_scalar(Scalar::new(parse_rational(&doc.scalar.omega_exp)?, doc.scalar.sqrt3_exp, negative));
    d.validate()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_roundtrip() {
        let d = Diagram::new();
        let text = to_json(&d);
        assert!(text.contains("\"vertices\": {}"));
        assert_eq!(from_json(&text).unwrap(), d);
    }

    #[test]
    fn roundtrip_keeps_structure() {
        let mut d = Diagram::single(Generator::X(Phase::t()), 2, 1);
        d.mul_scalar(&Scalar::new(crate::phase::rat(1, 4), -3, true));
        let back = from_json(&to_json(&d)).unwrap();
        assert_eq!(back, d.compacted());
        assert_eq!(to_json(&back), to_json(&d));
    }

    #[test]
    fn hbox_of_degree_three_rejected() {
        let text = r#"{"scalar":{"omega_exp":"0/1","sqrt3_exp":0,"sign":1},
            "vertices":{"0":{"kind":"B"},"1":{"kind":"B"},"2":{"kind":"B"},"3":{"kind":"H"}},
            "edges":[["0","3"],["1","3"],["2","3"]],"inputs":["0","1"],"outputs":["2"]}"#;
        assert!(matches!(from_json(text), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn bad_documents() {
        let unknown = r#"{"scalar":{"omega_exp":"0/1","sqrt3_exp":0,"sign":1},
            "vertices":{"a":{"kind":"Q"}},"edges":[],"inputs":[],"outputs":[]}"#;
        assert!(matches!(from_json(unknown), Err(Error::Parse(_))));
        let bad_phase = r#"{"scalar":{"omega_exp":"0/1","sqrt3_exp":0,"sign":1},
            "vertices":{"a":{"kind":"Z","phase":["1/0","0"]}},"edges":[],"inputs":[],"outputs":[]}"#;
        assert!(matches!(from_json(bad_phase), Err(Error::Parse(_))));
        assert!(matches!(from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn string_ids_are_accepted() {
        let text = r#"{"scalar":{"omega_exp":"0/1","sqrt3_exp":0,"sign":1},
            "vertices":{"in":{"kind":"B"},"out":{"kind":"B"},"z":{"kind":"Z","phase":["1/3","2/3"]}},
            "edges":[["in","z"],["z","out"]],"inputs":["in"],"outputs":["out"]}"#;
        let d = from_json(text).unwrap();
        assert_eq!(d.spider_count(), 1);
        assert_eq!(d.inputs().len(), 1);
    }
}
