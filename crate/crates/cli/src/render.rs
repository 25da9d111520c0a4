use std::fmt::Write;

use qutrit_zx::{Diagram, Generator};

fn label(g: &Generator) -> String {
    match g {
        Generator::Z(p) if p.is_zero() => "Z".into(),
        Generator::X(p) if p.is_zero() => "X".into(),
        Generator::Z(p) | Generator::X(p) => format!("{}({}, {})", g.kind_name(), p.a(), p.b()),
        other => other.kind_name().into(),
    }
}

fn style(g: &Generator) -> &'static str {
    match g {
        Generator::Z(_) => "shape=circle, style=filled, fillcolor=\"#ccffcc\"",
        Generator::X(_) => "shape=circle, style=filled, fillcolor=\"#ff8888\"",
        Generator::H | Generator::HDag => "shape=box, style=filled, fillcolor=\"#ffff88\"",
        Generator::Boundary => "shape=plaintext",
    }
}

/// Graphviz DOT, inputs on the left and outputs on the right.
pub fn dot(d: &Diagram) -> String {
    let mut s = String::from("graph diagram {\n  rankdir=LR;\n");
    let _ = writeln!(s, "  label=\"scalar {}\";", d.scalar());
    for (v, g) in d.vertices() {
        let name = if let Some(i) = d.inputs().iter().position(|&x| x == v) {
            format!("in{i}")
        } else if let Some(o) = d.outputs().iter().position(|&x| x == v) {
            format!("out{o}")
        } else {
            label(g)
        };
        let _ = writeln!(s, "  v{v} [label=\"{name}\", {}];", style(g));
    }
    for &(a, b) in d.edges() {
        let _ = writeln!(s, "  v{a} -- v{b};");
    }
    s.push_str("}\n");
    s
}

pub fn summary(d: &Diagram) -> String {
    let mut s = format!(
        "{} inputs, {} outputs, {} spiders, {} H boxes, {} edges, scalar {}\n",
        d.inputs().len(),
        d.outputs().len(),
        d.spider_count(),
        d.hbox_count(),
        d.num_edges(),
        d.scalar()
    );
    for (v, g) in d.vertices().filter(|(_, g)| **g != Generator::Boundary) {
        let _ = writeln!(s, "{v}: {} -- {:?}", label(g), d.neighbours(v));
    }
    s
}
