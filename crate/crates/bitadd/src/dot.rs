//! Graphviz export.

use std::fmt::Write;

use bitadd_core::{Circuit, WireRef};

fn node(w: WireRef) -> String {
    match w {
        WireRef::Const(v) => format!("c{}", v as u8),
        WireRef::Input(i) => format!("x{i}"),
        WireRef::Gate(g) => format!("g{g}"),
    }
}

/// One node per input, used constant, gate and output; edges run from
/// operands to the gates reading them.
pub fn export_dot(c: &Circuit) -> String {
    let mut text = String::from("digraph circuit {\n  rankdir=LR;\n");
    for i in 0..c.input_count() {
        writeln!(text, "  x{i} [shape=box, label=\"x{i}\"];").unwrap();
    }
    let mut constants = [false; 2];
    let wires = c
        .gates()
        .iter()
        .flat_map(|g| [g.left, g.right])
        .chain(c.outputs().iter().map(|o| o.wire));
    for w in wires {
        if let WireRef::Const(v) = w {
            constants[v as usize] = true;
        }
    }
    for (v, used) in constants.into_iter().enumerate() {
        if used {
            writeln!(text, "  c{v} [shape=box, style=dashed, label=\"{v}\"];").unwrap();
        }
    }
    for (i, g) in c.gates().iter().enumerate() {
        writeln!(text, "  g{i} [label=\"g{i}\\n{}\"];", g.op.name()).unwrap();
        writeln!(text, "  {} -> g{i};", node(g.left)).unwrap();
        writeln!(text, "  {} -> g{i};", node(g.right)).unwrap();
    }
    for (k, o) in c.outputs().iter().enumerate() {
        writeln!(
            text,
            "  y{k} [shape=invhouse, label=\"y{k} (2^{})\"];\n  {} -> y{k};",
            o.significance,
            node(o.wire)
        )
        .unwrap();
    }
    text.push_str("}\n");
    text
}
