//! ISCAS BENCH export.
//!
//! BENCH only knows AND, OR, XOR, NAND, NOR, XNOR, NOT and BUF. The other
//! two-input functions are written with an extra `NOT` line, and constants
//! are derived from `x0`, so the exported line count can exceed the circuit
//! size. Outputs are named `y0..y{m-1}` and their significances go in a
//! `# significances:` header comment.

use std::fmt::Write;

use bitadd_core::{BinOp, Circuit, WireRef};

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum BenchError {
    #[error("a circuit without inputs cannot express constants in BENCH")]
    ConstantWithoutInputs,
}

enum Shape {
    Native(&'static str),
    /// Gate over the negated left operand.
    NotLeft(&'static str),
    NotRight(&'static str),
    Buf(bool),
    Inverter(bool),
    Const(bool),
}

fn shape(op: BinOp) -> Shape {
    match op {
        BinOp::AND => Shape::Native("AND"),
        BinOp::OR => Shape::Native("OR"),
        BinOp::XOR => Shape::Native("XOR"),
        BinOp::NAND => Shape::Native("NAND"),
        BinOp::NOR => Shape::Native("NOR"),
        BinOp::XNOR => Shape::Native("XNOR"),
        BinOp::GT => Shape::NotRight("AND"),
        BinOp::LT => Shape::NotLeft("AND"),
        BinOp::GEQ => Shape::NotRight("OR"),
        BinOp::LEQ => Shape::NotLeft("OR"),
        BinOp::LEFT => Shape::Buf(true),
        BinOp::RIGHT => Shape::Buf(false),
        BinOp::NOT_LEFT => Shape::Inverter(true),
        BinOp::NOT_RIGHT => Shape::Inverter(false),
        BinOp::FALSE => Shape::Const(false),
        _ => Shape::Const(true),
    }
}

struct Names {
    gates: Vec<String>,
    const_names: [Option<String>; 2],
}

impl Names {
    fn of(&self, w: WireRef) -> String {
        match w {
            WireRef::Input(i) => format!("x{i}"),
            WireRef::Gate(g) => self.gates[g as usize].clone(),
            WireRef::Const(v) => self.const_names[v as usize]
                .clone()
                .expect("constant declared"),
        }
    }
}

fn uses_constants(c: &Circuit) -> [bool; 2] {
    let mut used = [false; 2];
    let operands = c.gates().iter().flat_map(|g| [g.left, g.right]);
    for w in operands.chain(c.outputs().iter().map(|o| o.wire)) {
        if let WireRef::Const(v) = w {
            used[v as usize] = true;
        }
    }
    for g in c.gates() {
        match g.op {
            BinOp::FALSE => used[0] = true,
            BinOp::TRUE => used[1] = true,
            _ => {}
        }
    }
    used
}

pub fn export_bench(c: &Circuit) -> Result<String, BenchError> {
    let used = uses_constants(c);
    if c.input_count() == 0 && used.iter().any(|&u| u) {
        return Err(BenchError::ConstantWithoutInputs);
    }

    // A gate feeding an output takes the output's name, unless an earlier
    // output already claimed it.
    let mut gates: Vec<String> = (0..c.size()).map(|g| format!("g{g}")).collect();
    let mut buffered = Vec::new();
    let mut named = vec![false; c.size()];
    for (k, o) in c.outputs().iter().enumerate() {
        match o.wire {
            WireRef::Gate(g) if !named[g as usize] => {
                named[g as usize] = true;
                gates[g as usize] = format!("y{k}");
            }
            w => buffered.push((k, w)),
        }
    }

    let mut text = String::new();
    let significances: Vec<String> = c
        .outputs()
        .iter()
        .map(|o| o.significance.to_string())
        .collect();
    writeln!(text, "# significances: {}", significances.join(",")).unwrap();
    for i in 0..c.input_count() {
        writeln!(text, "INPUT(x{i})").unwrap();
    }
    for k in 0..c.outputs().len() {
        writeln!(text, "OUTPUT(y{k})").unwrap();
    }

    let mut names = Names {
        gates,
        const_names: [None, None],
    };
    for (v, op) in [(false, "XOR"), (true, "XNOR")] {
        if used[v as usize] {
            let name = format!("const{}", v as u8);
            writeln!(text, "{name} = {op}(x0, x0)").unwrap();
            names.const_names[v as usize] = Some(name);
        }
    }

    for (i, g) in c.gates().iter().enumerate() {
        let out = names.gates[i].clone();
        let (a, b) = (names.of(g.left), names.of(g.right));
        match shape(g.op) {
            Shape::Native(op) => writeln!(text, "{out} = {op}({a}, {b})").unwrap(),
            Shape::NotLeft(op) => {
                writeln!(text, "{out}_n = NOT({a})").unwrap();
                writeln!(text, "{out} = {op}({out}_n, {b})").unwrap();
            }
            Shape::NotRight(op) => {
                writeln!(text, "{out}_n = NOT({b})").unwrap();
                writeln!(text, "{out} = {op}({a}, {out}_n)").unwrap();
            }
            Shape::Buf(left) => {
                writeln!(text, "{out} = BUF({})", if left { a } else { b }).unwrap()
            }
            Shape::Inverter(left) => {
                writeln!(text, "{out} = NOT({})", if left { a } else { b }).unwrap()
            }
            Shape::Const(v) => {
                writeln!(text, "{out} = BUF({})", names.of(WireRef::Const(v))).unwrap()
            }
        }
    }
    for (k, w) in buffered {
        writeln!(text, "y{k} = BUF({})", names.of(w)).unwrap();
    }
    Ok(text)
}
