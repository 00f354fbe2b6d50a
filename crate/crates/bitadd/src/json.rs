//! Native JSON netlist format.
//!
//! ```json
//! {
//!   "version": "bitadd-netlist/1",
//!   "input_count": 2,
//!   "gates": [[6, "x0", "x1"], [1, "x0", "x1"]],
//!   "outputs": [["g0", 0], ["g1", 1]]
//! }
//! ```
//!
//! Gate opcodes are 4-bit truth tables, most significant bit for inputs
//! `(0, 0)`. Wire references are `x<i>` for inputs, `g<i>` for gates and
//! `0`/`1` for constants.

use bitadd_core::{BinOp, Circuit, CircuitError, Gate, Output, WireRef};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "bitadd-netlist/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetlistDocument {
    pub version: String,
    pub input_count: usize,
    pub gates: Vec<(u8, String, String)>,
    pub outputs: Vec<(String, u64)>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported version {0:?}, expected {VERSION:?}")]
    Version(String),
    #[error("gate {gate}: opcode {opcode} is not a 4-bit truth table")]
    Opcode { gate: usize, opcode: u8 },
    #[error("malformed wire reference {0:?}")]
    WireSyntax(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> JsonError {
        JsonError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub fn format_wire(w: WireRef) -> String {
    match w {
        WireRef::Const(false) => "0".into(),
        WireRef::Const(true) => "1".into(),
        WireRef::Input(i) => format!("x{i}"),
        WireRef::Gate(g) => format!("g{g}"),
    }
}

pub fn parse_wire(text: &str) -> Result<WireRef, JsonError> {
    let bad = || JsonError::WireSyntax(text.into());
    let index = |digits: &str| -> Result<usize, JsonError> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        digits.parse::<u32>().map(|i| i as usize).map_err(|_| bad())
    };
    match text {
        "0" => Ok(WireRef::ZERO),
        "1" => Ok(WireRef::ONE),
        _ => match text.split_at_checked(1) {
            Some(("x", rest)) => Ok(WireRef::input(index(rest)?)),
            Some(("g", rest)) => Ok(WireRef::gate(index(rest)?)),
            _ => Err(bad()),
        },
    }
}

impl NetlistDocument {
    pub fn from_circuit(c: &Circuit) -> NetlistDocument {
        NetlistDocument {
            version: VERSION.into(),
            input_count: c.input_count(),
            gates: c
                .gates()
                .iter()
                .map(|g| {
                    (
                        g.op.truth_table(),
                        format_wire(g.left),
                        format_wire(g.right),
                    )
                })
                .collect(),
            outputs: c
                .outputs()
                .iter()
                .map(|o| (format_wire(o.wire), o.significance))
                .collect(),
        }
    }

    pub fn to_circuit(&self) -> Result<Circuit, JsonError> {
        if self.version != VERSION {
            return Err(JsonError::Version(self.version.clone()));
        }
        let mut gates = Vec::with_capacity(self.gates.len());
        for (i, (opcode, left, right)) in self.gates.iter().enumerate() {
            let op = BinOp::from_truth_table(*opcode).ok_or(JsonError::Opcode {
                gate: i,
                opcode: *opcode,
            })?;
            gates.push(Gate {
                op,
                left: parse_wire(left)?,
                right: parse_wire(right)?,
            });
        }
        let mut outputs = Vec::with_capacity(self.outputs.len());
        for (wire, significance) in &self.outputs {
            outputs.push(Output {
                wire: parse_wire(wire)?,
                significance: *significance,
            });
        }
        Ok(Circuit::from_parts(self.input_count, gates, outputs)?)
    }
}

pub fn serialize_json(c: &Circuit) -> String {
    let mut text = serde_json::to_string_pretty(&NetlistDocument::from_circuit(c))
        .expect("netlist documents always serialize");
    text.push('\n');
    text
}

pub fn parse_json(text: &str) -> Result<Circuit, JsonError> {
    let doc: NetlistDocument = serde_json::from_str(text)?;
    doc.to_circuit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use bitadd_core::{generate_sum, BaMethod};

    #[test]
    fn wire_names_round_trip() {
        for w in [
            WireRef::ZERO,
            WireRef::ONE,
            WireRef::input(7),
            WireRef::gate(123),
        ] {
            assert_eq!(parse_wire(&format_wire(w)).unwrap(), w);
        }
        for bad in ["", "x", "g-1", "y3", "x1a", "2", "x+1", "g99999999999"] {
            assert!(parse_wire(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sum_round_trip() {
        let c = generate_sum(16, BaMethod::Mdfa).unwrap();
        assert_eq!(parse_json(&serialize_json(&c)).unwrap(), c);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_json("{\n  \"version\": \"bitadd-netlist/1\",\n  \"input_count\": oops\n}")
            .unwrap_err();
        match err {
            JsonError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn forward_reference_is_rejected() {
        let text = r#"{"version":"bitadd-netlist/1","input_count":1,"gates":[[6,"x0","g0"]],"outputs":[]}"#;
        assert!(matches!(parse_json(text), Err(JsonError::Circuit(_))));
    }

    #[test]
    fn bad_opcode_and_version() {
        let text = r#"{"version":"bitadd-netlist/1","input_count":1,"gates":[[16,"x0","x0"]],"outputs":[]}"#;
        assert!(matches!(
            parse_json(text),
            Err(JsonError::Opcode {
                gate: 0,
                opcode: 16
            })
        ));
        let text = r#"{"version":"v0","input_count":0,"gates":[],"outputs":[]}"#;
        assert!(matches!(parse_json(text), Err(JsonError::Version(_))));
    }
}
