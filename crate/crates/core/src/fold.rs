//! Constant propagation and dead-gate removal.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::circuit::{BinOp, Circuit, Unary, WireRef};

/// What an original gate turned into after folding.
#[derive(Clone, Copy)]
enum Value {
    Const(bool),
    Wire { wire: WireRef, negated: bool },
}

impl Value {
    fn plain(wire: WireRef) -> Value {
        match wire {
            WireRef::Const(v) => Value::Const(v),
            _ => Value::Wire {
                wire,
                negated: false,
            },
        }
    }

    fn apply(self, unary: Unary) -> Value {
        match (unary, self) {
            (Unary::Const(v), _) => Value::Const(v),
            (Unary::Identity, v) => v,
            (Unary::Not, Value::Const(v)) => Value::Const(!v),
            (Unary::Not, Value::Wire { wire, negated }) => Value::Wire {
                wire,
                negated: !negated,
            },
        }
    }
}

/// Propagates constants through `circuit` and drops gates that no longer
/// reach an output.
///
/// Gates fed by a constant become constants or pass-throughs, and negations
/// that fall out of that are absorbed into the truth tables of their
/// consumers. An output that ends up as the negation of a wire costs one
/// gate, but only when a removed gate produced that negation, so the result
/// is never larger than the input. Gate order is preserved, so a circuit with
/// nothing to fold comes back unchanged.
pub fn fold_constants(circuit: &Circuit) -> Circuit {
    let mut folded = Circuit::new(circuit.input_count());
    let mut values: Vec<Value> = Vec::with_capacity(circuit.size());
    let resolve = |values: &[Value], w: WireRef| match w {
        WireRef::Gate(g) => values[g as usize],
        other => Value::plain(other),
    };
    for gate in circuit.gates() {
        let left = resolve(&values, gate.left);
        let right = resolve(&values, gate.right);
        let value = match (left, right) {
            (Value::Const(a), Value::Const(b)) => Value::Const(gate.op.eval(a, b)),
            (Value::Const(a), wire) => wire.apply(gate.op.restrict_left(a)),
            (wire, Value::Const(b)) => wire.apply(gate.op.restrict_right(b)),
            (
                Value::Wire {
                    wire: l,
                    negated: nl,
                },
                Value::Wire {
                    wire: r,
                    negated: nr,
                },
            ) => {
                let mut op = gate.op;
                if nl {
                    op = op.negate_left();
                }
                if nr {
                    op = op.negate_right();
                }
                if l == r {
                    Value::plain(l).apply(op.diagonal())
                } else if !op.depends_on_left() {
                    Value::plain(r).apply(op.restrict_left(false))
                } else if !op.depends_on_right() {
                    Value::plain(l).apply(op.restrict_right(false))
                } else {
                    Value::plain(folded.add_gate(op, l, r))
                }
            }
        };
        values.push(value);
    }

    let mut negations: BTreeMap<WireRef, WireRef> = BTreeMap::new();
    for output in circuit.outputs() {
        let wire = match resolve(&values, output.wire) {
            Value::Const(v) => WireRef::Const(v),
            Value::Wire {
                wire,
                negated: false,
            } => wire,
            Value::Wire {
                wire,
                negated: true,
            } => *negations
                .entry(wire)
                .or_insert_with(|| folded.add_gate(BinOp::NOT_LEFT, wire, wire)),
        };
        folded
            .mark_output(wire, output.significance)
            .expect("folding preserves output order");
    }
    sweep(&folded)
}

/// Removes gates that do not reach any output, renumbering the rest.
pub fn sweep(circuit: &Circuit) -> Circuit {
    let live = circuit.live_gates();
    if live.iter().all(|&l| l) {
        return circuit.clone();
    }
    let mut swept = Circuit::new(circuit.input_count());
    let mut remap: Vec<Option<WireRef>> = Vec::with_capacity(circuit.size());
    let map = |remap: &[Option<WireRef>], w: WireRef| match w {
        WireRef::Gate(g) => remap[g as usize].expect("live gate reads a live gate"),
        other => other,
    };
    for (gate, alive) in circuit.gates().iter().zip(live) {
        if alive {
            let l = map(&remap, gate.left);
            let r = map(&remap, gate.right);
            remap.push(Some(swept.add_gate(gate.op, l, r)));
        } else {
            remap.push(None);
        }
    }
    for output in circuit.outputs() {
        swept
            .mark_output(map(&remap, output.wire), output.significance)
            .expect("sweeping preserves output order");
    }
    swept
}

/// Adds `op(a, b)` to `circuit` unless a constant operand makes the gate
/// unnecessary, in which case the constant or the surviving operand is
/// returned and no gate is added.
///
/// Results that would need an inverter still cost a gate.
pub fn add_gate_simplified(circuit: &mut Circuit, op: BinOp, a: WireRef, b: WireRef) -> WireRef {
    let unary_on = |unary: Unary, w: WireRef| match unary {
        Unary::Const(v) => Some(WireRef::Const(v)),
        Unary::Identity => Some(w),
        Unary::Not => None,
    };
    let shortcut = match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Some(WireRef::Const(op.eval(x, y))),
        (Some(x), None) => unary_on(op.restrict_left(x), b),
        (None, Some(y)) => unary_on(op.restrict_right(y), a),
        (None, None) if a == b => unary_on(op.diagonal(), a),
        (None, None) => None,
    };
    shortcut.unwrap_or_else(|| circuit.add_gate(op, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{emit_mdfa, BitPair};

    fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |x| (0..n).map(|i| x >> i & 1 == 1).collect())
    }

    fn assert_same_function(a: &Circuit, b: &Circuit) {
        assert_eq!(a.input_count(), b.input_count());
        for bits in all_assignments(a.input_count()) {
            assert_eq!(
                a.weighted_output_value(&bits).unwrap(),
                b.weighted_output_value(&bits).unwrap(),
                "assignment {bits:?}"
            );
        }
    }

    #[test]
    fn xor_with_zero_is_a_pass_through() {
        let mut c = Circuit::new(1);
        let g = c.xor(WireRef::input(0), WireRef::ZERO);
        c.mark_output(g, 0).unwrap();
        let f = fold_constants(&c);
        assert_eq!(f.size(), 0);
        assert_eq!(f.outputs()[0].wire, WireRef::Input(0));
    }

    #[test]
    fn and_with_one_is_a_pass_through() {
        let mut c = Circuit::new(1);
        let g = c.and(WireRef::input(0), WireRef::ONE);
        c.mark_output(g, 0).unwrap();
        let f = fold_constants(&c);
        assert_eq!(f.size(), 0);
        assert_eq!(f.outputs()[0].wire, WireRef::Input(0));
    }

    #[test]
    fn negation_is_absorbed_into_consumer() {
        let mut c = Circuit::new(2);
        let n = c.xor(WireRef::input(0), WireRef::ONE);
        let g = c.and(n, WireRef::input(1));
        c.mark_output(g, 0).unwrap();
        let f = fold_constants(&c);
        assert_eq!(f.size(), 1);
        assert_eq!(f.gates()[0].op, BinOp::LT);
        assert_same_function(&c, &f);
    }

    #[test]
    fn negated_output_is_materialised_once() {
        let mut c = Circuit::new(1);
        let n = c.xor(WireRef::input(0), WireRef::ONE);
        c.mark_output(n, 0).unwrap();
        let f = fold_constants(&c);
        assert_eq!(f.size(), 1);
        assert_same_function(&c, &f);
    }

    #[test]
    fn mdfa_with_zero_t_folds_to_six_gates() {
        let mut c = Circuit::new(4);
        let pair1 = BitPair::new(WireRef::input(0), WireRef::input(1));
        let pair2 = BitPair::new(WireRef::input(2), WireRef::input(3));
        let (b0, next) = emit_mdfa(&mut c, pair1, WireRef::ZERO, pair2);
        c.mark_output(b0, 0).unwrap();
        c.mark_output(next.rep, 1).unwrap();
        c.mark_output(next.parity, 2).unwrap();
        assert_eq!(c.size(), 8);
        let f = fold_constants(&c);
        assert_eq!(f.size(), 6);
        assert_same_function(&c, &f);
    }

    #[test]
    fn untouched_circuit_is_identical() {
        let mut c = Circuit::new(3);
        let g = c.xor(WireRef::input(0), WireRef::input(1));
        let h = c.add_gate(BinOp::NAND, g, WireRef::input(2));
        c.mark_output(g, 0).unwrap();
        c.mark_output(h, 1).unwrap();
        assert_eq!(fold_constants(&c), c);
    }

    #[test]
    fn constant_outputs_survive() {
        let mut c = Circuit::new(1);
        let g = c.and(WireRef::input(0), WireRef::ZERO);
        c.mark_output(g, 3).unwrap();
        let f = fold_constants(&c);
        assert_eq!(f.size(), 0);
        assert_eq!(f.outputs()[0].wire, WireRef::ZERO);
    }

    #[test]
    fn sweep_drops_dead_gates() {
        let mut c = Circuit::new(2);
        let dead = c.xor(WireRef::input(0), WireRef::input(1));
        let live = c.and(WireRef::input(0), WireRef::input(1));
        c.add_gate(BinOp::OR, dead, live);
        c.mark_output(live, 0).unwrap();
        let s = sweep(&c);
        assert_eq!(s.size(), 1);
        assert!(s.dangling_gates().is_empty());
        assert_same_function(&c, &s);
    }

    #[test]
    fn simplified_emission() {
        let mut c = Circuit::new(2);
        let x = WireRef::input(0);
        assert_eq!(
            add_gate_simplified(&mut c, BinOp::AND, x, WireRef::ZERO),
            WireRef::ZERO
        );
        assert_eq!(add_gate_simplified(&mut c, BinOp::XOR, WireRef::ZERO, x), x);
        assert_eq!(add_gate_simplified(&mut c, BinOp::OR, x, x), x);
        assert_eq!(c.size(), 0);
        add_gate_simplified(&mut c, BinOp::XOR, x, WireRef::ONE);
        add_gate_simplified(&mut c, BinOp::XOR, x, WireRef::input(1));
        assert_eq!(c.size(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn wire_strategy(inputs: usize, gates: usize) -> impl Strategy<Value = WireRef> {
            prop_oneof![
                1 => any::<bool>().prop_map(WireRef::Const),
                3 => (0..inputs).prop_map(WireRef::input),
                3 => (0..gates.max(1)).prop_map(move |g| if gates == 0 {
                    WireRef::input(0)
                } else {
                    WireRef::gate(g)
                }),
            ]
        }

        fn random_circuit() -> impl Strategy<Value = Circuit> {
            (1usize..=6, 1usize..=24).prop_flat_map(|(inputs, gates)| {
                let gate_specs: Vec<_> = (0..gates)
                    .map(|i| (0u8..16, wire_strategy(inputs, i), wire_strategy(inputs, i)))
                    .collect();
                let outputs = proptest::collection::vec(wire_strategy(inputs, gates), 1..5);
                (Just(inputs), gate_specs, outputs).prop_map(|(inputs, specs, outs)| {
                    let mut c = Circuit::new(inputs);
                    for (table, l, r) in specs {
                        c.add_gate(BinOp::from_truth_table(table).unwrap(), l, r);
                    }
                    for (k, w) in outs.into_iter().enumerate() {
                        c.mark_output(w, k as u64).unwrap();
                    }
                    c
                })
            })
        }

        proptest! {
            #[test]
            fn folding_preserves_function_and_never_grows(c in random_circuit()) {
                let f = fold_constants(&c);
                prop_assert!(f.size() <= c.size());
                prop_assert!(f.dangling_gates().is_empty());
                for bits in all_assignments(c.input_count()) {
                    prop_assert_eq!(c.evaluate(&bits).unwrap(), f.evaluate(&bits).unwrap());
                }
            }
        }
    }
}
