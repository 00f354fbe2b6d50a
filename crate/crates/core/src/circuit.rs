//! Gate-level circuits over the full binary basis.
//!
//! A [`Circuit`] is a list of two-input gates in topological order: every gate
//! may only read inputs, the two constants, or gates appended before it.
//! Outputs carry a significance, so the circuit's value on an assignment is
//! `sum(2^significance * bit)` over its outputs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::CircuitError;

/// One of the sixteen Boolean functions of two arguments.
///
/// The value is the function's truth table read as a 4-bit number whose most
/// significant bit is the row `(0, 0)`, followed by `(0, 1)`, `(1, 0)` and
/// `(1, 1)`. So `0b0110` is XOR and `0b0001` is AND.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinOp(u8);

/// A function of a single argument, produced when a gate operand is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unary {
    Const(bool),
    Identity,
    Not,
}

impl Unary {
    fn from_values(at0: bool, at1: bool) -> Self {
        match (at0, at1) {
            (false, false) => Unary::Const(false),
            (true, true) => Unary::Const(true),
            (false, true) => Unary::Identity,
            (true, false) => Unary::Not,
        }
    }
}

impl BinOp {
    pub const FALSE: BinOp = BinOp(0b0000);
    pub const AND: BinOp = BinOp(0b0001);
    /// `a AND NOT b`, also written `a > b`.
    pub const GT: BinOp = BinOp(0b0010);
    /// Projection onto the first operand.
    pub const LEFT: BinOp = BinOp(0b0011);
    /// `NOT a AND b`.
    pub const LT: BinOp = BinOp(0b0100);
    /// Projection onto the second operand.
    pub const RIGHT: BinOp = BinOp(0b0101);
    pub const XOR: BinOp = BinOp(0b0110);
    pub const OR: BinOp = BinOp(0b0111);
    pub const NOR: BinOp = BinOp(0b1000);
    pub const XNOR: BinOp = BinOp(0b1001);
    pub const NOT_RIGHT: BinOp = BinOp(0b1010);
    /// `a OR NOT b`.
    pub const GEQ: BinOp = BinOp(0b1011);
    pub const NOT_LEFT: BinOp = BinOp(0b1100);
    /// `NOT a OR b`.
    pub const LEQ: BinOp = BinOp(0b1101);
    pub const NAND: BinOp = BinOp(0b1110);
    pub const TRUE: BinOp = BinOp(0b1111);

    /// Returns `None` if `table` does not fit in four bits.
    pub const fn from_truth_table(table: u8) -> Option<BinOp> {
        if table < 16 {
            Some(BinOp(table))
        } else {
            None
        }
    }

    pub const fn truth_table(self) -> u8 {
        self.0
    }

    fn from_fn(f: impl Fn(bool, bool) -> bool) -> BinOp {
        let mut table = 0;
        for row in 0..4u8 {
            if f(row & 2 != 0, row & 1 != 0) {
                table |= 1 << (3 - row);
            }
        }
        BinOp(table)
    }

    #[inline]
    pub fn eval(self, a: bool, b: bool) -> bool {
        let row = ((a as u8) << 1) | b as u8;
        (self.0 >> (3 - row)) & 1 == 1
    }

    /// Evaluates the gate on 64 assignments at once, one per bit lane.
    #[inline]
    pub fn eval_words(self, a: u64, b: u64) -> u64 {
        match self.0 {
            0 => 0,
            1 => a & b,
            2 => a & !b,
            3 => a,
            4 => !a & b,
            5 => b,
            6 => a ^ b,
            7 => a | b,
            8 => !(a | b),
            9 => !(a ^ b),
            10 => !b,
            11 => a | !b,
            12 => !a,
            13 => !a | b,
            14 => !(a & b),
            _ => !0,
        }
    }

    pub fn negate_output(self) -> BinOp {
        BinOp(self.0 ^ 0b1111)
    }

    /// The function `(a, b) -> self(!a, b)`.
    pub fn negate_left(self) -> BinOp {
        BinOp::from_fn(|a, b| self.eval(!a, b))
    }

    /// The function `(a, b) -> self(a, !b)`.
    pub fn negate_right(self) -> BinOp {
        BinOp::from_fn(|a, b| self.eval(a, !b))
    }

    /// The function `(a, b) -> self(b, a)`.
    pub fn swap_operands(self) -> BinOp {
        BinOp::from_fn(|a, b| self.eval(b, a))
    }

    /// The unary function left when the first operand is fixed to `value`.
    pub fn restrict_left(self, value: bool) -> Unary {
        Unary::from_values(self.eval(value, false), self.eval(value, true))
    }

    /// The unary function left when the second operand is fixed to `value`.
    pub fn restrict_right(self, value: bool) -> Unary {
        Unary::from_values(self.eval(false, value), self.eval(true, value))
    }

    /// The unary function computed when both operands are the same wire.
    pub fn diagonal(self) -> Unary {
        Unary::from_values(self.eval(false, false), self.eval(true, true))
    }

    pub fn depends_on_left(self) -> bool {
        self.eval(false, false) != self.eval(true, false)
            || self.eval(false, true) != self.eval(true, true)
    }

    pub fn depends_on_right(self) -> bool {
        self.eval(false, false) != self.eval(false, true)
            || self.eval(true, false) != self.eval(true, true)
    }

    /// Short mnemonic used by the text exporters.
    pub fn name(self) -> &'static str {
        const NAMES: [&str; 16] = [
            "FALSE",
            "AND",
            "GT",
            "LEFT",
            "LT",
            "RIGHT",
            "XOR",
            "OR",
            "NOR",
            "XNOR",
            "NOT_RIGHT",
            "GEQ",
            "NOT_LEFT",
            "LEQ",
            "NAND",
            "TRUE",
        ];
        NAMES[self.0 as usize]
    }
}

impl fmt::Debug for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A reference to a circuit input, one of the two constants, or a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WireRef {
    Const(bool),
    Input(u32),
    Gate(u32),
}

impl WireRef {
    pub const ZERO: WireRef = WireRef::Const(false);
    pub const ONE: WireRef = WireRef::Const(true);

    pub fn input(index: usize) -> WireRef {
        WireRef::Input(u32::try_from(index).expect("input index exceeds u32"))
    }

    pub fn gate(index: usize) -> WireRef {
        WireRef::Gate(u32::try_from(index).expect("gate index exceeds u32"))
    }

    pub fn as_const(self) -> Option<bool> {
        match self {
            WireRef::Const(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for WireRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireRef::Const(v) => write!(f, "{}", *v as u8),
            WireRef::Input(i) => write!(f, "x{i}"),
            WireRef::Gate(g) => write!(f, "g{g}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub op: BinOp,
    pub left: WireRef,
    pub right: WireRef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Output {
    pub wire: WireRef,
    pub significance: u64,
}

/// A Boolean circuit of two-input gates with significance-tagged outputs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Circuit {
    input_count: usize,
    gates: Vec<Gate>,
    outputs: Vec<Output>,
}

impl Circuit {
    pub fn new(input_count: usize) -> Circuit {
        Circuit {
            input_count,
            gates: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Rebuilds a circuit from raw parts, checking every construction rule.
    pub fn from_parts(
        input_count: usize,
        gates: Vec<Gate>,
        outputs: Vec<Output>,
    ) -> Result<Circuit, CircuitError> {
        let mut circuit = Circuit::new(input_count);
        circuit.gates.reserve(gates.len());
        for gate in gates {
            circuit.try_add_gate(gate.op, gate.left, gate.right)?;
        }
        for output in outputs {
            circuit.mark_output(output.wire, output.significance)?;
        }
        Ok(circuit)
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    /// # Panics
    ///
    /// Panics if `index` is not below the input count.
    pub fn input(&self, index: usize) -> WireRef {
        assert!(index < self.input_count, "input {index} out of range");
        WireRef::input(index)
    }

    pub fn inputs(&self) -> impl Iterator<Item = WireRef> + '_ {
        (0..self.input_count).map(WireRef::input)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    /// Number of gates; inputs and constants are free.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn check_ref(&self, wire: WireRef) -> Result<(), CircuitError> {
        let valid = match wire {
            WireRef::Const(_) => true,
            WireRef::Input(i) => (i as usize) < self.input_count,
            WireRef::Gate(g) => (g as usize) < self.gates.len(),
        };
        if valid {
            Ok(())
        } else {
            Err(CircuitError::InvalidReference {
                wire,
                position: self.gates.len(),
            })
        }
    }

    pub fn try_add_gate(
        &mut self,
        op: BinOp,
        left: WireRef,
        right: WireRef,
    ) -> Result<WireRef, CircuitError> {
        self.check_ref(left)?;
        self.check_ref(right)?;
        self.gates.push(Gate { op, left, right });
        Ok(WireRef::gate(self.gates.len() - 1))
    }

    /// Appends a gate and returns the wire it drives.
    ///
    /// # Panics
    ///
    /// Panics on a forward or out-of-range operand. Generators only reference
    /// wires they have already built, so this indicates a generator bug.
    pub fn add_gate(&mut self, op: BinOp, left: WireRef, right: WireRef) -> WireRef {
        match self.try_add_gate(op, left, right) {
            Ok(wire) => wire,
            Err(err) => panic!("{err}"),
        }
    }

    pub fn xor(&mut self, a: WireRef, b: WireRef) -> WireRef {
        self.add_gate(BinOp::XOR, a, b)
    }

    pub fn and(&mut self, a: WireRef, b: WireRef) -> WireRef {
        self.add_gate(BinOp::AND, a, b)
    }

    pub fn or(&mut self, a: WireRef, b: WireRef) -> WireRef {
        self.add_gate(BinOp::OR, a, b)
    }

    pub fn gt(&mut self, a: WireRef, b: WireRef) -> WireRef {
        self.add_gate(BinOp::GT, a, b)
    }

    pub fn mark_output(&mut self, wire: WireRef, significance: u64) -> Result<(), CircuitError> {
        self.check_ref(wire)?;
        if let Some(last) = self.outputs.last() {
            if significance <= last.significance {
                return Err(CircuitError::NonMonotoneSignificance {
                    previous: last.significance,
                    significance,
                });
            }
        }
        self.outputs.push(Output { wire, significance });
        Ok(())
    }

    /// Length of the longest path, in gates, from an input or constant to each gate.
    pub fn gate_depths(&self) -> Vec<usize> {
        let mut depths: Vec<usize> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let d = wire_depth(&depths, gate.left).max(wire_depth(&depths, gate.right));
            depths.push(d + 1);
        }
        depths
    }

    /// Longest input-to-output path over marked outputs, counted in gates.
    pub fn depth(&self) -> usize {
        let depths = self.gate_depths();
        self.outputs
            .iter()
            .map(|o| wire_depth(&depths, o.wire))
            .max()
            .unwrap_or(0)
    }

    fn check_assignment(&self, len: usize) -> Result<(), CircuitError> {
        if len == self.input_count {
            Ok(())
        } else {
            Err(CircuitError::LengthMismatch {
                expected: self.input_count,
                actual: len,
            })
        }
    }

    /// Output bits, in output-list order, for one assignment of the inputs.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<Vec<bool>, CircuitError> {
        self.check_assignment(assignment.len())?;
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        let fetch = |values: &[bool], w: WireRef| match w {
            WireRef::Const(v) => v,
            WireRef::Input(i) => assignment[i as usize],
            WireRef::Gate(g) => values[g as usize],
        };
        for gate in &self.gates {
            let v = gate
                .op
                .eval(fetch(&values, gate.left), fetch(&values, gate.right));
            values.push(v);
        }
        Ok(self
            .outputs
            .iter()
            .map(|o| fetch(&values, o.wire))
            .collect())
    }

    /// Bit-parallel evaluation: lane `j` of `inputs[i]` is input `i` of
    /// assignment `j`. Returns one word per output. `scratch` holds gate
    /// values and can be reused across calls.
    pub fn evaluate_words(
        &self,
        inputs: &[u64],
        scratch: &mut Vec<u64>,
    ) -> Result<Vec<u64>, CircuitError> {
        self.check_assignment(inputs.len())?;
        scratch.clear();
        scratch.reserve(self.gates.len());
        for gate in &self.gates {
            let a = fetch_word(inputs, scratch, gate.left);
            let b = fetch_word(inputs, scratch, gate.right);
            scratch.push(gate.op.eval_words(a, b));
        }
        Ok(self
            .outputs
            .iter()
            .map(|o| fetch_word(inputs, scratch, o.wire))
            .collect())
    }

    /// `sum(2^significance * bit)` over the outputs.
    pub fn weighted_output_value(&self, assignment: &[bool]) -> Result<BigUint, CircuitError> {
        let bits = self.evaluate(assignment)?;
        let mut value = BigUint::zero();
        for (bit, output) in bits.into_iter().zip(&self.outputs) {
            if bit {
                value.set_bit(output.significance, true);
            }
        }
        Ok(value)
    }

    /// Gates whose value never reaches a marked output.
    pub fn dangling_gates(&self) -> Vec<usize> {
        let live = self.live_gates();
        live.iter()
            .enumerate()
            .filter_map(|(i, &alive)| (!alive).then_some(i))
            .collect()
    }

    pub(crate) fn live_gates(&self) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        for output in &self.outputs {
            if let WireRef::Gate(g) = output.wire {
                live[g as usize] = true;
            }
        }
        for i in (0..self.gates.len()).rev() {
            if !live[i] {
                continue;
            }
            let gate = self.gates[i];
            for w in [gate.left, gate.right] {
                if let WireRef::Gate(g) = w {
                    live[g as usize] = true;
                }
            }
        }
        live
    }

    pub(crate) fn clear_outputs(&mut self) {
        self.outputs.clear();
    }
}

#[inline]
fn wire_depth(depths: &[usize], wire: WireRef) -> usize {
    match wire {
        WireRef::Gate(g) => depths[g as usize],
        _ => 0,
    }
}

#[inline]
fn fetch_word(inputs: &[u64], gates: &[u64], wire: WireRef) -> u64 {
    match wire {
        WireRef::Const(false) => 0,
        WireRef::Const(true) => !0,
        WireRef::Input(i) => inputs[i as usize],
        WireRef::Gate(g) => gates[g as usize],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_adder() -> Circuit {
        let mut c = Circuit::new(2);
        let (a, b) = (c.input(0), c.input(1));
        let sum = c.xor(a, b);
        let carry = c.and(a, b);
        c.mark_output(sum, 0).unwrap();
        c.mark_output(carry, 1).unwrap();
        c
    }

    /// The five-gate full adder: g1=a^b, g2=b^d, g3=g1|g2, sum=g1^d, carry=g3^sum.
    fn full_adder() -> Circuit {
        let mut c = Circuit::new(3);
        let (a, b, d) = (c.input(0), c.input(1), c.input(2));
        let g1 = c.xor(a, b);
        let g2 = c.xor(b, d);
        let g3 = c.or(g1, g2);
        let sum = c.xor(g1, d);
        let carry = c.xor(g3, sum);
        c.mark_output(sum, 0).unwrap();
        c.mark_output(carry, 1).unwrap();
        c
    }

    #[test]
    fn named_ops_match_their_definitions() {
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(BinOp::XOR.eval(a, b), a ^ b);
                assert_eq!(BinOp::AND.eval(a, b), a & b);
                assert_eq!(BinOp::OR.eval(a, b), a | b);
                assert_eq!(BinOp::GT.eval(a, b), a & !b);
                assert_eq!(BinOp::XNOR.eval(a, b), !(a ^ b));
                assert_eq!(BinOp::NOR.eval(a, b), !(a | b));
                assert_eq!(BinOp::NAND.eval(a, b), !(a & b));
            }
        }
        assert_eq!(BinOp::from_truth_table(16), None);
    }

    #[test]
    fn word_evaluation_agrees_with_scalar() {
        let a = 0b1100u64;
        let b = 0b1010u64;
        for table in 0..16 {
            let op = BinOp::from_truth_table(table).unwrap();
            let w = op.eval_words(a, b);
            for lane in 0..4 {
                let expect = op.eval(a >> lane & 1 == 1, b >> lane & 1 == 1);
                assert_eq!(w >> lane & 1 == 1, expect, "{op} lane {lane}");
            }
        }
    }

    #[test]
    fn operand_transforms() {
        for table in 0..16 {
            let op = BinOp::from_truth_table(table).unwrap();
            for a in [false, true] {
                for b in [false, true] {
                    assert_eq!(op.negate_left().eval(a, b), op.eval(!a, b));
                    assert_eq!(op.negate_right().eval(a, b), op.eval(a, !b));
                    assert_eq!(op.swap_operands().eval(a, b), op.eval(b, a));
                    assert_eq!(op.negate_output().eval(a, b), !op.eval(a, b));
                }
            }
        }
        assert_eq!(BinOp::XOR.restrict_left(false), Unary::Identity);
        assert_eq!(BinOp::XOR.restrict_right(true), Unary::Not);
        assert_eq!(BinOp::AND.restrict_right(false), Unary::Const(false));
        assert_eq!(BinOp::XOR.diagonal(), Unary::Const(false));
        assert!(BinOp::GT.depends_on_left() && BinOp::GT.depends_on_right());
        assert!(!BinOp::LEFT.depends_on_right() && BinOp::LEFT.depends_on_left());
        assert!(!BinOp::RIGHT.depends_on_left());
    }

    #[test]
    fn empty_and_single_gate_circuits() {
        let c = Circuit::new(0);
        assert_eq!((c.size(), c.depth()), (0, 0));
        let c = Circuit::new(5);
        assert_eq!((c.input_count(), c.size()), (5, 0));
        let mut c = Circuit::new(3);
        let (a, b) = (c.input(0), c.input(1));
        c.xor(a, b);
        assert_eq!(c.size(), 1);
    }

    #[test]
    fn forward_reference_is_rejected() {
        let mut c = Circuit::new(2);
        let g = c.xor(c.input(0), c.input(1));
        let err = c.try_add_gate(BinOp::AND, g, WireRef::Gate(5)).unwrap_err();
        assert!(matches!(err, CircuitError::InvalidReference { .. }));
        let err = c
            .try_add_gate(BinOp::AND, WireRef::Input(2), g)
            .unwrap_err();
        assert!(matches!(err, CircuitError::InvalidReference { .. }));
        assert_eq!(c.size(), 1);
    }

    #[test]
    fn gt_gate_computes_and_not() {
        let mut c = Circuit::new(2);
        let g = c.gt(c.input(0), c.input(1));
        c.mark_output(g, 0).unwrap();
        assert_eq!(c.evaluate(&[true, false]).unwrap(), [true]);
        assert_eq!(c.evaluate(&[true, true]).unwrap(), [false]);
    }

    #[test]
    fn output_significances_must_increase() {
        let mut c = Circuit::new(3);
        for (i, s) in [0u64, 1, 2].into_iter().enumerate() {
            c.mark_output(c.input(i), s).unwrap();
        }
        let mut c = Circuit::new(2);
        c.mark_output(c.input(0), 3).unwrap();
        let err = c.mark_output(c.input(1), 3).unwrap_err();
        assert_eq!(
            err,
            CircuitError::NonMonotoneSignificance {
                previous: 3,
                significance: 3
            }
        );
        let mut c = Circuit::new(2);
        c.mark_output(c.input(0), 2).unwrap();
        c.mark_output(c.input(1), 5).unwrap();
    }

    #[test]
    fn adders_evaluate_and_measure() {
        let ha = half_adder();
        assert_eq!(ha.evaluate(&[true, true]).unwrap(), [false, true]);
        assert_eq!(
            ha.weighted_output_value(&[true, true]).unwrap(),
            2u32.into()
        );
        assert_eq!((ha.size(), ha.depth()), (2, 1));

        let fa = full_adder();
        assert_eq!(fa.evaluate(&[true, false, false]).unwrap(), [true, false]);
        assert_eq!(
            fa.weighted_output_value(&[true, true, true]).unwrap(),
            3u32.into()
        );
        assert_eq!((fa.size(), fa.depth()), (5, 3));
        for x in 0..8u32 {
            let bits = [x & 1 == 1, x & 2 == 2, x & 4 == 4];
            assert_eq!(
                fa.weighted_output_value(&bits).unwrap(),
                x.count_ones().into()
            );
        }
    }

    #[test]
    fn gapped_output_value() {
        // s = (2, 3, 3) realised as (x1, x2 ^ x3, x2 & x3) at (2, 3, 4).
        let mut c = Circuit::new(3);
        let (x1, x2, x3) = (c.input(0), c.input(1), c.input(2));
        let s = c.xor(x2, x3);
        let k = c.and(x2, x3);
        c.mark_output(x1, 2).unwrap();
        c.mark_output(s, 3).unwrap();
        c.mark_output(k, 4).unwrap();
        assert_eq!(c.weighted_output_value(&[true; 3]).unwrap(), 20u32.into());
    }

    #[test]
    fn input_output_has_zero_depth() {
        let mut c = Circuit::new(1);
        c.mark_output(c.input(0), 0).unwrap();
        assert_eq!(c.depth(), 0);
    }

    #[test]
    fn length_mismatch() {
        let ha = half_adder();
        assert_eq!(
            ha.evaluate(&[true]).unwrap_err(),
            CircuitError::LengthMismatch {
                expected: 2,
                actual: 1
            }
        );
    }

    #[test]
    fn all_zero_assignment_uses_rows_00() {
        let mut c = Circuit::new(2);
        let a = c.add_gate(BinOp::NOR, c.input(0), c.input(1));
        let b = c.add_gate(BinOp::AND, c.input(0), c.input(1));
        c.mark_output(a, 0).unwrap();
        c.mark_output(b, 1).unwrap();
        assert_eq!(c.evaluate(&[false, false]).unwrap(), [true, false]);
    }

    #[test]
    fn dangling_gates_are_reported() {
        let mut c = half_adder();
        c.xor(c.input(0), c.input(0));
        assert_eq!(c.dangling_gates(), [2]);
        assert!(half_adder().dangling_gates().is_empty());
    }

    #[test]
    fn from_parts_validates() {
        let ha = half_adder();
        let rebuilt = Circuit::from_parts(2, ha.gates().to_vec(), ha.outputs().to_vec()).unwrap();
        assert_eq!(rebuilt, ha);
        let bad = Gate {
            op: BinOp::AND,
            left: WireRef::Gate(0),
            right: WireRef::Input(0),
        };
        assert!(Circuit::from_parts(2, alloc::vec![bad], Vec::new()).is_err());
    }
}
