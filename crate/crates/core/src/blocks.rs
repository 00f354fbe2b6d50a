//! Fixed adder blocks with exact gate budgets.
//!
//! Two bits `u, v` of the same significance are often carried as a
//! [`BitPair`]: the wire `u ^ v` plus the wire `u`. MDFA blocks consume and
//! produce pairs, which saves recomputing parities between blocks.

use crate::circuit::{Circuit, WireRef};

/// Two same-significance bits `(rep, parity ^ rep)` held as two wires.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitPair {
    pub parity: WireRef,
    pub rep: WireRef,
}

impl BitPair {
    pub fn new(parity: WireRef, rep: WireRef) -> BitPair {
        BitPair { parity, rep }
    }

    /// Encodes `u, v` as `(u ^ v, u)` with one XOR gate.
    pub fn from_bits(c: &mut Circuit, u: WireRef, v: WireRef) -> BitPair {
        let parity = c.xor(u, v);
        BitPair { parity, rep: u }
    }
}

macro_rules! budget {
    ($c:expr, $n:expr, $body:block) => {{
        let before = $c.size();
        let out = $body;
        assert_eq!($c.size() - before, $n, "gate budget");
        out
    }};
}

/// `a + b = sum + 2 carry`, 2 gates.
pub fn emit_half_adder(c: &mut Circuit, a: WireRef, b: WireRef) -> (WireRef, WireRef) {
    budget!(c, 2, {
        let sum = c.xor(a, b);
        let carry = c.and(a, b);
        (sum, carry)
    })
}

/// `a + b + d = sum + 2 carry`, 5 gates.
pub fn emit_full_adder(c: &mut Circuit, a: WireRef, b: WireRef, d: WireRef) -> (WireRef, WireRef) {
    budget!(c, 5, {
        let g1 = c.xor(a, b);
        let g2 = c.xor(b, d);
        let g3 = c.or(g1, g2);
        let sum = c.xor(g1, d);
        let carry = c.xor(g3, sum);
        (sum, carry)
    })
}

/// Full adder over a pair and one more bit, reusing the pair's parity. 4 gates.
pub fn emit_full_adder_reusing_parity(
    c: &mut Circuit,
    pair: BitPair,
    d: WireRef,
) -> (WireRef, WireRef) {
    budget!(c, 4, {
        let g2 = c.xor(pair.rep, d);
        let g3 = c.or(pair.parity, g2);
        let sum = c.xor(pair.parity, d);
        let carry = c.xor(g3, sum);
        (sum, carry)
    })
}

/// Carry of the two bits in `pair`; the parity wire is their sum bit. 1 gate.
pub fn emit_pair_carry(c: &mut Circuit, pair: BitPair) -> WireRef {
    budget!(c, 1, { c.gt(pair.rep, pair.parity) })
}

/// Compresses two pairs and a bit `t` into one bit `b0` and a pair one
/// significance up. 8 gates.
pub fn emit_mdfa(
    c: &mut Circuit,
    pair1: BitPair,
    t: WireRef,
    pair2: BitPair,
) -> (WireRef, BitPair) {
    budget!(c, 8, {
        let (p1, q1) = (pair1.parity, pair1.rep);
        let (p2, q2) = (pair2.parity, pair2.rep);
        let g2 = c.xor(q1, t);
        let g3 = c.or(p1, g2);
        let g4 = c.xor(p1, t);
        let a1 = c.xor(g3, g4);
        let g6 = c.xor(q2, g4);
        let b0 = c.xor(p2, g4);
        let g8 = c.gt(g6, p2);
        let parity = c.xor(g3, g8);
        (b0, BitPair { parity, rep: a1 })
    })
}

/// [`emit_mdfa`] without the extra bit. 6 gates.
pub fn emit_mdfa_prime(c: &mut Circuit, pair1: BitPair, pair2: BitPair) -> (WireRef, BitPair) {
    budget!(c, 6, {
        let (p1, q1) = (pair1.parity, pair1.rep);
        let (p2, q2) = (pair2.parity, pair2.rep);
        let g3 = c.or(p1, q1);
        let a1 = c.xor(g3, p1);
        let g6 = c.xor(q2, p1);
        let b0 = c.xor(p2, p1);
        let g8 = c.gt(g6, p2);
        let parity = c.xor(g3, g8);
        (b0, BitPair { parity, rep: a1 })
    })
}
