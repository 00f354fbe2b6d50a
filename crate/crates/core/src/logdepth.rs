//! Logarithmic-depth bit adders.
//!
//! Layers are compressed in parallel rounds until every significance holds at
//! most two wires, and the resulting two numbers are added with a Brent-Kung
//! prefix adder. [`generate_ba_logdepth`] compresses with full adders only;
//! [`generate_ba_logdepth_mdfa`] first runs rounds of MDFA blocks, which
//! costs fewer gates but more depth.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::generate_partial_products;
use crate::ba::{weighted_inputs, SignificanceVector};
use crate::blocks::{emit_full_adder, emit_half_adder, emit_mdfa, emit_mdfa_prime, BitPair};
use crate::circuit::{BinOp, Circuit, WireRef};
use crate::error::GenerateError;
use crate::fold::{add_gate_simplified, sweep};

/// Adds the numbers `a` and `b`, both starting at significance `base`.
///
/// Returns `max(a.len(), b.len()) + 1` outputs. The shorter operand is padded
/// with constant zeros, which cost no gates.
pub fn emit_brent_kung(
    c: &mut Circuit,
    a: &[WireRef],
    b: &[WireRef],
    base: u64,
) -> Vec<(WireRef, u64)> {
    let k = a.len().max(b.len());
    let bit = |v: &[WireRef], i: usize| v.get(i).copied().unwrap_or(WireRef::ZERO);
    let mut p = Vec::with_capacity(k);
    let mut g = Vec::with_capacity(k);
    for i in 0..k {
        p.push(add_gate_simplified(c, BinOp::XOR, bit(a, i), bit(b, i)));
        g.push(add_gate_simplified(c, BinOp::AND, bit(a, i), bit(b, i)));
    }
    let mut gp = g.clone();
    let mut pp = p.clone();
    let mut combine = |c: &mut Circuit, hi: usize, lo: usize| {
        let t = add_gate_simplified(c, BinOp::AND, pp[hi], gp[lo]);
        gp[hi] = add_gate_simplified(c, BinOp::OR, gp[hi], t);
        pp[hi] = add_gate_simplified(c, BinOp::AND, pp[hi], pp[lo]);
    };

    let mut span = 1;
    while span < k {
        for i in (2 * span - 1..k).step_by(2 * span) {
            combine(c, i, i - span);
        }
        span *= 2;
    }
    span /= 2;
    while span > 1 {
        let half = span / 2;
        for i in (span - 1..k).step_by(span) {
            if i + half < k {
                combine(c, i + half, i);
            }
        }
        span = half;
    }

    let mut outputs = Vec::with_capacity(k + 1);
    for i in 0..k {
        let sum = if i == 0 {
            p[0]
        } else {
            add_gate_simplified(c, BinOp::XOR, p[i], gp[i - 1])
        };
        outputs.push((sum, base + i as u64));
    }
    if k > 0 {
        outputs.push((gp[k - 1], base + k as u64));
    }
    outputs
}

/// Wires per significance, relative to `base`.
struct Layers {
    base: u64,
    wires: Vec<Vec<WireRef>>,
}

impl Layers {
    fn from_weighted(bits: &[(WireRef, u64)]) -> Layers {
        let base = bits.iter().map(|&(_, s)| s).min().unwrap_or(0);
        let mut wires: Vec<Vec<WireRef>> = Vec::new();
        for &(w, s) in bits {
            let i = (s - base) as usize;
            if i >= wires.len() {
                wires.resize_with(i + 1, Vec::new);
            }
            wires[i].push(w);
        }
        Layers { base, wires }
    }

    fn height(&self) -> usize {
        self.wires.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// One parallel round of `len / 3` full adders per layer, plus a half
    /// adder on a leftover pair when `half_adders` is set. Carries land in
    /// the next layer of the new state.
    fn round(&mut self, c: &mut Circuit, half_adders: bool) {
        let mut next: Vec<Vec<WireRef>> = vec![Vec::new(); self.wires.len() + 1];
        for (i, layer) in self.wires.iter().enumerate() {
            let full = layer.len() / 3;
            let mut rest = layer[3 * full..].iter().copied();
            let mut kept = Vec::new();
            for t in layer[..3 * full].chunks_exact(3) {
                let (sum, carry) = emit_full_adder(c, t[0], t[1], t[2]);
                kept.push(sum);
                next[i + 1].push(carry);
            }
            if half_adders && layer.len() % 3 == 2 {
                let (sum, carry) = emit_half_adder(c, rest.next().unwrap(), rest.next().unwrap());
                kept.push(sum);
                next[i + 1].push(carry);
            }
            let mut fresh: Vec<WireRef> = rest.collect();
            fresh.append(&mut kept);
            fresh.append(&mut next[i]);
            next[i] = fresh;
        }
        while next.last().is_some_and(Vec::is_empty) {
            next.pop();
        }
        self.wires = next;
    }

    /// Full adder rounds until every layer holds at most two wires.
    fn compress(&mut self, c: &mut Circuit) {
        loop {
            match self.height() {
                0..=2 => return,
                3 => {
                    self.round(c, true);
                    debug_assert!(self.height() <= 2);
                    return;
                }
                h => {
                    self.round(c, false);
                    debug_assert!(self.height() <= (2 * h).div_ceil(3) + 1);
                }
            }
        }
    }

    /// Adds the two rows left by [`Layers::compress`], one prefix adder per
    /// run of consecutive non-empty layers.
    fn finish(&self, c: &mut Circuit) -> Vec<(WireRef, u64)> {
        debug_assert!(self.height() <= 2);
        let mut outputs = Vec::new();
        let mut i = 0;
        while i < self.wires.len() {
            if self.wires[i].is_empty() {
                i += 1;
                continue;
            }
            let start = i;
            let (mut a, mut b) = (Vec::new(), Vec::new());
            while i < self.wires.len() && !self.wires[i].is_empty() {
                a.push(self.wires[i][0]);
                b.push(self.wires[i].get(1).copied().unwrap_or(WireRef::ZERO));
                i += 1;
            }
            let sums = emit_brent_kung(c, &a, &b, self.base + start as u64);
            outputs.extend(sums.into_iter().filter(|&(w, _)| w != WireRef::ZERO));
        }
        outputs
    }
}

fn build(
    s: &SignificanceVector,
    emit: impl FnOnce(&mut Circuit, &[(WireRef, u64)]) -> Vec<(WireRef, u64)>,
) -> Circuit {
    let mut c = Circuit::new(s.len());
    let bits = weighted_inputs(&c, s);
    for (w, sig) in emit(&mut c, &bits) {
        c.mark_output(w, sig).expect("increasing");
    }
    sweep(&c)
}

/// Full adder rounds followed by a prefix adder; returns outputs in
/// increasing significance, without constant-zero bits.
pub fn emit_ba_logdepth(c: &mut Circuit, bits: &[(WireRef, u64)]) -> Vec<(WireRef, u64)> {
    let mut layers = Layers::from_weighted(bits);
    layers.compress(c);
    layers.finish(c)
}

/// Logarithmic-depth bit adder from full adder rounds and a Brent-Kung adder.
pub fn generate_ba_logdepth(s: &SignificanceVector) -> Circuit {
    build(s, emit_ba_logdepth)
}

#[derive(Clone, Default)]
struct MixedLayer {
    singles: VecDeque<WireRef>,
    pairs: VecDeque<BitPair>,
}

impl MixedLayer {
    fn bits(&self) -> usize {
        self.singles.len() + 2 * self.pairs.len()
    }
}

/// One round of MDFA compression over every layer.
fn mdfa_round(c: &mut Circuit, layers: &[MixedLayer]) -> Vec<MixedLayer> {
    let mut next = vec![MixedLayer::default(); layers.len() + 1];
    for (i, layer) in layers.iter().enumerate() {
        let mut singles = layer.singles.clone();
        let mut pairs = layer.pairs.clone();
        let mut out = MixedLayer::default();
        let mut up = Vec::new();
        let mdfa = |c: &mut Circuit, t, p1, p2, out: &mut MixedLayer, up: &mut Vec<BitPair>| {
            let (b0, pair) = emit_mdfa(c, p1, t, p2);
            out.singles.push_back(b0);
            up.push(pair);
        };
        while !singles.is_empty() && pairs.len() >= 2 {
            let t = singles.pop_front().unwrap();
            let p1 = pairs.pop_front().unwrap();
            let p2 = pairs.pop_front().unwrap();
            mdfa(c, t, p1, p2, &mut out, &mut up);
        }
        while singles.len() >= 3 && !pairs.is_empty() {
            let u = singles.pop_front().unwrap();
            let v = singles.pop_front().unwrap();
            let p1 = BitPair::from_bits(c, u, v);
            let p2 = pairs.pop_front().unwrap();
            let t = singles.pop_front().unwrap();
            mdfa(c, t, p1, p2, &mut out, &mut up);
        }
        while singles.len() >= 5 {
            let u = singles.pop_front().unwrap();
            let v = singles.pop_front().unwrap();
            let p1 = BitPair::from_bits(c, u, v);
            let u = singles.pop_front().unwrap();
            let v = singles.pop_front().unwrap();
            let p2 = BitPair::from_bits(c, u, v);
            let t = singles.pop_front().unwrap();
            mdfa(c, t, p1, p2, &mut out, &mut up);
        }
        let mut carry = None;
        if singles.len() == 4 {
            let a = singles.pop_front().unwrap();
            let b = singles.pop_front().unwrap();
            let d = singles.pop_front().unwrap();
            let (sum, k) = emit_full_adder(c, a, b, d);
            out.singles.push_back(sum);
            carry = Some(k);
        }
        while pairs.len() >= 5 {
            let split = pairs.pop_front().unwrap();
            let other = c.xor(split.rep, split.parity);
            for t in [split.rep, other] {
                let p1 = pairs.pop_front().unwrap();
                let p2 = pairs.pop_front().unwrap();
                mdfa(c, t, p1, p2, &mut out, &mut up);
            }
        }
        while pairs.len() >= 2 {
            let p1 = pairs.pop_front().unwrap();
            let p2 = pairs.pop_front().unwrap();
            let (b0, pair) = emit_mdfa_prime(c, p1, p2);
            out.singles.push_back(b0);
            up.push(pair);
        }
        out.singles.extend(singles);
        out.pairs.extend(pairs);
        let target = &mut next[i];
        target.singles.extend(out.singles);
        target.pairs.extend(out.pairs);
        next[i + 1].singles.extend(carry);
        next[i + 1].pairs.extend(up);
    }
    while next.last().is_some_and(|l| l.bits() == 0) {
        next.pop();
    }
    next
}

/// MDFA rounds until every layer holds at most six bits, then full adder
/// rounds and a prefix adder.
pub fn emit_ba_logdepth_mdfa(c: &mut Circuit, bits: &[(WireRef, u64)]) -> Vec<(WireRef, u64)> {
    let base = bits.iter().map(|&(_, s)| s).min().unwrap_or(0);
    let mut layers: Vec<MixedLayer> = Vec::new();
    for &(w, s) in bits {
        let i = (s - base) as usize;
        if i >= layers.len() {
            layers.resize_with(i + 1, MixedLayer::default);
        }
        layers[i].singles.push_back(w);
    }
    while layers.iter().any(|l| l.bits() > 6) {
        layers = mdfa_round(c, &layers);
    }
    let mut flat = Vec::new();
    for (i, layer) in layers.iter().enumerate() {
        let s = base + i as u64;
        flat.extend(layer.singles.iter().map(|&w| (w, s)));
        for pair in &layer.pairs {
            let other = c.xor(pair.rep, pair.parity);
            flat.push((pair.rep, s));
            flat.push((other, s));
        }
    }
    emit_ba_logdepth(c, &flat)
}

/// Logarithmic-depth bit adder that compresses with MDFA rounds first.
pub fn generate_ba_logdepth_mdfa(s: &SignificanceVector) -> Circuit {
    build(s, emit_ba_logdepth_mdfa)
}

/// Compression used ahead of the prefix adder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogDepthMethod {
    /// Full adder rounds only.
    FullAdder,
    /// MDFA rounds, then full adder rounds.
    Mdfa,
}

impl LogDepthMethod {
    fn emit(self, c: &mut Circuit, bits: &[(WireRef, u64)]) -> Vec<(WireRef, u64)> {
        match self {
            LogDepthMethod::FullAdder => emit_ba_logdepth(c, bits),
            LogDepthMethod::Mdfa => emit_ba_logdepth_mdfa(c, bits),
        }
    }

    /// Bit adder for `s`.
    pub fn generate(self, s: &SignificanceVector) -> Circuit {
        build(s, |c, bits| self.emit(c, bits))
    }
}

/// Logarithmic-depth `SUM_n`.
pub fn generate_sum_logdepth(n: usize, method: LogDepthMethod) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    Ok(method.generate(&SignificanceVector::zeros(n)))
}

/// Logarithmic-depth `ADD_n`, inputs laid out as in
/// [`generate_add`](crate::arith::generate_add).
pub fn generate_add_logdepth(n: usize, method: LogDepthMethod) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    Ok(method.generate(&SignificanceVector::two_numbers(n)))
}

/// Partial products summed by a logarithmic-depth bit adder, inputs laid out
/// as in [`generate_mult`](crate::arith::generate_mult).
pub fn generate_mult_logdepth(n: usize, method: LogDepthMethod) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    let mut c = Circuit::new(2 * n);
    let x: Vec<WireRef> = (0..n).map(WireRef::input).collect();
    let y: Vec<WireRef> = (n..2 * n).map(WireRef::input).collect();
    let products = generate_partial_products(&mut c, &x, &y);
    for (w, sig) in method.emit(&mut c, &products) {
        c.mark_output(w, sig).expect("increasing");
    }
    Ok(sweep(&c))
}
