//! Bit adders for arbitrary significance vectors.
//!
//! [`generate_ba_dadda`] reduces each significance layer with full and half
//! adders and stays within `5n - 3m` gates. [`generate_ba_efficient`] keeps
//! bits in pairs and reduces layers with MDFA blocks, staying within
//! `floor(4.5n) - 2m` gates. Here `n` is the number of inputs and `m` the
//! number of outputs.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::blocks::{
    emit_full_adder, emit_full_adder_reusing_parity, emit_half_adder, emit_mdfa, emit_mdfa_prime,
    emit_pair_carry, BitPair,
};
use crate::circuit::{Circuit, WireRef};
use crate::error::GenerateError;

/// Largest significance accepted by [`SignificanceVector::new`].
pub const DEFAULT_SIGNIFICANCE_LIMIT: u64 = 1 << 20;

/// Per-input significances `s_1..s_n` of a bit adder.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignificanceVector {
    entries: Vec<u64>,
}

impl SignificanceVector {
    /// Checks every entry against [`DEFAULT_SIGNIFICANCE_LIMIT`].
    pub fn new(entries: Vec<u64>) -> Result<SignificanceVector, GenerateError> {
        SignificanceVector::with_limit(entries, DEFAULT_SIGNIFICANCE_LIMIT)
    }

    pub fn with_limit(entries: Vec<u64>, limit: u64) -> Result<SignificanceVector, GenerateError> {
        if let Some(&value) = entries.iter().find(|&&s| s > limit) {
            return Err(GenerateError::SignificanceLimit { value, limit });
        }
        Ok(SignificanceVector { entries })
    }

    /// `n` bits of significance zero.
    pub fn zeros(n: usize) -> SignificanceVector {
        SignificanceVector {
            entries: alloc::vec![0; n],
        }
    }

    /// Two `n`-bit numbers: `(0, 1, .., n-1, 0, 1, .., n-1)`.
    pub fn two_numbers(n: usize) -> SignificanceVector {
        let entries = (0..2).flat_map(|_| 0..n as u64).collect();
        SignificanceVector { entries }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Wires of a bit adder paired with their significances.
pub(crate) fn weighted_inputs(c: &Circuit, s: &SignificanceVector) -> Vec<(WireRef, u64)> {
    c.inputs().zip(s.entries().iter().copied()).collect()
}

/// Groups weighted wires by significance relative to the smallest one,
/// keeping input order within each layer.
fn layer_wires(bits: &[(WireRef, u64)]) -> (u64, Vec<Vec<WireRef>>) {
    let Some(base) = bits.iter().map(|&(_, s)| s).min() else {
        return (0, Vec::new());
    };
    let top = bits.iter().map(|&(_, s)| s).max().unwrap_or(base);
    let mut layers: Vec<Vec<WireRef>> = alloc::vec![Vec::new(); (top - base + 1) as usize];
    for &(w, s) in bits {
        layers[(s - base) as usize].push(w);
    }
    (base, layers)
}

fn mark_all(c: &mut Circuit, outputs: &[(WireRef, u64)]) {
    for &(w, s) in outputs {
        c.mark_output(w, s)
            .expect("layers are emitted in increasing order");
    }
}

/// Layer-by-layer full/half adder reduction; returns `(wire, significance)`
/// outputs in increasing significance.
pub fn emit_ba_dadda(c: &mut Circuit, bits: &[(WireRef, u64)]) -> Vec<(WireRef, u64)> {
    let (base, layers) = layer_wires(bits);
    let mut queues: Vec<VecDeque<WireRef>> = layers.into_iter().map(VecDeque::from).collect();
    let mut outputs = Vec::new();
    let mut i = 0;
    while i < queues.len() {
        let mut carries = Vec::new();
        {
            let queue = &mut queues[i];
            while queue.len() >= 3 {
                let a = queue.pop_front().unwrap();
                let b = queue.pop_front().unwrap();
                let d = queue.pop_front().unwrap();
                let (sum, carry) = emit_full_adder(c, a, b, d);
                queue.push_back(sum);
                carries.push(carry);
            }
            if queue.len() == 2 {
                let a = queue.pop_front().unwrap();
                let b = queue.pop_front().unwrap();
                let (sum, carry) = emit_half_adder(c, a, b);
                queue.push_back(sum);
                carries.push(carry);
            }
            if let Some(w) = queue.pop_front() {
                outputs.push((w, base + i as u64));
            }
        }
        if !carries.is_empty() {
            if i + 1 == queues.len() {
                queues.push(VecDeque::new());
            }
            queues[i + 1].extend(carries);
        }
        i += 1;
    }
    outputs
}

/// Bit adder built from half and full adders; size at most `5n - 3m`.
pub fn generate_ba_dadda(s: &SignificanceVector) -> Circuit {
    let mut c = Circuit::new(s.len());
    let bits = weighted_inputs(&c, s);
    let outputs = emit_ba_dadda(&mut c, &bits);
    mark_all(&mut c, &outputs);
    let (n, m) = (s.len(), outputs.len());
    assert!(c.size() + 3 * m <= 5 * n, "size {} above 5n - 3m", c.size());
    c
}

/// One significance layer of the efficient reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    pub pairs: VecDeque<BitPair>,
    pub unpaired: Option<WireRef>,
}

impl Layer {
    /// Number of bits held, counting two per pair.
    pub fn bit_count(&self) -> usize {
        2 * self.pairs.len() + usize::from(self.unpaired.is_some())
    }
}

/// Working state of the efficient reduction: every layer holds pairs and at
/// most one unpaired wire.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerState {
    base: u64,
    layers: Vec<Layer>,
    next: usize,
}

impl LayerState {
    /// Pairs adjacent wires of each layer in input order, one XOR per pair.
    pub fn from_weighted(c: &mut Circuit, bits: &[(WireRef, u64)]) -> LayerState {
        let (base, wires) = layer_wires(bits);
        let layers = wires
            .into_iter()
            .map(|ws| {
                let mut layer = Layer::default();
                let mut chunks = ws.chunks_exact(2);
                for pair in &mut chunks {
                    layer
                        .pairs
                        .push_back(BitPair::from_bits(c, pair[0], pair[1]));
                }
                layer.unpaired = chunks.remainder().first().copied();
                layer
            })
            .collect();
        LayerState {
            base,
            layers,
            next: 0,
        }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Significance of `layers()[0]`.
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn is_empty(&self) -> bool {
        self.layers[self.next.min(self.layers.len())..]
            .iter()
            .all(|l| l.bit_count() == 0)
    }

    fn layer_mut(&mut self, i: usize) -> &mut Layer {
        if i >= self.layers.len() {
            self.layers.resize_with(i + 1, Layer::default);
        }
        &mut self.layers[i]
    }

    /// Adds a carry to layer `i`, pairing it with the unpaired wire if there
    /// is one.
    pub fn transfer_carry(&mut self, c: &mut Circuit, i: usize, carry: WireRef) {
        let layer = self.layer_mut(i);
        match layer.unpaired.take() {
            Some(b) => {
                let parity = c.xor(b, carry);
                layer.pairs.push_back(BitPair::new(parity, carry));
            }
            None => layer.unpaired = Some(carry),
        }
    }

    fn push_pair(&mut self, i: usize, pair: BitPair) {
        self.layer_mut(i).pairs.push_back(pair);
    }

    /// Reduces the lowest non-empty layer to a single output bit, pushing
    /// carries and pairs one layer up. Returns the output and its significance.
    pub fn reduce_min_layer(&mut self, c: &mut Circuit) -> Result<(WireRef, u64), GenerateError> {
        while self.next < self.layers.len() && self.layers[self.next].bit_count() == 0 {
            self.next += 1;
        }
        let i = self.next;
        if i >= self.layers.len() {
            return Err(GenerateError::EmptyState);
        }
        let mut layer = core::mem::take(&mut self.layers[i]);
        let l = layer.bit_count();
        let out = match l {
            1 => layer.unpaired.take().unwrap(),
            2 => {
                let pair = layer.pairs.pop_front().unwrap();
                let carry = emit_pair_carry(c, pair);
                self.transfer_carry(c, i + 1, carry);
                pair.parity
            }
            3 => {
                let pair = layer.pairs.pop_front().unwrap();
                let (sum, carry) =
                    emit_full_adder_reusing_parity(c, pair, layer.unpaired.take().unwrap());
                self.transfer_carry(c, i + 1, carry);
                sum
            }
            _ => {
                let k = l / 4;
                let mut t = match l % 4 {
                    0 => {
                        let p1 = layer.pairs.pop_front().unwrap();
                        let p2 = layer.pairs.pop_front().unwrap();
                        let (b0, next) = emit_mdfa_prime(c, p1, p2);
                        self.push_pair(i + 1, next);
                        b0
                    }
                    1 => layer.unpaired.take().unwrap(),
                    2 => {
                        let pair = layer.pairs.pop_front().unwrap();
                        let carry = emit_pair_carry(c, pair);
                        self.transfer_carry(c, i + 1, carry);
                        pair.parity
                    }
                    _ => {
                        let pair = layer.pairs.pop_front().unwrap();
                        let (sum, carry) =
                            emit_full_adder_reusing_parity(c, pair, layer.unpaired.take().unwrap());
                        self.transfer_carry(c, i + 1, carry);
                        sum
                    }
                };
                while let Some(p1) = layer.pairs.pop_front() {
                    let p2 = layer.pairs.pop_front().expect("pairs come in twos here");
                    let (b0, next) = emit_mdfa(c, p1, t, p2);
                    self.push_pair(i + 1, next);
                    t = b0;
                }
                debug_assert!(k >= 1);
                t
            }
        };
        debug_assert_eq!(layer.bit_count(), 0);
        self.next = i + 1;
        Ok((out, self.base + i as u64))
    }
}

/// MDFA-based reduction; returns `(wire, significance)` outputs in
/// increasing significance.
pub fn emit_ba_efficient(c: &mut Circuit, bits: &[(WireRef, u64)]) -> Vec<(WireRef, u64)> {
    let mut state = LayerState::from_weighted(c, bits);
    let mut outputs = Vec::new();
    while !state.is_empty() {
        outputs.push(state.reduce_min_layer(c).expect("state is not empty"));
    }
    outputs
}

/// Bit adder built from MDFA blocks; size at most `floor(4.5n) - 2m`.
pub fn generate_ba_efficient(s: &SignificanceVector) -> Circuit {
    let mut c = Circuit::new(s.len());
    let bits = weighted_inputs(&c, s);
    let outputs = emit_ba_efficient(&mut c, &bits);
    mark_all(&mut c, &outputs);
    let (n, m) = (s.len(), outputs.len());
    assert!(
        c.size() + 2 * m <= 9 * n / 2,
        "size {} above 4.5n - 2m",
        c.size()
    );
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigUint;

    fn sv(entries: &[u64]) -> SignificanceVector {
        SignificanceVector::new(entries.to_vec()).unwrap()
    }

    fn oracle(s: &[u64], bits: &[bool]) -> BigUint {
        let mut total = BigUint::default();
        for (&w, &b) in s.iter().zip(bits) {
            if b {
                total += BigUint::from(1u8) << w;
            }
        }
        total
    }

    fn check_exhaustive(c: &Circuit, s: &[u64]) {
        let n = s.len();
        for x in 0u32..1 << n {
            let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
            assert_eq!(c.weighted_output_value(&bits).unwrap(), oracle(s, &bits));
        }
    }

    #[test]
    fn sum5_sizes() {
        assert_eq!(generate_ba_dadda(&SignificanceVector::zeros(5)).size(), 12);
        assert_eq!(
            generate_ba_efficient(&SignificanceVector::zeros(5)).size(),
            11
        );
    }

    #[test]
    fn sum16_sizes() {
        assert_eq!(generate_ba_dadda(&SignificanceVector::zeros(16)).size(), 63);
        assert_eq!(
            generate_ba_efficient(&SignificanceVector::zeros(16)).size(),
            59
        );
    }

    #[test]
    fn sum7_efficient_size() {
        assert_eq!(
            generate_ba_efficient(&SignificanceVector::zeros(7)).size(),
            19
        );
        assert_eq!(generate_ba_dadda(&SignificanceVector::zeros(7)).size(), 20);
    }

    #[test]
    fn distinct_significances_need_no_gates() {
        let s = sv(&[0, 1, 2, 3, 4, 5]);
        for c in [generate_ba_dadda(&s), generate_ba_efficient(&s)] {
            assert_eq!(c.size(), 0);
            assert_eq!(c.depth(), 0);
            assert_eq!(c.outputs().len(), 6);
        }
    }

    #[test]
    fn two_numbers_is_ripple_carry() {
        for n in 2..40 {
            let s = SignificanceVector::two_numbers(n);
            assert_eq!(generate_ba_dadda(&s).size(), 5 * n - 3, "dadda n={n}");
            assert_eq!(
                generate_ba_efficient(&s).size(),
                5 * n - 3,
                "efficient n={n}"
            );
        }
    }

    #[test]
    fn gapped_vector() {
        let s = sv(&[2, 3, 3]);
        let c = generate_ba_efficient(&s);
        assert_eq!(c.size(), 2);
        let sig: Vec<u64> = c.outputs().iter().map(|o| o.significance).collect();
        assert_eq!(sig, [2, 3, 4]);
        assert_eq!(c.outputs()[0].wire, WireRef::input(0));
        check_exhaustive(&c, s.entries());
        assert_eq!(
            c.evaluate(&[true, true, true]).unwrap(),
            [true, false, true]
        );
    }

    #[test]
    fn empty_and_single() {
        for c in [
            generate_ba_dadda(&SignificanceVector::default()),
            generate_ba_efficient(&SignificanceVector::default()),
        ] {
            assert_eq!(c.size(), 0);
            assert!(c.outputs().is_empty());
        }
        let c = generate_ba_efficient(&sv(&[7]));
        assert_eq!(c.outputs()[0].wire, WireRef::input(0));
        assert_eq!(c.outputs()[0].significance, 7);
    }

    #[test]
    fn pair_at_top_layer() {
        let c = generate_ba_efficient(&sv(&[3, 3]));
        assert_eq!(c.size(), 2);
        check_exhaustive(&c, &[3, 3]);
    }

    #[test]
    fn significance_limit() {
        assert_eq!(
            SignificanceVector::new(vec![0, DEFAULT_SIGNIFICANCE_LIMIT + 1]),
            Err(GenerateError::SignificanceLimit {
                value: DEFAULT_SIGNIFICANCE_LIMIT + 1,
                limit: DEFAULT_SIGNIFICANCE_LIMIT,
            })
        );
        assert!(SignificanceVector::with_limit(vec![9], 8).is_err());
        assert!(SignificanceVector::with_limit(vec![8], 8).is_ok());
    }

    #[test]
    fn transfer_carry_cases() {
        let mut c = Circuit::new(3);
        let bits = [(WireRef::input(0), 0), (WireRef::input(1), 1)];
        let mut state = LayerState::from_weighted(&mut c, &bits);
        state.transfer_carry(&mut c, 2, WireRef::input(2));
        assert_eq!(c.size(), 0);
        assert_eq!(state.layers()[2].unpaired, Some(WireRef::input(2)));
        state.transfer_carry(&mut c, 1, WireRef::input(2));
        assert_eq!(c.size(), 1);
        assert_eq!(state.layers()[1].unpaired, None);
        assert_eq!(state.layers()[1].pairs.len(), 1);
    }

    #[test]
    fn reduce_min_layer_on_empty_state() {
        let mut c = Circuit::new(0);
        let mut state = LayerState::from_weighted(&mut c, &[]);
        assert_eq!(
            state.reduce_min_layer(&mut c),
            Err(GenerateError::EmptyState)
        );
    }

    #[test]
    fn sum_all_small_n_exhaustive() {
        for n in 1..=12 {
            let s = SignificanceVector::zeros(n);
            check_exhaustive(&generate_ba_dadda(&s), s.entries());
            check_exhaustive(&generate_ba_efficient(&s), s.entries());
        }
    }

    /// `0, 0, 0, 0, 1, 1, 2, 2, ..., n/2 - 2, n/2 - 2`
    fn extremal(n: usize) -> Vec<u64> {
        let mut s = vec![0; 4];
        for k in 1..=(n / 2 - 2) as u64 {
            s.extend([k, k]);
        }
        s
    }

    #[test]
    fn extremal_vector_costs_three_and_a_half_per_bit() {
        for n in (8..=400).step_by(2) {
            let c = generate_ba_efficient(&sv(&extremal(n)));
            assert_eq!(c.size() + 5, 7 * n / 2, "n={n}");
        }
        let s = extremal(16);
        check_exhaustive(&generate_ba_efficient(&sv(&s)), &s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_vector() -> impl Strategy<Value = Vec<u64>> {
            proptest::collection::vec(0u64..=6, 0..=11)
        }

        fn big_vector() -> impl Strategy<Value = Vec<u64>> {
            proptest::collection::vec(0u64..=12, 0..=64)
        }

        proptest! {
            #[test]
            fn both_methods_match_oracle(s in small_vector()) {
                let s = sv(&s);
                check_exhaustive(&generate_ba_dadda(&s), s.entries());
                check_exhaustive(&generate_ba_efficient(&s), s.entries());
            }

            #[test]
            fn size_bounds_hold(s in big_vector()) {
                let s = sv(&s);
                let n = s.len();
                let d = generate_ba_dadda(&s);
                prop_assert!(d.size() + 3 * d.outputs().len() <= 5 * n);
                let e = generate_ba_efficient(&s);
                prop_assert!(e.size() + 2 * e.outputs().len() <= 9 * n / 2);
            }

            #[test]
            fn at_most_one_unpaired_and_one_output_per_step(s in big_vector()) {
                let mut c = Circuit::new(s.len());
                let bits: Vec<_> = c.inputs().zip(s.iter().copied()).collect();
                let mut state = LayerState::from_weighted(&mut c, &bits);
                let mut last = None;
                while !state.is_empty() {
                    let before = c.outputs().len();
                    let (_, sig) = state.reduce_min_layer(&mut c).unwrap();
                    prop_assert_eq!(c.outputs().len(), before);
                    if let Some(prev) = last {
                        prop_assert!(sig > prev);
                    }
                    last = Some(sig);
                }
            }
        }
    }
}
