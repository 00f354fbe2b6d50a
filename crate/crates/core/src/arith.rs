//! Summation, addition, increment and multiplication circuits.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::ba::SignificanceVector;
use crate::ba::{emit_ba_dadda, emit_ba_efficient, generate_ba_dadda, generate_ba_efficient};
use crate::blocks::emit_half_adder;
use crate::circuit::{Circuit, WireRef};
use crate::error::GenerateError;
use crate::fold::fold_constants;

/// Which bit adder reduces the weighted bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaMethod {
    /// Full and half adders.
    Dadda,
    /// MDFA blocks.
    Mdfa,
}

impl BaMethod {
    pub(crate) fn emit(self, c: &mut Circuit, bits: &[(WireRef, u64)]) -> Vec<(WireRef, u64)> {
        match self {
            BaMethod::Dadda => emit_ba_dadda(c, bits),
            BaMethod::Mdfa => emit_ba_efficient(c, bits),
        }
    }

    fn generate(self, s: &SignificanceVector) -> Circuit {
        match self {
            BaMethod::Dadda => generate_ba_dadda(s),
            BaMethod::Mdfa => generate_ba_efficient(s),
        }
    }
}

/// Multiplier used below the Karatsuba threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KaratsubaBase {
    Dadda,
    Mdfa,
    /// Keep splitting down to 4-bit operands.
    Pure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultMethod {
    /// Partial products reduced with full and half adders.
    Dadda,
    /// Partial products reduced with MDFA blocks.
    Mdfa,
    /// Karatsuba splitting; operands narrower than `threshold`, or than four
    /// bits, go to `base`.
    Karatsuba {
        base: KaratsubaBase,
        threshold: usize,
    },
}

impl MultMethod {
    pub const DEFAULT_THRESHOLD: usize = 20;

    pub fn karatsuba(base: KaratsubaBase) -> MultMethod {
        MultMethod::Karatsuba {
            base,
            threshold: MultMethod::DEFAULT_THRESHOLD,
        }
    }
}

/// Number of ones among `n` bits.
pub fn generate_sum(n: usize, method: BaMethod) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    Ok(method.generate(&SignificanceVector::zeros(n)))
}

/// Sum of two `n`-bit numbers. Inputs are `x_0..x_{n-1}` then `y_0..y_{n-1}`,
/// least significant first.
pub fn generate_add(n: usize, method: BaMethod) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    Ok(method.generate(&SignificanceVector::two_numbers(n)))
}

/// Adds the bit `x_0` to the `n`-bit number `x_1..x_n` with a chain of half
/// adders, `2n` gates.
pub fn generate_add_bit(n: usize) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    let mut c = Circuit::new(n + 1);
    let mut carry = c.input(0);
    for i in 0..n {
        let (sum, next) = emit_half_adder(&mut c, WireRef::input(i + 1), carry);
        c.mark_output(sum, i as u64).expect("increasing");
        carry = next;
    }
    c.mark_output(carry, n as u64).expect("increasing");
    Ok(c)
}

/// `x_i AND y_j` at significance `i + j`, one gate each.
pub fn generate_partial_products(
    c: &mut Circuit,
    x: &[WireRef],
    y: &[WireRef],
) -> Vec<(WireRef, u64)> {
    let mut products = Vec::with_capacity(x.len() * y.len());
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            products.push((c.and(a, b), (i + j) as u64));
        }
    }
    products
}

/// Product of two `n`-bit numbers. Inputs are `x_0..x_{n-1}` then
/// `y_0..y_{n-1}`, least significant first; outputs sit at significances
/// `0..2n`, minus any that are constant zero.
pub fn generate_mult(n: usize, method: MultMethod) -> Result<Circuit, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroWidth);
    }
    if let MultMethod::Karatsuba { threshold, .. } = method {
        if threshold < 2 {
            return Err(GenerateError::InvalidThreshold(threshold));
        }
    }
    let mut c = Circuit::new(2 * n);
    let x: Vec<WireRef> = (0..n).map(WireRef::input).collect();
    let y: Vec<WireRef> = (n..2 * n).map(WireRef::input).collect();
    let product = emit_mult(&mut c, &x, &y, method);
    for (i, &w) in product.iter().enumerate() {
        c.mark_output(w, i as u64).expect("increasing");
    }
    Ok(drop_zero_outputs(fold_constants(&c)))
}

fn drop_zero_outputs(c: Circuit) -> Circuit {
    if c.outputs().iter().all(|o| o.wire != WireRef::ZERO) {
        return c;
    }
    let mut pruned = c.clone();
    pruned.clear_outputs();
    for o in c.outputs().iter().filter(|o| o.wire != WireRef::ZERO) {
        pruned
            .mark_output(o.wire, o.significance)
            .expect("increasing");
    }
    crate::fold::sweep(&pruned)
}

/// Spreads weighted outputs into `width` dense bits, dropping anything at or
/// above `width` and filling gaps with constant zero.
fn dense(bits: &[(WireRef, u64)], width: usize) -> Vec<WireRef> {
    let mut out = vec![WireRef::ZERO; width];
    for &(w, s) in bits {
        if (s as usize) < width {
            out[s as usize] = w;
        }
    }
    out
}

fn shifted(bits: &[WireRef], shift: usize) -> impl Iterator<Item = (WireRef, u64)> + '_ {
    bits.iter()
        .enumerate()
        .filter(|(_, w)| **w != WireRef::ZERO)
        .map(move |(i, &w)| (w, (i + shift) as u64))
}

fn schoolbook(c: &mut Circuit, x: &[WireRef], y: &[WireRef], ba: BaMethod) -> Vec<WireRef> {
    let products = generate_partial_products(c, x, y);
    let sum = ba.emit(c, &products);
    dense(&sum, x.len() + y.len())
}

/// Product bits of `x * y`, `x.len() + y.len()` of them. `x` and `y` have
/// equal length.
fn emit_mult(c: &mut Circuit, x: &[WireRef], y: &[WireRef], method: MultMethod) -> Vec<WireRef> {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    let (base, threshold) = match method {
        MultMethod::Dadda => return schoolbook(c, x, y, BaMethod::Dadda),
        MultMethod::Mdfa => return schoolbook(c, x, y, BaMethod::Mdfa),
        MultMethod::Karatsuba { base, threshold } => (base, threshold),
    };
    let ba = match base {
        KaratsubaBase::Dadda => BaMethod::Dadda,
        KaratsubaBase::Mdfa | KaratsubaBase::Pure => BaMethod::Mdfa,
    };
    let leaf = match base {
        KaratsubaBase::Pure => n <= 4,
        _ => n < threshold || n <= 3,
    };
    if leaf {
        return schoolbook(c, x, y, ba);
    }

    let k = n.div_ceil(2);
    let (x_lo, x_hi) = x.split_at(k);
    let (y_lo, y_hi) = y.split_at(k);
    let z0 = emit_mult(c, x_lo, y_lo, method);
    let z2 = emit_mult(c, x_hi, y_hi, method);
    let sx = add_numbers(c, x_lo, x_hi, k + 1);
    let sy = add_numbers(c, y_lo, y_hi, k + 1);
    let zm = emit_mult(c, &sx, &sy, method);

    // x_lo*y_hi + x_hi*y_lo < 2^(n+1)
    let w = n + 1;
    let middle = subtract(c, &zm, &[&z0, &z2], w, ba);

    let mut bits: Vec<(WireRef, u64)> = shifted(&z0, 0).collect();
    bits.extend(shifted(&middle, k));
    bits.extend(shifted(&z2, 2 * k));
    let product = ba.emit(c, &bits);
    dense(&product, 2 * n)
}

fn add_numbers(c: &mut Circuit, a: &[WireRef], b: &[WireRef], width: usize) -> Vec<WireRef> {
    let bits: Vec<(WireRef, u64)> = shifted(a, 0).chain(shifted(b, 0)).collect();
    let sum = emit_ba_efficient(c, &bits);
    dense(&sum, width)
}

/// `(m - sum(subtrahends)) mod 2^w`, computed as `m` plus the complement of
/// each subtrahend plus their count. Inverters are XORs with one, left for
/// constant folding to absorb.
fn subtract(
    c: &mut Circuit,
    m: &[WireRef],
    subtrahends: &[&[WireRef]],
    w: usize,
    ba: BaMethod,
) -> Vec<WireRef> {
    let mut bits: Vec<(WireRef, u64)> = shifted(&m[..m.len().min(w)], 0).collect();
    let mut constant = BigUint::from(subtrahends.len());
    for &operand in subtrahends {
        let len = operand.len().min(w);
        for (i, &bit) in operand[..len].iter().enumerate() {
            match bit.as_const() {
                Some(true) => {}
                Some(false) => constant += BigUint::one() << i,
                None => bits.push((c.xor(bit, WireRef::ONE), i as u64)),
            }
        }
        constant += (BigUint::one() << w) - (BigUint::one() << len);
    }
    for i in 0..w as u64 {
        if constant.bit(i) {
            bits.push((WireRef::ONE, i));
        }
    }
    let diff = ba.emit(c, &bits);
    dense(&diff, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::assert_matches_exhaustive;

    fn assert_multiplies(c: &Circuit, n: usize) {
        for x in 0u64..1 << n {
            for y in 0u64..1 << n {
                let bits: Vec<bool> = (0..n)
                    .map(|i| x >> i & 1 == 1)
                    .chain((0..n).map(|i| y >> i & 1 == 1))
                    .collect();
                let v = c.weighted_output_value(&bits).unwrap();
                assert_eq!(v, num_bigint::BigUint::from(x * y), "{x} * {y}");
            }
        }
    }

    fn all_methods() -> [MultMethod; 5] {
        [
            MultMethod::Dadda,
            MultMethod::Mdfa,
            MultMethod::Karatsuba {
                base: KaratsubaBase::Dadda,
                threshold: 2,
            },
            MultMethod::Karatsuba {
                base: KaratsubaBase::Mdfa,
                threshold: 3,
            },
            MultMethod::karatsuba(KaratsubaBase::Pure),
        ]
    }

    #[test]
    fn sum_sizes() {
        assert_eq!(generate_sum(5, BaMethod::Dadda).unwrap().size(), 12);
        assert_eq!(generate_sum(5, BaMethod::Mdfa).unwrap().size(), 11);
        assert_eq!(generate_sum(31, BaMethod::Mdfa).unwrap().size(), 119);
        assert_eq!(
            generate_sum(0, BaMethod::Mdfa),
            Err(GenerateError::ZeroWidth)
        );
    }

    #[test]
    fn add_sizes() {
        for method in [BaMethod::Dadda, BaMethod::Mdfa] {
            assert_eq!(generate_add(1, method).unwrap().size(), 2);
            for n in 2..100 {
                let c = generate_add(n, method).unwrap();
                assert_eq!(c.size(), 5 * n - 3);
                assert_eq!(c.outputs().len(), n + 1);
            }
        }
    }

    #[test]
    fn add_bit_chain() {
        assert_eq!(generate_add_bit(7).unwrap().size(), 14);
        assert_eq!(generate_add_bit(1).unwrap().size(), 2);
        for n in 1..=15 {
            let c = generate_add_bit(n).unwrap();
            assert_eq!(c.size(), 2 * n);
            let mut s = vec![0];
            s.extend(0..n as u64);
            assert_matches_exhaustive(&c, &s);
        }
    }

    #[test]
    fn partial_products() {
        let mut c = Circuit::new(10);
        let x: Vec<_> = (0..5).map(WireRef::input).collect();
        let y: Vec<_> = (5..10).map(WireRef::input).collect();
        let pp = generate_partial_products(&mut c, &x, &y);
        assert_eq!(c.size(), 25);
        let mut heights = [0; 9];
        for &(_, s) in &pp {
            heights[s as usize] += 1;
        }
        assert_eq!(heights, [1, 2, 3, 4, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn mult_one_bit() {
        for method in all_methods() {
            let c = generate_mult(1, method).unwrap();
            assert_eq!(c.size(), 1);
            assert_eq!(c.outputs().len(), 1);
        }
    }

    #[test]
    fn mult_exhaustive() {
        for method in all_methods() {
            for n in 1..=6 {
                let c = generate_mult(n, method).unwrap();
                assert_multiplies(&c, n);
                assert!(c.dangling_gates().is_empty());
            }
        }
    }

    #[test]
    fn mult_table_sizes() {
        assert_eq!(generate_mult(40, MultMethod::Dadda).unwrap().size(), 9280);
        assert_eq!(generate_mult(40, MultMethod::Mdfa).unwrap().size(), 8539);
    }

    #[test]
    fn mdfa_mult_beats_dadda() {
        for n in 4..=24 {
            let d = generate_mult(n, MultMethod::Dadda).unwrap().size();
            let m = generate_mult(n, MultMethod::Mdfa).unwrap().size();
            assert!(m < d, "n={n}: {m} vs {d}");
        }
    }

    #[test]
    fn karatsuba_above_width_is_base() {
        for n in [3, 10, 19] {
            let k = MultMethod::Karatsuba {
                base: KaratsubaBase::Mdfa,
                threshold: n + 1,
            };
            assert_eq!(
                generate_mult(n, k).unwrap(),
                generate_mult(n, MultMethod::Mdfa).unwrap()
            );
            let k = MultMethod::Karatsuba {
                base: KaratsubaBase::Dadda,
                threshold: 100,
            };
            assert_eq!(
                generate_mult(n, k).unwrap(),
                generate_mult(n, MultMethod::Dadda).unwrap()
            );
        }
    }

    #[test]
    fn invalid_threshold() {
        let k = MultMethod::Karatsuba {
            base: KaratsubaBase::Mdfa,
            threshold: 1,
        };
        assert_eq!(generate_mult(4, k), Err(GenerateError::InvalidThreshold(1)));
    }
}
