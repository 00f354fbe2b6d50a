//! Equivalence checking against an arithmetic reference.
//!
//! Assignments are evaluated 64 at a time, one per bit lane. The expected
//! values come from bit-sliced counters over the input words, never from the
//! circuit under test. Work is split into 64-assignment blocks shared between
//! threads; checking stops after the first block with a mismatch, and the
//! report always describes the lowest failing assignment, so it does not
//! depend on the thread count.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use bitadd_core::{Circuit, SignificanceVector};
use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

/// What the circuit is supposed to compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reference {
    /// `sum(2^s_i * x_i)`.
    Weighted(SignificanceVector),
    /// `x * y` for inputs `x_0..x_{w-1}, y_0..y_{w-1}`, least significant
    /// first.
    Product { width: usize },
}

impl Reference {
    pub fn input_count(&self) -> usize {
        match self {
            Reference::Weighted(s) => s.len(),
            Reference::Product { width } => 2 * width,
        }
    }

    /// Upper bound on the bit length of any reference value.
    fn value_bits(&self) -> u64 {
        match self {
            Reference::Weighted(s) => {
                let top = s.entries().iter().max().map_or(0, |&e| e + 1);
                top + u64::from(usize::BITS - s.len().leading_zeros())
            }
            Reference::Product { width } => 2 * *width as u64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Random => "random",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<bool>,
    pub expected: BigUint,
    pub actual: BigUint,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub mode: Mode,
    pub cases_checked: u64,
    pub mismatches: u64,
    pub first_counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    /// Everything except the timing, for comparing runs.
    pub fn outcome(&self) -> (Mode, u64, u64, Option<&Counterexample>) {
        (
            self.mode,
            self.cases_checked,
            self.mismatches,
            self.first_counterexample.as_ref(),
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} cases={} mismatches={} elapsed={:.3}s",
            self.mode,
            self.cases_checked,
            self.mismatches,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(cx) = &self.first_counterexample {
            let bits: String = cx
                .assignment
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            write!(
                f,
                "\ncounterexample: x0..x{}={} expected={} actual={}",
                cx.assignment.len().saturating_sub(1),
                bits,
                cx.expected,
                cx.actual
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{inputs} inputs exceed the exhaustive limit of {limit}")]
    TooManyInputs { inputs: usize, limit: usize },
    #[error("circuit has {circuit} inputs but the reference expects {reference}")]
    InputCountMismatch { circuit: usize, reference: usize },
    #[error("at least one trial is required")]
    NoTrials,
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Block `b` of the exhaustive sweep: lane `j` holds assignment `64b + j`.
fn exhaustive_block(n: usize, b: u64, words: &mut Vec<u64>) {
    words.clear();
    words.extend((0..n).map(|i| match i {
        0..6 => LANE_PATTERNS[i],
        _ if b >> (i - 6) & 1 == 1 => u64::MAX,
        _ => 0,
    }));
}

fn random_block(n: usize, seed: u64, b: u64, words: &mut Vec<u64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(b);
    words.clear();
    words.extend((0..n).map(|_| rng.next_u64()));
}

/// Bit-sliced population count: plane `k` holds bit `k` of each lane's count.
fn lane_counts<'a>(words: impl Iterator<Item = &'a u64>) -> Vec<u64> {
    let mut planes: Vec<u64> = Vec::new();
    for &w in words {
        let mut carry = w;
        for plane in planes.iter_mut() {
            if carry == 0 {
                break;
            }
            let sum = *plane ^ carry;
            carry &= *plane;
            *plane = sum;
        }
        if carry != 0 {
            planes.push(carry);
        }
    }
    planes
}

fn set_lanes(mut word: u64, mut f: impl FnMut(usize)) {
    while word != 0 {
        f(word.trailing_zeros() as usize);
        word &= word - 1;
    }
}

/// Per-lane integers, narrow when everything fits in 128 bits.
trait LaneValue: Clone + PartialEq + Default {
    fn add_bit(&mut self, bit: u64);
    fn into_big(self) -> BigUint;
    fn mul(&self, other: &Self) -> Self;
}

impl LaneValue for u128 {
    fn add_bit(&mut self, bit: u64) {
        *self += 1u128 << bit;
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
    fn mul(&self, other: &u128) -> u128 {
        self * other
    }
}

impl LaneValue for BigUint {
    fn add_bit(&mut self, bit: u64) {
        *self += BigUint::from(1u8) << bit;
    }
    fn into_big(self) -> BigUint {
        self
    }
    fn mul(&self, other: &BigUint) -> BigUint {
        self * other
    }
}

struct Checker<'a> {
    circuit: &'a Circuit,
    reference: &'a Reference,
    /// Input indices grouped by significance.
    groups: Vec<(u64, Vec<usize>)>,
    wide: bool,
}

struct BlockResult {
    mismatches: u64,
    first: Option<Counterexample>,
}

impl<'a> Checker<'a> {
    fn new(circuit: &'a Circuit, reference: &'a Reference) -> Result<Checker<'a>, VerifyError> {
        if circuit.input_count() != reference.input_count() {
            return Err(VerifyError::InputCountMismatch {
                circuit: circuit.input_count(),
                reference: reference.input_count(),
            });
        }
        let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
        if let Reference::Weighted(s) = reference {
            let mut order: Vec<usize> = (0..s.len()).collect();
            order.sort_by_key(|&i| s.entries()[i]);
            for i in order {
                let e = s.entries()[i];
                match groups.last_mut() {
                    Some((sig, members)) if *sig == e => members.push(i),
                    _ => groups.push((e, vec![i])),
                }
            }
        }
        let top_output = circuit.outputs().last().map_or(0, |o| o.significance + 1);
        let wide = reference.value_bits() > 128 || top_output > 128;
        Ok(Checker {
            circuit,
            reference,
            groups,
            wide,
        })
    }

    fn expected<V: LaneValue>(&self, inputs: &[u64]) -> Vec<V> {
        let mut values = vec![V::default(); 64];
        match self.reference {
            Reference::Weighted(_) => {
                for (sig, members) in &self.groups {
                    let planes = lane_counts(members.iter().map(|&i| &inputs[i]));
                    for (k, &plane) in planes.iter().enumerate() {
                        set_lanes(plane, |j| values[j].add_bit(sig + k as u64));
                    }
                }
            }
            Reference::Product { width } => {
                let mut x = vec![V::default(); 64];
                let mut y = vec![V::default(); 64];
                for i in 0..*width {
                    set_lanes(inputs[i], |j| x[j].add_bit(i as u64));
                    set_lanes(inputs[width + i], |j| y[j].add_bit(i as u64));
                }
                for j in 0..64 {
                    values[j] = x[j].mul(&y[j]);
                }
            }
        }
        values
    }

    fn actual<V: LaneValue>(&self, outputs: &[u64]) -> Vec<V> {
        let mut values = vec![V::default(); 64];
        for (word, o) in outputs.iter().zip(self.circuit.outputs()) {
            set_lanes(*word, |j| values[j].add_bit(o.significance));
        }
        values
    }

    fn compare<V: LaneValue>(&self, inputs: &[u64], outputs: &[u64], lanes: u64) -> BlockResult {
        let expected = self.expected::<V>(inputs);
        let actual = self.actual::<V>(outputs);
        let mut result = BlockResult {
            mismatches: 0,
            first: None,
        };
        for j in 0..64 {
            if lanes >> j & 1 == 0 || expected[j] == actual[j] {
                continue;
            }
            result.mismatches += 1;
            if result.first.is_none() {
                result.first = Some(Counterexample {
                    assignment: inputs.iter().map(|w| w >> j & 1 == 1).collect(),
                    expected: expected[j].clone().into_big(),
                    actual: actual[j].clone().into_big(),
                });
            }
        }
        result
    }

    fn check_block(&self, inputs: &[u64], lanes: u64, scratch: &mut Vec<u64>) -> BlockResult {
        let outputs = self
            .circuit
            .evaluate_words(inputs, scratch)
            .expect("input count checked");
        if self.wide {
            self.compare::<BigUint>(inputs, &outputs, lanes)
        } else {
            self.compare::<u128>(inputs, &outputs, lanes)
        }
    }

    /// Checks `cases` assignments; `fill(b, words)` writes block `b`.
    fn run(
        &self,
        mode: Mode,
        cases: u64,
        fill: impl Fn(u64, &mut Vec<u64>) + Sync,
    ) -> VerificationReport {
        let start = Instant::now();
        let blocks = cases.div_ceil(64);
        let lanes_of = |b: u64| {
            let remaining = cases - 64 * b;
            if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            }
        };
        let next = AtomicU64::new(0);
        let first_bad = AtomicU64::new(u64::MAX);
        let failures: Mutex<Vec<(u64, BlockResult)>> = Mutex::new(Vec::new());
        let workers = thread::available_parallelism()
            .map_or(1, |p| p.get())
            .min(blocks as usize)
            .max(1);
        thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut words = Vec::with_capacity(self.circuit.input_count());
                    let mut scratch = Vec::with_capacity(self.circuit.size());
                    loop {
                        let b = next.fetch_add(1, Ordering::Relaxed);
                        if b >= blocks || b > first_bad.load(Ordering::Relaxed) {
                            break;
                        }
                        fill(b, &mut words);
                        let result = self.check_block(&words, lanes_of(b), &mut scratch);
                        if result.mismatches > 0 {
                            first_bad.fetch_min(b, Ordering::Relaxed);
                            failures.lock().unwrap().push((b, result));
                        }
                    }
                });
            }
        });
        let first = failures
            .into_inner()
            .unwrap()
            .into_iter()
            .min_by_key(|(b, _)| *b);
        let (cases_checked, mismatches, first_counterexample) = match first {
            Some((b, result)) => ((64 * (b + 1)).min(cases), result.mismatches, result.first),
            None => (cases, 0, None),
        };
        VerificationReport {
            mode,
            cases_checked,
            mismatches,
            first_counterexample,
            elapsed: start.elapsed(),
        }
    }
}

/// Compares `c` with `reference` on all `2^n` assignments.
pub fn verify_exhaustive(
    c: &Circuit,
    reference: &Reference,
    limit_bits: usize,
) -> Result<VerificationReport, VerifyError> {
    let n = reference.input_count();
    if n > limit_bits || n >= 64 {
        return Err(VerifyError::TooManyInputs {
            inputs: n,
            limit: limit_bits.min(63),
        });
    }
    let checker = Checker::new(c, reference)?;
    Ok(checker.run(Mode::Exhaustive, 1u64 << n, |b, words| {
        exhaustive_block(n, b, words)
    }))
}

/// Compares `c` with `reference` on `trials` uniformly random assignments.
/// The assignments depend only on `seed`.
pub fn verify_random(
    c: &Circuit,
    reference: &Reference,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    let checker = Checker::new(c, reference)?;
    let n = reference.input_count();
    Ok(checker.run(Mode::Random, trials, |b, words| {
        random_block(n, seed, b, words)
    }))
}
