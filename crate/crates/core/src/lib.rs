//! Gate-level circuits for weighted bit addition.
//!
//! A bit adder takes `n` input bits with significances `s_1..s_n` and outputs
//! the binary representation of `sum(2^s_i * x_i)`. This crate builds such
//! circuits over the full binary basis with two reductions: the classical
//! half/full adder scheme and a denser one built from MDFA blocks. On top of
//! those sit generators for bit summation, addition, increment, multiplication
//! and logarithmic-depth variants.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod ba;
pub mod blocks;
pub mod circuit;
mod error;
pub mod fold;
pub mod logdepth;
pub mod oracle;

pub use arith::{
    generate_add, generate_add_bit, generate_mult, generate_partial_products, generate_sum,
    BaMethod, KaratsubaBase, MultMethod,
};
pub use ba::{
    generate_ba_dadda, generate_ba_efficient, LayerState, SignificanceVector,
    DEFAULT_SIGNIFICANCE_LIMIT,
};
pub use blocks::BitPair;
pub use circuit::{BinOp, Circuit, Gate, Output, Unary, WireRef};
pub use error::{CircuitError, GenerateError};
pub use fold::fold_constants;
pub use logdepth::{
    emit_brent_kung, generate_add_logdepth, generate_ba_logdepth, generate_ba_logdepth_mdfa,
    generate_mult_logdepth, generate_sum_logdepth, LogDepthMethod,
};
pub use oracle::oracle_value;
