//! Command-line front end, file formats, verification and size tables for
//! the circuits built by [`bitadd_core`].

pub mod bench;
pub mod cli;
pub mod dot;
pub mod json;
pub mod tables;
pub mod verify;

pub use bench::{export_bench, BenchError};
pub use dot::export_dot;
pub use json::{parse_json, serialize_json, JsonError, NetlistDocument};
pub use tables::{write_csv, BenchRow, Function, Table};
pub use verify::{
    verify_exhaustive, verify_random, Counterexample, Mode, Reference, VerificationReport,
    VerifyError,
};
