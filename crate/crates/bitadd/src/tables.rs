//! Size and depth tables for the summation, addition and multiplication
//! generators, written as CSV with header `function,n,method,size,depth`.

use std::fmt;
use std::io;

use bitadd_core::{
    generate_add_logdepth, generate_mult, generate_mult_logdepth, generate_sum,
    generate_sum_logdepth, BaMethod, Circuit, KaratsubaBase, LogDepthMethod, MultMethod,
};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Function {
    Sum,
    Add,
    Mult,
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Function::Sum => "sum",
            Function::Add => "add",
            Function::Mult => "mult",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub function: Function,
    pub n: usize,
    pub method: &'static str,
    pub size: usize,
    pub depth: usize,
}

impl BenchRow {
    fn of(function: Function, n: usize, method: &'static str, c: &Circuit) -> BenchRow {
        BenchRow {
            function,
            n,
            method,
            size: c.size(),
            depth: c.depth(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Sum,
    Mult,
    LogDepth,
    MultSweep,
}

impl Table {
    pub fn rows(self) -> Vec<BenchRow> {
        match self {
            Table::Sum => sum_table(),
            Table::Mult => mult_table(&TABLE2_N),
            Table::LogDepth => logdepth_table(),
            Table::MultSweep => mult_table(&(40..=300).step_by(10).collect::<Vec<_>>()),
        }
    }
}

pub const TABLE1_N: [usize; 8] = [7, 31, 127, 511, 2047, 8191, 32767, 131071];
pub const TABLE2_N: [usize; 7] = [40, 80, 120, 160, 200, 240, 280];
pub const TABLE3_N: [usize; 8] = [10, 20, 30, 40, 60, 80, 160, 320];

pub const MULT_METHODS: [(&str, MultMethod); 5] = [
    ("dadda", MultMethod::Dadda),
    ("mdfa", MultMethod::Mdfa),
    (
        "karatsuba",
        MultMethod::Karatsuba {
            base: KaratsubaBase::Pure,
            threshold: MultMethod::DEFAULT_THRESHOLD,
        },
    ),
    (
        "karatsuba-dadda",
        MultMethod::Karatsuba {
            base: KaratsubaBase::Dadda,
            threshold: MultMethod::DEFAULT_THRESHOLD,
        },
    ),
    (
        "karatsuba-mdfa",
        MultMethod::Karatsuba {
            base: KaratsubaBase::Mdfa,
            threshold: MultMethod::DEFAULT_THRESHOLD,
        },
    ),
];

fn sum_table() -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for n in TABLE1_N {
        for (label, method) in [("dadda", BaMethod::Dadda), ("mdfa", BaMethod::Mdfa)] {
            let c = generate_sum(n, method).expect("n > 0");
            rows.push(BenchRow::of(Function::Sum, n, label, &c));
        }
    }
    rows
}

fn mult_table(ns: &[usize]) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &n in ns {
        for (label, method) in MULT_METHODS {
            let c = generate_mult(n, method).expect("valid method");
            rows.push(BenchRow::of(Function::Mult, n, label, &c));
        }
    }
    rows
}

fn logdepth_table() -> Vec<BenchRow> {
    let methods = [
        ("logdepth", LogDepthMethod::FullAdder),
        ("logdepth-mdfa", LogDepthMethod::Mdfa),
    ];
    let mut rows = Vec::new();
    for (function, generate) in [
        (Function::Sum, generate_sum_logdepth as fn(_, _) -> _),
        (Function::Add, generate_add_logdepth),
        (Function::Mult, generate_mult_logdepth),
    ] {
        for n in TABLE3_N {
            for (label, method) in methods {
                let c = generate(n, method).expect("n > 0");
                rows.push(BenchRow::of(function, n, label, &c));
            }
        }
    }
    rows
}

/// Size saving of `improved` over `baseline`, in percent.
pub fn improvement(baseline: usize, improved: usize) -> f64 {
    100.0 * (baseline as f64 - improved as f64) / baseline as f64
}

pub fn write_csv(rows: &[BenchRow], out: impl io::Write) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    if rows.is_empty() {
        writer.write_record(["function", "n", "method", "size", "depth"])?;
    }
    writer.flush()?;
    Ok(())
}
