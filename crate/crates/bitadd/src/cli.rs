//! `bitadd gen`, `bitadd verify` and `bitadd tables`.
//!
//! Exit codes: 0 on success, 1 when generation hits a guard, verification
//! finds a mismatch or a file cannot be written, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use bitadd_core::{
    generate_add, generate_add_bit, generate_add_logdepth, generate_ba_dadda,
    generate_ba_efficient, generate_mult, generate_mult_logdepth, generate_sum,
    generate_sum_logdepth, BaMethod, Circuit, GenerateError, KaratsubaBase, LogDepthMethod,
    MultMethod, SignificanceVector,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::tables::{improvement, write_csv, BenchRow, Function, Table};
use crate::verify::{verify_exhaustive, verify_random, Reference, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::{export_bench, export_dot, parse_json, serialize_json};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "bitadd",
    version,
    about = "Generate and verify bit adder circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a circuit and print its size and depth.
    Gen(GenArgs),
    /// Check a JSON netlist against its arithmetic specification.
    Verify(VerifyArgs),
    /// Reproduce a size table as CSV.
    Tables(TablesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Func {
    /// Number of ones among n bits.
    Sum,
    /// Sum of two n-bit numbers.
    Add,
    /// One bit plus an n-bit number.
    Inc,
    /// Product of two n-bit numbers.
    Mult,
    /// Weighted bits given by --weights.
    Ba,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Dadda,
    Mdfa,
    Karatsuba,
    Logdepth,
    LogdepthMdfa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Base {
    Dadda,
    Mdfa,
    Pure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Bench,
    Dot,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    func: Func,
    #[arg(long, conflicts_with = "weights")]
    n: Option<usize>,
    /// Comma-separated significances, for --func ba.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    weights: Option<Vec<u64>>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Operand width below which Karatsuba stops splitting.
    #[arg(long)]
    threshold: Option<usize>,
    /// Multiplier used below the Karatsuba threshold.
    #[arg(long, value_enum)]
    base: Option<Base>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("spec").required(true).args(["weights", "mult"])))]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated significances of the inputs.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    weights: Option<Vec<u64>>,
    /// Check a multiplier of two numbers of this width instead.
    #[arg(long)]
    mult: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
    exhaustive_limit: usize,
    /// Check this many random assignments instead of all of them.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, requires = "trials", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Fig10,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Failure {
        Failure::Failed(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(args) => gen(&args, stdout),
        Command::Verify(args) => verify(&args, stdout),
        Command::Tables(args) => tables(&args, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Failed(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_FAILURE
        }
    }
}

fn ba_method(method: Method) -> Option<BaMethod> {
    match method {
        Method::Dadda => Some(BaMethod::Dadda),
        Method::Mdfa => Some(BaMethod::Mdfa),
        _ => None,
    }
}

fn logdepth_method(method: Method) -> Option<LogDepthMethod> {
    match method {
        Method::Logdepth => Some(LogDepthMethod::FullAdder),
        Method::LogdepthMdfa => Some(LogDepthMethod::Mdfa),
        _ => None,
    }
}

fn build(args: &GenArgs) -> Result<Circuit, Failure> {
    let method = args.method.unwrap_or(Method::Mdfa);
    if method != Method::Karatsuba && (args.threshold.is_some() || args.base.is_some()) {
        return Err(usage(
            "--threshold and --base only apply to --method karatsuba",
        ));
    }
    if method == Method::Karatsuba && args.func != Func::Mult {
        return Err(usage("--method karatsuba only applies to --func mult"));
    }
    if args.func == Func::Ba {
        let weights = args
            .weights
            .clone()
            .ok_or_else(|| usage("--func ba needs --weights"))?;
        let s = SignificanceVector::new(weights)?;
        return Ok(match method {
            Method::Dadda => generate_ba_dadda(&s),
            Method::Mdfa => generate_ba_efficient(&s),
            Method::Logdepth => LogDepthMethod::FullAdder.generate(&s),
            _ => LogDepthMethod::Mdfa.generate(&s),
        });
    }
    if args.weights.is_some() {
        return Err(usage("--weights only applies to --func ba"));
    }
    let n = args.n.ok_or_else(|| usage("--n is required"))?;
    let circuit = match args.func {
        Func::Inc => {
            if args.method.is_some() {
                return Err(usage("--func inc takes no --method"));
            }
            generate_add_bit(n)?
        }
        Func::Sum | Func::Add => {
            let sum = args.func == Func::Sum;
            match (ba_method(method), logdepth_method(method)) {
                (Some(m), _) if sum => generate_sum(n, m)?,
                (Some(m), _) => generate_add(n, m)?,
                (_, Some(m)) if sum => generate_sum_logdepth(n, m)?,
                (_, Some(m)) => generate_add_logdepth(n, m)?,
                _ => unreachable!("karatsuba rejected above"),
            }
        }
        Func::Mult => match method {
            Method::Dadda => generate_mult(n, MultMethod::Dadda)?,
            Method::Mdfa => generate_mult(n, MultMethod::Mdfa)?,
            Method::Karatsuba => {
                let base = match args.base.unwrap_or(Base::Mdfa) {
                    Base::Dadda => KaratsubaBase::Dadda,
                    Base::Mdfa => KaratsubaBase::Mdfa,
                    Base::Pure => KaratsubaBase::Pure,
                };
                let threshold = args.threshold.unwrap_or(MultMethod::DEFAULT_THRESHOLD);
                if threshold < 2 {
                    return Err(usage("--threshold must be at least 2"));
                }
                generate_mult(n, MultMethod::Karatsuba { base, threshold })?
            }
            Method::Logdepth => generate_mult_logdepth(n, LogDepthMethod::FullAdder)?,
            Method::LogdepthMdfa => generate_mult_logdepth(n, LogDepthMethod::Mdfa)?,
        },
        Func::Ba => unreachable!(),
    };
    Ok(circuit)
}

fn gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let c = build(args)?;
    if let Some(path) = &args.out {
        let text = match args.format {
            Format::Json => serialize_json(&c),
            Format::Bench => export_bench(&c).map_err(|e| Failure::Failed(e.to_string()))?,
            Format::Dot => export_dot(&c),
        };
        fs::write(path, text).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
    }
    let _ = writeln!(
        stdout,
        "size={} depth={} inputs={} outputs={}",
        c.size(),
        c.depth(),
        c.input_count(),
        c.outputs().len()
    );
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| usage(format!("{}: {e}", args.input.display())))?;
    let c = parse_json(&text).map_err(|e| usage(format!("{}: {e}", args.input.display())))?;
    let reference = match (&args.weights, args.mult) {
        (Some(w), _) => Reference::Weighted(SignificanceVector::new(w.clone())?),
        (None, Some(width)) => Reference::Product { width },
        (None, None) => unreachable!("clap requires one of them"),
    };
    let report = match args.trials {
        Some(trials) => verify_random(&c, &reference, trials, args.seed),
        None => verify_exhaustive(&c, &reference, args.exhaustive_limit),
    }
    .map_err(|e| usage(e.to_string()))?;
    let _ = writeln!(stdout, "{report}");
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn summarize(rows: &[BenchRow], stdout: &mut dyn Write) {
    for r in rows {
        let _ = writeln!(
            stdout,
            "{:<5} {:>7} {:<16} size={:<8} depth={}",
            r.function, r.n, r.method, r.size, r.depth
        );
    }
    for pair in rows.chunks(2) {
        if let [fa, mdfa] = pair {
            if fa.function == Function::Sum && fa.method == "dadda" && mdfa.method == "mdfa" {
                let _ = writeln!(
                    stdout,
                    "improvement n={}: {:.1}%",
                    fa.n,
                    improvement(fa.size, mdfa.size)
                );
            }
        }
    }
}

fn tables(args: &TablesArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let table = match args.which {
        Which::One => Table::Sum,
        Which::Two => Table::Mult,
        Which::Three => Table::LogDepth,
        Which::Fig10 => Table::MultSweep,
    };
    let rows = table.rows();
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
            write_csv(&rows, file).map_err(|e| Failure::Failed(e.to_string()))?;
            summarize(&rows, stdout);
            let _ = writeln!(stdout, "wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            write_csv(&rows, &mut *stdout).map_err(|e| Failure::Failed(e.to_string()))?;
        }
    }
    Ok(EXIT_OK)
}
