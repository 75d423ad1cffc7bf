//! `eqstack`: batch front end for the equivariant cohomology library.
//!
//! Exit codes: 0 when every assertion passes, 1 when one fails, 2 on an
//! input or computation error.

mod error;
mod input;
mod job;
mod report;

use std::io::Read;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use eqstack::exactalg::{Field, PrimeField, Rationals};
use eqstack::spectra::HyperMode;
use serde_json::Value;

use error::{CliError, Result};
use job::{JobSpec, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "Q")]
    Q,
    #[value(name = "Fp")]
    Fp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Atlas,
    Borel,
}

#[derive(Debug, Parser)]
#[command(name = "eqstack", version, about = "Exact equivariant cohomology of finite groupoid atlases")]
struct Args {
    /// The job to run.
    #[arg(value_enum)]
    kind: Kind,

    /// Input JSON file, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,

    /// Simplicial truncation level N (default: last degree + 2).
    #[arg(long)]
    trunc: Option<usize>,

    /// Polynomial truncation P for the Cartan model.
    #[arg(long, default_value_t = 4)]
    poly_trunc: usize,

    /// Coefficient field; overrides the one in the input.
    #[arg(long, value_enum)]
    field: Option<FieldArg>,

    /// The prime for `--field Fp`.
    #[arg(long)]
    p: Option<u64>,

    /// Degree range `a..b` (inclusive) or a single degree.
    #[arg(long, value_parser = parse_degrees)]
    degrees: Option<RangeInclusive<usize>>,

    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Validate the input and stop.
    #[arg(long)]
    check_only: bool,

    /// Which filtration the hypercohomology job uses.
    #[arg(long, value_enum, default_value_t = Mode::Borel)]
    mode: Mode,
}

fn parse_degrees(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a..b or a single degree, got \"{s}\"");
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty degree range {s}"));
            }
            Ok(a..=b)
        }
        None => {
            let a = num(s)?;
            Ok(a..=a)
        }
    }
}

fn read_input(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
            path: "stdin".into(),
            source,
        })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?
    };
    Ok(serde_json::from_str(&text)?)
}

fn execute<F: Field>(spec: &JobSpec, doc: &Value, field: F) -> Result<report::Report> {
    let input = input::parse(doc, field)?;
    job::run(spec, &input)
}

fn main_inner(args: &Args) -> Result<report::Report> {
    let doc = read_input(&args.input)?;
    let declared = input::declared_field(&doc)?;
    let (name, p) = match (args.field, &declared) {
        (Some(FieldArg::Q), _) => ("Q".to_string(), None),
        (Some(FieldArg::Fp), d) => ("Fp".to_string(), args.p.or(d.as_ref().and_then(|d| d.1))),
        (None, Some((n, p))) => (n.clone(), args.p.or(*p)),
        (None, None) => ("Q".to_string(), None),
    };
    let spec = JobSpec {
        kind: args.kind,
        trunc: args.trunc,
        poly_trunc: args.poly_trunc,
        degrees: args.degrees.clone(),
        hyper_mode: match args.mode {
            Mode::Atlas => HyperMode::Atlas,
            Mode::Borel => HyperMode::DiscreteBorel,
        },
        check_only: args.check_only,
    };
    match name.as_str() {
        "Q" => execute(&spec, &doc, Rationals),
        "Fp" => {
            let p = p.ok_or_else(|| CliError::Usage("--field Fp needs a prime (--p or /coefficients/p)".into()))?;
            let f = PrimeField::new(p).ok_or_else(|| CliError::schema("/coefficients/p", format!("{p} is not a prime")))?;
            execute(&spec, &doc, f)
        }
        other => Err(CliError::schema("/coefficients/field", format!("unknown field \"{other}\" (expected \"Q\" or \"Fp\")"))),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(&args) {
        Ok(report) => {
            match args.format {
                Format::Tsv => {
                    print!("{}", report.to_tsv());
                    eprint!("{}", report.assertion_lines());
                }
                Format::Json => print!("{}", report.to_json()),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
