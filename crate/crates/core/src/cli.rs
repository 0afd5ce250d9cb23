//! Command-line surface. Payload goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 domain error, 2 internal invariant violation
//! (including a failed `verify` suite), 3 resource limit.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bpoly::{b_poly, Mode};
use crate::error::{Error, Result};
use crate::field::{make_field, FieldCtx};
use crate::invariants::{genus, hasse_witt_with, is_ordinary, is_ordinary_plus, HwOptions};
use crate::poly::{FqPoly, Modulus};
use crate::powersums::{s_exact, s_mod, Budget};
use crate::scan::{scan_degree, write_records, OutputFormat, ScanMode, ScanOptions};
use crate::verify::{run_suite, Suite, VerifyParams};

#[derive(Parser, Debug)]
#[command(name = "carlitz-hw", version, about = "Hasse-Witt invariants of cyclotomic function fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Extension degree of F_q over F_p.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Defining polynomial of F_q over F_p, e.g. "x^2+x+1" (only with e > 1).
    #[arg(long = "field-poly")]
    field_poly: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus, Hasse-Witt invariants and ordinariness of K_m and K_m^+.
    Invariants {
        #[command(flatten)]
        field: FieldArgs,
        /// Monic irreducible modulus m.
        #[arg(long)]
        m: String,
        /// full | witness
        #[arg(long, default_value = "full")]
        mode: String,
        /// Evaluate every exponent instead of one per Frobenius orbit.
        #[arg(long)]
        no_orbit: bool,
    },
    /// Classify every monic irreducible of degree d.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        /// Degree of the moduli
        #[arg(long)]
        d: u32,
        /// csv | jsonl
        #[arg(long, default_value = "csv")]
        format: String,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// full | ordinary-only | witness
        #[arg(long, default_value = "full")]
        mode: String,
        /// Stop after this many moduli.
        #[arg(long)]
        limit: Option<usize>,
        /// Evaluate every exponent instead of one per Frobenius orbit.
        #[arg(long)]
        no_orbit: bool,
    },
    /// Print B_n(u), exact or reduced modulo m.
    Bpoly {
        #[command(flatten)]
        field: FieldArgs,
        /// Exponent, 1 <= n <= q^d - 2
        #[arg(long)]
        n: u64,
        /// Monic irreducible modulus m
        #[arg(long = "mod", conflicts_with_all = ["exact", "d"])]
        modulus: Option<String>,
        /// Exact coefficients in F_q[T] (needs --d)
        #[arg(long, requires = "d")]
        exact: bool,
        /// Degree used for the exponent range in exact mode
        #[arg(long)]
        d: Option<u32>,
    },
    /// Print the power sum s_i(n), exact or reduced modulo m.
    Powersum {
        #[command(flatten)]
        field: FieldArgs,
        /// Degree bound: sum over monic a with deg a < i
        #[arg(long)]
        i: u32,
        /// Exponent
        #[arg(long)]
        n: u64,
        /// Reduce modulo this monic irreducible m
        #[arg(long = "mod", conflicts_with = "exact")]
        modulus: Option<String>,
        /// Exact polynomial (the default without --mod)
        #[arg(long)]
        exact: bool,
    },
    /// Genera g_m and g_m^+ for moduli of degree d.
    Genus {
        #[command(flatten)]
        field: FieldArgs,
        /// Degree of the moduli
        #[arg(long)]
        d: u32,
    },
    /// Run identity suites and print a pass/fail table.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Degree of the moduli
        #[arg(long)]
        d: u32,
        /// Comma-separated suites (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
        /// Largest exponent for the exact power-sum suites.
        #[arg(long, default_value_t = 200)]
        n_max: u64,
    },
}

fn build_field(args: &FieldArgs) -> Result<FieldCtx> {
    let modulus = match &args.field_poly {
        None => None,
        Some(_) if args.e == 1 => {
            return Err(Error::InvalidFieldModulus("--field-poly requires --e > 1".into()))
        }
        Some(text) => {
            let prime = make_field(args.p, 1, None)?;
            let poly = FqPoly::parse(&text.replace('x', "T"), &prime)?;
            Some(poly.coeffs().iter().map(|c| c.code()).collect::<Vec<_>>())
        }
    };
    make_field(args.p, args.e, modulus.as_deref())
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    p: u64,
    e: u32,
    q: u64,
    field_modulus: String,
    m: &'a str,
    d: u32,
    g: u64,
    g_plus: u64,
    ordinary: bool,
    ordinary_plus: bool,
    first_defect_n: Option<u64>,
    first_defect_plus_n: Option<u64>,
}

#[derive(Serialize)]
struct GenusReport {
    p: u64,
    e: u32,
    q: u64,
    d: u32,
    g: u64,
    g_plus: u64,
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Invariants { field, m, mode, no_orbit } => {
            let f = build_field(&field)?;
            let m = Modulus::parse(&m, &f)?;
            match mode.parse::<ScanMode>()? {
                ScanMode::Witness => {
                    let (g, g_plus) = genus(&f, m.degree())?;
                    let full = is_ordinary(&m)?;
                    let plus = is_ordinary_plus(&m)?;
                    let text = m.to_text();
                    let rep = WitnessReport {
                        p: f.p(),
                        e: f.e(),
                        q: f.q(),
                        field_modulus: f.field_modulus_string(),
                        m: &text,
                        d: m.degree(),
                        g,
                        g_plus,
                        ordinary: full.ordinary,
                        ordinary_plus: plus.ordinary,
                        first_defect_n: full.witness,
                        first_defect_plus_n: plus.witness,
                    };
                    writeln!(out, "{}", serde_json::to_string(&rep).map_err(std::io::Error::other)?)?;
                }
                _ => {
                    let opts = HwOptions { orbit: !no_orbit, cross_check: true };
                    writeln!(out, "{}", hasse_witt_with(&m, opts)?.to_json())?;
                }
            }
        }
        Command::Scan { field, d, format, out: path, workers, mode, limit, no_orbit } => {
            let f = build_field(&field)?;
            let format: OutputFormat = format.parse()?;
            let mut opts = ScanOptions { mode: mode.parse()?, limit, orbit: !no_orbit, ..ScanOptions::default() };
            if let Some(w) = workers {
                opts.workers = w;
            }
            let records = scan_degree(&f, d, &opts)?;
            match path {
                Some(p) => write_records(&records, format, BufWriter::new(File::create(p)?))?,
                None => write_records(&records, format, &mut *out)?,
            }
        }
        Command::Bpoly { field, n, modulus, exact, d } => {
            let f = build_field(&field)?;
            let b = match (modulus, exact, d) {
                (Some(text), _, _) => b_poly(n, Mode::Residue(&Modulus::parse(&text, &f)?))?,
                (None, true, Some(d)) => {
                    b_poly(n, Mode::Exact { field: &f, d, budget: Budget::from_env()? })?
                }
                _ => return Err(Error::OutOfRange("bpoly needs --mod M or --exact --d D".into())),
            };
            writeln!(out, "{}", b.display(&f))?;
        }
        Command::Powersum { field, i, n, modulus, exact: _ } => {
            let f = build_field(&field)?;
            let s = match modulus {
                Some(text) => s_mod(i, n, &Modulus::parse(&text, &f)?)?,
                None => s_exact(i, n, &f, Budget::from_env()?)?,
            };
            writeln!(out, "{}; {}", s.display(&f), s.degree())?;
        }
        Command::Genus { field, d } => {
            let f = build_field(&field)?;
            let (g, g_plus) = genus(&f, d)?;
            let rep = GenusReport { p: f.p(), e: f.e(), q: f.q(), d, g, g_plus };
            writeln!(out, "{}", serde_json::to_string(&rep).map_err(std::io::Error::other)?)?;
        }
        Command::Verify { field, d, suites, n_max } => {
            let f = build_field(&field)?;
            let suites: Vec<Suite> = match suites {
                None => Suite::ALL.to_vec(),
                Some(names) => names.iter().map(|s| s.trim().parse()).collect::<Result<_>>()?,
            };
            let params = VerifyParams { n_max, budget: Budget::from_env()?, ..VerifyParams::default() };
            let mut all = true;
            for s in suites {
                let r = run_suite(s, &f, d, &params)?;
                all &= r.passed;
                writeln!(
                    out,
                    "{:<14} {}  checked={} skipped={}  {}",
                    r.suite,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.checked,
                    r.skipped,
                    r.detail
                )?;
            }
            if !all {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

/// Runs the CLI with explicit streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}
