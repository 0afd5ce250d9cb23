//! Exhaustive classification of the irreducible moduli of one degree.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::invariants::{genus, hasse_witt_with, is_ordinary, is_ordinary_plus, HwOptions};
use crate::poly::{irreducible_enumerate, Modulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// Full invariants for every modulus.
    Full,
    /// Full invariants, keeping only moduli with ordinary `K_m`.
    OrdinaryOnly,
    /// Early-exit ordinariness tests only; `lambda` is reported when it is
    /// forced (`lambda = g` for ordinary fields) and left empty otherwise.
    Witness,
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(ScanMode::Full),
            "ordinary-only" => Ok(ScanMode::OrdinaryOnly),
            "witness" | "witness-only" => Ok(ScanMode::Witness),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown scan mode '{other}'") }),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub mode: ScanMode,
    pub limit: Option<usize>,
    pub workers: usize,
    pub orbit: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            mode: ScanMode::Full,
            limit: None,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            orbit: true,
        }
    }
}

/// One scanned modulus. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub m: String,
    pub d: u32,
    pub g: u64,
    pub g_plus: u64,
    pub lambda: Option<u64>,
    pub lambda_plus: Option<u64>,
    pub ordinary: bool,
    pub ordinary_plus: bool,
    pub supersingular: Option<bool>,
    pub first_defect_n: Option<u64>,
    pub elapsed_ms: u64,
}

pub const CSV_HEADER: [&str; 11] = [
    "m",
    "d",
    "g",
    "g_plus",
    "lambda",
    "lambda_plus",
    "ordinary",
    "ordinary_plus",
    "supersingular",
    "first_defect_n",
    "elapsed_ms",
];

fn scan_one(m: &Modulus, opts: &ScanOptions) -> Result<ScanRecord> {
    let start = Instant::now();
    let mut rec = match opts.mode {
        ScanMode::Full | ScanMode::OrdinaryOnly => {
            let r = hasse_witt_with(m, HwOptions { orbit: opts.orbit, cross_check: true })?;
            ScanRecord {
                m: r.m,
                d: r.d,
                g: r.g,
                g_plus: r.g_plus,
                lambda: Some(r.lambda),
                lambda_plus: Some(r.lambda_plus),
                ordinary: r.ordinary,
                ordinary_plus: r.ordinary_plus,
                supersingular: Some(r.supersingular),
                first_defect_n: r.defects.first().map(|x| x.n),
                elapsed_ms: 0,
            }
        }
        ScanMode::Witness => {
            let (g, g_plus) = genus(m.field(), m.degree())?;
            let full = is_ordinary(m)?;
            let plus = is_ordinary_plus(m)?;
            let lambda = full.ordinary.then_some(g);
            ScanRecord {
                m: m.to_text(),
                d: m.degree(),
                g,
                g_plus,
                lambda,
                lambda_plus: plus.ordinary.then_some(g_plus),
                ordinary: full.ordinary,
                ordinary_plus: plus.ordinary,
                supersingular: lambda.map(|l| l == 0),
                first_defect_n: full.witness,
                elapsed_ms: 0,
            }
        }
    };
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    check_record(&rec)?;
    Ok(rec)
}

/// Cross-field consistency of a finished record.
pub fn check_record(r: &ScanRecord) -> Result<()> {
    let bad = |what: &str| Err(Error::Internal(format!("record for {}: {what}", r.m)));
    if let Some(l) = r.lambda {
        if l > r.g || r.ordinary != (l == r.g) {
            return bad("lambda inconsistent with g");
        }
    }
    if let Some(lp) = r.lambda_plus {
        if lp > r.g_plus || r.ordinary_plus != (lp == r.g_plus) {
            return bad("lambda_plus inconsistent with g_plus");
        }
        if r.lambda.is_some_and(|l| lp > l) {
            return bad("lambda_plus exceeds lambda");
        }
    }
    if r.ordinary && (!r.ordinary_plus || r.first_defect_n.is_some()) {
        return bad("ordinary record with a defect");
    }
    Ok(())
}

/// Scans the monic irreducibles of degree `d` in enumeration order.
pub fn scan_degree(f: &FieldCtx, d: u32, opts: &ScanOptions) -> Result<Vec<ScanRecord>> {
    let mut moduli = irreducible_enumerate(f, d)?;
    if let Some(limit) = opts.limit {
        moduli.truncate(limit);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    // indexed collect keeps enumeration order regardless of scheduling
    let mut records = pool.install(|| {
        moduli.par_iter().map(|m| scan_one(m, opts)).collect::<Result<Vec<_>>>()
    })?;
    if opts.mode == ScanMode::OrdinaryOnly {
        records.retain(|r| r.ordinary);
    }
    Ok(records)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown format '{other}'") }),
        }
    }
}

pub fn write_records<W: Write>(records: &[ScanRecord], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in records {
                w.serialize(r).map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Jsonl => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(std::io::Error::other)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn opts(workers: usize) -> ScanOptions {
        ScanOptions { workers, ..ScanOptions::default() }
    }

    #[test]
    fn small_scans() {
        let f3 = make_field(3, 1, None).unwrap();
        let quads = scan_degree(&f3, 2, &opts(2)).unwrap();
        assert_eq!(quads.len(), 3);
        assert!(quads.iter().all(|r| r.ordinary));

        let f4 = make_field(2, 2, None).unwrap();
        let lin = scan_degree(&f4, 1, &opts(2)).unwrap();
        assert_eq!(lin.len(), 4);
        assert!(lin.iter().all(|r| r.ordinary && r.g == 0));
    }

    #[test]
    fn csv_shapes() {
        let mut buf = Vec::new();
        write_records(&[], OutputFormat::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "m,d,g,g_plus,lambda,lambda_plus,ordinary,ordinary_plus,supersingular,first_defect_n,elapsed_ms\n"
        );
        let f2 = make_field(2, 1, None).unwrap();
        let recs = scan_degree(&f2, 2, &opts(1)).unwrap();
        let mut buf = Vec::new();
        write_records(&recs, OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("T^2+T+1,2,0,0,0,0,true,true,true,,"), "{}", lines[1]);
    }

    #[test]
    fn jsonl_shape_and_witness_mode() {
        let f4 = make_field(2, 2, None).unwrap();
        let o = ScanOptions { mode: ScanMode::Witness, ..opts(1) };
        let recs = scan_degree(&f4, 2, &o).unwrap();
        assert_eq!(recs.len(), 6);
        let mut buf = Vec::new();
        write_records(&recs[..1], OutputFormat::Jsonl, &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(line.starts_with(r#"{"m":"#));
        assert!(line.contains(r#""lambda":null,"lambda_plus":0,"ordinary":false,"ordinary_plus":true,"supersingular":null,"first_defect_n":10,"#), "{line}");
        assert!(line.ends_with("}\n"));
    }

    #[test]
    fn ordinary_only_filters() {
        let f4 = make_field(2, 2, None).unwrap();
        let o = ScanOptions { mode: ScanMode::OrdinaryOnly, ..opts(1) };
        assert!(scan_degree(&f4, 2, &o).unwrap().is_empty());
        assert_eq!(scan_degree(&f4, 1, &o).unwrap().len(), 4);
        let limited = ScanOptions { limit: Some(2), ..opts(1) };
        assert_eq!(scan_degree(&f4, 2, &limited).unwrap().len(), 2);
    }

    #[test]
    fn modes_parse() {
        assert_eq!("witness-only".parse::<ScanMode>().unwrap(), ScanMode::Witness);
        assert!("fast".parse::<ScanMode>().is_err());
        assert_eq!("jsonl".parse::<OutputFormat>().unwrap(), OutputFormat::Jsonl);
    }
}
