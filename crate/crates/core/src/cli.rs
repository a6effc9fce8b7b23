//! The `cmint` command line.
//!
//! Every command prints JSON (or CSV with `--format csv`) on standard output.
//! Exit codes: 0 success, 2 invalid input or field, 3 internal consistency
//! failure or resource exhaustion.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::arith::{rat, rational_string};
use crate::applications::{bad_reduction_primes, humbert_intersection, igusa_denominator_bounds};
use crate::bm::{bm_report, BmReport, RouteB, CONJECTURAL};
use crate::cache::Cache;
use crate::cmfield::{CmField, FieldSpec, Mode};
use crate::error::{Error, Result};
use crate::logcombo::LogCombo;
use crate::selfcheck::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "cmint", version, about = "Arithmetic intersection numbers of CM cycles on Hilbert modular surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Override the mode given in the field file.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,

    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Permissive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Permissive => Mode::Permissive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Small,
    Full,
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// JSON file such as {"D": 5, "delta": {"x": -13, "y": 1, "den": 2}}.
    #[arg(long)]
    pub field: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-prime reports for b_m with both evaluation routes.
    Bm {
        #[command(flatten)]
        field: FieldArg,
        /// A single m, an inclusive range a..b, or a comma-separated list.
        #[arg(long)]
        m: String,
    },
    /// The intersection numbers ½·b_m.
    Intersect {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        m: String,
    },
    /// Intersection of the CM cycle with the Humbert surface G_m.
    Humbert {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        m: u64,
    },
    /// Primes of possible bad reduction of the CM curves.
    Badprimes {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Denominator bounds A1, A2, A3 of the Igusa class polynomials.
    Igusa {
        #[command(flatten)]
        field: FieldArg,
        /// Also print the bounds as decimal integers.
        #[arg(long)]
        expand: bool,
    },
    /// Run the invariant suites; exit 0 iff everything passes.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = SuiteArg::Small)]
        suite: SuiteArg,
    },
}

/// Parses `5`, `1..10` (inclusive), `1..=10` or `1,3,7`.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidInput(format!("bad m range {s:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in s.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out)
}

enum Failure {
    Field(String),
    Other(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Other(e)
    }
}

fn load_field(path: &Path, mode: Option<ModeArg>) -> std::result::Result<CmField, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Field(format!("cannot read {}: {e}", path.display())))?;
    let mut spec: FieldSpec = serde_json::from_str(&text)
        .map_err(|e| Failure::Field(format!("cannot parse {}: {e}", path.display())))?;
    if let Some(m) = mode {
        spec.mode = m.into();
    }
    CmField::from_spec(&spec).map_err(|e| Failure::Field(e.to_string()))
}

fn reports(field: &CmField, ms: &[u64], use_cache: bool) -> Result<Vec<BmReport>> {
    let mut cache = if use_cache { Cache::open_default().ok() } else { None };
    ms.iter()
        .map(|&m| match cache.as_mut() {
            Some(c) => c.report(field, m),
            None => bm_report(field, m),
        })
        .collect()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn combo_rows(label: &str, c: &LogCombo) -> Vec<Vec<String>> {
    c.iter()
        .map(|(p, e)| vec![label.to_string(), p.to_string(), rational_string(&e)])
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

fn execute(cli: &Cli) -> std::result::Result<String, Failure> {
    let json = cli.format == Format::Json;
    let use_cache = !cli.no_cache;
    let out = match &cli.command {
        Command::Bm { field, m } => {
            let k = load_field(&field.field, cli.mode)?;
            let rs = reports(&k, &parse_range(m)?, use_cache)?;
            if json {
                to_json(&rs)
            } else {
                let mut rows = Vec::new();
                for r in &rs {
                    for e in &r.entries {
                        let route_b = match e.route_b {
                            RouteB::Value(v) => v.to_string(),
                            RouteB::Inapplicable => "inapplicable".into(),
                        };
                        rows.push(vec![r.m.to_string(), e.p.to_string(), e.b.to_string(), route_b, r.flags.join(";")]);
                    }
                }
                csv_text(&["m", "p", "b", "route_b", "flags"], rows)?
            }
        }
        Command::Intersect { field, m } => {
            let k = load_field(&field.field, cli.mode)?;
            let rs = reports(&k, &parse_range(m)?, use_cache)?;
            let items: Vec<(u64, LogCombo, Vec<String>)> = rs
                .iter()
                .map(|r| (r.m, r.to_log_combo().scaled(rat(1, 2)), r.flags.clone()))
                .collect();
            if json {
                let v: Vec<_> = items
                    .iter()
                    .map(|(m, c, flags)| json!({"m": m, "intersection": c, "flags": flags}))
                    .collect();
                to_json(&v)
            } else {
                let rows = items.iter().flat_map(|(m, c, _)| combo_rows(&m.to_string(), c)).collect();
                csv_text(&["m", "p", "coefficient"], rows)?
            }
        }
        Command::Humbert { field, m } => {
            let k = load_field(&field.field, cli.mode)?;
            let c = humbert_intersection(&k, *m)?;
            let flags: Vec<&str> = if k.mode == Mode::Permissive { vec![CONJECTURAL] } else { vec![] };
            if json {
                to_json(&json!({"field": k.id(), "m": m, "intersection": c, "flags": flags}))
            } else {
                csv_text(&["m", "p", "coefficient"], combo_rows(&m.to_string(), &c))?
            }
        }
        Command::Badprimes { field } => {
            let k = load_field(&field.field, cli.mode)?;
            let cert = bad_reduction_primes(&k)?;
            if json {
                to_json(&cert)
            } else {
                let bound = rational_string(&cert.bound);
                let rows = cert
                    .totals
                    .iter()
                    .map(|(p, c)| vec![p.to_string(), rational_string(&c), bound.clone()])
                    .collect();
                csv_text(&["prime", "total", "bound"], rows)?
            }
        }
        Command::Igusa { field, expand } => {
            let k = load_field(&field.field, cli.mode)?;
            let b = igusa_denominator_bounds(&k)?;
            if json {
                let mut v = serde_json::to_value(&b).expect("serializable");
                if *expand {
                    let [a1, a2, a3] = b.expanded()?;
                    v["expanded"] = json!({"A1": a1.to_string(), "A2": a2.to_string(), "A3": a3.to_string()});
                }
                to_json(&v)
            } else {
                let mut rows = combo_rows("A1", &b.a1);
                rows.extend(combo_rows("A2", &b.a2));
                rows.extend(combo_rows("A3", &b.a3));
                csv_text(&["bound", "p", "exponent"], rows)?
            }
        }
        Command::Selfcheck { suite } => {
            let suite = match suite {
                SuiteArg::Small => Suite::Small,
                SuiteArg::Full => Suite::Full,
            };
            let cache = if use_cache { Cache::open_default().ok() } else { None };
            let report = run_suite(suite, cache.as_ref())?;
            let text = if json {
                to_json(&report)
            } else {
                let rows = report
                    .checks
                    .iter()
                    .map(|c| vec![c.name.clone(), c.passed.to_string(), c.cases.to_string(), c.detail.clone()])
                    .collect();
                csv_text(&["check", "passed", "cases", "detail"], rows)?
            };
            if !report.passed {
                return Err(Failure::Other(Error::Internal(text)));
            }
            text
        }
    };
    Ok(out)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Rejected(_) | Error::Inapplicable(_) => 2,
        Error::Internal(_) | Error::Resource(_) => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::Rejected(_) => "invalid_field",
        Error::Inapplicable(_) => "inapplicable",
        Error::Internal(_) => "internal",
        Error::Resource(_) => "resource",
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (code, text) = match execute(&cli) {
        Ok(text) => (0, text),
        Err(Failure::Field(reason)) => (2, to_json(&json!({"error": "invalid_field", "reason": reason}))),
        Err(Failure::Other(Error::Internal(text))) if matches!(cli.command, Command::Selfcheck { .. }) => (3, text),
        Err(Failure::Other(e)) => (exit_code(&e), to_json(&json!({"error": error_kind(&e), "reason": e.to_string()}))),
    };
    let _ = writeln!(out, "{}", text.trim_end());
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5").unwrap(), vec![5]);
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("1..=3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("1,7, 11").unwrap(), vec![1, 7, 11]);
        assert!(parse_range("0").is_err());
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn unreadable_field_exits_2() {
        let mut buf = Vec::new();
        let code = run(["cmint", "badprimes", "--field", "/nonexistent/f.json"], &mut buf);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["error"], "invalid_field");
    }
}
