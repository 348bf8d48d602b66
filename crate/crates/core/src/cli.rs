//! Command-line front end. Every command prints JSON lines on stdout.
//!
//! Exit codes: 0 all checks passed, 1 a check failed or an I/O or cache
//! error occurred, 2 bad usage or insufficient precision/range, 3 an
//! internal consistency assertion fired.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bank::Generators;
use crate::cache::{Cache, Source};
use crate::congruence::{self, Target};
use crate::dissection;
use crate::error::{Error, Result};
use crate::eta::SeriesName;
use crate::matrices::{self, BandMatrix, Which};
use crate::padic::{self, BoundOutcome};
use crate::report::CheckReport;
use crate::suite::{Suite, SuiteConfig};

/// Precision used when none is given.
pub const DEFAULT_PREC: i64 = 600;

#[derive(Parser, Debug)]
#[command(name = "qseries", version, about = "Exact q-series expansions and congruence checks for beta(q)")]
pub struct Cli {
    /// Add `duration_ms` to every report line.
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the coefficients of a named series.
    Expand {
        /// E, phi-neg, psi, w, X, xi, beta, beta-alt or g
        #[arg(long)]
        series: String,
        /// Argument k of E(q^k), phi(-q^k), psi(q^k).
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
    },
    /// Verify one series identity.
    CheckIdentity {
        #[arg(value_enum)]
        name: Identity,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
    },
    /// Build (a), (b) or (t) and write the rows as JSON.
    BuildMatrices {
        #[arg(long, value_enum)]
        which: MatrixArg,
        #[arg(long, default_value_t = 12)]
        rows: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the valuation bounds for (a), (b), (t) and d.
    CheckValuations {
        #[arg(long, default_value_t = 24)]
        rows: usize,
        /// The d bound covers odd indices up to 2*alphas - 1.
        #[arg(long, default_value_t = 5)]
        alphas: u32,
        /// List every entry where a bound holds with equality.
        #[arg(long)]
        tight: bool,
    },
    /// Check a congruence on its first `count` instances.
    CheckCongruence {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        count: usize,
        #[arg(long, conflicts_with = "g")]
        beta: bool,
        #[arg(long)]
        g: bool,
        /// Also print the valuation of every instance.
        #[arg(long)]
        scan: bool,
    },
    /// Run every registered check.
    CheckAll {
        /// Smaller sizes throughout.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        prec: Option<i64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    PhiInv,
    Psi,
    Qw3,
    Shen,
    Even,
    Bilateral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixArg {
    A,
    B,
    T,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::InsufficientPrecision { .. }
        | Error::InsufficientRange { .. }
        | Error::ZeroLeadingCoefficient { .. } => 2,
        Error::InternalMismatch { .. } | Error::NotRepresentable { .. } | Error::SupportViolation { .. } => 3,
        Error::CacheCorrupt { .. } | Error::Io(_) | Error::Json(_) => 1,
    }
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    timings: bool,
    code: i32,
}

impl Printer<'_> {
    fn emit(&mut self, v: &Value) -> Result<()> {
        writeln!(self.out, "{}", serde_json::to_string(v)?)?;
        Ok(())
    }

    /// A report line, optionally with extra fields and a duration.
    fn report(&mut self, r: &CheckReport, extra: Map<String, Value>, took: Duration) -> Result<()> {
        let mut v = serde_json::to_value(r)?;
        let obj = v.as_object_mut().expect("reports serialize as objects");
        obj.extend(extra);
        if self.timings {
            obj.insert("duration_ms".into(), json!(took.as_millis() as u64));
        }
        if !r.passed() {
            self.code = self.code.max(1);
        }
        self.emit(&v)
    }

    fn error(&mut self, name: &str, e: &Error) -> Result<()> {
        self.code = self.code.max(exit_code(e));
        self.emit(&json!({ "name": name, "error": e.to_string() }))
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    f().map(|v| (v, start.elapsed()))
}

fn require_prec(prec: i64) -> Result<()> {
    if prec < 8 {
        return Err(Error::InvalidArgument(format!("prec must be >= 8, got {prec}")));
    }
    Ok(())
}

fn matrix_json(m: &BandMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .map(|(i, r)| {
            let entries: Vec<String> = r.entries.iter().map(ToString::to_string).collect();
            json!({ "row": i, "lo": r.lo, "hi": r.hi(), "entries": entries })
        })
        .collect();
    json!({ "name": m.name(), "rows": rows })
}

fn bound_extra(o: &BoundOutcome, list: bool) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("entries".into(), json!(o.entries));
    m.insert("tight_count".into(), json!(o.tight.len()));
    if list {
        m.insert("tight".into(), json!(o.tight));
    }
    m
}

fn expand(p: &mut Printer, series: &str, k: i64, prec: i64) -> Result<()> {
    require_prec(prec)?;
    let name = SeriesName::parse_with_k(series, k)?;
    let (s, source) = match Cache::from_env() {
        Some(cache) => {
            let (s, src) = cache.load_or_compute(name, prec)?;
            (s, Some(src))
        }
        None => (name.generate(prec)?, None),
    };
    let mut v = json!({
        "name": name.key(),
        "prec": s.prec(),
        "min_exp": s.min_exp(),
        "coeffs": s.to_decimal_strings(),
    });
    if let Some(src) = source {
        v["cache"] = json!(if src == Source::Hit { "hit" } else { "computed" });
    }
    p.emit(&v)
}

fn check_identity(p: &mut Printer, which: Identity, prec: i64) -> Result<()> {
    require_prec(prec)?;
    let bank = Generators::new(dissection::bank_prec(prec));
    let (r, took) = timed(|| match which {
        Identity::PhiInv => dissection::check_phi_inv_3dissection(&bank, prec),
        Identity::Psi => dissection::check_psi_3dissection(&bank, prec),
        Identity::Qw3 => dissection::check_qw_cubed(&bank, prec),
        Identity::Shen => dissection::check_shen_identity(&bank, prec),
        Identity::Even => dissection::check_even_identity(&bank, prec),
        Identity::Bilateral => dissection::check_bilateral_1psi1(&bank, prec, None),
    })?;
    p.report(&r, Map::new(), took)
}

fn build_matrices(p: &mut Printer, which: MatrixArg, rows: usize, out: Option<PathBuf>) -> Result<()> {
    let (m, took) = timed(|| match which {
        MatrixArg::A => matrices::build_matrix(Which::A, rows),
        MatrixArg::B => matrices::build_matrix(Which::B, rows),
        MatrixArg::T => matrices::build_t(rows, 9 * rows as i64 + 1),
    })?;
    let body = matrix_json(&m);
    match out {
        None => p.emit(&body),
        Some(path) => {
            fs::write(&path, serde_json::to_string(&body)?)?;
            let r = CheckReport::pass(format!("build_matrix_{}", m.name()), rows as i64);
            let mut extra = Map::new();
            extra.insert("out".into(), json!(path.display().to_string()));
            p.report(&r, extra, took)
        }
    }
}

fn check_valuations(p: &mut Printer, rows: usize, alphas: u32, list: bool) -> Result<()> {
    if alphas == 0 {
        return Err(Error::InvalidArgument("alphas must be >= 1".into()));
    }
    for which in [Which::A, Which::B] {
        let (o, took) = timed(|| padic::check_bound_ab(which, rows))?;
        p.report(&o.report, bound_extra(&o, list), took)?;
    }
    // row i of (t) reads rows up to 3i of (b)
    let t_rows = (rows / 3).max(1);
    let (o, took) = timed(|| padic::check_bound_t(t_rows, 9 * t_rows as i64 + 1))?;
    p.report(&o.report, bound_extra(&o, list), took)?;
    let (o, took) = timed(|| padic::check_bound_d(alphas))?;
    p.report(&o.report, bound_extra(&o, list), took)
}

fn check_congruence(p: &mut Printer, alpha: u32, count: usize, targets: &[Target], scan: bool) -> Result<()> {
    for &t in targets {
        let (o, took) = timed(|| match t {
            Target::Beta => congruence::check_b_congruence(alpha, count),
            Target::G => congruence::check_g_congruence(alpha, count),
        })?;
        let mut extra = Map::new();
        extra.insert("modulus".into(), json!(format!("3^{}", o.modulus_exponent)));
        extra.insert("min_valuation".into(), json!(o.min_valuation));
        if scan {
            let table = congruence::scan_minimum_valuations(t, alpha, count)?;
            extra.insert("scan".into(), json!(table.rows));
        }
        p.report(&o.report, extra, took)?;
    }
    Ok(())
}

fn check_all(p: &mut Printer, quick: bool, prec: Option<i64>) -> Result<()> {
    let mut config = if quick { SuiteConfig::quick() } else { SuiteConfig::default() };
    if let Some(prec) = prec {
        require_prec(prec)?;
        config.prec = prec;
    }
    let suite = Suite::new(config);
    for o in suite.run_all() {
        match &o.result {
            Ok(r) => p.report(r, Map::new(), o.duration)?,
            Err(e) => p.error(o.id.name(), e)?,
        }
    }
    Ok(())
}

fn dispatch(p: &mut Printer, command: Command) -> Result<()> {
    match command {
        Command::Expand { series, k, prec } => expand(p, &series, k, prec),
        Command::CheckIdentity { name, prec } => check_identity(p, name, prec),
        Command::BuildMatrices { which, rows, out } => build_matrices(p, which, rows, out),
        Command::CheckValuations { rows, alphas, tight } => check_valuations(p, rows, alphas, tight),
        Command::CheckCongruence { alpha, count, beta, g, scan } => {
            let targets: &[Target] = match (beta, g) {
                (true, _) => &[Target::Beta],
                (_, true) => &[Target::G],
                _ => &[Target::Beta, Target::G],
            };
            check_congruence(p, alpha, count, targets, scan)
        }
        Command::CheckAll { quick, prec } => check_all(p, quick, prec),
    }
}

/// Parses `args` (including the program name), runs the command, writes
/// JSON lines to `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut p = Printer { out, timings: cli.timings, code: 0 };
    match dispatch(&mut p, cli.command) {
        Ok(()) => p.code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            p.code.max(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qseries").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn expand_x() {
        let (code, out, _) = run_str(&["expand", "--series", "X", "--prec", "8"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["coeffs"][0], "1");
        assert_eq!(v["coeffs"][1], "8");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["expand", "--series", "X", "--prec", "4"]).0, 2);
        assert_eq!(run_str(&["expand", "--series", "mu", "--prec", "10"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["check-identity", "psi", "--prec", "20"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn identity_and_timings() {
        let (code, out, _) = run_str(&["check-identity", "even", "--prec", "100"]);
        assert_eq!(code, 0);
        assert!(!out.contains("duration_ms"));
        assert!(out.contains("\"passed\":true"));
        let (_, out, _) = run_str(&["--timings", "check-identity", "shen", "--prec", "50"]);
        assert!(out.contains("duration_ms"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NotRepresentable { max_deg: 1, residual_order: 3 }), 3);
        assert_eq!(exit_code(&Error::InsufficientRange { side: "negative", needed: 3, given: 1 }), 2);
        assert_eq!(exit_code(&Error::CacheCorrupt { path: "p".into(), reason: "r".into() }), 1);
    }
}
