//! The congruences `g(3^{2a-1} n + (3^{2a}-1)/4) = 0 (mod 3^{2a})` and
//! `b(2 3^{2a-1} n + (3^{2a}-1)/2) = 0 (mod 3^{2a})`, checked on finitely
//! many `n`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eta;
use crate::padic::{val3, Valuation};
use crate::report::{CheckReport, Failure};
use crate::series::LaurentSeries;

/// Which coefficient sequence a congruence is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `b(n)`, coefficients of `beta(q)`
    Beta,
    /// `g(n)`, coefficients of `E(q^2)^5 / E(q)^4`
    G,
}

impl Target {
    /// `(stride, offset)` of the progression at `alpha`.
    pub fn progression(self, alpha: u32) -> (i64, i64) {
        let stride = 3i64.pow(2 * alpha - 1);
        match self {
            Target::G => (stride, eta::progression_offset(alpha, 4)),
            Target::Beta => (2 * stride, eta::progression_offset(alpha, 2)),
        }
    }

    /// Coefficients needed for `n_count` instances.
    pub fn required_prec(self, alpha: u32, n_count: usize) -> i64 {
        let (stride, offset) = self.progression(alpha);
        stride * (n_count as i64 - 1).max(0) + offset + 1
    }
}

/// One instance of a congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: i64,
    pub index: i64,
    pub valuation: Valuation,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanTable {
    pub target: Target,
    pub alpha: u32,
    pub rows: Vec<ScanRow>,
    /// Smallest valuation seen; absent for an empty scan.
    pub minimum: Option<Valuation>,
    /// Instances whose valuation is exactly `2 alpha`.
    pub sharp: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceOutcome {
    pub report: CheckReport,
    pub modulus_exponent: u32,
    pub min_valuation: Option<Valuation>,
}

fn check_alpha(alpha: u32) -> Result<()> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be >= 1".into()));
    }
    Ok(())
}

fn require(s: &LaurentSeries, needed: i64) -> Result<()> {
    if s.prec() < needed {
        return Err(Error::InsufficientPrecision { required: needed, available: s.prec() });
    }
    Ok(())
}

/// Valuations of `s(stride n + offset)` for `n < n_count`, where `s` holds
/// the coefficients of `target`.
pub fn scan_with(target: Target, alpha: u32, n_count: usize, s: &LaurentSeries) -> Result<ScanTable> {
    check_alpha(alpha)?;
    let (stride, offset) = target.progression(alpha);
    if n_count > 0 {
        require(s, target.required_prec(alpha, n_count))?;
    }
    let rows: Vec<ScanRow> = (0..n_count as i64)
        .into_par_iter()
        .map(|n| {
            let index = stride * n + offset;
            let c = s.integer_coeff(index).expect("integral series in range");
            ScanRow { n, index, valuation: val3(&c) }
        })
        .collect();
    let minimum = rows.iter().map(|r| r.valuation).min();
    let sharp = rows
        .iter()
        .filter(|r| r.valuation == Valuation::Finite(2 * alpha as u64))
        .map(|r| r.n)
        .collect();
    Ok(ScanTable { target, alpha, rows, minimum, sharp })
}

/// Generates the needed coefficients and scans them.
pub fn scan_minimum_valuations(target: Target, alpha: u32, n_count: usize) -> Result<ScanTable> {
    check_alpha(alpha)?;
    let prec = target.required_prec(alpha, n_count).max(8);
    let s = match target {
        Target::Beta => eta::beta_form1(prec),
        Target::G => eta::g_series(prec),
    };
    scan_with(target, alpha, n_count, &s)
}

fn outcome(table: &ScanTable, name: String) -> CongruenceOutcome {
    let exponent = 2 * table.alpha;
    let failure = table.rows.iter().find(|r| !r.valuation.at_least(exponent as i64)).map(|r| {
        Failure::at(r.index, format!("val3 = {}", r.valuation), format!(">= {exponent}"))
    });
    let prec = table.rows.last().map_or(0, |r| r.index + 1);
    CongruenceOutcome {
        report: CheckReport::from_outcome(name, prec, failure),
        modulus_exponent: exponent,
        min_valuation: table.minimum,
    }
}

pub fn check_g_congruence_with(alpha: u32, n_count: usize, g: &LaurentSeries) -> Result<CongruenceOutcome> {
    let table = scan_with(Target::G, alpha, n_count, g)?;
    Ok(outcome(&table, format!("g_congruence_alpha{alpha}")))
}

pub fn check_g_congruence(alpha: u32, n_count: usize) -> Result<CongruenceOutcome> {
    let table = scan_minimum_valuations(Target::G, alpha, n_count)?;
    Ok(outcome(&table, format!("g_congruence_alpha{alpha}")))
}

/// Also requires `b(2m) = g(m)` at every index the congruence touches.
pub fn check_b_congruence_with(
    alpha: u32,
    n_count: usize,
    beta: &LaurentSeries,
    g: &LaurentSeries,
) -> Result<CongruenceOutcome> {
    let table = scan_with(Target::Beta, alpha, n_count, beta)?;
    let name = format!("b_congruence_alpha{alpha}");
    let mut out = outcome(&table, name.clone());
    if let Some(last) = table.rows.last() {
        require(g, last.index / 2 + 1)?;
    }
    let chain = table.rows.iter().find_map(|r| {
        let b = beta.integer_coeff(r.index).unwrap();
        let gv: BigInt = g.integer_coeff(r.index / 2).unwrap();
        (b != gv).then(|| Failure::at(r.index, b, format!("g({}) = {gv}", r.index / 2)))
    });
    let chain = CheckReport::from_outcome("b_even_is_g", out.report.prec(), chain);
    out.report = CheckReport::all(name, [out.report, chain]);
    Ok(out)
}

pub fn check_b_congruence(alpha: u32, n_count: usize) -> Result<CongruenceOutcome> {
    check_alpha(alpha)?;
    let prec = Target::Beta.required_prec(alpha, n_count).max(8);
    let beta = eta::beta_form1(prec);
    let g = eta::g_series(prec / 2 + 1);
    check_b_congruence_with(alpha, n_count, &beta, &g)
}
