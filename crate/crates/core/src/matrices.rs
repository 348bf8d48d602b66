//! Polynomials in `X`, the modular-equation matrices `(a)`, `(b)`, `(t)`,
//! and the coefficient sequences `d_alpha`.
//!
//! Rows 1-3 of `(a)` and `(b)` are stored tables. They are re-derived by
//! fitting `U(X^i)` and `U(xi X^i)` before first use, and any disagreement
//! is a hard error. Later rows come from the order-3 recurrence that
//! Newton's identities give for the conjugates of `X`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eta;
use crate::report::{compare_series, CheckReport, Failure};
use crate::series::LaurentSeries;

/// `sum_j c_j X^j` with exact rational coefficients; `coeffs[j] = c_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyInX {
    coeffs: Vec<BigRational>,
}

impl PolyInX {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyInX { coeffs }
    }

    /// Integer coefficients starting at `X^lo`.
    pub fn from_row(lo: usize, values: &[BigInt]) -> Self {
        let mut coeffs = vec![BigRational::zero(); lo];
        coeffs.extend(values.iter().map(|v| BigRational::from_integer(v.clone())));
        Self::new(coeffs)
    }

    pub fn from_i64s(lo: usize, values: &[i64]) -> Self {
        let values: Vec<BigInt> = values.iter().map(|&v| v.into()).collect();
        Self::from_row(lo, &values)
    }

    pub fn coeff(&self, j: usize) -> BigRational {
        self.coeffs.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Integer coefficients `c_1, c_2, ...` when the constant term vanishes
    /// and all coefficients are integers.
    pub fn integer_row(&self) -> Option<Vec<BigInt>> {
        if !self.coeff(0).is_zero() || !self.is_integral() {
            return None;
        }
        Some(self.coeffs.iter().skip(1).map(BigRational::to_integer).collect())
    }

    /// Horner evaluation at a series `x`.
    pub fn evaluate(&self, x: &LaurentSeries) -> LaurentSeries {
        let mut acc = LaurentSeries::zero(x.prec());
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc = &acc + &LaurentSeries::one(x.prec()).scale(c);
        }
        acc
    }
}

impl fmt::Display for PolyInX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &BigRational::zero();
            let mag = if negative { -c } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = mag.is_one() && j > 0;
            match (j, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}*X")?,
                (_, true) => write!(f, "X^{j}")?,
                (_, false) => write!(f, "{mag}*X^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Smallest fitting precision accepted for polynomials of degree `max_deg`.
pub fn min_fit_prec(max_deg: usize) -> i64 {
    3 * max_deg as i64 + 8
}

/// Fits series as polynomials in `X` using the order-graded basis
/// `(X - 1)^j = 8^j q^j + ...`.
pub struct XFitter {
    prec: i64,
    x: LaurentSeries,
    y_powers: Vec<LaurentSeries>,
}

impl XFitter {
    pub fn new(prec: i64, max_deg: usize) -> Result<Self> {
        let x = eta::series_x(prec)?;
        Ok(Self::with_x(x, max_deg))
    }

    /// Uses a caller-supplied `X`, known modulo `q^prec`.
    pub fn with_x(x: LaurentSeries, max_deg: usize) -> Self {
        let prec = x.prec();
        let y = &x - &LaurentSeries::one(prec);
        let mut y_powers = vec![LaurentSeries::one(prec)];
        for j in 1..=max_deg {
            let next = &y_powers[j - 1] * &y;
            y_powers.push(next);
        }
        XFitter { prec, x, y_powers }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn x(&self) -> &LaurentSeries {
        &self.x
    }

    pub fn max_deg(&self) -> usize {
        self.y_powers.len() - 1
    }

    /// Finds `c_0 .. c_max_deg` with `s = sum c_j X^j` modulo `q^prec`;
    /// the residual must vanish on the whole range, not just the first
    /// `max_deg + 1` coefficients.
    pub fn fit(&self, s: &LaurentSeries, max_deg: usize) -> Result<PolyInX> {
        if max_deg > self.max_deg() {
            return Err(Error::InvalidArgument(format!(
                "fitter built for degree {} asked for {max_deg}",
                self.max_deg()
            )));
        }
        if self.prec < min_fit_prec(max_deg) {
            return Err(Error::InsufficientPrecision {
                required: min_fit_prec(max_deg),
                available: self.prec,
            });
        }
        if s.prec() < self.prec {
            return Err(Error::InsufficientPrecision { required: self.prec, available: s.prec() });
        }
        if s.valuation().is_some_and(|v| v < 0) {
            return Err(Error::InvalidArgument("cannot fit a series with negative exponents".into()));
        }
        let mut residual = s.clone().truncated(self.prec).with_min_exp(0);
        let eight = BigInt::from(8);
        let mut in_y = Vec::with_capacity(max_deg + 1);
        for j in 0..=max_deg {
            let lead = residual.coeff(j as i64).expect("j < prec");
            let c = lead / BigRational::from_integer(eight.pow(j as u32));
            if !c.is_zero() {
                residual = &residual - &self.y_powers[j].scale(&c);
            }
            in_y.push(c);
        }
        if let Some(order) = residual.valuation() {
            return Err(Error::NotRepresentable { max_deg, residual_order: order });
        }
        // sum_j d_j (X - 1)^j = sum_i X^i sum_{j >= i} d_j C(j, i) (-1)^(j-i)
        let mut coeffs = vec![BigRational::zero(); max_deg + 1];
        for (j, d) in in_y.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let mut binom = BigInt::one();
            for (i, slot) in coeffs.iter_mut().enumerate().take(j + 1) {
                if i > 0 {
                    binom = binom * BigInt::from(j - i + 1) / BigInt::from(i);
                }
                let term = d * BigRational::from_integer(binom.clone());
                if (j - i) % 2 == 0 {
                    *slot += term;
                } else {
                    *slot -= term;
                }
            }
        }
        Ok(PolyInX::new(coeffs))
    }
}

/// One-shot fit of `s` as a polynomial of degree `<= max_deg` in `X`.
pub fn fit_poly_in_x(s: &LaurentSeries, max_deg: usize, prec: i64) -> Result<PolyInX> {
    if prec < min_fit_prec(max_deg) {
        return Err(Error::InsufficientPrecision { required: min_fit_prec(max_deg), available: prec });
    }
    XFitter::new(prec, max_deg)?.fit(s, max_deg)
}

/// The two operator matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    /// `U(X^i) = sum_j a(i,j) X^j`
    A,
    /// `U(xi X^i) = sum_j b(i,j) X^j`
    B,
}

impl Which {
    /// Columns outside `[ceil(i/3), 3i]` (resp. `3i + 1`) must vanish.
    pub fn band(self, i: usize) -> (i64, i64) {
        let i = i as i64;
        let lo = (i + 2) / 3;
        match self {
            Which::A => (lo, 3 * i),
            Which::B => (lo, 3 * i + 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Which::A => "a",
            Which::B => "b",
        }
    }
}

/// `U(X^i)` for `i = 1, 2, 3`, coefficients of `X^1, X^2, ...`.
pub const A_FIXTURE: [&[i64]; 3] = [
    &[10, -36, 27],
    &[-8, 306, -2160, 5508, -5832, 2187],
    &[1, -360, 10566, -99144, 423549, -944784, 1141614, -708588, 177147],
];

/// `U(xi X^i)` for `i = 0, 1, 2, 3`, coefficients of `X^1, X^2, ...`.
pub const B_FIXTURE: [&[i64]; 4] = [
    &[9],
    &[-9, 252, -891, 729],
    &[1, -378, 8613, -54675, 138510, -150903, 59049],
    &[0, 147, -14553, 312255, -2617839, 10764414, -23914845, 29288304, -18600435, 4782969],
];

/// `sigma_1, sigma_2, sigma_3` of the three conjugates of `X`, as
/// polynomials in `X` (coefficients of `X^1, X^2, ...`).
pub const SIGMA_FIXTURE: [&[i64]; 3] = [&[30, -108, 81], &[12, -9], &[1]];

/// Series whose `U` image row `i` of the matrix describes: `X^i` or `xi X^i`.
fn operand(which: Which, i: usize, x: &LaurentSeries, xi: Option<&LaurentSeries>) -> LaurentSeries {
    let xp = x.pow(i as i64).expect("X has constant term 1");
    match which {
        Which::A => xp,
        Which::B => xi.expect("xi needed for (b)") * &xp,
    }
}

/// Fitting precision and the input precision it demands for rows up to
/// `max_row`, where the fitted degree is at most `3 max_row + 1`.
fn fit_plan(max_row: usize, prec: Option<i64>) -> (usize, i64) {
    let max_deg = 3 * max_row + 1;
    let prec = prec.unwrap_or_else(|| min_fit_prec(max_deg)).max(min_fit_prec(max_deg));
    (max_deg, prec)
}

/// Fits `U(X^i)` (for `(a)`) or `U(xi X^i)` (for `(b)`) for each `i` in `rows`.
pub fn fit_rows(which: Which, rows: &[usize], prec: Option<i64>) -> Result<Vec<PolyInX>> {
    let max_row = rows.iter().copied().max().unwrap_or(1);
    let (max_deg, fit_prec) = fit_plan(max_row, prec);
    let fitter = XFitter::new(fit_prec, max_deg)?;
    let x = eta::series_x(3 * fit_prec)?;
    let xi = match which {
        Which::A => None,
        Which::B => Some(eta::series_xi(3 * fit_prec)?),
    };
    rows.par_iter()
        .map(|&i| fitter.fit(&operand(which, i, &x, xi.as_ref()).u3(), max_deg))
        .collect()
}

fn fixture_failure(which: Which, i: usize, fitted: &PolyInX, fixture: &PolyInX) -> Option<Failure> {
    let top = fitted.degree().max(fixture.degree()).unwrap_or(0);
    (0..=top).find(|&j| fitted.coeff(j) != fixture.coeff(j)).map(|j| {
        let row = match which {
            Which::A => i as i64,
            Which::B => -(i as i64) - 1,
        };
        Failure::at_entry(row, j as i64, fitted.coeff(j), fixture.coeff(j))
    })
}

/// Fits all seven initial operator images and compares each with the
/// stored table. In failures, rows of `(b)` are reported as `-(i+1)`.
pub fn verify_initial_rows(prec: i64) -> Result<CheckReport> {
    let (_, fit_prec) = fit_plan(3, Some(prec));
    if prec < fit_prec {
        return Err(Error::InsufficientPrecision { required: fit_prec, available: prec });
    }
    let a = fit_rows(Which::A, &[1, 2, 3], Some(prec))?;
    let b = fit_rows(Which::B, &[0, 1, 2, 3], Some(prec))?;
    let mut failure = None;
    for (i, fitted) in a.iter().enumerate() {
        let fixture = PolyInX::from_i64s(1, A_FIXTURE[i]);
        failure = failure.or_else(|| fixture_failure(Which::A, i + 1, fitted, &fixture));
    }
    for (i, fitted) in b.iter().enumerate() {
        let fixture = PolyInX::from_i64s(1, B_FIXTURE[i]);
        failure = failure.or_else(|| fixture_failure(Which::B, i, fitted, &fixture));
    }
    Ok(CheckReport::from_outcome("initial_rows", prec, failure))
}

static FIXTURES_VERIFIED: OnceLock<std::result::Result<(), String>> = OnceLock::new();

/// Runs [`verify_initial_rows`] once per process; a mismatch between the
/// stored tables and the fitted series is an `InternalMismatch`.
pub fn ensure_fixtures_verified() -> Result<()> {
    let outcome = FIXTURES_VERIFIED.get_or_init(|| match verify_initial_rows(min_fit_prec(10)) {
        Ok(r) if r.passed() => Ok(()),
        Ok(r) => Err(format!("{:?}", r.first_failure())),
        Err(e) => Err(e.to_string()),
    });
    outcome.clone().map_err(|msg| Error::InternalMismatch {
        what: "stored operator tables vs fitted U images".into(),
        exponent: 0,
        lhs: msg,
        rhs: String::new(),
    })
}

/// `p_i = 3 U(X^i)`, then Newton's identities
/// `sigma_1 = p_1`, `sigma_2 = (sigma_1 p_1 - p_2)/2`,
/// `sigma_3 = (sigma_2 p_1 - sigma_1 p_2 + p_3)/3`, each fitted in `X`.
pub fn power_sum_sigmas(prec: i64) -> Result<[PolyInX; 3]> {
    let (max_deg, fit_prec) = fit_plan(3, Some(prec));
    let x_in = eta::series_x(3 * fit_prec)?;
    let p: Vec<LaurentSeries> =
        (1..=3).map(|i| x_in.pow(i).unwrap().u3().scale_int(3)).collect();
    let half = BigRational::new(1.into(), 2.into());
    let third = BigRational::new(1.into(), 3.into());
    let s1 = p[0].clone();
    let s2 = (&(&s1 * &p[0]) - &p[1]).scale(&half);
    let s3 = (&(&(&s2 * &p[0]) - &(&s1 * &p[1])) + &p[2]).scale(&third);
    let fitter = XFitter::new(fit_prec, max_deg)?;
    Ok([fitter.fit(&s1, max_deg)?, fitter.fit(&s2, max_deg)?, fitter.fit(&s3, max_deg)?])
}

pub fn verify_power_sums(prec: i64) -> Result<CheckReport> {
    let sigmas = power_sum_sigmas(prec)?;
    let mut failure = None;
    for (t, fitted) in sigmas.iter().enumerate() {
        let expected = PolyInX::from_i64s(1, SIGMA_FIXTURE[t]);
        let top = fitted.degree().max(expected.degree()).unwrap_or(0);
        if failure.is_none() {
            failure = (0..=top).find(|&j| fitted.coeff(j) != expected.coeff(j)).map(|j| {
                Failure::at_entry(t as i64 + 1, j as i64, fitted.coeff(j), expected.coeff(j))
            });
        }
    }
    Ok(CheckReport::from_outcome("power_sums", fit_plan(3, Some(prec)).1, failure))
}

/// Row `i` of a band matrix: entries for columns `lo ..= lo + len - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandRow {
    pub lo: i64,
    pub entries: Vec<BigInt>,
}

impl BandRow {
    pub fn hi(&self) -> i64 {
        self.lo + self.entries.len() as i64 - 1
    }

    pub fn get(&self, j: i64) -> Option<&BigInt> {
        if j < self.lo {
            return None;
        }
        self.entries.get((j - self.lo) as usize)
    }

    fn from_i64s(lo: i64, values: &[i64]) -> Self {
        BandRow { lo, entries: values.iter().map(|&v| v.into()).collect() }
    }

    /// Drops zero entries at both ends; an all-zero row keeps one entry.
    fn trimmed(mut self) -> Self {
        while self.entries.len() > 1 && self.entries.last().is_some_and(Zero::is_zero) {
            self.entries.pop();
        }
        let lead = self.entries.iter().take_while(|e| e.is_zero()).count();
        let lead = lead.min(self.entries.len() - 1);
        self.entries.drain(..lead);
        self.lo += lead as i64;
        self
    }
}

/// Row-finite integer matrix indexed from `(1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandMatrix {
    name: String,
    rows: Vec<BandRow>,
}

impl BandMatrix {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Row `i >= 1`.
    pub fn row(&self, i: usize) -> &BandRow {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &BandRow)> {
        self.rows.iter().enumerate().map(|(k, r)| (k + 1, r))
    }

    /// `m(i, j)`, zero outside the stored band (and for `i` out of range).
    pub fn get(&self, i: usize, j: i64) -> BigInt {
        if i == 0 || i > self.rows.len() {
            return BigInt::zero();
        }
        self.rows[i - 1].get(j).cloned().unwrap_or_default()
    }
}

/// Produces the rows of `(a)` or `(b)` one at a time, keeping only the
/// three most recent rows.
pub struct RowStream {
    which: Which,
    recent: Vec<BandRow>,
    next: usize,
}

const RECURRENCE: [(usize, i64, i64); 6] =
    [(1, 1, 30), (1, 2, -108), (1, 3, 81), (2, 1, -12), (2, 2, 9), (3, 1, 1)];

impl RowStream {
    pub fn new(which: Which) -> Result<Self> {
        ensure_fixtures_verified()?;
        Ok(RowStream { which, recent: Vec::with_capacity(3), next: 1 })
    }

    fn fixture(&self, i: usize) -> BandRow {
        let values = match self.which {
            Which::A => A_FIXTURE[i - 1],
            Which::B => B_FIXTURE[i],
        };
        BandRow::from_i64s(1, values)
    }

    /// `m(i,j) = 30m(i-1,j-1) - 108m(i-1,j-2) + 81m(i-1,j-3)
    ///          - 12m(i-2,j-1) + 9m(i-2,j-2) + m(i-3,j-1)`
    fn recur(&self, i: usize) -> BandRow {
        let n = self.recent.len();
        let prev = |back: usize| &self.recent[n - back];
        let lo = (1..=3).map(|b| prev(b).lo + 1).min().unwrap();
        let hi = prev(1).hi() + 3;
        let mut entries = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for &(back, shift, c) in &RECURRENCE {
            let row = prev(back);
            for (k, v) in row.entries.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let j = row.lo + k as i64 + shift;
                entries[(j - lo) as usize] += v * c;
            }
        }
        let _ = i;
        BandRow { lo, entries }
    }

    /// Asserts that the row vanishes outside its declared band and returns
    /// it reshaped to exactly that band.
    fn fit_band(&self, i: usize, row: BandRow) -> Result<BandRow> {
        let (lo, hi) = self.which.band(i);
        for (k, v) in row.entries.iter().enumerate() {
            let j = row.lo + k as i64;
            if !v.is_zero() && (j < lo || j > hi) {
                return Err(Error::SupportViolation {
                    which: self.which.label().into(),
                    row: i,
                    col: j,
                    lo,
                    hi,
                });
            }
        }
        let entries = (lo..=hi).map(|j| row.get(j).cloned().unwrap_or_default()).collect();
        Ok(BandRow { lo, entries })
    }

    pub fn next_row(&mut self) -> Result<BandRow> {
        let i = self.next;
        let raw = if i <= 3 { self.fixture(i) } else { self.recur(i) };
        let row = self.fit_band(i, raw)?;
        if self.recent.len() == 3 {
            self.recent.remove(0);
        }
        self.recent.push(row.clone());
        self.next += 1;
        Ok(row)
    }
}

/// Rows `1 ..= max_row` of `(a)` or `(b)`.
pub fn build_matrix(which: Which, max_row: usize) -> Result<BandMatrix> {
    if max_row < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 rows, got {max_row}")));
    }
    let mut stream = RowStream::new(which)?;
    let rows = (0..max_row).map(|_| stream.next_row()).collect::<Result<Vec<_>>>()?;
    Ok(BandMatrix { name: which.label().into(), rows })
}

/// Fits `U(X^i)` / `U(xi X^i)` for `4 <= i <= max_row` and compares with
/// the recurrence rows.
pub fn verify_u_rows(which: Which, max_row: usize, prec: Option<i64>) -> Result<CheckReport> {
    let matrix = build_matrix(which, max_row.max(3))?;
    let rows: Vec<usize> = (4..=max_row).collect();
    let (_, fit_prec) = fit_plan(max_row, prec);
    let fitted = fit_rows(which, &rows, Some(fit_prec))?;
    let mut failure = None;
    for (&i, poly) in rows.iter().zip(&fitted) {
        let expected = PolyInX::from_row(matrix.row(i).lo as usize, &matrix.row(i).entries);
        if let Some(f) = fixture_failure(which, i, poly, &expected) {
            failure = Some(f);
            break;
        }
    }
    let name = format!("u_rows_{}", which.label());
    Ok(CheckReport::from_outcome(name, fit_prec, failure))
}

/// `t(i,j) = sum_k a(i,k) b(k,j)` for `i <= max_i`, `j <= max_j`.
pub fn build_t(max_i: usize, max_j: i64) -> Result<BandMatrix> {
    let a = build_matrix(Which::A, max_i.max(3))?;
    let b = build_matrix(Which::B, (3 * max_i).max(3))?;
    let rows = (1..=max_i)
        .into_par_iter()
        .map(|i| {
            let arow = a.row(i);
            let mut entries = vec![BigInt::zero(); max_j.max(1) as usize];
            for (off, aik) in arow.entries.iter().enumerate() {
                if aik.is_zero() {
                    continue;
                }
                let k = (arow.lo + off as i64) as usize;
                let brow = b.row(k);
                for (boff, bkj) in brow.entries.iter().enumerate() {
                    let j = brow.lo + boff as i64;
                    if j > max_j {
                        break;
                    }
                    entries[(j - 1) as usize] += aik * bkj;
                }
            }
            BandRow { lo: 1, entries }.trimmed()
        })
        .collect();
    Ok(BandMatrix { name: "t".into(), rows })
}

/// `d_alpha(j)` for `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSequence {
    pub alpha: u32,
    /// `entries[j - 1] = d_alpha(j)`; trailing zeros trimmed.
    pub entries: Vec<BigInt>,
}

impl DSequence {
    pub fn get(&self, j: usize) -> BigInt {
        if j == 0 {
            return BigInt::zero();
        }
        self.entries.get(j - 1).cloned().unwrap_or_default()
    }

    /// Largest `j` with `d_alpha(j) != 0`.
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn as_poly(&self) -> PolyInX {
        PolyInX::from_row(1, &self.entries)
    }

    fn trimmed(alpha: u32, mut entries: Vec<BigInt>) -> Self {
        while entries.last().is_some_and(Zero::is_zero) {
            entries.pop();
        }
        DSequence { alpha, entries }
    }
}

/// `d_new(j) = sum_k m(k, j) d(k)`, streaming the rows of `m`.
pub fn d_step_rows(d: &DSequence, which: Which) -> Result<DSequence> {
    let mut stream = RowStream::new(which)?;
    let mut out: Vec<BigInt> = Vec::new();
    for k in 1..=d.support() {
        let row = stream.next_row()?;
        let dk = &d.entries[k - 1];
        if dk.is_zero() {
            continue;
        }
        let need = row.hi() as usize;
        if out.len() < need {
            out.resize(need, BigInt::zero());
        }
        for (off, v) in row.entries.iter().enumerate() {
            if !v.is_zero() {
                out[(row.lo as usize) + off - 1] += v * dk;
            }
        }
    }
    Ok(DSequence::trimmed(d.alpha + 1, out))
}

/// Polynomial product over the integers; index = power of `X`.
fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_add(a: &mut Vec<BigInt>, b: &[BigInt], sign: i64) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        if sign > 0 {
            *x += y;
        } else {
            *x -= y;
        }
    }
}

fn sigma_polys() -> [Vec<BigInt>; 3] {
    SIGMA_FIXTURE.map(|c| {
        std::iter::once(BigInt::zero()).chain(c.iter().map(|&v| BigInt::from(v))).collect()
    })
}

/// Same sum as [`d_step_rows`], by backward recurrence over the row
/// recurrence `R_k = s1 R_{k-1} - s2 R_{k-2} + s3 R_{k-3}` (`k >= 4`):
/// with `B_k = d(k) + s1 B_{k+1} - s2 B_{k+2} + s3 B_{k+3}`,
/// `sum_k d(k) R_k = B_1 R_1 + B_2 (R_2 - s1 R_1) + B_3 (R_3 - s1 R_2 + s2 R_1)`.
/// Only small constants multiply the large entries.
pub fn d_step(d: &DSequence, which: Which) -> Result<DSequence> {
    ensure_fixtures_verified()?;
    let n = d.support();
    // b[0] = B_{k+1}, b[1] = B_{k+2}, b[2] = B_{k+3}
    let mut b: [Vec<BigInt>; 3] = Default::default();
    for k in (1..=n).rev() {
        let [b1, b2, b3] = &mut b;
        let len = (b1.len() + 3).max(b2.len() + 2).max(b3.len() + 1).max(1);
        // B_{k+3}'s storage becomes B_k, filled from the top so that
        // b3[t - 1] is still intact when it is read
        let mut next = std::mem::take(b3);
        next.resize(len, BigInt::zero());
        let mut scratch = BigInt::zero();
        for t in (1..len).rev() {
            let mut acc = std::mem::take(&mut next[t - 1]);
            let terms: [(&[BigInt], usize, u32, bool); 5] = [
                (b1, 1, 30, false),
                (b1, 2, 108, true),
                (b1, 3, 81, false),
                (b2, 1, 12, true),
                (b2, 2, 9, false),
            ];
            for (src, back, c, negative) in terms {
                let Some(v) = t.checked_sub(back).and_then(|i| src.get(i)) else { continue };
                if v.is_zero() {
                    continue;
                }
                // reuses the scratch allocation
                scratch.clone_from(v);
                scratch *= c;
                if negative {
                    acc -= &scratch;
                } else {
                    acc += &scratch;
                }
            }
            next[t] = acc;
        }
        next[0] = d.entries[k - 1].clone();
        b = [next, std::mem::take(b1), std::mem::take(b2)];
    }
    let rows: Vec<Vec<BigInt>> = (1..=3)
        .map(|i| {
            let values = match which {
                Which::A => A_FIXTURE[i - 1],
                Which::B => B_FIXTURE[i],
            };
            std::iter::once(0).chain(values.iter().copied()).map(BigInt::from).collect()
        })
        .collect();
    let [s1, s2, _] = sigma_polys();
    let c1 = rows[0].clone();
    let mut c2 = rows[1].clone();
    poly_add(&mut c2, &poly_mul(&s1, &rows[0]), -1);
    let mut c3 = rows[2].clone();
    poly_add(&mut c3, &poly_mul(&s1, &rows[1]), -1);
    poly_add(&mut c3, &poly_mul(&s2, &rows[0]), 1);
    let mut sum = poly_mul(&b[0], &c1);
    poly_add(&mut sum, &poly_mul(&b[1], &c2), 1);
    poly_add(&mut sum, &poly_mul(&b[2], &c3), 1);
    if sum.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::InternalMismatch {
            what: format!("constant term of d_{}", d.alpha + 1),
            exponent: 0,
            lhs: sum[0].to_string(),
            rhs: "0".into(),
        });
    }
    Ok(DSequence::trimmed(d.alpha + 1, sum.into_iter().skip(1).collect()))
}

/// `d_1, ..., d_alpha_max`: `d_1 = (9, 0, 0, ...)`, then `(a)` for even
/// and `(b)` for odd indices.
pub fn build_d(alpha_max: u32) -> Result<Vec<DSequence>> {
    if alpha_max < 1 {
        return Err(Error::InvalidArgument("alpha_max must be >= 1".into()));
    }
    let mut out = vec![DSequence { alpha: 1, entries: vec![BigInt::from(9)] }];
    while out.len() < alpha_max as usize {
        let last = out.last().unwrap();
        let which = if (last.alpha + 1) % 2 == 0 { Which::A } else { Which::B };
        let next = d_step(last, which)?;
        out.push(next);
    }
    Ok(out)
}

/// `d_{2 alpha + 1}(j) = sum_i t(i,j) d_{2 alpha - 1}(i)` compared with the
/// two-step construction, for every odd index `2 alpha + 1 <= max_odd_index`
/// available in `ds`.
pub fn verify_d_via_t(ds: &[DSequence], max_odd_index: u32) -> Result<CheckReport> {
    let mut failure = None;
    let mut checked = 0;
    for src in ds.iter().filter(|d| d.alpha % 2 == 1) {
        let target_alpha = src.alpha + 2;
        if target_alpha > max_odd_index {
            break;
        }
        let Some(target) = ds.iter().find(|d| d.alpha == target_alpha) else { break };
        let t = build_t(src.support(), target.support().max(1) as i64)?;
        for j in 1..=target.support() {
            let via_t: BigInt =
                (1..=src.support()).map(|i| t.get(i, j as i64) * src.get(i)).sum();
            if via_t != target.get(j) {
                failure = Some(Failure::at_entry(target_alpha as i64, j as i64, via_t, target.get(j)));
                break;
            }
        }
        checked = target_alpha;
        if failure.is_some() {
            break;
        }
    }
    Ok(CheckReport::from_outcome("d_via_t", checked as i64, failure))
}

/// Coefficients `g(stride n + offset)` for `n < count`.
pub fn extract_progression(g: &LaurentSeries, stride: i64, offset: i64, count: i64) -> Result<LaurentSeries> {
    let needed = stride * (count - 1) + offset + 1;
    if g.prec() < needed {
        return Err(Error::InsufficientPrecision { required: needed, available: g.prec() });
    }
    let coeffs = (0..count)
        .map(|n| g.integer_coeff(stride * n + offset).expect("integral and known"))
        .collect();
    Ok(LaurentSeries::from_integers(0, count, coeffs))
}

/// Number of coefficients of `g` that [`check_g_d_relation`] needs.
pub fn g_d_required_prec(alpha: u32, prec: i64) -> i64 {
    3i64.pow(2 * alpha) * prec + eta::progression_offset(alpha, 4)
}

/// Both identities relating `g` on the progressions `3^{2 alpha - 1} n + c`
/// and `3^{2 alpha} n + c`, `c = (3^{2 alpha} - 1)/4`, to `d_{2 alpha - 1}`
/// and `d_{2 alpha}`, checked modulo `q^prec` against the supplied `g`.
pub fn check_g_d_relation_with(
    alpha: u32,
    prec: i64,
    g: &LaurentSeries,
    ds: &[DSequence],
) -> Result<CheckReport> {
    if alpha < 1 {
        return Err(Error::InvalidArgument("alpha must be >= 1".into()));
    }
    let required = g_d_required_prec(alpha, prec);
    if g.prec() < required {
        return Err(Error::InsufficientPrecision { required, available: g.prec() });
    }
    let find = |idx: u32| {
        ds.iter().find(|d| d.alpha == idx).ok_or_else(|| {
            Error::InvalidArgument(format!("d_{idx} not supplied"))
        })
    };
    let d_odd = find(2 * alpha - 1)?;
    let d_even = find(2 * alpha)?;
    let offset = eta::progression_offset(alpha, 4);
    let x = eta::series_x(prec)?;

    let lhs_odd = extract_progression(g, 3i64.pow(2 * alpha - 1), offset, prec)?;
    let rhs_odd = &eta::eta_quotient(&[(6, 5), (3, -4)], prec) * &d_odd.as_poly().evaluate(&x);
    let odd = compare_series("odd", &lhs_odd, &rhs_odd, prec)?;

    let lhs_even = extract_progression(g, 3i64.pow(2 * alpha), offset, prec)?;
    let rhs_even = &eta::eta_quotient(&[(2, 5), (1, -4)], prec) * &d_even.as_poly().evaluate(&x);
    let even = compare_series("even", &lhs_even, &rhs_even, prec)?;

    Ok(CheckReport::all(format!("g_d_relation_alpha{alpha}"), [odd, even]))
}

/// [`check_g_d_relation_with`] generating `g` and the `d` sequences itself.
pub fn check_g_d_relation(alpha: u32, prec: i64) -> Result<CheckReport> {
    let g = eta::g_series(g_d_required_prec(alpha, prec));
    let ds = build_d(2 * alpha)?;
    check_g_d_relation_with(alpha, prec, &g, &ds)
}

/// Content of an integer vector, for diagnostics.
pub fn content(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_i64(r: &BandRow) -> Vec<i64> {
        r.entries.iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn display() {
        assert_eq!(PolyInX::from_i64s(1, &[-9, 252, -1]).to_string(), "-9*X + 252*X^2 - X^3");
        assert_eq!(PolyInX::from_i64s(0, &[1, 1]).to_string(), "1 + X");
        assert_eq!(PolyInX::new(vec![]).to_string(), "0");
    }

    #[test]
    fn fit_x_itself() {
        let x = eta::series_x(40).unwrap();
        let p = fit_poly_in_x(&x, 1, 40).unwrap();
        assert_eq!(p, PolyInX::from_i64s(1, &[1]));
    }

    #[test]
    fn fit_u_of_x() {
        let x = eta::series_x(3 * 40).unwrap();
        let p = fit_poly_in_x(&x.u3(), 3, 40).unwrap();
        assert_eq!(p, PolyInX::from_i64s(1, &[10, -36, 27]));
    }

    #[test]
    fn fit_u_of_x_cubed() {
        let x = eta::series_x(3 * 40).unwrap();
        let p = fit_poly_in_x(&x.pow(3).unwrap().u3(), 9, 40).unwrap();
        assert_eq!(p.integer_row().unwrap(), A_FIXTURE[2].iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
    }

    #[test]
    fn fit_rejects_non_polynomial() {
        let xi = eta::series_xi(60).unwrap().shift(2);
        let err = fit_poly_in_x(&xi, 4, 20).unwrap_err();
        assert!(matches!(err, Error::NotRepresentable { max_deg: 4, .. }));
        assert!(matches!(fit_poly_in_x(&xi, 4, 10), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn fit_recovers_rational_polynomial() {
        let x = eta::series_x(60).unwrap();
        let poly = PolyInX::new(vec![
            BigRational::new(1.into(), 3.into()),
            BigRational::new((-5).into(), 8.into()),
            BigRational::from_integer(7.into()),
        ]);
        let s = poly.evaluate(&x);
        assert_eq!(fit_poly_in_x(&s, 5, 60).unwrap(), poly);
    }

    #[test]
    fn initial_rows_match_tables() {
        assert!(verify_initial_rows(min_fit_prec(10)).unwrap().passed());
    }

    #[test]
    fn sigmas() {
        let [s1, s2, s3] = power_sum_sigmas(min_fit_prec(10)).unwrap();
        assert_eq!(s3, PolyInX::from_i64s(1, &[1]));
        assert_eq!(s2, PolyInX::from_i64s(1, &[12, -9]));
        assert_eq!(s1, PolyInX::from_i64s(1, &[30, -108, 81]));
        assert!(verify_power_sums(min_fit_prec(10)).unwrap().passed());
    }

    #[test]
    fn newton_consistency() {
        let x = eta::series_x(120).unwrap();
        let p: Vec<_> = (1..=2).map(|i| x.pow(i).unwrap().u3().scale_int(3)).collect();
        let s1 = fit_poly_in_x(&p[0], 3, 40).unwrap().evaluate(&eta::series_x(40).unwrap());
        let s2 = PolyInX::from_i64s(1, &[12, -9]).evaluate(&eta::series_x(40).unwrap());
        let rhs = &(&s1 * &p[0]) - &s2.scale_int(2);
        assert!(p[1].clone().truncated(40).agrees_with(&rhs));
    }

    #[test]
    fn first_rows_of_a() {
        let a = build_matrix(Which::A, 5).unwrap();
        assert_eq!(row_i64(a.row(1)), [10, -36, 27]);
        assert_eq!(a.row(4).lo, 2);
        assert_eq!(a.row(4).hi(), 12);
        // a(4,1) = 30 a(3,0) - 108 a(3,-1) + 81 a(3,-2) - 12 a(2,0) + 9 a(2,-1) + a(1,0) = 0
        assert_eq!(a.get(4, 1), BigInt::zero());
    }

    #[test]
    fn recurrence_rows_match_fits() {
        let fitted = fit_rows(Which::A, &[4], None).unwrap();
        let a = build_matrix(Which::A, 4).unwrap();
        assert_eq!(fitted[0], PolyInX::from_row(a.row(4).lo as usize, &a.row(4).entries));
        assert!(verify_u_rows(Which::B, 5, None).unwrap().passed());
        assert!(verify_u_rows(Which::A, 5, None).unwrap().passed());
    }

    #[test]
    fn t_first_row_support() {
        let t = build_t(1, 30).unwrap();
        let row = t.row(1);
        assert!(row.hi() <= 10);
        for j in 11..=30 {
            assert_eq!(t.get(1, j), BigInt::zero());
        }
    }

    #[test]
    fn d_first_steps() {
        let ds = build_d(3).unwrap();
        assert_eq!(ds[0].entries, [BigInt::from(9)]);
        let d2: Vec<i64> = ds[1].entries.iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(d2, [90, -324, 243]);
        assert_eq!(ds[2].support(), 10);
        assert!(verify_d_via_t(&ds, 3).unwrap().passed());
    }

    #[test]
    fn backward_recurrence_matches_rows() {
        let ds = build_d(5).unwrap();
        for d in &ds[..4] {
            let which = if d.alpha % 2 == 1 { Which::A } else { Which::B };
            assert_eq!(d_step(d, which).unwrap(), d_step_rows(d, which).unwrap());
        }
        let odd = DSequence { alpha: 3, entries: (1..=12).map(|v| BigInt::from(v * v - 40)).collect() };
        assert_eq!(d_step(&odd, Which::A).unwrap(), d_step_rows(&odd, Which::A).unwrap());
        assert_eq!(d_step(&odd, Which::B).unwrap(), d_step_rows(&odd, Which::B).unwrap());
    }

    #[test]
    fn g_d_alpha_one() {
        let r = check_g_d_relation(1, 30).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(g_d_required_prec(1, 30), 9 * 30 + 2);
    }

    #[test]
    fn g_d_wants_enough_g() {
        let ds = build_d(2).unwrap();
        let g = eta::g_series(100);
        assert!(matches!(
            check_g_d_relation_with(1, 30, &g, &ds),
            Err(Error::InsufficientPrecision { required: 272, available: 100 })
        ));
    }
}
