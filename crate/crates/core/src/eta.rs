//! Generators for the named series: Euler products `E(q^k)`, the theta
//! functions `phi(-q^k)` and `psi(q^k)`, the eta quotients `w`, `X`, `xi`,
//! the mock theta function `beta(q)` and the generating function of `g(n)`.
//!
//! Wherever two constructions exist (theta sum and eta quotient, the two
//! defining sums of `beta`), the checked generator builds both and returns
//! `InternalMismatch` if they disagree.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// `E(q^k) = prod_{j >= 1} (1 - q^{jk})` modulo `q^prec`, via the
/// pentagonal number theorem.
pub fn euler_e(k: i64, prec: i64) -> LaurentSeries {
    assert!(k >= 1 && prec >= 1);
    let mut terms = Vec::new();
    for m in 0i64.. {
        let lo = k * m * (3 * m - 1) / 2;
        if lo >= prec {
            break;
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        terms.push((lo, sign));
        let hi = k * m * (3 * m + 1) / 2;
        if m > 0 && hi < prec {
            terms.push((hi, sign));
        }
    }
    LaurentSeries::from_terms(0, prec, &terms)
}

/// `prod E(q^k)^e` over `(k, e)` pairs, modulo `q^prec`.
pub fn eta_quotient(factors: &[(i64, i64)], prec: i64) -> LaurentSeries {
    let mut acc = LaurentSeries::one(prec);
    for &(k, e) in factors {
        let f = euler_e(k, prec).pow(e).expect("Euler products have constant term 1");
        acc = &acc * &f;
    }
    acc
}

/// `phi(-q^k) = sum_n (-1)^n q^{k n^2}`.
pub fn phi_neg_theta(k: i64, prec: i64) -> LaurentSeries {
    let mut terms = vec![(0, 1)];
    for n in 1i64.. {
        let e = k * n * n;
        if e >= prec {
            break;
        }
        terms.push((e, if n % 2 == 0 { 2 } else { -2 }));
    }
    LaurentSeries::from_terms(0, prec, &terms)
}

/// `phi(-q^k) = E(q^k)^2 / E(q^{2k})`.
pub fn phi_neg_eta(k: i64, prec: i64) -> LaurentSeries {
    eta_quotient(&[(k, 2), (2 * k, -1)], prec)
}

/// `psi(q^k) = sum_{n >= 0} q^{k n(n+1)/2}`.
pub fn psi_theta(k: i64, prec: i64) -> LaurentSeries {
    let terms: Vec<(i64, i64)> =
        (0i64..).map(|n| k * n * (n + 1) / 2).take_while(|&e| e < prec).map(|e| (e, 1)).collect();
    LaurentSeries::from_terms(0, prec, &terms)
}

/// `psi(q^k) = E(q^{2k})^2 / E(q^k)`.
pub fn psi_eta(k: i64, prec: i64) -> LaurentSeries {
    eta_quotient(&[(2 * k, 2), (k, -1)], prec)
}

fn agree(what: &str, a: LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
    match a.first_mismatch(b) {
        None => Ok(a),
        Some((exponent, l, r)) => Err(Error::InternalMismatch {
            what: what.to_string(),
            exponent,
            lhs: l.to_string(),
            rhs: r.to_string(),
        }),
    }
}

pub fn phi_neg(k: i64, prec: i64) -> Result<LaurentSeries> {
    agree("phi(-q) theta sum vs eta quotient", phi_neg_theta(k, prec), &phi_neg_eta(k, prec))
}

pub fn psi(k: i64, prec: i64) -> Result<LaurentSeries> {
    agree("psi(q) theta sum vs eta quotient", psi_theta(k, prec), &psi_eta(k, prec))
}

/// `w(q) = E(q) E(q^6)^3 / (E(q^2) E(q^3)^3)`.
pub fn series_w(prec: i64) -> LaurentSeries {
    eta_quotient(&[(1, 1), (6, 3), (2, -1), (3, -3)], prec)
}

/// `X = E(q^2)^4 E(q^3)^8 / (E(q)^8 E(q^6)^4)`.
pub fn series_x_eta(prec: i64) -> LaurentSeries {
    eta_quotient(&[(2, 4), (3, 8), (1, -8), (6, -4)], prec)
}

/// `X = phi(-q^3)^4 / phi(-q)^4`.
pub fn series_x_theta(prec: i64) -> LaurentSeries {
    let num = phi_neg_theta(3, prec).pow(4).unwrap();
    let den = phi_neg_theta(1, prec).pow(-4).unwrap();
    &num * &den
}

pub fn series_x(prec: i64) -> Result<LaurentSeries> {
    agree("X eta quotient vs theta quotient", series_x_eta(prec), &series_x_theta(prec))
}

/// `xi = q^-2 E(q^2)^5 E(q^9)^4 / (E(q)^4 E(q^18)^5)`, known modulo `q^prec`.
pub fn series_xi_eta(prec: i64) -> LaurentSeries {
    eta_quotient(&[(2, 5), (9, 4), (1, -4), (18, -5)], prec + 2).shift(-2)
}

/// `xi = q^-2 psi(q)^2 phi(-q^9) / (phi(-q) psi(q^9)^2)`.
pub fn series_xi_theta(prec: i64) -> LaurentSeries {
    let p = prec + 2;
    let num = &psi_theta(1, p).pow(2).unwrap() * &phi_neg_theta(9, p);
    let den = &phi_neg_theta(1, p).inv().unwrap() * &psi_theta(9, p).pow(-2).unwrap();
    (&num * &den).shift(-2)
}

pub fn series_xi(prec: i64) -> Result<LaurentSeries> {
    agree("xi eta quotient vs theta quotient", series_xi_eta(prec), &series_xi_theta(prec))
}

/// `beta(q) = sum_n q^{n(n+1)} (-q^2;q^2)_n / (q;q^2)_{n+1}^2`.
///
/// Summand `n` starts at `q^{n(n+1)}`, so only `O(sqrt(prec))` summands
/// contribute. Each one is obtained from the previous by multiplying with
/// `q^{2n} (1 + q^{2n}) / (1 - q^{2n+1})^2`.
pub fn beta_form1(prec: i64) -> LaurentSeries {
    let mut term = LaurentSeries::one(prec);
    term.div_one_plus(-1, 1);
    term.div_one_plus(-1, 1);
    let mut sum = term.clone();
    for n in 1i64.. {
        let lead = n * (n + 1);
        if lead >= prec {
            break;
        }
        term = term.shift(2 * n).truncated(prec);
        term.mul_one_plus(1, 2 * n);
        term.div_one_plus(-1, 2 * n + 1);
        term.div_one_plus(-1, 2 * n + 1);
        sum.add_assign(&term);
    }
    sum
}

/// `beta(q) = sum_n q^n (-q;q^2)_n / (q;q^2)_{n+1}`.
///
/// Summand `n` starts at `q^n`; successive summands differ by the factor
/// `q (1 + q^{2n-1}) / (1 - q^{2n+1})`.
pub fn beta_form2(prec: i64) -> LaurentSeries {
    let mut term = LaurentSeries::one(prec);
    term.div_one_plus(-1, 1);
    let mut sum = term.clone();
    for n in 1..prec {
        term = term.shift(1).truncated(prec);
        term.mul_one_plus(1, 2 * n - 1);
        term.div_one_plus(-1, 2 * n + 1);
        sum.add_assign(&term);
    }
    sum
}

/// Coefficients `b(n)` of `beta(q)`, with both defining sums cross-checked.
pub fn beta_series(prec: i64) -> Result<LaurentSeries> {
    agree("beta(q) first vs second defining sum", beta_form1(prec), &beta_form2(prec))
}

/// `sum g(n) q^n = E(q^2)^5 / E(q)^4`.
pub fn g_series(prec: i64) -> LaurentSeries {
    eta_quotient(&[(2, 5), (1, -4)], prec)
}

/// Named generators addressable from the command line and the cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesName {
    EulerE(i64),
    PhiNeg(i64),
    Psi(i64),
    W,
    X,
    Xi,
    Beta,
    /// `beta` from its second defining sum alone.
    BetaAlt,
    G,
}

impl SeriesName {
    /// Builds the series modulo `q^prec`, running every dual-construction
    /// assertion the generator has.
    pub fn generate(self, prec: i64) -> Result<LaurentSeries> {
        if prec < 1 {
            return Err(Error::InvalidArgument(format!("precision must be positive, got {prec}")));
        }
        let s = match self {
            SeriesName::EulerE(k) => euler_e(k, prec),
            SeriesName::PhiNeg(k) => phi_neg(k, prec)?,
            SeriesName::Psi(k) => psi(k, prec)?,
            SeriesName::W => series_w(prec),
            SeriesName::X => series_x(prec)?,
            SeriesName::Xi => series_xi(prec)?,
            SeriesName::Beta => beta_series(prec)?,
            SeriesName::BetaAlt => beta_form2(prec),
            SeriesName::G => g_series(prec),
        };
        if !s.is_integral() {
            return Err(Error::InternalMismatch {
                what: format!("{self} is not integral"),
                exponent: s.min_exp(),
                lhs: s.denominator().to_string(),
                rhs: "1".into(),
            });
        }
        Ok(s)
    }

    /// Stable key used for cache file names.
    pub fn key(self) -> String {
        match self {
            SeriesName::EulerE(k) => format!("E_{k}"),
            SeriesName::PhiNeg(k) => format!("phi-neg_{k}"),
            SeriesName::Psi(k) => format!("psi_{k}"),
            other => other.to_string(),
        }
    }

    /// Parses a series name with an explicit `q^k` argument for the
    /// parametrised families.
    pub fn parse_with_k(name: &str, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument(format!("k must be >= 1, got {k}")));
        }
        let lower = name.to_ascii_lowercase();
        let parsed = match lower.as_str() {
            "e" | "euler" | "euler-e" => SeriesName::EulerE(k),
            "phi" | "phi-neg" => SeriesName::PhiNeg(k),
            "psi" => SeriesName::Psi(k),
            _ if k != 1 => {
                return Err(Error::InvalidArgument(format!("series {name} takes no k argument")))
            }
            _ => return name.parse(),
        };
        Ok(parsed)
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesName::EulerE(k) => write!(f, "E(q^{k})"),
            SeriesName::PhiNeg(k) => write!(f, "phi(-q^{k})"),
            SeriesName::Psi(k) => write!(f, "psi(q^{k})"),
            SeriesName::W => write!(f, "w"),
            SeriesName::X => write!(f, "X"),
            SeriesName::Xi => write!(f, "xi"),
            SeriesName::Beta => write!(f, "beta"),
            SeriesName::BetaAlt => write!(f, "beta-alt"),
            SeriesName::G => write!(f, "g"),
        }
    }
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, k) = match s.split_once(['_', ':']) {
            Some((b, k)) => {
                let k = k
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad k in series name {s:?}")))?;
                (b, Some(k))
            }
            None => (s, None),
        };
        let lower = base.to_ascii_lowercase();
        let name = match (lower.as_str(), k) {
            ("e" | "euler" | "euler-e", k) => SeriesName::EulerE(k.unwrap_or(1)),
            ("phi" | "phi-neg", k) => SeriesName::PhiNeg(k.unwrap_or(1)),
            ("psi", k) => SeriesName::Psi(k.unwrap_or(1)),
            ("w", None) => SeriesName::W,
            ("x", None) => SeriesName::X,
            ("xi", None) => SeriesName::Xi,
            ("beta", None) => SeriesName::Beta,
            ("beta-alt", None) => SeriesName::BetaAlt,
            ("g", None) => SeriesName::G,
            ("mu", _) => {
                return Err(Error::InvalidArgument("mu(q) is not provided by this engine".into()))
            }
            _ => return Err(Error::InvalidArgument(format!("unknown series {s:?}"))),
        };
        if let SeriesName::EulerE(k) | SeriesName::PhiNeg(k) | SeriesName::Psi(k) = name {
            if k < 1 {
                return Err(Error::InvalidArgument(format!("k must be >= 1 in {s:?}")));
            }
        }
        Ok(name)
    }
}

/// Index arithmetic shared by the congruence and `g`-`d` checks:
/// `(3^{2 alpha} - 1) / divisor`, asserting exactness.
pub fn progression_offset(alpha: u32, divisor: i64) -> i64 {
    let full = 3i64.pow(2 * alpha) - 1;
    assert_eq!(full % divisor, 0, "(3^(2*{alpha}) - 1) not divisible by {divisor}");
    full / divisor
}

#[cfg(test)]
pub(crate) fn is_zero_series(s: &LaurentSeries) -> bool {
    use num_traits::Zero;
    s.numerators().iter().all(num_bigint::BigInt::is_zero)
}
