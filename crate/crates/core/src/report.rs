//! Structured outcomes of verification runs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Where a check first went wrong. For series checks `exponent` is the
/// power of `q`; for matrix checks `row`/`exponent` are the entry indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub exponent: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<i64>,
    pub lhs: String,
    pub rhs: String,
}

impl Failure {
    pub fn at(exponent: i64, lhs: impl ToString, rhs: impl ToString) -> Self {
        Failure { exponent, row: None, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }

    pub fn at_entry(row: i64, col: i64, lhs: impl ToString, rhs: impl ToString) -> Self {
        Failure { exponent: col, row: Some(row), lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

/// Result of one verification. `passed` holds exactly when `first_failure`
/// is absent; the constructors are the only way to build one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    name: String,
    prec: i64,
    passed: bool,
    first_failure: Option<Failure>,
}

impl CheckReport {
    pub fn pass(name: impl Into<String>, prec: i64) -> Self {
        CheckReport { name: name.into(), prec, passed: true, first_failure: None }
    }

    pub fn fail(name: impl Into<String>, prec: i64, failure: Failure) -> Self {
        CheckReport { name: name.into(), prec, passed: false, first_failure: Some(failure) }
    }

    pub fn from_outcome(name: impl Into<String>, prec: i64, failure: Option<Failure>) -> Self {
        match failure {
            None => Self::pass(name, prec),
            Some(f) => Self::fail(name, prec, f),
        }
    }

    /// Conjunction of several reports: the first failing part wins and the
    /// recorded precision is the smallest one compared.
    pub fn all(name: impl Into<String>, parts: impl IntoIterator<Item = CheckReport>) -> Self {
        let mut prec = i64::MAX;
        let mut failure = None;
        for part in parts {
            prec = prec.min(part.prec);
            if failure.is_none() {
                failure = part.first_failure;
            }
        }
        if prec == i64::MAX {
            prec = 0;
        }
        Self::from_outcome(name, prec, failure)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.first_failure.as_ref()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Coefficient-wise comparison of two series on their common known range.
/// Fails with `InsufficientPrecision` when that range ends below `min_prec`.
pub fn compare_series(
    name: &str,
    lhs: &LaurentSeries,
    rhs: &LaurentSeries,
    min_prec: i64,
) -> Result<CheckReport> {
    let prec = lhs.prec().min(rhs.prec());
    if prec < min_prec {
        return Err(Error::InsufficientPrecision { required: min_prec, available: prec });
    }
    let failure = lhs.first_mismatch(rhs).map(|(e, l, r)| Failure::at(e, l, r));
    Ok(CheckReport::from_outcome(name, prec, failure))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_localizes_first_failure() {
        let a = LaurentSeries::from_i64s(0, 10, &[1, 2, 3, 4]);
        let b = LaurentSeries::from_i64s(0, 8, &[1, 2, 4, 4]);
        let r = compare_series("x", &a, &b, 8).unwrap();
        assert!(!r.passed());
        assert_eq!(r.prec(), 8);
        assert_eq!(r.first_failure(), Some(&Failure::at(2, "3", "4")));
        assert!(compare_series("x", &a, &b, 9).is_err());
    }

    #[test]
    fn conjunction() {
        let r = CheckReport::all(
            "both",
            [CheckReport::pass("a", 30), CheckReport::fail("b", 20, Failure::at(3, 1, 2))],
        );
        assert_eq!(r.prec(), 20);
        assert!(!r.passed());
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"name":"both","prec":20,"passed":false,"first_failure":{"exponent":3,"lhs":"1","rhs":"2"}}"#
        );
    }
}
