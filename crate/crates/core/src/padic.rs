//! 3-adic valuations and the lower bounds they satisfy on the entries of
//! `(a)`, `(b)`, `(t)` and the sequences `d_alpha`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::matrices::{self, BandMatrix, DSequence, Which};
use crate::report::{CheckReport, Failure};

/// 3-adic order; `Infinite` exactly for zero, and larger than every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= bound` for an integer bound (negative bounds always hold).
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => bound < 0 || v >= bound as u64,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `3^40`, the largest power of 3 below `2^64`.
const CHUNK: u64 = 12_157_665_459_056_928_801;

/// Largest `e` with `3^e | n`.
pub fn val3(n: &BigInt) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let chunk = BigUint::from(CHUNK);
    let mut m = n.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 40;
    }
    let mut r = (&m % CHUNK).to_u64().expect("remainder below 2^64");
    while r.is_multiple_of(3) {
        r /= 3;
        v += 1;
    }
    Valuation::Finite(v)
}

pub fn val3_i64(n: i64) -> Valuation {
    val3(&BigInt::from(n))
}

/// `floor(n / d)` for possibly negative `n`.
fn floor_div(n: i64, d: i64) -> i64 {
    n.div_euclid(d)
}

/// Lower bound for `pi(a(i,j))`: `floor((3j - i - 1)/2)`.
pub fn bound_a(i: i64, j: i64) -> i64 {
    floor_div(3 * j - i - 1, 2)
}

/// Lower bound for `pi(b(i,j))`: `floor((3j - i)/2)`.
pub fn bound_b(i: i64, j: i64) -> i64 {
    floor_div(3 * j - i, 2)
}

/// Lower bound for `pi(t(i,j))`: the minimum over `1 <= k <= 3i` of
/// `floor((3k - i - 1)/2) + floor((3j - k)/2)`.
pub fn bound_t(i: i64, j: i64) -> i64 {
    (1..=3 * i).map(|k| bound_a(i, k) + bound_b(k, j)).min().expect("i >= 1")
}

/// Lower bound for `pi(d_{2 alpha - 1}(j))`: `2 alpha + floor((2j - 2)/3)`.
pub fn bound_d(alpha: i64, j: i64) -> i64 {
    2 * alpha + floor_div(2 * j - 2, 3)
}

/// A checked bound suite: the pass/fail report plus the entries where the
/// bound is attained with equality.
#[derive(Clone, Debug, Serialize)]
pub struct BoundOutcome {
    pub report: CheckReport,
    /// Nonzero entries examined.
    pub entries: usize,
    /// `(row, col)` of entries whose valuation equals the bound.
    pub tight: Vec<(i64, i64)>,
}

struct Tally {
    name: String,
    entries: usize,
    tight: Vec<(i64, i64)>,
    failure: Option<Failure>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), entries: 0, tight: Vec::new(), failure: None }
    }

    fn record(&mut self, row: i64, col: i64, value: &BigInt, bound: i64) {
        let v = val3(value);
        if v == Valuation::Infinite {
            return;
        }
        self.entries += 1;
        if !v.at_least(bound) {
            if self.failure.is_none() {
                self.failure = Some(Failure::at_entry(row, col, v, format!(">= {bound}")));
            }
        } else if bound >= 0 && v == Valuation::Finite(bound as u64) {
            self.tight.push((row, col));
        }
    }

    fn finish(self, prec: i64) -> BoundOutcome {
        BoundOutcome {
            report: CheckReport::from_outcome(self.name, prec, self.failure),
            entries: self.entries,
            tight: self.tight,
        }
    }
}

/// Checks the `(a)` or `(b)` bound on every stored entry of `m`.
pub fn check_bound_ab_on(which: Which, m: &BandMatrix) -> BoundOutcome {
    let mut tally = Tally::new(format!("bound_{}", which.label()));
    for (i, row) in m.rows() {
        for (off, v) in row.entries.iter().enumerate() {
            let (i, j) = (i as i64, row.lo + off as i64);
            let bound = match which {
                Which::A => bound_a(i, j),
                Which::B => bound_b(i, j),
            };
            tally.record(i, j, v, bound);
        }
    }
    tally.finish(m.num_rows() as i64)
}

pub fn check_bound_ab(which: Which, max_row: usize) -> Result<BoundOutcome> {
    Ok(check_bound_ab_on(which, &matrices::build_matrix(which, max_row)?))
}

/// `pi(t(i,j))` for `1 <= i <= 5`, `1 <= j <= 3`.
pub const T_BLOCK: [[u64; 3]; 5] = [[2, 2, 4], [3, 2, 4], [2, 2, 4], [0, 3, 3], [0, 2, 3]];

/// Exact comparison of the top-left valuation block of `(t)`.
pub fn check_t_block(t: &BandMatrix) -> CheckReport {
    let mut failure = None;
    'outer: for (i, expected_row) in T_BLOCK.iter().enumerate() {
        for (j, &expected) in expected_row.iter().enumerate() {
            let (i, j) = (i + 1, j as i64 + 1);
            let v = val3(&t.get(i, j));
            if v != Valuation::Finite(expected) {
                failure = Some(Failure::at_entry(i as i64, j, v, expected));
                break 'outer;
            }
        }
    }
    CheckReport::from_outcome("t_block", t.num_rows() as i64, failure)
}

/// The `(t)` bound on every entry with `i <= t.num_rows()`, plus the
/// valuation block when at least 5 rows are present.
pub fn check_bound_t_on(t: &BandMatrix) -> BoundOutcome {
    let mut tally = Tally::new("bound_t");
    for (i, row) in t.rows() {
        for (off, v) in row.entries.iter().enumerate() {
            let (i, j) = (i as i64, row.lo + off as i64);
            tally.record(i, j, v, bound_t(i, j));
        }
    }
    let mut out = tally.finish(t.num_rows() as i64);
    if t.num_rows() >= 5 {
        out.report = CheckReport::all("bound_t", [out.report, check_t_block(t)]);
    }
    out
}

pub fn check_bound_t(max_i: usize, max_j: i64) -> Result<BoundOutcome> {
    Ok(check_bound_t_on(&matrices::build_t(max_i, max_j)?))
}

/// Row labels in a failure are the odd index `2 alpha - 1`.
pub fn check_bound_d_on(ds: &[DSequence]) -> BoundOutcome {
    let mut tally = Tally::new("bound_d");
    let mut top = 0;
    for d in ds.iter().filter(|d| d.alpha % 2 == 1) {
        let alpha = (d.alpha as i64 + 1) / 2;
        for (k, v) in d.entries.iter().enumerate() {
            let j = k as i64 + 1;
            tally.record(d.alpha as i64, j, v, bound_d(alpha, j));
        }
        top = top.max(d.alpha as i64);
    }
    tally.finish(top)
}

/// The bound for `d_1, d_3, ..., d_{2 alpha_max - 1}`.
pub fn check_bound_d(alpha_max: u32) -> Result<BoundOutcome> {
    let ds = matrices::build_d(2 * alpha_max - 1)?;
    Ok(check_bound_d_on(&ds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(val3_i64(0), Valuation::Infinite);
        assert_eq!(val3_i64(9), Valuation::Finite(2));
        assert_eq!(val3_i64(-54), Valuation::Finite(3));
        assert_eq!(val3_i64(1), Valuation::Finite(0));
        assert!(Valuation::Infinite > Valuation::Finite(u64::MAX));
    }

    #[test]
    fn large_powers() {
        let p = BigInt::from(3).pow(1000) * BigInt::from(7);
        assert_eq!(val3(&p), Valuation::Finite(1000));
        assert_eq!(val3(&(p + 1)), Valuation::Finite(0));
        assert_eq!(val3(&BigInt::from(3).pow(80)), Valuation::Finite(80));
    }

    #[test]
    fn bounds_at_known_entries() {
        assert_eq!(bound_a(1, 3), 3);
        assert!(val3_i64(27).at_least(bound_a(1, 3)));
        assert_eq!(bound_b(1, 1), 1);
        assert!(Valuation::Infinite.at_least(1000));
        assert_eq!(bound_t(1, 3), 4);
        assert_eq!(bound_t(4, 1), 0);
        assert_eq!(bound_d(1, 1), 2);
    }

    #[test]
    fn matrices_respect_bounds() {
        assert!(check_bound_ab(Which::A, 12).unwrap().report.passed());
        assert!(check_bound_ab(Which::B, 12).unwrap().report.passed());
    }

    #[test]
    fn t_block_and_bound() {
        let out = check_bound_t(5, 46).unwrap();
        assert!(out.report.passed(), "{:?}", out.report);
        assert!(out.tight.contains(&(1, 3)));
        let t = matrices::build_t(4, 3).unwrap();
        assert_eq!(val3(&t.get(1, 1)), Valuation::Finite(2));
        assert_eq!(val3(&t.get(4, 1)), Valuation::Finite(0));
    }

    #[test]
    fn d_bound_small() {
        let out = check_bound_d(3).unwrap();
        assert!(out.report.passed());
        assert!(out.tight.contains(&(1, 1)));
    }

    #[test]
    fn violation_is_reported() {
        let d = DSequence { alpha: 3, entries: vec![BigInt::from(81), BigInt::from(3)] };
        let out = check_bound_d_on(&[d]);
        let f = out.report.first_failure().unwrap();
        assert_eq!((f.row, f.exponent), (Some(3), 2));
    }

    proptest! {
        #[test]
        fn multiplicative(a in 1i64..1_000_000_000, b in 1i64..1_000_000_000, sa: bool, e in 0u32..60) {
            let m = BigInt::from(if sa { -a } else { a }) * BigInt::from(3).pow(e);
            let n = BigInt::from(b);
            let sum = val3(&m).finite().unwrap() + val3(&n).finite().unwrap();
            prop_assert_eq!(val3(&(m * n)), Valuation::Finite(sum));
        }
    }
}
