//! A shared set of generator series at one precision.
//!
//! Identity checks read their inputs from a [`Generators`] bank instead of
//! regenerating them, so a single perturbed coefficient in the bank is seen
//! by every check that consumes it. Each stored series comes from exactly
//! one construction; the dual-construction checks in [`crate::suite`]
//! rebuild the other side from the bank's Euler product.

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::eta;
use crate::series::LaurentSeries;

/// Series held by a [`Generators`] bank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    /// `E(q)`, pentagonal expansion.
    Euler,
    /// `phi(-q)`, theta sum.
    PhiNeg,
    /// `psi(q)`, theta sum.
    Psi,
    /// `w(q)`, eta quotient.
    W,
    /// `X`, eta quotient.
    X,
    /// `xi`, eta quotient.
    Xi,
    /// `beta(q)`, first defining sum.
    Beta,
    /// `sum g(n) q^n`, eta quotient.
    G,
}

impl Gen {
    pub const ALL: [Gen; 8] =
        [Gen::Euler, Gen::PhiNeg, Gen::Psi, Gen::W, Gen::X, Gen::Xi, Gen::Beta, Gen::G];

    fn index(self) -> usize {
        match self {
            Gen::Euler => 0,
            Gen::PhiNeg => 1,
            Gen::Psi => 2,
            Gen::W => 3,
            Gen::X => 4,
            Gen::Xi => 5,
            Gen::Beta => 6,
            Gen::G => 7,
        }
    }

    fn build(self, prec: i64) -> LaurentSeries {
        match self {
            Gen::Euler => eta::euler_e(1, prec),
            Gen::PhiNeg => eta::phi_neg_theta(1, prec),
            Gen::Psi => eta::psi_theta(1, prec),
            Gen::W => eta::series_w(prec),
            Gen::X => eta::series_x_eta(prec),
            Gen::Xi => eta::series_xi_eta(prec),
            Gen::Beta => eta::beta_form1(prec),
            Gen::G => eta::g_series(prec),
        }
    }
}

/// Lazily built generators, all known modulo `q^prec`.
pub struct Generators {
    prec: i64,
    slots: [OnceLock<LaurentSeries>; 8],
}

impl Generators {
    pub fn new(prec: i64) -> Self {
        assert!(prec >= 8, "generator bank needs prec >= 8, got {prec}");
        Generators { prec, slots: Default::default() }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn get(&self, g: Gen) -> &LaurentSeries {
        self.slots[g.index()].get_or_init(|| g.build(self.prec))
    }

    /// Replaces one stored series, e.g. with a deliberately corrupted copy.
    pub fn set(&mut self, g: Gen, series: LaurentSeries) {
        let slot = OnceLock::new();
        slot.set(series).expect("fresh cell");
        self.slots[g.index()] = slot;
    }

    /// Adds `delta` to the coefficient of `q^exponent` in the stored series.
    pub fn perturb(&mut self, g: Gen, exponent: i64, delta: i64) {
        let s = self.get(g);
        assert!(s.is_integral() && exponent >= s.min_exp() && exponent < s.prec());
        let mut coeffs = s.numerators().to_vec();
        coeffs[(exponent - s.min_exp()) as usize] += BigInt::from(delta);
        let changed = LaurentSeries::from_integers(s.min_exp(), s.prec(), coeffs);
        self.set(g, changed);
    }

    /// `E(q^k)` derived from the stored `E(q)`.
    pub fn euler(&self, k: i64) -> LaurentSeries {
        self.get(Gen::Euler).subst_power(k).truncated(self.prec)
    }

    /// `phi(-q^k)` derived from the stored `phi(-q)`.
    pub fn phi_neg(&self, k: i64) -> LaurentSeries {
        self.get(Gen::PhiNeg).subst_power(k).truncated(self.prec)
    }

    /// `psi(q^k)` derived from the stored `psi(q)`.
    pub fn psi(&self, k: i64) -> LaurentSeries {
        self.get(Gen::Psi).subst_power(k).truncated(self.prec)
    }

    /// `w(q^k)` derived from the stored `w(q)`.
    pub fn w(&self, k: i64) -> LaurentSeries {
        self.get(Gen::W).subst_power(k).truncated(self.prec)
    }

    /// `prod E(q^k)^e` from the stored `E(q)`.
    pub fn eta_quotient(&self, factors: &[(i64, i64)]) -> LaurentSeries {
        let mut acc = LaurentSeries::one(self.prec);
        for &(k, e) in factors {
            acc = &acc * &self.euler(k).pow(e).expect("unit constant term");
        }
        acc
    }
}
