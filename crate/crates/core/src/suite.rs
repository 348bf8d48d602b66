//! Registry of every verification, run against one shared generator bank.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::bank::{Gen, Generators};
use crate::congruence;
use crate::dissection;
use crate::error::{Error, Result};
use crate::eta;
use crate::matrices::{self, DSequence, Which};
use crate::padic;
use crate::report::{compare_series, CheckReport, Failure};
use crate::series::LaurentSeries;

macro_rules! checks {
    ($($id:ident => $name:literal,)*) => {
        /// One registered verification.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($id,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$id,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CheckId::$id => $name,)*
                }
            }
        }
    };
}

checks! {
    PhiInv3Dissection => "phi_inv_3dissection",
    Psi3Dissection => "psi_3dissection",
    QwCubed => "qw_cubed",
    ShenIdentity => "shen_identity",
    EvenIdentity => "even_identity",
    Bilateral => "bilateral_1psi1",
    DualPhi => "dual_phi",
    DualPsi => "dual_psi",
    DualW => "dual_w",
    DualX => "dual_x",
    DualXi => "dual_xi",
    DualBeta => "dual_beta",
    DualG => "dual_g",
    BetaEvenIsG => "beta_even_is_g",
    U3Multiplicativity => "u3_multiplicativity",
    InitialRows => "initial_rows",
    PowerSums => "power_sums",
    URowsA => "u_rows_a",
    URowsB => "u_rows_b",
    DViaT => "d_via_t",
    GDRelation => "g_d_relation",
    BoundA => "bound_a",
    BoundB => "bound_b",
    BoundT => "bound_t",
    BoundD => "bound_d",
    GCongruence => "g_congruence",
    BCongruence => "b_congruence",
}

impl CheckId {
    /// Checks that read only the generator bank.
    pub fn uses_bank(self) -> bool {
        use CheckId::*;
        matches!(
            self,
            PhiInv3Dissection
                | Psi3Dissection
                | QwCubed
                | ShenIdentity
                | EvenIdentity
                | Bilateral
                | DualPhi
                | DualPsi
                | DualW
                | DualX
                | DualXi
                | DualBeta
                | DualG
                | BetaEvenIsG
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

/// Sizes of every verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Series identities hold modulo `q^prec`.
    pub prec: i64,
    /// Rows of `(a)`, `(b)` for the valuation bounds.
    pub matrix_rows: usize,
    /// Recurrence rows compared with fitted `U` images.
    pub fit_rows: usize,
    /// Rows of `(t)` for its bound (all columns are included).
    pub t_rows: usize,
    /// The `d` bound covers odd indices up to `2 d_alpha_max - 1`.
    pub d_alpha_max: u32,
    /// Largest odd index checked through `(t)`.
    pub t_path_max: u32,
    /// `g`-`d` relations for `alpha <= g_d_alpha_max`, modulo `q^g_d_prec`.
    pub g_d_alpha_max: u32,
    pub g_d_prec: i64,
    /// `(alpha, instances)` for both congruences.
    pub congruences: Vec<(u32, usize)>,
    /// Random pairs for the `U` multiplicativity check and their precision.
    pub u3_pairs: usize,
    pub u3_prec: i64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            prec: 600,
            matrix_rows: 24,
            fit_rows: 12,
            t_rows: 8,
            d_alpha_max: 5,
            t_path_max: 7,
            g_d_alpha_max: 2,
            g_d_prec: 40,
            congruences: vec![(1, 200), (2, 40)],
            u3_pairs: 50,
            u3_prec: 64,
            seed: 0x5eed,
        }
    }
}

impl SuiteConfig {
    /// Small sizes for fast runs.
    pub fn quick() -> Self {
        SuiteConfig {
            prec: 120,
            matrix_rows: 10,
            fit_rows: 6,
            t_rows: 5,
            d_alpha_max: 3,
            t_path_max: 5,
            g_d_alpha_max: 1,
            g_d_prec: 30,
            congruences: vec![(1, 30), (2, 3)],
            u3_pairs: 10,
            u3_prec: 64,
            seed: 0x5eed,
        }
    }
}

/// One finished check.
#[derive(Debug)]
pub struct Outcome {
    pub id: CheckId,
    pub result: Result<CheckReport>,
    pub duration: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.result.as_ref().is_ok_and(CheckReport::passed)
    }
}

pub struct Suite {
    config: SuiteConfig,
    bank: Generators,
    ds: Mutex<Option<Arc<Vec<DSequence>>>>,
}

impl Suite {
    pub fn new(config: SuiteConfig) -> Self {
        let bank = Generators::new(dissection::bank_prec(config.prec));
        Suite { config, bank, ds: Mutex::new(None) }
    }

    /// Uses the supplied bank, which must be at `bank_prec(config.prec)`.
    pub fn with_bank(config: SuiteConfig, bank: Generators) -> Self {
        assert_eq!(bank.prec(), dissection::bank_prec(config.prec));
        Suite { config, bank, ds: Mutex::new(None) }
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.config
    }

    pub fn bank(&self) -> &Generators {
        &self.bank
    }

    /// `d_1 ..= d_{2 d_alpha_max}`, built once.
    pub fn d_sequences(&self) -> Result<Arc<Vec<DSequence>>> {
        let mut guard = self.ds.lock().unwrap();
        if let Some(ds) = guard.as_ref() {
            return Ok(ds.clone());
        }
        let c = &self.config;
        let top = (2 * c.d_alpha_max - 1).max(c.t_path_max).max(2 * c.g_d_alpha_max);
        let ds = Arc::new(matrices::build_d(top)?);
        *guard = Some(ds.clone());
        Ok(ds)
    }

    pub fn run(&self, id: CheckId) -> Result<CheckReport> {
        use CheckId::*;
        let c = &self.config;
        let bank = &self.bank;
        let prec = c.prec;
        let report = match id {
            PhiInv3Dissection => dissection::check_phi_inv_3dissection(bank, prec)?,
            Psi3Dissection => dissection::check_psi_3dissection(bank, prec)?,
            QwCubed => dissection::check_qw_cubed(bank, prec)?,
            ShenIdentity => dissection::check_shen_identity(bank, prec)?,
            EvenIdentity => dissection::check_even_identity(bank, prec)?,
            Bilateral => dissection::check_bilateral_1psi1(bank, prec, None)?,
            DualPhi => {
                let eta = bank.eta_quotient(&[(1, 2), (2, -1)]);
                compare_series("", bank.get(Gen::PhiNeg), &eta, prec)?
            }
            DualPsi => {
                let eta = bank.eta_quotient(&[(2, 2), (1, -1)]);
                compare_series("", bank.get(Gen::Psi), &eta, prec)?
            }
            DualW => {
                let eta = bank.eta_quotient(&[(1, 1), (6, 3), (2, -1), (3, -3)]);
                compare_series("", bank.get(Gen::W), &eta, prec)?
            }
            DualX => {
                let theta = &bank.phi_neg(3).pow(4)? * &bank.get(Gen::PhiNeg).pow(-4)?;
                compare_series("", bank.get(Gen::X), &theta, prec)?
            }
            DualXi => {
                let num = &bank.get(Gen::Psi).pow(2)? * &bank.phi_neg(9);
                let den = &bank.get(Gen::PhiNeg).inv()? * &bank.psi(9).pow(-2)?;
                let theta = (&num * &den).shift(-2);
                compare_series("", bank.get(Gen::Xi), &theta, prec)?
            }
            DualBeta => {
                let other = eta::beta_form2(bank.prec());
                compare_series("", bank.get(Gen::Beta), &other, prec)?
            }
            DualG => {
                let eta = bank.eta_quotient(&[(2, 5), (1, -4)]);
                compare_series("", bank.get(Gen::G), &eta, prec)?
            }
            BetaEvenIsG => {
                let even = bank.get(Gen::Beta).dissect(2, 0);
                compare_series("", &even, bank.get(Gen::G), prec / 2)?
            }
            U3Multiplicativity => u3_multiplicativity(c.u3_pairs, c.u3_prec, c.seed),
            InitialRows => matrices::verify_initial_rows(matrices::min_fit_prec(10))?,
            PowerSums => matrices::verify_power_sums(matrices::min_fit_prec(10))?,
            URowsA => matrices::verify_u_rows(Which::A, c.fit_rows, None)?,
            URowsB => matrices::verify_u_rows(Which::B, c.fit_rows, None)?,
            DViaT => matrices::verify_d_via_t(&self.d_sequences()?, c.t_path_max)?,
            GDRelation => {
                let ds = self.d_sequences()?;
                let g = eta::g_series(matrices::g_d_required_prec(c.g_d_alpha_max, c.g_d_prec));
                let parts = (1..=c.g_d_alpha_max)
                    .map(|a| matrices::check_g_d_relation_with(a, c.g_d_prec, &g, &ds))
                    .collect::<Result<Vec<_>>>()?;
                CheckReport::all("", parts)
            }
            BoundA => padic::check_bound_ab(Which::A, c.matrix_rows)?.report,
            BoundB => padic::check_bound_ab(Which::B, c.matrix_rows)?.report,
            BoundT => {
                // full rows: row i of (t) reaches column 9i + 1
                let cols = 9 * c.t_rows as i64 + 1;
                padic::check_bound_t(c.t_rows, cols)?.report
            }
            BoundD => padic::check_bound_d_on(&self.d_sequences()?).report,
            GCongruence => {
                let top = c.congruences.iter().map(|&(a, n)| congruence::Target::G.required_prec(a, n));
                let g = eta::g_series(top.max().unwrap_or(8).max(8));
                let parts = c
                    .congruences
                    .iter()
                    .map(|&(a, n)| congruence::check_g_congruence_with(a, n, &g).map(|o| o.report))
                    .collect::<Result<Vec<_>>>()?;
                CheckReport::all("", parts)
            }
            BCongruence => {
                let top = c.congruences.iter().map(|&(a, n)| congruence::Target::Beta.required_prec(a, n));
                let p = top.max().unwrap_or(8).max(8);
                let beta = eta::beta_form1(p);
                let g = eta::g_series(p / 2 + 1);
                let parts = c
                    .congruences
                    .iter()
                    .map(|&(a, n)| congruence::check_b_congruence_with(a, n, &beta, &g).map(|o| o.report))
                    .collect::<Result<Vec<_>>>()?;
                CheckReport::all("", parts)
            }
        };
        Ok(report.renamed(id.name()))
    }

    fn timed(&self, id: CheckId) -> Outcome {
        let start = Instant::now();
        let result = self.run(id);
        Outcome { id, result, duration: start.elapsed() }
    }

    /// Runs `ids` on the worker pool; results are ordered by check name.
    pub fn run_many(&self, ids: &[CheckId]) -> Vec<Outcome> {
        let mut out: Vec<Outcome> = ids.par_iter().map(|&id| self.timed(id)).collect();
        out.sort_by_key(|o| o.id.name());
        out
    }

    pub fn run_all(&self) -> Vec<Outcome> {
        self.run_many(CheckId::ALL)
    }

    /// Only the checks that read the bank.
    pub fn run_bank_checks(&self) -> Vec<Outcome> {
        let ids: Vec<CheckId> = CheckId::ALL.iter().copied().filter(|c| c.uses_bank()).collect();
        self.run_many(&ids)
    }
}

fn random_series(rng: &mut StdRng, min_exp: i64, prec: i64) -> LaurentSeries {
    let coeffs: Vec<BigInt> =
        (min_exp..prec).map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))).collect();
    LaurentSeries::from_integers(min_exp, prec, coeffs)
}

/// `U(a(q) b(q^3)) = U(a) b` on `pairs` seeded random pairs.
pub fn u3_multiplicativity(pairs: usize, prec: i64, seed: u64) -> CheckReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failure = None;
    let mut known = i64::MAX;
    for _ in 0..pairs {
        let (ea, eb) = (rng.gen_range(-6..=3), rng.gen_range(-2..=1));
        let a = random_series(&mut rng, ea, 3 * prec);
        let b = random_series(&mut rng, eb, prec);
        let lhs = (&a * &b.subst_power(3)).u3();
        let rhs = &a.u3() * &b;
        known = known.min(lhs.prec().min(rhs.prec()));
        if let Some((e, l, r)) = lhs.first_mismatch(&rhs) {
            failure = Some(Failure::at(e, l, r));
            break;
        }
    }
    CheckReport::from_outcome("u3_multiplicativity", if pairs == 0 { 0 } else { known }, failure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_is_exhaustive_and_unique() {
        // adding a variant without listing it in ALL breaks this match
        fn listed(id: CheckId) -> bool {
            use CheckId::*;
            match id {
                PhiInv3Dissection | Psi3Dissection | QwCubed | ShenIdentity | EvenIdentity
                | Bilateral | DualPhi | DualPsi | DualW | DualX | DualXi | DualBeta | DualG
                | BetaEvenIsG | U3Multiplicativity | InitialRows | PowerSums | URowsA | URowsB
                | DViaT | GDRelation | BoundA | BoundB | BoundT | BoundD | GCongruence
                | BCongruence => CheckId::ALL.contains(&id),
            }
        }
        assert!(CheckId::ALL.iter().all(|&id| listed(id)));
        assert_eq!(CheckId::ALL.len(), 27);
        let names: HashSet<_> = CheckId::ALL.iter().map(|c| c.name()).collect();
        assert_eq!(names.len(), CheckId::ALL.len());
        for &id in CheckId::ALL {
            assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        }
        assert!("nope".parse::<CheckId>().is_err());
    }

    #[test]
    fn quick_suite_passes_sorted() {
        let suite = Suite::new(SuiteConfig::quick());
        let out = suite.run_all();
        assert_eq!(out.len(), CheckId::ALL.len());
        for o in &out {
            assert!(o.passed(), "{} {:?}", o.id, o.result);
            assert_eq!(o.result.as_ref().unwrap().name(), o.id.name());
        }
        let names: Vec<_> = out.iter().map(|o| o.id.name()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn every_generator_perturbation_is_seen() {
        let config = SuiteConfig { prec: 80, ..SuiteConfig::quick() };
        let base = Generators::new(dissection::bank_prec(config.prec));
        let mut rng = StdRng::seed_from_u64(7);
        for &g in &Gen::ALL {
            let s = base.get(g);
            let e = rng.gen_range(s.min_exp()..config.prec);
            let mut bank = Generators::new(base.prec());
            bank.perturb(g, e, 1);
            let suite = Suite::with_bank(config.clone(), bank);
            let failed: Vec<_> =
                suite.run_bank_checks().into_iter().filter(|o| !o.passed()).map(|o| o.id).collect();
            assert!(!failed.is_empty(), "{g:?} at {e} undetected");
        }
    }

    #[test]
    fn multiplicativity_small_runs() {
        assert!(u3_multiplicativity(5, 40, 1).passed());
        assert_eq!(u3_multiplicativity(0, 40, 1).prec(), 0);
    }
}
