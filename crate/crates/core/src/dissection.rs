//! The standalone identities: the two 3-dissections, the `q w(q)^3`
//! formula, the theta identity used in its proof, the even part of
//! `beta(q)`, and the bilateral-sum specialization behind that even part.

use num_rational::BigRational;

use crate::bank::{Gen, Generators};
use crate::error::{Error, Result};
use crate::report::{compare_series, CheckReport};
use crate::series::LaurentSeries;

/// Bank precision used for checks requested at `prec`.
pub fn bank_prec(prec: i64) -> i64 {
    prec + 2
}

fn require(prec: i64, min: i64, what: &str) -> Result<()> {
    if prec < min {
        return Err(Error::InvalidArgument(format!("{what} needs prec >= {min}, got {prec}")));
    }
    Ok(())
}

fn eighth() -> BigRational {
    BigRational::new(1.into(), 8.into())
}

/// `1 + 2 q w(q^3) + 4 q^2 w(q^3)^2`
fn phi_inv_bracket(bank: &Generators) -> LaurentSeries {
    let w3 = bank.w(3);
    let p = bank.prec();
    let one = LaurentSeries::one(p);
    let lin = w3.scale_int(2).shift(1);
    let quad = w3.pow(2).unwrap().scale_int(4).shift(2);
    (&(&one + &lin) + &quad).truncated(p)
}

/// `1/phi(-q) = phi(-q^9)^3 / phi(-q^3)^4 (1 + 2q w(q^3) + 4q^2 w(q^3)^2)`.
pub fn check_phi_inv_3dissection(bank: &Generators, prec: i64) -> Result<CheckReport> {
    require(prec, 30, "phi_inv_3dissection")?;
    let lhs = bank.get(Gen::PhiNeg).inv()?;
    let rhs = &(&bank.phi_neg(9).pow(3)? * &bank.phi_neg(3).pow(-4)?) * &phi_inv_bracket(bank);
    compare_series("phi_inv_3dissection", &lhs, &rhs, prec)
}

/// `psi(q) = psi(q^9) (1/w(q^3) + q)`.
pub fn check_psi_3dissection(bank: &Generators, prec: i64) -> Result<CheckReport> {
    require(prec, 30, "psi_3dissection")?;
    let p = bank.prec();
    let bracket = &bank.w(3).inv()? + &LaurentSeries::monomial(1, 1.into(), p);
    let rhs = &bank.psi(9) * &bracket;
    compare_series("psi_3dissection", bank.get(Gen::Psi), &rhs, prec)
}

/// `phi(-q)^4 / phi(-q^3)^4`, the reciprocal of `X` in theta form.
fn phi_ratio4(bank: &Generators) -> Result<LaurentSeries> {
    Ok(&bank.get(Gen::PhiNeg).pow(4)? * &bank.phi_neg(3).pow(-4)?)
}

/// `q w(q)^3 = (1 - phi(-q)^4 / phi(-q^3)^4) / 8`.
pub fn check_qw_cubed(bank: &Generators, prec: i64) -> Result<CheckReport> {
    require(prec, 8, "qw_cubed")?;
    let lhs = bank.get(Gen::W).pow(3)?.shift(1);
    let rhs = (&LaurentSeries::one(bank.prec()) - &phi_ratio4(bank)?).scale(&eighth());
    compare_series("qw_cubed", &lhs, &rhs, prec)
}

/// `psi(q^3)^3 / psi(q) = (phi(-q^3)^3/phi(-q) - phi(-q)^3/phi(-q^3)) / (8q)`.
pub fn check_shen_identity(bank: &Generators, prec: i64) -> Result<CheckReport> {
    require(prec, 8, "shen_identity")?;
    let phi = bank.get(Gen::PhiNeg);
    let phi3 = bank.phi_neg(3);
    let lhs = &bank.psi(3).pow(3)? * &bank.get(Gen::Psi).inv()?;
    let diff = &(&phi3.pow(3)? * &phi.inv()?) - &(&phi.pow(3)? * &phi3.inv()?);
    let rhs = diff.shift(-1).scale(&eighth());
    compare_series("shen_identity", &lhs, &rhs, prec)
}

/// `(beta(q) + beta(-q)) / 2 = E(q^4)^5 / E(q^2)^4`.
pub fn check_even_identity(bank: &Generators, prec: i64) -> Result<CheckReport> {
    require(prec, 8, "even_identity")?;
    let beta = bank.get(Gen::Beta);
    let lhs = (beta + &beta.negate_q()).scale(&BigRational::new(1.into(), 2.into()));
    let rhs = bank.eta_quotient(&[(4, 5), (2, -4)]);
    compare_series("even_identity", &lhs, &rhs, prec)
}

/// Number of bilateral terms on each side whose contribution can reach
/// below `q^prec`.
///
/// The index-`n` term (`n >= 0`) starts at `q^n`; the index-`(-n)` term
/// (`n >= 1`) starts at `q^(n-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BilateralRange {
    pub nonnegative: usize,
    pub negative: usize,
}

impl BilateralRange {
    pub fn required(prec: i64) -> Self {
        let p = prec.max(0) as usize;
        BilateralRange { nonnegative: p, negative: p }
    }
}

/// Lowest exponent of the index-`n` term of the specialized bilateral sum.
pub fn bilateral_term_order(n: i64) -> i64 {
    if n >= 0 {
        n
    } else {
        -n - 1
    }
}

/// `(-q;q^2)_n q^n / (q^3;q^2)_n` for `n = 0 .. count`, summed.
fn bilateral_nonnegative(count: usize, prec: i64) -> LaurentSeries {
    let mut term = LaurentSeries::one(prec);
    let mut sum = term.clone();
    for n in 1..count as i64 {
        term = term.shift(1).truncated(prec);
        term.mul_one_plus(1, 2 * n - 1);
        term.div_one_plus(-1, 2 * n + 1);
        sum.add_assign(&term);
    }
    sum
}

/// One negative-index term obtained from its predecessor by generic Laurent
/// arithmetic: with `(a;q^2)_{-n} = 1 / prod_{k=1..n} (1 - a q^{-2k})`,
/// term(-n) = term(-(n-1)) q^-1 (1 - q^{3-2n}) / (1 + q^{1-2n}).
pub(crate) fn bilateral_negative_step(prev: &LaurentSeries, n: i64) -> Result<LaurentSeries> {
    let room = prev.prec() - prev.min_exp() + 4 * n + 8;
    let numer = LaurentSeries::from_terms((3 - 2 * n).min(0), room, &[(3 - 2 * n, -1), (0, 1)])
        .normalized();
    let denom = LaurentSeries::from_terms(1 - 2 * n, room, &[(1 - 2 * n, 1), (0, 1)]);
    let step = &prev.clone().shift(-1) * &numer;
    Ok(&step * &denom.inv()?)
}

/// `sum_{n=1..count} (-q;q^2)_{-n} q^{-n} / (q^3;q^2)_{-n}`.
fn bilateral_negative(count: usize, prec: i64) -> Result<LaurentSeries> {
    let mut sum = LaurentSeries::zero(prec);
    // term(0) = 1, known far enough that every later term reaches q^prec
    let mut term = LaurentSeries::one(prec + 2);
    for n in 1..=count as i64 {
        term = bilateral_negative_step(&term, n)?;
        if term.prec() < prec {
            return Err(Error::InsufficientPrecision { required: prec, available: term.prec() });
        }
        sum = &sum + &term.clone().truncated(prec);
    }
    Ok(sum)
}

/// `(q^2, -q^2, -q^2, -1; q^2)_inf / (q^3, -q, q, -q; q^2)_inf`.
fn bilateral_product(prec: i64) -> LaurentSeries {
    let mut s = LaurentSeries::one(prec).scale_int(2); // the (1 + 1) factor of (-1;q^2)_inf
    let mut k = 2;
    while k < prec {
        s.mul_one_plus(-1, k); // (q^2;q^2)
        s.mul_one_plus(1, k); // (-q^2;q^2)
        s.mul_one_plus(1, k); // (-q^2;q^2)
        s.mul_one_plus(1, k); // (-1;q^2) without its first factor
        k += 2;
    }
    let mut k = 1;
    while k < prec {
        if k >= 3 {
            s.div_one_plus(-1, k); // (q^3;q^2)
        }
        s.div_one_plus(1, k); // (-q;q^2)
        s.div_one_plus(-1, k); // (q;q^2)
        s.div_one_plus(1, k); // (-q;q^2)
        k += 2;
    }
    s
}

/// `sum_n (q;q^2)_n (-q)^n / (-q;q^2)_{n+1}`, the conjugate half of the split.
fn conjugate_sum(prec: i64) -> LaurentSeries {
    let mut term = LaurentSeries::one(prec);
    term.div_one_plus(1, 1);
    let mut sum = term.clone();
    for n in 1..prec {
        term = term.shift(1).truncated(prec).scale_int(-1);
        term.mul_one_plus(-1, 2 * n - 1);
        term.div_one_plus(1, 2 * n + 1);
        sum.add_assign(&term);
    }
    sum
}

/// The bilateral specialization `a = -q, b = q^3, z = q` (base `q^2`):
/// the truncated two-sided sum equals its product side, the nonnegative
/// half is `(1-q) beta(q)`, the negative half is `(1-q)` times the
/// conjugate sum, the conjugate sum is `beta(-q)`, and the product side is
/// `2 (1-q) E(q^4)^5 / E(q^2)^4`.
pub fn check_bilateral_1psi1(
    bank: &Generators,
    prec: i64,
    range: Option<BilateralRange>,
) -> Result<CheckReport> {
    require(prec, 8, "bilateral_1psi1")?;
    let needed = BilateralRange::required(prec);
    let range = range.unwrap_or(needed);
    if range.nonnegative < needed.nonnegative {
        return Err(Error::InsufficientRange {
            side: "nonnegative",
            needed: needed.nonnegative,
            given: range.nonnegative,
        });
    }
    if range.negative < needed.negative {
        return Err(Error::InsufficientRange {
            side: "negative",
            needed: needed.negative,
            given: range.negative,
        });
    }
    // the sums are exact below q^count on each side
    let p = bank.prec().min(range.nonnegative as i64).min(range.negative as i64);
    let pos = bilateral_nonnegative(range.nonnegative, p);
    let neg = bilateral_negative(range.negative, p)?;
    let product = bilateral_product(p);
    let one_minus_q = LaurentSeries::from_terms(0, p, &[(0, 1), (1, -1)]);
    let beta = &bank.get(Gen::Beta).clone().truncated(p);
    let conj = conjugate_sum(p);

    let two_sided = compare_series("bilateral_sum_vs_product", &(&pos + &neg), &product, prec)?;
    let pos_half = compare_series("nonnegative_half", &pos, &(&one_minus_q * beta), prec)?;
    let neg_half = compare_series("negative_half", &neg, &(&one_minus_q * &conj), prec)?;
    let conj_is_beta_neg = compare_series("conjugate_sum", &conj, &beta.negate_q(), prec)?;
    let eta_form = bank.eta_quotient(&[(4, 5), (2, -4)]).scale_int(2);
    let product_form = compare_series("product_side", &product, &(&one_minus_q * &eta_form), prec)?;
    Ok(CheckReport::all(
        "bilateral_1psi1",
        [two_sided, pos_half, neg_half, conj_is_beta_neg, product_form],
    ))
}

/// Dissection component helper used in tests and examples: the `r`-th
/// 3-dissection component of `1/phi(-q)` predicted by the bracket.
pub fn phi_inv_component(bank: &Generators, r: i64) -> Result<LaurentSeries> {
    let w = bank.get(Gen::W);
    let base = &bank.phi_neg(3).pow(3)? * &bank.get(Gen::PhiNeg).pow(-4)?;
    let coeff = match r {
        0 => LaurentSeries::one(bank.prec()),
        1 => w.scale_int(2),
        2 => w.pow(2)?.scale_int(4),
        _ => return Err(Error::InvalidArgument(format!("residue {r} not in 0..3"))),
    };
    Ok(&base * &coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta;
    use num_bigint::BigInt;

    fn unit(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn bank(prec: i64) -> Generators {
        Generators::new(bank_prec(prec))
    }

    #[test]
    fn identities_at_200() {
        let b = bank(200);
        for r in [
            check_phi_inv_3dissection(&b, 200).unwrap(),
            check_psi_3dissection(&b, 200).unwrap(),
            check_qw_cubed(&b, 200).unwrap(),
            check_shen_identity(&b, 200).unwrap(),
            check_even_identity(&b, 200).unwrap(),
            check_bilateral_1psi1(&b, 200, None).unwrap(),
        ] {
            assert!(r.passed(), "{r:?}");
            assert!(r.prec() >= 200, "{r:?}");
        }
    }

    #[test]
    fn constant_terms() {
        let b = bank(40);
        let lhs = b.get(Gen::PhiNeg).inv().unwrap();
        assert_eq!(lhs.coeff(0), Some(unit(1)));
        assert_eq!(b.get(Gen::Psi).coeff(0), Some(unit(1)));
        let rhs = &LaurentSeries::one(b.prec()) - &phi_ratio4(&b).unwrap();
        assert_eq!(rhs.coeff(0), Some(unit(0)));
    }

    #[test]
    fn phi_inverse_components() {
        // each residue class of 1/phi(-q) is the matching bracket term at q -> q^(1/3)
        let b = bank(150);
        let lhs = b.get(Gen::PhiNeg).inv().unwrap();
        for r in 0..3 {
            let component = lhs.dissect(3, r);
            let predicted = phi_inv_component(&b, r).unwrap();
            assert!(component.agrees_with(&predicted), "residue {r}");
        }
    }

    #[test]
    fn psi_has_no_class_two() {
        let psi = eta::psi_theta(1, 300);
        let d = psi.dissect(3, 2);
        assert!(eta::is_zero_series(&d));
        // triangular numbers are 0 or 1 mod 3
        assert!((0..30).all(|n: i64| (n * (n + 1) / 2) % 3 != 2));
    }

    #[test]
    fn qw_cubed_rearranged() {
        // 8 q w^3 + phi(-q)^4/phi(-q^3)^4 = 1
        let b = bank(100);
        let lhs = &b.get(Gen::W).pow(3).unwrap().shift(1).scale_int(8) + &phi_ratio4(&b).unwrap();
        assert!(lhs.agrees_with(&LaurentSeries::one(100)));
    }

    #[test]
    fn shen_sides_start_at_constant_one() {
        let b = bank(60);
        let phi = b.get(Gen::PhiNeg);
        let phi3 = b.phi_neg(3);
        let lhs = &b.psi(3).pow(3).unwrap() * &b.get(Gen::Psi).inv().unwrap();
        let diff = &(&phi3.pow(3).unwrap() * &phi.inv().unwrap())
            - &(&phi.pow(3).unwrap() * &phi3.inv().unwrap());
        let rhs = diff.shift(-1).scale(&eighth()).normalized();
        assert_eq!(lhs.valuation(), Some(0));
        assert_eq!(rhs.valuation(), Some(0));
        assert_eq!(lhs.coeff(0), Some(unit(1)));
    }

    #[test]
    fn even_part_structure() {
        let b = bank(80);
        let beta = b.get(Gen::Beta);
        let even = (beta + &beta.negate_q()).scale(&BigRational::new(1.into(), 2.into()));
        for n in (1..80).step_by(2) {
            assert_eq!(even.coeff(n), Some(unit(0)));
        }
        let g = eta::g_series(5);
        assert_eq!(even.coeff(2), g.coeff(1));
    }

    #[test]
    fn bilateral_term_orders() {
        let zero = bilateral_nonnegative(1, 10);
        assert!(zero.agrees_with(&LaurentSeries::one(10)));
        let mut term = LaurentSeries::one(40);
        for n in 1..=6 {
            term = bilateral_negative_step(&term, n).unwrap();
            assert_eq!(term.valuation(), Some(bilateral_term_order(-n)), "n = -{n}");
        }
        // index -1: q^-1 (1 - q) / (1 + q^-1) = (1 - q) / (1 + q)
        let t1 = bilateral_negative_step(&LaurentSeries::one(20), 1).unwrap();
        let mut expected = LaurentSeries::from_terms(0, 20, &[(0, 1), (1, -1)]);
        expected.div_one_plus(1, 1);
        assert!(t1.agrees_with(&expected));
    }

    #[test]
    fn bilateral_rejects_short_range() {
        let b = bank(50);
        let short = BilateralRange { nonnegative: 50, negative: 10 };
        let err = check_bilateral_1psi1(&b, 50, Some(short)).unwrap_err();
        assert!(matches!(err, Error::InsufficientRange { side: "negative", needed: 50, given: 10 }));
    }

    #[test]
    fn perturbation_is_localized() {
        let mut b = bank(100);
        b.perturb(Gen::W, 37, 1);
        let r = check_qw_cubed(&b, 100).unwrap();
        assert!(!r.passed());
        // q w^3 first changes at exponent 1 + 37
        assert_eq!(r.first_failure().unwrap().exponent, 38);
    }
}
