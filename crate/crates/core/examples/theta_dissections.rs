//! The series identities, all read from one generator bank.

use qseries::bank::Generators;
use qseries::dissection::{self, bank_prec};

fn main() -> qseries::Result<()> {
    let prec: i64 = std::env::args().nth(1).map_or(600, |s| s.parse().expect("precision"));
    let bank = Generators::new(bank_prec(prec));
    let reports = [
        dissection::check_phi_inv_3dissection(&bank, prec)?,
        dissection::check_psi_3dissection(&bank, prec)?,
        dissection::check_qw_cubed(&bank, prec)?,
        dissection::check_shen_identity(&bank, prec)?,
        dissection::check_even_identity(&bank, prec)?,
        dissection::check_bilateral_1psi1(&bank, prec, None)?,
    ];
    for r in &reports {
        let verdict = if r.passed() { "ok" } else { "FAILED" };
        println!("{:<22} mod q^{:<5} {verdict}", r.name(), r.prec());
        if let Some(f) = r.first_failure() {
            println!("    first difference at q^{}: {} vs {}", f.exponent, f.lhs, f.rhs);
        }
    }

    // the components of 1/phi(-q) by exponent class mod 3
    for r in 0..3 {
        let c = dissection::phi_inv_component(&bank, r)?.truncated(8);
        println!("1/phi(-q), class {r}: {c}");
    }
    Ok(())
}
