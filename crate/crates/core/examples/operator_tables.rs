//! `U(X^i)` and `U(xi X^i)` as polynomials in `X`, and the power sums of
//! the conjugates of `X`.

use qseries::matrices::{self, Which};

fn main() -> qseries::Result<()> {
    let rows: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("row count"));
    let a: Vec<usize> = (1..=rows).collect();
    let b: Vec<usize> = (0..=rows).collect();
    for (i, p) in a.iter().zip(matrices::fit_rows(Which::A, &a, None)?) {
        println!("U(X^{i}) = {p}");
    }
    for (i, p) in b.iter().zip(matrices::fit_rows(Which::B, &b, None)?) {
        println!("U(xi X^{i}) = {p}");
    }

    let prec = matrices::min_fit_prec(10);
    let [s1, s2, s3] = matrices::power_sum_sigmas(prec)?;
    println!("sigma_1 = {s1}\nsigma_2 = {s2}\nsigma_3 = {s3}");
    println!("{:?}", matrices::verify_initial_rows(prec)?);
    Ok(())
}
