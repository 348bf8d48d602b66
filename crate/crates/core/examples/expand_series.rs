//! Leading coefficients of the generator series.
//!
//! cargo run --example expand_series -- 30

use qseries::eta::SeriesName;

fn main() -> qseries::Result<()> {
    let prec: i64 = std::env::args().nth(1).map_or(16, |s| s.parse().expect("precision"));
    for name in [
        SeriesName::EulerE(1),
        SeriesName::PhiNeg(1),
        SeriesName::Psi(1),
        SeriesName::W,
        SeriesName::X,
        SeriesName::Xi,
        SeriesName::Beta,
        SeriesName::G,
    ] {
        println!("{:>10} = {}", name.key(), name.generate(prec)?);
    }
    Ok(())
}
