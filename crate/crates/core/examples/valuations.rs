//! 3-adic valuations of the matrix entries and of `d_alpha`, with the
//! positions where each bound is attained.

use qseries::matrices::{self, Which};
use qseries::padic::{self, val3};

fn main() -> qseries::Result<()> {
    let alphas: u32 = std::env::args().nth(1).map_or(3, |s| s.parse().expect("alpha count"));

    let t = matrices::build_t(5, 46)?;
    println!("pi(t(i,j)), i <= 5, j <= 3:");
    for i in 1..=5 {
        let row: Vec<String> = (1..=3).map(|j| val3(&t.get(i, j)).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    let outcomes = [
        padic::check_bound_ab(Which::A, 24)?,
        padic::check_bound_ab(Which::B, 24)?,
        padic::check_bound_t_on(&t),
        padic::check_bound_d(alphas)?,
    ];
    for o in &outcomes {
        let head: Vec<_> = o.tight.iter().take(6).collect();
        println!(
            "{:<8} passed={} entries={} tight={} e.g. {head:?}",
            o.report.name(),
            o.report.passed(),
            o.entries,
            o.tight.len()
        );
    }
    Ok(())
}
