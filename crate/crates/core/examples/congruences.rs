//! Minimum 3-adic valuations along the congruence progressions.
//!
//! cargo run --release --example congruences -- 3 20

use qseries::congruence::{self, Target};

fn main() -> qseries::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha_max: u32 = args.next().map_or(2, |s| s.parse().expect("alpha"));
    let count: usize = args.next().map_or(40, |s| s.parse().expect("count"));
    for alpha in 1..=alpha_max {
        for target in [Target::Beta, Target::G] {
            let (stride, offset) = target.progression(alpha);
            let table = congruence::scan_minimum_valuations(target, alpha, count)?;
            println!(
                "{target:?}({stride}n + {offset}), n < {count}: min val3 = {:?}, sharp at {} instances",
                table.minimum,
                table.sharp.len()
            );
        }
        let out = congruence::check_b_congruence(alpha, count)?;
        println!("  {:?}", out.report);
    }
    Ok(())
}
