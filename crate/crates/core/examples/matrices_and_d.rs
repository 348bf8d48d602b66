//! Rows of `(a)`, `(b)`, `(t)` from the recurrence, and the sequences `d_alpha`.

use qseries::matrices::{self, Which};

fn main() -> qseries::Result<()> {
    let alpha_max: u32 = std::env::args().nth(1).map_or(6, |s| s.parse().expect("alpha"));

    let a = matrices::build_matrix(Which::A, 6)?;
    let b = matrices::build_matrix(Which::B, 6)?;
    for m in [&a, &b] {
        for (i, row) in m.rows().take(4) {
            println!("{}({i}, {}..={}) = {:?}", m.name(), row.lo, row.hi(), row.entries);
        }
    }

    let t = matrices::build_t(2, 19)?;
    for (i, row) in t.rows() {
        println!("t({i}, {}..={}) = {:?}", row.lo, row.hi(), row.entries);
    }

    let ds = matrices::build_d(alpha_max)?;
    for d in &ds {
        let shown: Vec<String> = d.entries.iter().take(4).map(ToString::to_string).collect();
        println!("d_{}: support {}, starts {}", d.alpha, d.support(), shown.join(", "));
    }
    println!("{:?}", matrices::verify_d_via_t(&ds, alpha_max.min(7))?);
    println!("{:?}", matrices::check_g_d_relation(1, 40)?);
    Ok(())
}
