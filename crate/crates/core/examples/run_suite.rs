//! Every registered check, as a table.

use qseries::suite::{Suite, SuiteConfig};

fn main() {
    let full = std::env::args().any(|a| a == "--full");
    let config = if full { SuiteConfig::default() } else { SuiteConfig::quick() };
    let suite = Suite::new(config);
    let mut failed = 0;
    for o in suite.run_all() {
        let status = match &o.result {
            Ok(r) if r.passed() => "pass".to_string(),
            Ok(r) => format!("FAIL {:?}", r.first_failure()),
            Err(e) => format!("ERROR {e}"),
        };
        failed += usize::from(!o.passed());
        println!("{:<22} {:>8.1?} {status}", o.id.name(), o.duration);
    }
    std::process::exit(i32::from(failed > 0));
}
