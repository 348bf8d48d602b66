//! Stores `beta(q)` in a coefficient cache and reads it back.

use qseries::cache::{Cache, CACHE_DIR_VAR};
use qseries::eta::SeriesName;

fn main() -> qseries::Result<()> {
    let dir = tempfile::tempdir()?;
    let cache = Cache::from_env().unwrap_or_else(|| Cache::new(dir.path()));
    println!("cache directory: {} (override with {CACHE_DIR_VAR})", cache.dir().display());

    let (first, src) = cache.load_or_compute(SeriesName::Beta, 600)?;
    println!("first request: {src:?}");
    let (second, src) = cache.load_or_compute(SeriesName::Beta, 600)?;
    println!("second request: {src:?}, identical: {}", first.agrees_with(&second));
    let (_, src) = cache.load_or_compute(SeriesName::Beta, 900)?;
    println!("larger request: {src:?}");
    println!("file: {}", cache.path(SeriesName::Beta).display());
    Ok(())
}
