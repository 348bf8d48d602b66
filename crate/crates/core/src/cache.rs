//! On-disk coefficient cache.
//!
//! One JSON file per series, `{name, prec, min_exp, coeffs}` with the
//! coefficients as decimal strings. Every load re-derives 16 randomly
//! chosen coefficients; any disagreement or malformed file is an error.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::SeriesName;
use crate::series::LaurentSeries;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_VAR: &str = "QSERIES_CACHE_DIR";

/// Coefficients re-derived on each load.
pub const SAMPLES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub name: String,
    pub prec: i64,
    pub min_exp: i64,
    pub coeffs: Vec<String>,
}

impl CacheEntry {
    pub fn new(name: SeriesName, s: &LaurentSeries) -> Self {
        CacheEntry {
            name: name.key(),
            prec: s.prec(),
            min_exp: s.min_exp(),
            coeffs: s.to_decimal_strings(),
        }
    }

    pub fn to_series(&self) -> Result<LaurentSeries> {
        LaurentSeries::from_decimal_strings(self.min_exp, self.prec, &self.coeffs)
    }
}

/// How a request was served.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Hit,
    /// No file, or a file with too few coefficients; recomputed and written.
    Computed,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The cache named by `QSERIES_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_VAR).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: SeriesName) -> PathBuf {
        self.dir.join(format!("{}.json", name.key()))
    }

    fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
        Error::CacheCorrupt { path: path.display().to_string(), reason: reason.into() }
    }

    fn read(&self, name: SeriesName) -> Result<Option<LaurentSeries>> {
        let path = self.path(name);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: CacheEntry =
            serde_json::from_str(&text).map_err(|e| Self::corrupt(&path, e.to_string()))?;
        if entry.name != name.key() {
            return Err(Self::corrupt(&path, format!("holds {:?}", entry.name)));
        }
        let s = entry.to_series().map_err(|e| Self::corrupt(&path, e.to_string()))?;
        if !s.is_integral() {
            return Err(Self::corrupt(&path, "non-integral coefficients"));
        }
        Ok(Some(s))
    }

    /// Writes through a temporary file so readers never see a partial entry.
    pub fn store(&self, name: SeriesName, s: &LaurentSeries) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(name);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&CacheEntry::new(name, s))?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Recomputes the series at one more than the largest sampled exponent
    /// and compares the sampled coefficients.
    fn spot_check(&self, name: SeriesName, cached: &LaurentSeries, prec: i64) -> Result<()> {
        let lo = cached.min_exp();
        let span = (prec - lo) as usize;
        let mut picks: Vec<i64> = sample(&mut rand::thread_rng(), span, SAMPLES.min(span))
            .into_iter()
            .map(|k| lo + k as i64)
            .collect();
        picks.sort_unstable();
        let Some(&top) = picks.last() else { return Ok(()) };
        let fresh = name.generate(top + 1)?;
        for e in picks {
            let (c, f) = (cached.coeff(e), fresh.coeff(e));
            if c != f {
                return Err(Self::corrupt(
                    &self.path(name),
                    format!("coefficient of q^{e}: cached {c:?}, recomputed {f:?}"),
                ));
            }
        }
        Ok(())
    }

    /// The series modulo `q^prec`, from the cache when it holds enough
    /// coefficients, otherwise computed and written back.
    pub fn load_or_compute(&self, name: SeriesName, prec: i64) -> Result<(LaurentSeries, Source)> {
        match self.read(name)? {
            Some(cached) if cached.prec() >= prec => {
                self.spot_check(name, &cached, prec)?;
                Ok((cached.truncated(prec), Source::Hit))
            }
            _ => {
                let s = name.generate(prec)?;
                self.store(name, &s)?;
                Ok((s, Source::Computed))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_policy() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (a, src) = cache.load_or_compute(SeriesName::X, 50).unwrap();
        assert_eq!(src, Source::Computed);
        let (b, src) = cache.load_or_compute(SeriesName::X, 40).unwrap();
        assert_eq!(src, Source::Hit);
        assert!(b.agrees_with(&a) && b.prec() == 40);
        let (c, src) = cache.load_or_compute(SeriesName::X, 80).unwrap();
        assert_eq!(src, Source::Computed);
        assert_eq!(c.prec(), 80);
        assert_eq!(cache.read(SeriesName::X).unwrap().unwrap().prec(), 80);
    }

    #[test]
    fn laurent_entries_keep_min_exp() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (a, _) = cache.load_or_compute(SeriesName::Xi, 30).unwrap();
        let (b, src) = cache.load_or_compute(SeriesName::Xi, 30).unwrap();
        assert_eq!(src, Source::Hit);
        assert!(a.agrees_with(&b) && a.prec() == b.prec());
        assert_eq!(b.min_exp(), -2);
    }

    #[test]
    fn corruption_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let path = cache.path(SeriesName::G);
        fs::write(&path, "{not json").unwrap();
        assert!(matches!(cache.load_or_compute(SeriesName::G, 10), Err(Error::CacheCorrupt { .. })));

        // every coefficient wrong, so any sample sees it
        let s = SeriesName::G.generate(20).unwrap();
        let bad = &s + &LaurentSeries::from_integers(0, 20, vec![1.into(); 20]);
        cache.store(SeriesName::G, &bad).unwrap();
        assert!(matches!(cache.load_or_compute(SeriesName::G, 20), Err(Error::CacheCorrupt { .. })));

        let mut entry = CacheEntry::new(SeriesName::G, &s);
        entry.name = "beta".into();
        fs::write(&path, serde_json::to_string(&entry).unwrap()).unwrap();
        assert!(matches!(cache.load_or_compute(SeriesName::G, 20), Err(Error::CacheCorrupt { .. })));
    }
}
