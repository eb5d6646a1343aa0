//! Structure-constant cache.
//!
//! Entries live at `<dir>/<family>-<rank>-v<version>.json` (`gl-<n>-v<version>.json`
//! for `gl(n)`) and use the same JSON schema that custom algebra files use.
//! A missing entry is built and written; an entry that does not parse or
//! fails validation is rebuilt with a warning.

use std::fs;
use std::path::{Path, PathBuf};

use coinduce::liealg::{build_gl, build_simply_laced, load_custom, AlgebraSpec, Family, LieSuperAlgebra, FORMAT_VERSION};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheKey {
    Simple(Family, usize),
    Gl(usize),
}

impl CacheKey {
    pub fn file_name(self) -> String {
        self.file_name_for_version(FORMAT_VERSION)
    }

    pub fn file_name_for_version(self, version: u32) -> String {
        match self {
            CacheKey::Simple(f, r) => format!("{f}-{r}-v{version}.json"),
            CacheKey::Gl(n) => format!("gl-{n}-v{version}.json"),
        }
    }

    pub fn build(self) -> Result<LieSuperAlgebra, CliError> {
        match self {
            CacheKey::Simple(f, r) => build_simply_laced(f, r).map_err(|e| CliError::Validation(e.to_string())),
            CacheKey::Gl(n) if n >= 1 => Ok(build_gl(n)),
            CacheKey::Gl(_) => Err(CliError::Config("gl(n) needs n >= 1".into())),
        }
    }
}

/// How an algebra was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    Built,
    Hit,
    Rebuilt(String),
}

pub fn entry_path(dir: &Path, key: CacheKey) -> PathBuf {
    dir.join(key.file_name())
}

pub fn store(dir: &Path, key: CacheKey, alg: &LieSuperAlgebra) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = entry_path(dir, key);
    fs::write(&path, AlgebraSpec::from_algebra(alg).to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Load from the cache, building (and storing) on a miss or a bad entry.
pub fn load_or_build(dir: &Path, key: CacheKey) -> Result<(LieSuperAlgebra, CacheOutcome), CliError> {
    let path = entry_path(dir, key);
    let mut outcome = CacheOutcome::Built;
    if let Ok(text) = fs::read_to_string(&path) {
        match load_custom(&text) {
            Ok(alg) => return Ok((alg, CacheOutcome::Hit)),
            Err(e) => {
                let msg = format!("cache entry {} is unusable, rebuilding: {e}", path.display());
                eprintln!("warning: {msg}");
                outcome = CacheOutcome::Rebuilt(msg);
            }
        }
    }
    let alg = key.build()?;
    store(dir, key, &alg)?;
    Ok((alg, outcome))
}
