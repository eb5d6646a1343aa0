//! Job configuration: a TOML file plus command-line overrides.
//!
//! ```toml
//! algebra = "A:1"            # family:rank, "gl:n", or "custom:path.json"
//! decomp = "triangular"      # or "custom:path.json"
//! module = "coinduced"       # or "induced"
//! representation = "symbolic" # "adjoint", "1, -1/2, 3", or "custom:path.json"
//! engine = "series"          # "graph" or "both"
//! format = "tex"             # "structured" or "stats-only"
//! out = "out"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use coinduce::liealg::Family;
use coinduce::realize::Side;
use coinduce::Scalar;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraChoice {
    Simple(Family, usize),
    Gl(usize),
    Custom(PathBuf),
}

impl FromStr for AlgebraChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (head, tail) = s.split_once(':').ok_or_else(|| format!("algebra `{s}`: expected KIND:ARG"))?;
        match head.trim() {
            "gl" => tail.trim().parse().map(AlgebraChoice::Gl).map_err(|e| format!("algebra `{s}`: {e}")),
            "custom" => Ok(AlgebraChoice::Custom(PathBuf::from(tail.trim()))),
            fam => {
                let family: Family = fam.parse()?;
                let rank = tail.trim().parse().map_err(|e| format!("algebra `{s}`: {e}"))?;
                Ok(AlgebraChoice::Simple(family, rank))
            }
        }
    }
}

impl fmt::Display for AlgebraChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraChoice::Simple(fam, r) => write!(f, "{fam}:{r}"),
            AlgebraChoice::Gl(n) => write!(f, "gl:{n}"),
            AlgebraChoice::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompChoice {
    Triangular,
    /// JSON file `{"minus": [...], "h": [...]}` of vectors written with labels.
    Custom(PathBuf),
}

impl FromStr for DecompChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "triangular" => Ok(DecompChoice::Triangular),
            other => match other.split_once(':') {
                Some(("custom", p)) => Ok(DecompChoice::Custom(PathBuf::from(p.trim()))),
                _ => Err(format!("decomposition `{s}`: expected `triangular` or `custom:PATH`")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepChoice {
    Symbolic,
    Numeric(Vec<Scalar>),
    Adjoint,
    /// JSON file with parities and matrices.
    Custom(PathBuf),
}

impl FromStr for RepChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "symbolic" => Ok(RepChoice::Symbolic),
            "adjoint" => Ok(RepChoice::Adjoint),
            other => {
                if let Some(p) = other.strip_prefix("custom:") {
                    return Ok(RepChoice::Custom(PathBuf::from(p.trim())));
                }
                other
                    .split(',')
                    .map(|x| x.trim().parse::<Scalar>().map_err(|e| format!("weights `{s}`: {e}")))
                    .collect::<Result<Vec<_>, _>>()
                    .map(RepChoice::Numeric)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Graph,
    Series,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Tex,
    Structured,
    StatsOnly,
}

/// The file form; every field optional so flags can fill gaps.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub algebra: Option<String>,
    pub decomp: Option<String>,
    pub module: Option<Side>,
    pub representation: Option<String>,
    pub engine: Option<EngineChoice>,
    pub truncation: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub verify: Option<bool>,
    pub stats: Option<bool>,
    pub workers: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            algebra: over.algebra.or(self.algebra),
            decomp: over.decomp.or(self.decomp),
            module: over.module.or(self.module),
            representation: over.representation.or(self.representation),
            engine: over.engine.or(self.engine),
            truncation: over.truncation.or(self.truncation),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            cache_dir: over.cache_dir.or(self.cache_dir),
            verify: over.verify.or(self.verify),
            stats: over.stats.or(self.stats),
            workers: over.workers.or(self.workers),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub algebra: AlgebraChoice,
    pub decomp: DecompChoice,
    pub module: Side,
    pub representation: RepChoice,
    pub engine: EngineChoice,
    pub truncation: Option<usize>,
    pub format: OutputFormat,
    pub out: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub verify: bool,
    pub stats: bool,
    pub workers: Option<usize>,
}

impl JobConfig {
    /// Parse the fields and fill in defaults.
    pub fn resolve(file: ConfigFile) -> Result<Self, CliError> {
        let algebra = file
            .algebra
            .ok_or_else(|| CliError::Config("no algebra given".into()))?
            .parse()
            .map_err(CliError::Config)?;
        let decomp = file.decomp.as_deref().unwrap_or("triangular").parse().map_err(CliError::Config)?;
        let representation = file.representation.as_deref().unwrap_or("symbolic").parse().map_err(CliError::Config)?;
        if file.workers == Some(0) {
            return Err(CliError::Config("workers must be positive".into()));
        }
        Ok(JobConfig {
            algebra,
            decomp,
            module: file.module.unwrap_or(Side::Coinduced),
            representation,
            engine: file.engine.unwrap_or(EngineChoice::Series),
            truncation: file.truncation,
            format: file.format.unwrap_or(OutputFormat::Tex),
            out: file.out.unwrap_or_else(|| PathBuf::from("out")),
            cache_dir: file.cache_dir,
            verify: file.verify.unwrap_or(false),
            stats: file.stats.unwrap_or(false),
            workers: file.workers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_choices() {
        assert_eq!("E:6".parse::<AlgebraChoice>().unwrap(), AlgebraChoice::Simple(Family::E, 6));
        assert_eq!("gl:15".parse::<AlgebraChoice>().unwrap(), AlgebraChoice::Gl(15));
        assert!("E6".parse::<AlgebraChoice>().is_err());
        assert_eq!(
            "1, -1/2".parse::<RepChoice>().unwrap(),
            RepChoice::Numeric(vec![Scalar::one(), Scalar::frac(-1, 2)])
        );
    }

    #[test]
    fn flags_override_file() {
        let file: ConfigFile = toml::from_str("algebra = \"A:2\"\nformat = \"stats-only\"\nworkers = 2\n").unwrap();
        let flags = ConfigFile { algebra: Some("gl:3".into()), ..Default::default() };
        let job = JobConfig::resolve(file.merge(flags)).unwrap();
        assert_eq!(job.algebra, AlgebraChoice::Gl(3));
        assert_eq!(job.format, OutputFormat::StatsOnly);
        assert_eq!(job.workers, Some(2));
        assert!(toml::from_str::<ConfigFile>("colour = 1").is_err());
    }
}
