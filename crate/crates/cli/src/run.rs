//! One job: build everything the config names, compute, write files.
//!
//! Files written into the output directory:
//!
//! | file | when |
//! |---|---|
//! | `operators.tex` | `format = "tex"` |
//! | `operators.json` | `format = "structured"` |
//! | `stats.json` | `format = "stats-only"` or `stats = true` |
//! | `equivalence.json` | `engine = "both"` |
//! | `verification.json` | `verify = true` |

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use coinduce::decomp::{parse_vector, DecompKind, Decomposition};
use coinduce::graph::{collect_statistics, distinguished_generators, PathConventions, StatisticsSummary};
use coinduce::liealg::{load_custom, LieSuperAlgebra};
use coinduce::realize::{Engine, HRepresentation, Matrix, Realization, Side, WeightPoly};
use coinduce::superpoly::Parity;
use coinduce::verify::{check_degree_bound, check_homomorphism, Status, VerificationReport};
use coinduce::Scalar;
use serde::{Deserialize, Serialize};

use crate::cache::{load_or_build, CacheKey, CacheOutcome};
use crate::config::{AlgebraChoice, DecompChoice, EngineChoice, JobConfig, OutputFormat, RepChoice};
use crate::emit::{emit_structured, emit_tex};
use crate::CliError;

/// What a successful run produced.
#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub reports: Vec<VerificationReport>,
    pub cache: Option<CacheOutcome>,
    pub stats: Option<StatisticsSummary>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompFile {
    minus: Vec<String>,
    h: Vec<String>,
}

/// Custom representation: parities of `V` and, per `h` basis label, a dense
/// matrix of rational entries written as strings.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub parities: Vec<Parity>,
    pub matrices: BTreeMap<String, Vec<Vec<Scalar>>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn build_algebra(job: &JobConfig) -> Result<(LieSuperAlgebra, Option<CacheOutcome>), CliError> {
    let key = match &job.algebra {
        AlgebraChoice::Custom(path) => {
            let alg = load_custom(&read(path)?).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            return Ok((alg, None));
        }
        AlgebraChoice::Simple(f, r) => CacheKey::Simple(*f, *r),
        AlgebraChoice::Gl(n) => CacheKey::Gl(*n),
    };
    match &job.cache_dir {
        Some(dir) => load_or_build(dir, key).map(|(a, o)| (a, Some(o))),
        None => key.build().map(|a| (a, None)),
    }
}

pub fn build_decomposition(alg: &LieSuperAlgebra, choice: &DecompChoice) -> Result<Decomposition, CliError> {
    match choice {
        DecompChoice::Triangular => Decomposition::triangular(alg).map_err(|e| CliError::Validation(e.to_string())),
        DecompChoice::Custom(path) => {
            let spec: DecompFile =
                serde_json::from_str(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let parse = |v: &[String]| {
                v.iter()
                    .map(|s| parse_vector(alg, s).map_err(|e| CliError::Config(format!("{}: {e}", path.display()))))
                    .collect::<Result<Vec<_>, _>>()
            };
            Decomposition::custom(alg, &parse(&spec.minus)?, &parse(&spec.h)?)
                .map_err(|e| CliError::Validation(e.to_string()))
        }
    }
}

pub fn build_representation(decomp: &Decomposition, choice: &RepChoice) -> Result<HRepresentation, CliError> {
    let invalid = |e: coinduce::realize::RepError| CliError::Validation(e.to_string());
    let rep = match choice {
        RepChoice::Symbolic => HRepresentation::symbolic_character(decomp).map_err(invalid)?,
        RepChoice::Adjoint => HRepresentation::adjoint(decomp),
        RepChoice::Numeric(ws) => {
            let ws: Vec<WeightPoly> = ws.iter().cloned().map(WeightPoly::constant).collect();
            HRepresentation::make_character(decomp, &ws).map_err(invalid)?
        }
        RepChoice::Custom(path) => {
            let spec: RepFile =
                serde_json::from_str(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let alg = decomp.algebra();
            let mut rho = BTreeMap::new();
            for (label, rows) in &spec.matrices {
                let b = alg
                    .index_of(label)
                    .ok_or_else(|| CliError::Config(format!("{}: unknown label {label:?}", path.display())))?;
                let mut m = Matrix::new();
                for (r, row) in rows.iter().enumerate() {
                    for (c, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            m.insert((r, c), WeightPoly::constant(x.clone()));
                        }
                    }
                }
                rho.insert(b, m);
            }
            HRepresentation::custom(decomp, spec.parities, rho).map_err(invalid)?
        }
    };
    rep.validate(decomp).map_err(invalid)?;
    Ok(rep)
}

fn statistics(decomp: &Decomposition) -> Result<StatisticsSummary, CliError> {
    collect_statistics(decomp, &distinguished_generators(decomp), PathConventions::CALIBRATED)
        .map_err(|e| CliError::Engine(e.to_string()))
}

fn equivalence_report(decomp: &Decomposition, series: &Realization, graph: &Realization) -> VerificationReport {
    let first_diff = series
        .ops
        .iter()
        .zip(&graph.ops)
        .position(|(a, b)| a != b)
        .map(|g| format!("{}: series {:?} vs graph {:?}", decomp.algebra().label(g), series.ops[g], graph.ops[g]));
    VerificationReport {
        check: "engine equivalence (operators)".into(),
        subject: decomp.algebra().name().to_string(),
        status: if first_diff.is_some() { Status::Fail } else { Status::Pass },
        counterexample: first_diff,
        notes: vec![format!("{} operators compared", series.ops.len())],
        elapsed_ms: 0,
    }
}

/// Run with the worker count from the config (the global pool otherwise).
pub fn run(job: &JobConfig) -> Result<RunSummary, CliError> {
    match job.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| run_inner(job)),
        None => run_inner(job),
    }
}

fn run_inner(job: &JobConfig) -> Result<RunSummary, CliError> {
    let (alg, cache) = build_algebra(job)?;
    let decomp = build_decomposition(&alg, &job.decomp)?;
    fs::create_dir_all(&job.out).map_err(|e| CliError::Io(format!("{}: {e}", job.out.display())))?;
    let mut summary = RunSummary { cache, ..Default::default() };
    let out = job.out.as_path();

    if job.format == OutputFormat::StatsOnly {
        let stats = statistics(&decomp)?;
        write(out, "stats.json", &json(&stats), &mut summary.files)?;
        summary.stats = Some(stats);
        if job.verify {
            summary.reports.push(check_degree_bound(&decomp).0);
            finish_verification(out, &mut summary)?;
        }
        return Ok(summary);
    }

    let rep = build_representation(&decomp, &job.representation)?;
    let engines: &[Engine] = match job.engine {
        EngineChoice::Graph => &[Engine::Graph],
        EngineChoice::Series => &[Engine::Series],
        EngineChoice::Both => &[Engine::Series, Engine::Graph],
    };
    let mut reals = Vec::new();
    for &e in engines {
        let r = Realization::build(&decomp, &rep, job.module, e, job.truncation)
            .map_err(|err| CliError::Engine(err.to_string()))?;
        if r.truncated && job.truncation.is_none() {
            return Err(CliError::Engine(format!(
                "the {e:?} engine hit the default truncation; pass an explicit truncation to accept a cut result"
            )));
        }
        reals.push(r);
    }
    if let [series, graph] = &reals[..] {
        let report = equivalence_report(&decomp, series, graph);
        write(out, "equivalence.json", &json(&report), &mut summary.files)?;
        if !report.passed() {
            return Err(CliError::Engine(report.to_string()));
        }
    }
    let real = &reals[0];

    match job.format {
        OutputFormat::Tex => write(out, "operators.tex", &emit_tex(&decomp, real), &mut summary.files)?,
        OutputFormat::Structured => write(out, "operators.json", &emit_structured(&decomp, real), &mut summary.files)?,
        OutputFormat::StatsOnly => unreachable!(),
    }
    if job.stats {
        let stats = statistics(&decomp)?;
        write(out, "stats.json", &json(&stats), &mut summary.files)?;
        summary.stats = Some(stats);
    }
    if job.verify {
        let window = match job.module {
            Side::Coinduced => None,
            Side::Induced => Some(job.truncation.unwrap_or(4)),
        };
        summary.reports.push(check_homomorphism(&decomp, real, window));
        if decomp.kind() == DecompKind::Triangular && alg.is_graded() {
            summary.reports.push(check_degree_bound(&decomp).0);
        }
        finish_verification(out, &mut summary)?;
    }
    Ok(summary)
}

fn finish_verification(out: &Path, summary: &mut RunSummary) -> Result<(), CliError> {
    write(out, "verification.json", &json(&summary.reports), &mut summary.files)?;
    let failed: Vec<String> =
        summary.reports.iter().filter(|r| r.status == Status::Fail).map(|r| r.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join("\n")))
    }
}
