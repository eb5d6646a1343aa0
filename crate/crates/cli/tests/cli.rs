use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use coinduce::liealg::{build_simply_laced, AlgebraSpec, Family, FORMAT_VERSION};
use coinduce_cli::cache::{entry_path, load_or_build, CacheKey, CacheOutcome};
use coinduce_cli::emit::parse_structured;

fn coinduce(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coinduce")).args(args).arg("--out").arg(out).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sl2_tex_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = coinduce(&["run", "--algebra", "A:1", "--format", "tex", "--verify"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let tex = fs::read_to_string(dir.path().join("operators.tex")).unwrap();
    assert_eq!(
        tex,
        "\\[ T(e) = -X^{2}\\partial_{X} - \\lambda X \\]\n\\[ T(f) = \\partial_{X} \\]\n\\[ T(h) = 2X\\partial_{X} + \\lambda \\]\n"
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS homomorphism-coinduced"));
}

#[test]
fn numeric_weights_and_induced_side() {
    let dir = tempfile::tempdir().unwrap();
    let o = coinduce(&["run", "--algebra", "A:1", "--module", "induced", "--weights", "3"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let tex = fs::read_to_string(dir.path().join("operators.tex")).unwrap();
    assert!(tex.contains("\\[ I(f) = P \\]"), "{tex}");
    assert!(tex.contains("\\[ I(e) = -P\\partial_{P}^{2} + 3\\partial_{P} \\]"), "{tex}");
}

#[test]
fn structured_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let o = coinduce(&["run", "--algebra", "A:2", "--weights", "adjoint", "--format", "structured"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("operators.json")).unwrap();
    let (file, ops) = parse_structured(&text).unwrap();
    assert_eq!(ops.len(), 8);
    assert_eq!(file.representation.len(), 8);
}

#[test]
fn both_engines_write_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = coinduce(&["run", "--algebra", "gl:3", "--engine", "both", "--stats"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("equivalence.json")).unwrap();
    assert!(report.contains("\"status\": \"pass\""), "{report}");
    assert!(dir.path().join("stats.json").exists());
}

#[test]
fn malformed_algebra_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"format": "coinduce-algebra", "version": 1, "name": "bad",
            "basis": [{"label": "x", "parity": "even"}, {"label": "y", "parity": "even"}],
            "brackets": [{"left": "x", "right": "y", "result": [{"label": "x", "coeff": "1"}]},
                         {"left": "y", "right": "x", "result": [{"label": "x", "coeff": "1"}]}]}"#,
    )
    .unwrap();
    let o = coinduce(&["run", "--algebra", &format!("custom:{}", bad.display())], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("antisymmetry fails for (x, y)"), "{}", stderr(&o));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = coinduce(&["run", "--algebra", "Q:3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = coinduce(&["run", "--algebra", "A:2", "--weights", "1"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = coinduce(&["run", "--algebra", "custom:/nonexistent/alg.json"], dir.path());
    assert_eq!(o.status.code(), Some(6));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("decomp.json"), r#"{"minus": ["f"], "h": ["h", "e"]}"#).unwrap();
    fs::write(
        dir.path().join("job.toml"),
        "algebra = \"A:1\"\ndecomp = \"custom:decomp.json\"\nformat = \"structured\"\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_coinduce"))
        .args(["run", "--config"])
        .arg(dir.path().join("job.toml"))
        .args(["--format", "tex", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("operators.tex").exists());
}

#[test]
fn ledger_subcommand() {
    let o = Command::new(env!("CARGO_BIN_EXE_coinduce")).arg("ledger").output().unwrap();
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), coinduce::conventions::render_ledger());
}

#[test]
fn cache_round_trip_and_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let key = CacheKey::Simple(Family::E, 6);
    let (built, o) = load_or_build(dir.path(), key).unwrap();
    assert_eq!(o, CacheOutcome::Built);
    let first = fs::read(entry_path(dir.path(), key)).unwrap();
    let (loaded, o) = load_or_build(dir.path(), key).unwrap();
    assert_eq!(o, CacheOutcome::Hit);
    assert_eq!(loaded, built);
    assert_eq!(AlgebraSpec::from_algebra(&loaded).to_json().into_bytes(), first);
    assert_eq!(built, build_simply_laced(Family::E, 6).unwrap());
    assert!(key.file_name().ends_with(&format!("-v{FORMAT_VERSION}.json")));

    // a hand edit that breaks antisymmetry is caught and rebuilt
    let path = entry_path(dir.path(), key);
    let text = String::from_utf8(first.clone()).unwrap();
    let edited = text.replacen("\"coeff\": \"1\"", "\"coeff\": \"2\"", 1);
    assert_ne!(edited, text);
    fs::write(&path, edited).unwrap();
    let (again, o) = load_or_build(dir.path(), key).unwrap();
    assert!(matches!(o, CacheOutcome::Rebuilt(_)));
    assert_eq!(again, built);
    assert_eq!(fs::read(&path).unwrap(), first);

    fs::write(&path, "not json").unwrap();
    assert!(matches!(load_or_build(dir.path(), key).unwrap().1, CacheOutcome::Rebuilt(_)));
}

#[test]
fn cli_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["run", "--algebra", "A:2", "--format", "stats-only", "--cache-dir", cache.to_str().unwrap()];
    assert!(coinduce(&args, &dir.path().join("a")).status.success());
    assert!(cache.join(CacheKey::Simple(Family::A, 2).file_name()).exists());
    fs::write(cache.join(CacheKey::Simple(Family::A, 2).file_name()), "{").unwrap();
    let o = coinduce(&args, &dir.path().join("b"));
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: cache entry"));
    assert_eq!(
        fs::read(dir.path().join("a/stats.json")).unwrap(),
        fs::read(dir.path().join("b/stats.json")).unwrap()
    );
}
