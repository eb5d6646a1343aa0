//! Acceptance criteria 1-9. Each test prints one `PASS`/`FAIL` line on stderr
//! (written past the test harness capture) and then asserts.
//!
//! `cargo test -p coinduce-cli --test acceptance`; criterion 4 is ignored by
//! default (`-- --ignored` to run it).

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use coinduce::decomp::{parse_vector, Decomposition};
use coinduce::graph::{collect_statistics, distinguished_generators, PathConventions};
use coinduce::liealg::{build_gl, build_simply_laced, load_custom, Family, GVector, LieSuperAlgebra};
use coinduce::realize::{Engine, HRepresentation, ModuleElement, Realization, Side, WeightPoly};
use coinduce::superpoly::{mul, pair, Indeterminate, Monomial, ScalarPoly};
use coinduce::verify::{
    check_defining_identity, check_degree_bound, check_duality, check_engine_equivalence, check_homomorphism,
    check_statistics, Expectation, StatisticsExpectations,
};
use coinduce::Scalar;
use coinduce_cli::emit::tex_operator;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

// Pinned budgets. All comparisons are exact; these are the only tolerances.
const E6_BUDGET: Duration = Duration::from_secs(60);
const GL15_BUDGET: Duration = Duration::from_secs(30 * 60);
/// Induced-side action window is this minus the depth of the grading.
const INDUCED_TRUNCATION: usize = 6;
const DUALITY_TRUNCATION: usize = 4;
const PBW_MAX_N: usize = 6;
const RANDOM_CASES: u32 = 64;

const GL11: &str = include_str!("../../core/tests/fixtures/gl11.json");

fn report(n: u32, pass: bool, detail: &str) {
    let line = format!("{} criterion {n}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn simple(f: Family, r: usize) -> Decomposition {
    Decomposition::triangular(&build_simply_laced(f, r).unwrap()).unwrap()
}

fn gl(n: usize) -> Decomposition {
    Decomposition::triangular(&build_gl(n)).unwrap()
}

/// Combinations of at most three basis elements with small coefficients.
fn small_vector(alg: &LieSuperAlgebra) -> impl Strategy<Value = GVector> {
    proptest::collection::vec((0..alg.dim(), -3i64..=3), 1..=3)
        .prop_map(|c| GVector::from_pairs(c.into_iter().map(|(i, x)| (i, Scalar::from_int(x)))))
}

/// Random linear combinations satisfy the homomorphism identity.
fn random_pairs_ok(decomp: &Decomposition, real: &Realization) -> Result<(), String> {
    let alg = decomp.algebra();
    let mut runner = TestRunner::new(Config { cases: RANDOM_CASES, ..Config::default() });
    runner
        .run(&(small_vector(alg), small_vector(alg)), |(a, b)| {
            let lhs = real.of_vector(&a).supercommutator(&real.of_vector(&b));
            prop_assert_eq!(lhs, real.of_vector(&alg.bracket(&a, &b)));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

#[test]
fn criterion_1_homomorphism() {
    let cases = [
        ("sl(2)", simple(Family::A, 1)),
        ("gl(2)", gl(2)),
        ("gl(3)", gl(3)),
        ("A2", simple(Family::A, 2)),
        ("D4", simple(Family::D, 4)),
    ];
    let mut failures = Vec::new();
    for (name, d) in &cases {
        let rep = HRepresentation::symbolic_character(d).unwrap();
        let l = d.algebra().grading_depth().unwrap() as usize;
        let window = INDUCED_TRUNCATION.saturating_sub(l);
        for (side, win) in [(Side::Coinduced, None), (Side::Induced, Some(window))] {
            let real = Realization::build(d, &rep, side, Engine::Series, None).unwrap();
            let r = check_homomorphism(d, &real, win);
            if !r.passed() {
                failures.push(format!("{name}: {r}"));
            }
            if let Err(e) = random_pairs_ok(d, &real) {
                failures.push(format!("{name} {side:?} random pairs: {e}"));
            }
        }
    }
    let pass = failures.is_empty();
    report(1, pass, &format!("T and I are homomorphisms on sl(2), gl(2), gl(3), A2, D4 {}", failures.join("; ")));
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_2_engine_equivalence() {
    let mut failures = Vec::new();
    for d in [simple(Family::A, 1), simple(Family::A, 2), simple(Family::D, 4)] {
        let r = check_engine_equivalence(&d, PathConventions::CALIBRATED, None);
        if !r.passed() {
            failures.push(r.to_string());
        }
    }
    let a2 = build_simply_laced(Family::A, 2).unwrap();
    let p = |s: &str| parse_vector(&a2, s).unwrap();
    let skew = Decomposition::custom(
        &a2,
        &[p("f_{10}"), p("f_{11}"), p("f_{01} + e_{10}")],
        &[p("e_{10}"), p("e_{01}"), p("e_{11}"), p("h_{1}"), p("h_{2}")],
    )
    .unwrap();
    assert!(!skew.is_subalgebra());
    let r = check_defining_identity(&skew, 5);
    if !r.passed() {
        failures.push(r.to_string());
    }
    let pass = failures.is_empty();
    report(2, pass, &format!("graph = series on sl(2), A2, D4; general series solves its identity on sl(3) {}", failures.join("; ")));
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_3_e6_statistics() {
    let d = simple(Family::E, 6);
    let hard = |value| Some(Expectation { value, hard: true });
    let expect = StatisticsExpectations {
        max_paths: hard(73179),
        max_terms: hard(1906),
        max_operator_degree: hard(12),
    };
    let start = Instant::now();
    let (r, summary) = check_statistics(&d, &expect);
    let elapsed = start.elapsed();
    let s = summary.expect("E6 statistics computed");
    let pass = r.passed() && elapsed <= E6_BUDGET;
    report(
        3,
        pass,
        &format!(
            "E6 paths {} (want 73179), terms {} (want 1906), degree {} (want 12), {:.1}s of {}s",
            s.max_paths,
            s.max_terms,
            s.max_operator_degree,
            elapsed.as_secs_f64(),
            E6_BUDGET.as_secs()
        ),
    );
    assert!(pass, "{r}");
}

#[test]
#[ignore = "long-running: gl(15) statistics"]
fn criterion_4_gl15_statistics() {
    let d = gl(15);
    let gens = distinguished_generators(&d);
    let start = Instant::now();
    let s = collect_statistics(&d, &gens, PathConventions::CALIBRATED).unwrap();
    let elapsed = start.elapsed();
    let all_8192 = s.generators.iter().all(|g| g.stats.terms == 8192);
    let pass = gens.len() == 15
        && all_8192
        && s.max_paths == 3052080
        && s.max_operator_degree == 15
        && elapsed <= GL15_BUDGET;
    let terms: Vec<usize> = s.generators.iter().map(|g| g.stats.terms).collect();
    report(
        4,
        pass,
        &format!(
            "gl(15) generators {} (want 15), paths {} (want 3052080), terms {terms:?} (want 8192 each), degree {} (want 15), {:.0}s",
            gens.len(),
            s.max_paths,
            s.max_operator_degree,
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_degree_bound() {
    let mut failures = Vec::new();
    for d in [simple(Family::A, 2), simple(Family::D, 4), simple(Family::E, 6)] {
        let (r, _) = check_degree_bound(&d);
        if !r.passed() {
            failures.push(r.to_string());
        }
    }
    let pass = failures.is_empty();
    report(5, pass, &format!("phi and h have degree at most l + deg g on A2, D4, E6 {}", failures.join("; ")));
    assert!(pass, "{failures:?}");
}

/// Polynomial in lambda, by power.
type LambdaPoly = BTreeMap<usize, i64>;

fn add_into(acc: &mut LambdaPoly, p: &LambdaPoly, s: i64) {
    for (&k, &c) in p {
        *acc.entry(k).or_insert(0) += s * c;
    }
    acc.retain(|_, c| *c != 0);
}

/// Reduce the word (applied right to left to a highest-weight vector `v`)
/// to multiples of `f^k v` in the Verma module, using only
/// `[e,f] = h`, `[h,f] = -2f`, `e v = 0`, `h v = lambda v`.
fn pbw_reduce(word: Vec<u8>) -> BTreeMap<usize, LambdaPoly> {
    let mut out: BTreeMap<usize, LambdaPoly> = BTreeMap::new();
    let mut work: Vec<(LambdaPoly, Vec<u8>)> = vec![(BTreeMap::from([(0, 1)]), word)];
    while let Some((c, w)) = work.pop() {
        let Some(j) = w.iter().rposition(|&x| x != b'f') else {
            add_into(out.entry(w.len()).or_default(), &c, 1);
            continue;
        };
        if j == w.len() - 1 {
            if w[j] == b'h' {
                let shifted: LambdaPoly = c.iter().map(|(&k, &x)| (k + 1, x)).collect();
                work.push((shifted, w[..j].to_vec()));
            }
            continue;
        }
        // w[j + 1] == f: x f = f x + [x, f]
        let mut swapped = w.clone();
        swapped.swap(j, j + 1);
        work.push((c.clone(), swapped));
        let mut rest = w[..j].to_vec();
        match w[j] {
            b'e' => {
                rest.push(b'h');
                rest.extend_from_slice(&w[j + 2..]);
                work.push((c, rest));
            }
            b'h' => {
                rest.push(b'f');
                rest.extend_from_slice(&w[j + 2..]);
                let neg: LambdaPoly = c.iter().map(|(&k, &x)| (k, -2 * x)).collect();
                work.push((neg, rest));
            }
            _ => unreachable!(),
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

fn to_weight(p: &LambdaPoly) -> WeightPoly {
    let mut w = WeightPoly::zero();
    for (&k, &c) in p {
        w.add_monomial(vec![k as u32], Scalar::from_int(c));
    }
    w
}

#[test]
fn criterion_6_sl2_golden() {
    let d = simple(Family::A, 1);
    let alg = d.algebra();
    let idx = |l: &str| alg.index_of(l).unwrap();
    let rep = HRepresentation::symbolic_character(&d).unwrap();
    let t = Realization::build(&d, &rep, Side::Coinduced, Engine::Series, None).unwrap();
    let tex = |l: &str| tex_operator(&t.ops[idx(l)], 1, 1);
    let mut failures = Vec::new();
    for (l, want) in [("f", "\\partial_{X}"), ("h", "2X\\partial_{X} + \\lambda"), ("e", "-X^{2}\\partial_{X} - \\lambda X")] {
        if tex(l) != want {
            failures.push(format!("T({l}) = {} but want {want}", tex(l)));
        }
    }

    let i = Realization::build(&d, &rep, Side::Induced, Engine::Series, None).unwrap();
    let p = d.var(0);
    let lambda = WeightPoly::param(0);
    for n in 0..=PBW_MAX_N {
        let fn_v = ModuleElement::basis(Monomial::from_sorted(vec![p; n]), 0);
        let got = i.ops[idx("e")].apply(&fn_v, None).unwrap();
        let mut word = vec![b'e'];
        word.extend(std::iter::repeat_n(b'f', n));
        let mut oracle = ModuleElement::zero();
        for (k, poly) in pbw_reduce(word) {
            oracle.add_term(Monomial::from_sorted(vec![p; k]), 0, to_weight(&poly));
        }
        let mut formula = ModuleElement::zero();
        if n > 0 {
            let c = lambda.add(&WeightPoly::from(1 - n as i64)).scale(&Scalar::from_int(n as i64));
            formula.add_term(Monomial::from_sorted(vec![p; n - 1]), 0, c);
        }
        if got != oracle || oracle != formula {
            failures.push(format!("n = {n}: operator {got:?}, PBW {oracle:?}, formula {formula:?}"));
        }
    }
    let pass = failures.is_empty();
    report(6, pass, &format!("sl(2) T golden and I(e) f^n = n(lambda-n+1) f^(n-1) for n <= {PBW_MAX_N} {}", failures.join("; ")));
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_7_duality() {
    let mut failures = Vec::new();
    for d in [simple(Family::A, 1), gl(3)] {
        let rep = HRepresentation::symbolic_character(&d).unwrap();
        let r = check_duality(&d, &rep, DUALITY_TRUNCATION);
        if !r.passed() {
            failures.push(r.to_string());
        }
    }
    let pass = failures.is_empty();
    report(7, pass, &format!("T over V* dual to I over V on sl(2), gl(3), truncation {DUALITY_TRUNCATION} {}", failures.join("; ")));
    assert!(pass, "{failures:?}");
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Odd squares, sign rule, pairing against the permutation sum, and the
/// Fourier transform of `P_i` and `d/dP_i`, on random words of length <= 5.
fn superpoly_invariants() -> Result<(), String> {
    let strategy = (
        proptest::collection::vec(any::<bool>(), 4),
        proptest::collection::vec(0usize..4, 0..=5),
        proptest::collection::vec(0usize..4, 0..=5),
        0usize..4,
    );
    let mut runner = TestRunner::new(Config { cases: 256, ..Config::default() });
    runner
        .run(&strategy, |(odd, a, b, i)| {
            let v: Vec<Indeterminate> =
                (0..4).map(|k| if odd[k] { Indeterminate::odd(k) } else { Indeterminate::even(k) }).collect();
            let wa: Vec<Indeterminate> = a.iter().map(|&k| v[k]).collect();
            let wb: Vec<Indeterminate> = b.iter().map(|&k| v[k]).collect();
            let par = |w: &[Indeterminate]| w.iter().filter(|x| x.parity.is_odd()).count() % 2 == 1;

            let mut sq = wa.clone();
            sq.extend([v[i], v[i]]);
            prop_assert!(!odd[i] || ScalarPoly::monomial(&sq).is_zero());

            let (fa, fb) = (ScalarPoly::monomial(&wa), ScalarPoly::monomial(&wb));
            let ba = mul(&fb, &fa);
            prop_assert_eq!(mul(&fa, &fb), if par(&wa) && par(&wb) { ba.neg() } else { ba });

            let mut rev = wb.clone();
            rev.reverse();
            let mut brute = Scalar::zero();
            if a.len() == b.len() {
                for sigma in permutations(a.len()) {
                    if (0..a.len()).all(|k| a[sigma[k]] == b[k]) {
                        let mut inv = 0;
                        for x in 0..a.len() {
                            for y in x + 1..a.len() {
                                if odd[b[x]] && odd[b[y]] && sigma[x] > sigma[y] {
                                    inv += 1;
                                }
                            }
                        }
                        brute += &Scalar::one().signed(inv % 2 == 1);
                    }
                }
            }
            prop_assert_eq!(pair(&fa, &ScalarPoly::monomial(&rev)), brute);

            let xi = ScalarPoly::var(v[i]);
            let twist = odd[i] && par(&wa);
            prop_assert_eq!(pair(&fa.partial(v[i]), &fb).signed(odd[i]), pair(&fa, &mul(&xi, &fb)).signed(twist));
            prop_assert_eq!(pair(&mul(&xi, &fa), &fb), pair(&fa, &fb.partial(v[i])).signed(twist));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

#[test]
fn criterion_8_superalgebra_kernel() {
    let mut failures = Vec::new();
    let g = load_custom(GL11).unwrap();
    if !g.validate().passed() {
        failures.push(format!("gl(1|1) validation: {}", g.validate()));
    }
    let d = Decomposition::triangular(&g).unwrap();
    let rep = HRepresentation::symbolic_character(&d).unwrap();
    let real = Realization::build(&d, &rep, Side::Coinduced, Engine::Series, None).unwrap();
    let r = check_homomorphism(&d, &real, None);
    if !r.passed() {
        failures.push(r.to_string());
    }
    if let Err(e) = superpoly_invariants() {
        failures.push(e);
    }
    let pass = failures.is_empty();
    report(8, pass, &format!("gl(1|1) validates and T is a homomorphism; superpoly invariants hold {}", failures.join("; ")));
    assert!(pass, "{failures:?}");
}

fn e6_stats(workers: usize) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_coinduce"))
        .args(["run", "--algebra", "E:6", "--format", "stats-only", "--workers", &workers.to_string(), "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    std::fs::read(dir.path().join("stats.json")).unwrap()
}

#[test]
fn criterion_9_determinism() {
    let n = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2).max(2);
    let one = e6_stats(1);
    let many = e6_stats(n);
    let again = e6_stats(n);
    let pass = one == many && many == again;
    report(9, pass, &format!("E6 stats-only output identical with 1 and {n} workers ({} bytes)", one.len()));
    assert!(pass);
}
