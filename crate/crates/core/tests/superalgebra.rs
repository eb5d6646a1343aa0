use coinduce::decomp::Decomposition;
use coinduce::graph::PathConventions;
use coinduce::liealg::{load_custom, AlgebraSpec, BasisSpec, BracketSpec, LieSuperAlgebra, TermSpec, FORMAT_NAME, FORMAT_VERSION};
use coinduce::realize::{Engine, HRepresentation, Realization, Side};
use coinduce::superpoly::Parity;
use coinduce::verify::{check_duality, check_engine_equivalence, check_homomorphism};
use coinduce::Scalar;

const GL11: &str = include_str!("fixtures/gl11.json");

/// gl(m|n) from the supercommutator of elementary matrices:
/// `[E_ij, E_kl] = d_jk E_il - (-1)^{|E_ij||E_kl|} d_li E_kj`.
fn gl_super(m: usize, n: usize) -> LieSuperAlgebra {
    let size = m + n;
    let odd = |i: usize| i >= m;
    let label = |i: usize, j: usize| format!("E_{{{}{}}}", i + 1, j + 1);
    let par = |i: usize, j: usize| odd(i) ^ odd(j);
    let mut basis = Vec::new();
    for i in 0..size {
        for j in 0..size {
            basis.push(BasisSpec {
                label: label(i, j),
                parity: if par(i, j) { Parity::Odd } else { Parity::Even },
                degree: Some(j as i32 - i as i32),
            });
        }
    }
    let mut brackets = Vec::new();
    for i in 0..size {
        for j in 0..size {
            for k in 0..size {
                for l in 0..size {
                    let mut terms: Vec<(String, i64)> = Vec::new();
                    if j == k {
                        terms.push((label(i, l), 1));
                    }
                    if l == i {
                        let s = if par(i, j) && par(k, l) { -1 } else { 1 };
                        terms.push((label(k, j), -s));
                    }
                    let mut merged: Vec<(String, i64)> = Vec::new();
                    for (lab, c) in terms {
                        match merged.iter_mut().find(|(x, _)| *x == lab) {
                            Some(e) => e.1 += c,
                            None => merged.push((lab, c)),
                        }
                    }
                    merged.retain(|(_, c)| *c != 0);
                    if !merged.is_empty() {
                        brackets.push(BracketSpec {
                            left: label(i, j),
                            right: label(k, l),
                            result: merged.into_iter().map(|(label, c)| TermSpec { label, coeff: Scalar::from_int(c) }).collect(),
                        });
                    }
                }
            }
        }
    }
    let spec = AlgebraSpec {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        name: format!("gl({m}|{n})"),
        basis,
        brackets,
    };
    spec.build().expect("gl(m|n) satisfies the axioms")
}

fn gl11() -> Decomposition {
    let g = load_custom(GL11).unwrap();
    assert!(g.validate().passed());
    Decomposition::triangular(&g).unwrap()
}

#[test]
fn gl11_fixture_is_gl_1_1() {
    let g = load_custom(GL11).unwrap();
    assert_eq!(g.stored_brackets().len(), gl_super(1, 1).stored_brackets().len());
    // [p+, p+] = 0 and [p+, p-] is symmetric
    let p = g.index_of("p+").unwrap();
    assert!(g.bracket_basis(p, p).is_empty());
}

#[test]
fn gl11_engines_agree() {
    let r = check_engine_equivalence(&gl11(), PathConventions::CALIBRATED, None);
    assert!(r.passed(), "{r}");
    for (m, n) in [(2, 1), (1, 2), (2, 2)] {
        let d = Decomposition::triangular(&gl_super(m, n)).unwrap();
        let r = check_engine_equivalence(&d, PathConventions::CALIBRATED, None);
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn gl11_coinduced_homomorphism() {
    let d = gl11();
    for rep in [HRepresentation::symbolic_character(&d).unwrap(), HRepresentation::adjoint(&d)] {
        let real = Realization::build(&d, &rep, Side::Coinduced, Engine::Series, None).unwrap();
        let r = check_homomorphism(&d, &real, None);
        assert!(r.passed(), "{r}");
    }
    let d = Decomposition::triangular(&gl_super(2, 1)).unwrap();
    let rep = HRepresentation::symbolic_character(&d).unwrap();
    let real = Realization::build(&d, &rep, Side::Coinduced, Engine::Graph, None).unwrap();
    let r = check_homomorphism(&d, &real, None);
    assert!(r.passed(), "{r}");
}

#[test]
fn gl11_induced_homomorphism() {
    let d = gl11();
    let rep = HRepresentation::symbolic_character(&d).unwrap();
    let real = Realization::build(&d, &rep, Side::Induced, Engine::Series, None).unwrap();
    let r = check_homomorphism(&d, &real, Some(3));
    assert!(r.passed(), "{r}");
    let d = Decomposition::triangular(&gl_super(1, 2)).unwrap();
    let rep = HRepresentation::symbolic_character(&d).unwrap();
    let real = Realization::build(&d, &rep, Side::Induced, Engine::Series, None).unwrap();
    let r = check_homomorphism(&d, &real, Some(3));
    assert!(r.passed(), "{r}");
}

#[test]
fn gl11_duality() {
    let d = gl11();
    for rep in [HRepresentation::symbolic_character(&d).unwrap(), HRepresentation::adjoint(&d)] {
        let r = check_duality(&d, &rep, 3);
        assert!(r.passed(), "{r}");
    }
    let d = Decomposition::triangular(&gl_super(2, 1)).unwrap();
    let r = check_duality(&d, &HRepresentation::adjoint(&d), 2);
    assert!(r.passed(), "{r}");
}

#[test]
fn gl21_adjoint_both_sides() {
    let d = Decomposition::triangular(&gl_super(2, 1)).unwrap();
    let rep = HRepresentation::adjoint(&d);
    for side in [Side::Coinduced, Side::Induced] {
        let real = Realization::build(&d, &rep, side, Engine::Series, None).unwrap();
        let r = check_homomorphism(&d, &real, Some(2));
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn first_order_coinduced_operators() {
    let d = Decomposition::triangular(&gl_super(2, 1)).unwrap();
    let rep = HRepresentation::adjoint(&d);
    let real = Realization::build(&d, &rep, Side::Coinduced, Engine::Series, None).unwrap();
    for (g, op) in real.ops.iter().enumerate() {
        assert!(op.max_derivative_order() <= 1);
        assert_eq!(op.parity(), Some(d.algebra().parity(g)));
    }
}

