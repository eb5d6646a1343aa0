//! Chevalley bases of the simply-laced simple Lie algebras.
//!
//! Signs come from the bimultiplicative function `eps` on the root lattice
//! with `eps(a_i, a_j) = -1` when `i == j` or when `i < j` and the simple
//! roots are joined in the Dynkin diagram. With `E_a` the Kac basis vectors
//! and `e_a = sg(a) E_a` we get `[e_a, e_b] = sg(a) sg(b) sg(a+b) eps(a, b)
//! e_{a+b}`, `[e_a, e_{-a}] = sum a_i h_i` and `[h_i, e_b] = (a_i, b) e_b`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, BasisElement, GVector, LieSuperAlgebra};
use crate::scalar::Scalar;
use crate::superpoly::Parity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        })
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

fn check_rank(family: Family, rank: usize) -> Result<(), AlgebraError> {
    let ok = match family {
        Family::A => rank >= 1,
        Family::D => rank >= 3,
        Family::E => (6..=8).contains(&rank),
    };
    if ok {
        Ok(())
    } else {
        Err(AlgebraError::InvalidRank { family: family.to_string(), rank })
    }
}

/// Cartan matrix with the Bourbaki-free numbering used here: `E_n` has the
/// branch node `3` joined to `1`, with the chain `0-2-3-4-...`.
pub fn cartan_matrix(family: Family, rank: usize) -> Result<Vec<Vec<i64>>, AlgebraError> {
    check_rank(family, rank)?;
    let n = rank;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match family {
        Family::A => edges.extend((0..n - 1).map(|i| (i, i + 1))),
        Family::D => {
            edges.extend((0..n - 2).map(|i| (i, i + 1)));
            edges.push((n - 3, n - 1));
        }
        Family::E => {
            edges.extend([(0, 2), (2, 3), (3, 4), (1, 3)]);
            edges.extend((4..n - 1).map(|i| (i, i + 1)));
        }
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    Ok(a)
}

fn form(cartan: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let n = a.len();
    let mut s = 0;
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += a[i] * cartan[i][j] * b[j];
        }
    }
    s
}

/// Positive roots in simple-root coordinates, sorted by height and then so
/// that the simple roots come out in their natural order.
pub fn positive_roots(family: Family, rank: usize) -> Result<Vec<Vec<i64>>, AlgebraError> {
    let cartan = cartan_matrix(family, rank)?;
    let n = rank;
    let simple: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier = simple.clone();
    // for simply-laced roots, r + a_i is a root iff (r, a_i) = -1
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for (i, s) in simple.iter().enumerate() {
                if form(&cartan, r, s) == -1 {
                    let mut t = r.clone();
                    t[i] += 1;
                    if seen.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then(b.cmp(a)));
    Ok(out)
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn root_label(prefix: char, r: &[i64]) -> String {
    let digits: String = r.iter().map(|c| c.abs().to_string()).collect();
    format!("{prefix}_{{{digits}}}")
}

/// Chevalley basis of `A_n`, `D_n` or `E_n`, graded by root height.
///
/// Basis order: positive roots, negative roots (same order), then `h_i`.
/// For `A_1` the labels are `e`, `f`, `h`.
pub fn build_simply_laced(family: Family, rank: usize) -> Result<LieSuperAlgebra, AlgebraError> {
    let cartan = cartan_matrix(family, rank)?;
    let pos = positive_roots(family, rank)?;
    let n = rank;
    let np = pos.len();
    let mut roots: Vec<Vec<i64>> = pos.clone();
    roots.extend(pos.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
    let root_index: HashMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let dim = 2 * np + n;
    let small = family == Family::A && rank == 1;

    let mut basis = Vec::with_capacity(dim);
    for (k, r) in roots.iter().enumerate() {
        let height: i64 = r.iter().sum();
        let label = if small {
            (if k < np { "e" } else { "f" }).to_string()
        } else {
            root_label(if k < np { 'e' } else { 'f' }, r)
        };
        basis.push(BasisElement { index: k, label, parity: Parity::Even, degree: Some(height as i32) });
    }
    for i in 0..n {
        let label = if small { "h".to_string() } else { format!("h_{{{}}}", i + 1) };
        basis.push(BasisElement { index: 2 * np + i, label, parity: Parity::Even, degree: Some(0) });
    }

    let eps = |a: &[i64], b: &[i64]| -> i64 {
        let mut odd = 0i64;
        for i in 0..n {
            for j in 0..n {
                if (a[i] * b[j]).rem_euclid(2) == 0 {
                    continue;
                }
                if i == j || (i < j && cartan[i][j] == -1) {
                    odd += 1;
                }
            }
        }
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let sg = |a: &[i64]| if a.iter().sum::<i64>() > 0 { 1 } else { -1 };

    let h0 = 2 * np;
    let mut stored = BTreeMap::new();
    for x in 0..dim {
        for y in x + 1..dim {
            let mut v = GVector::zero();
            match (x < 2 * np, y < 2 * np) {
                (true, true) => {
                    let (a, b) = (&roots[x], &roots[y]);
                    let s: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                    if let Some(&t) = root_index.get(&s) {
                        let c = sg(a) * sg(b) * sg(&s) * eps(a, b);
                        v.add_to(t, Scalar::from_int(c));
                    } else if s.iter().all(|&c| c == 0) {
                        for (i, &c) in a.iter().enumerate() {
                            v.add_to(h0 + i, Scalar::from_int(c));
                        }
                    }
                }
                (true, false) => {
                    // [e_b, h_i] = -(a_i, b) e_b
                    let i = y - h0;
                    let c = form(&cartan, &unit(n, i), &roots[x]);
                    v.add_to(x, Scalar::from_int(-c));
                }
                _ => {}
            }
            if !v.is_empty() {
                stored.insert((x, y), v);
            }
        }
    }
    Ok(LieSuperAlgebra::from_parts(format!("{family}{rank}"), basis, stored))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let g = build_simply_laced(Family::A, 1).unwrap();
        let (e, f, h) = (g.index_of("e").unwrap(), g.index_of("f").unwrap(), g.index_of("h").unwrap());
        assert_eq!(*g.bracket_basis(e, f), GVector::basis(h));
        assert_eq!(*g.bracket_basis(h, e), GVector::single(e, Scalar::from_int(2)));
        assert_eq!(*g.bracket_basis(f, e), GVector::single(h, Scalar::from_int(-1)));
        assert_eq!(*g.bracket_basis(f, h), GVector::single(f, Scalar::from_int(2)));
    }

    #[test]
    fn dimensions() {
        for n in 1..6 {
            assert_eq!(build_simply_laced(Family::A, n).unwrap().dim(), n * n + 2 * n);
        }
        for n in 3..7 {
            assert_eq!(positive_roots(Family::D, n).unwrap().len() * 2 + n, 2 * n * n - n);
        }
        assert_eq!(positive_roots(Family::E, 6).unwrap().len(), 36);
        assert_eq!(positive_roots(Family::E, 7).unwrap().len(), 63);
        assert_eq!(positive_roots(Family::E, 8).unwrap().len(), 120);
    }

    #[test]
    fn heights() {
        let top = |f, n| positive_roots(f, n).unwrap().last().unwrap().iter().sum::<i64>();
        assert_eq!(top(Family::A, 2), 2);
        assert_eq!(top(Family::D, 4), 5);
        assert_eq!(top(Family::E, 6), 11);
        assert_eq!(top(Family::E, 7), 17);
        assert_eq!(top(Family::E, 8), 29);
        let a2 = build_simply_laced(Family::A, 2).unwrap();
        assert_eq!(a2.dim(), 8);
        assert_eq!(a2.grading_depth(), Some(2));
    }

    #[test]
    fn invalid_ranks() {
        assert!(build_simply_laced(Family::E, 5).is_err());
        assert!(build_simply_laced(Family::E, 9).is_err());
        assert!(build_simply_laced(Family::D, 2).is_err());
        assert!(build_simply_laced(Family::A, 0).is_err());
    }

    #[test]
    fn small_algebras_validate() {
        for (f, n) in [(Family::A, 1), (Family::A, 2), (Family::A, 3), (Family::D, 4)] {
            let g = build_simply_laced(f, n).unwrap();
            let r = g.validate();
            assert!(r.passed(), "{f}{n}: {r}");
        }
    }

    #[test]
    fn root_constants_are_units() {
        let g = build_simply_laced(Family::D, 4).unwrap();
        let cartan = cartan_matrix(Family::D, 4).unwrap();
        let np = 12;
        for x in 0..2 * np {
            for y in 0..2 * np {
                for (_, c) in g.bracket_basis(x, y).iter() {
                    if g.bracket_basis(x, y).iter().all(|(k, _)| k < 2 * np) {
                        assert!(c.abs().is_one());
                    }
                }
            }
        }
        // [h_i, e_{a_j}] = A_ij e_{a_j}
        for i in 0..4 {
            for j in 0..4 {
                let v = g.bracket_basis(2 * np + i, j);
                assert_eq!(v.get(j), Scalar::from_int(cartan[i][j]));
            }
        }
    }
}
