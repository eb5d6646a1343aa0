use std::collections::BTreeMap;

use super::{BasisElement, GVector, LieSuperAlgebra};
use crate::scalar::Scalar;
use crate::superpoly::Parity;

fn unit_label(n: usize, a: usize, b: usize) -> String {
    if n < 10 {
        format!("E_{{{}{}}}", a + 1, b + 1)
    } else {
        format!("E_{{{},{}}}", a + 1, b + 1)
    }
}

/// `gl(n)` in the matrix units `E_ab` (index `a*n + b`), graded by `b - a`.
pub fn build_gl(n: usize) -> LieSuperAlgebra {
    assert!(n >= 1, "gl(n) needs n >= 1");
    let idx = |a: usize, b: usize| a * n + b;
    let basis = (0..n * n)
        .map(|k| {
            let (a, b) = (k / n, k % n);
            BasisElement {
                index: k,
                label: unit_label(n, a, b),
                parity: Parity::Even,
                degree: Some(b as i32 - a as i32),
            }
        })
        .collect();
    let mut stored = BTreeMap::new();
    for x in 0..n * n {
        for y in x + 1..n * n {
            let (a, b, c, d) = (x / n, x % n, y / n, y % n);
            // [E_ab, E_cd] = d_bc E_ad - d_da E_cb
            let mut v = GVector::zero();
            if b == c {
                v.add_to(idx(a, d), Scalar::one());
            }
            if d == a {
                v.add_to(idx(c, b), -Scalar::one());
            }
            if !v.is_empty() {
                stored.insert((x, y), v);
            }
        }
    }
    LieSuperAlgebra::from_parts(format!("gl({n})"), basis, stored)
}
