//! Finite-dimensional representations of `h`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::weight::WeightPoly;
use crate::decomp::Decomposition;
use crate::liealg::GVector;
use crate::superpoly::Parity;

/// Sparse matrix, keyed by `(row, column)`.
pub type Matrix = BTreeMap<(usize, usize), WeightPoly>;

pub fn mat_add_scaled(acc: &mut Matrix, m: &Matrix, s: &WeightPoly) {
    for (k, v) in m {
        let e = acc.entry(*k).or_default();
        *e = e.add(&v.mul(s));
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::new();
    for (&(r, k), x) in a {
        for (&(k2, c), y) in b.range((k, 0)..(k + 1, 0)) {
            debug_assert_eq!(k, k2);
            let e = out.entry((r, c)).or_default();
            *e = e.add(&x.mul(y));
            if e.is_zero() {
                out.remove(&(r, c));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Character,
    Adjoint,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("{0} is not in h")]
    NotInH(String),
    #[error("expected {expected} weights, one per Cartan generator; got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("matrix index out of range for a {dim}-dimensional space")]
    Dimension { dim: usize },
    #[error("rho({element}) has an entry at ({row}, {col}) of the wrong parity")]
    Parity { element: String, row: usize, col: usize },
    #[error("rho([{a}, {b}]) differs from the supercommutator of rho({a}) and rho({b})")]
    Bracket { a: String, b: String },
}

/// `rho: h -> End(V)` on a super vector space `V` with a homogeneous basis.
/// Elements of `h` are addressed by adapted basis index.
#[derive(Clone, PartialEq)]
pub struct HRepresentation {
    pub kind: RepKind,
    pub parities: Vec<Parity>,
    pub rho: BTreeMap<usize, Matrix>,
}

impl fmt::Debug for HRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HRepresentation({:?}, dim {})", self.kind, self.dim())
    }
}

impl HRepresentation {
    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    /// Degree-zero even elements of `h`, in basis order.
    pub fn cartan_generators(decomp: &Decomposition) -> Vec<usize> {
        let alg = decomp.algebra();
        decomp
            .h()
            .iter()
            .copied()
            .filter(|&b| alg.basis()[b].degree == Some(0) && !alg.parity(b).is_odd())
            .collect()
    }

    /// One-dimensional representation with the given values on elements of
    /// `h`; all other elements act by zero.
    pub fn character(decomp: &Decomposition, values: &[(usize, WeightPoly)]) -> Result<Self, RepError> {
        let alg = decomp.algebra();
        let mut rho = BTreeMap::new();
        for (b, w) in values {
            if decomp.is_minus(*b) {
                return Err(RepError::NotInH(alg.label(*b).to_string()));
            }
            if !w.is_zero() {
                rho.insert(*b, Matrix::from([((0, 0), w.clone())]));
            }
        }
        let r = HRepresentation { kind: RepKind::Character, parities: vec![Parity::Even], rho };
        r.validate(decomp)?;
        Ok(r)
    }

    /// Character given by one weight per Cartan generator.
    pub fn make_character(decomp: &Decomposition, weights: &[WeightPoly]) -> Result<Self, RepError> {
        let gens = Self::cartan_generators(decomp);
        if gens.len() != weights.len() {
            return Err(RepError::WeightCount { expected: gens.len(), got: weights.len() });
        }
        let values: Vec<_> = gens.into_iter().zip(weights.iter().cloned()).collect();
        Self::character(decomp, &values)
    }

    /// Character with an independent parameter `lambda_i` on each Cartan
    /// generator.
    pub fn symbolic_character(decomp: &Decomposition) -> Result<Self, RepError> {
        let n = Self::cartan_generators(decomp).len();
        let w: Vec<_> = (0..n).map(WeightPoly::param).collect();
        Self::make_character(decomp, &w)
    }

    /// `V = g`, `rho(b) = ad(b)`.
    pub fn adjoint(decomp: &Decomposition) -> Self {
        let alg = decomp.algebra();
        let mut rho = BTreeMap::new();
        for &b in decomp.h() {
            let mut m = Matrix::new();
            for s in 0..alg.dim() {
                for (t, c) in alg.bracket_basis(b, s).iter() {
                    m.insert((t, s), WeightPoly::constant(c.clone()));
                }
            }
            rho.insert(b, m);
        }
        HRepresentation { kind: RepKind::Adjoint, parities: alg.basis().iter().map(|b| b.parity).collect(), rho }
    }

    pub fn custom(decomp: &Decomposition, parities: Vec<Parity>, rho: BTreeMap<usize, Matrix>) -> Result<Self, RepError> {
        let r = HRepresentation { kind: RepKind::Custom, parities, rho };
        r.validate(decomp)?;
        Ok(r)
    }

    /// `rho*(b) = -rho(b)^*` with `(A^*)_{sr} = (-1)^{|A||r|} A_{rs}`.
    pub fn contragredient(&self, decomp: &Decomposition) -> Self {
        let alg = decomp.algebra();
        let rho = self
            .rho
            .iter()
            .map(|(&b, m)| {
                let odd = alg.parity(b).is_odd();
                let t = m
                    .iter()
                    .map(|(&(r, s), v)| {
                        let sign = odd && self.parities[r].is_odd();
                        ((s, r), if sign { v.clone() } else { v.neg() })
                    })
                    .collect();
                (b, t)
            })
            .collect();
        HRepresentation { kind: self.kind, parities: self.parities.clone(), rho }
    }

    pub fn matrix(&self, b: usize) -> Option<&Matrix> {
        self.rho.get(&b)
    }

    /// `rho(v)` for `v` in `h` (adapted coordinates; `g_-` components ignored).
    pub fn of_vector(&self, v: &GVector) -> Matrix {
        let mut out = Matrix::new();
        for (b, c) in v.iter() {
            if let Some(m) = self.rho.get(&b) {
                mat_add_scaled(&mut out, m, &WeightPoly::constant(c.clone()));
            }
        }
        out
    }

    pub fn identity(&self) -> Matrix {
        (0..self.dim()).map(|i| ((i, i), WeightPoly::one())).collect()
    }

    /// Parity compatibility and `rho([a, b]) = [rho(a), rho(b)]` on all pairs
    /// of `h` basis elements; reports the first failure.
    pub fn validate(&self, decomp: &Decomposition) -> Result<(), RepError> {
        let alg = decomp.algebra();
        let dim = self.dim();
        for (&b, m) in &self.rho {
            if decomp.is_minus(b) {
                return Err(RepError::NotInH(alg.label(b).to_string()));
            }
            for &(r, c) in m.keys() {
                if r >= dim || c >= dim {
                    return Err(RepError::Dimension { dim });
                }
                if alg.parity(b).add(self.parities[c]) != self.parities[r] {
                    return Err(RepError::Parity { element: alg.label(b).to_string(), row: r, col: c });
                }
            }
        }
        let empty = Matrix::new();
        for (x, &a) in decomp.h().iter().enumerate() {
            for &b in &decomp.h()[x..] {
                let ra = self.rho.get(&a).unwrap_or(&empty);
                let rb = self.rho.get(&b).unwrap_or(&empty);
                let mut comm = mat_mul(ra, rb);
                let sign = if alg.parity(a).sign_with(alg.parity(b)) { 1 } else { -1 };
                mat_add_scaled(&mut comm, &mat_mul(rb, ra), &WeightPoly::from(sign));
                let lhs = self.of_vector(alg.bracket_basis(a, b));
                if lhs != comm || !alg.bracket_basis(a, b).iter().all(|(k, _)| !decomp.is_minus(k)) {
                    return Err(RepError::Bracket { a: alg.label(a).to_string(), b: alg.label(b).to_string() });
                }
            }
        }
        Ok(())
    }
}
