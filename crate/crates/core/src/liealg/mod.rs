//! Finite-dimensional Lie superalgebras given by structure constants.

mod chevalley;
mod format;
mod gl;

pub use chevalley::{build_simply_laced, cartan_matrix, positive_roots, Family};
pub use format::{load_custom, AlgebraSpec, BasisSpec, BracketSpec, TermSpec, FORMAT_NAME, FORMAT_VERSION};
pub use gl::build_gl;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::superpoly::{Coefficient, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub index: usize,
    pub label: String,
    pub parity: Parity,
    pub degree: Option<i32>,
}

/// A sparse vector in the algebra, keyed by basis index.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GVector(BTreeMap<usize, Scalar>);

impl GVector {
    pub fn zero() -> Self {
        GVector(BTreeMap::new())
    }

    pub fn basis(i: usize) -> Self {
        Self::single(i, Scalar::one())
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        let mut v = GVector::zero();
        v.add_to(i, c);
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = GVector::zero();
        for (i, c) in pairs {
            v.add_to(i, c);
        }
        v
    }

    pub fn add_to(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &GVector) -> GVector {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_to(i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GVector) -> GVector {
        self.add(&other.negated())
    }

    /// Keep only the listed coordinates.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> GVector {
        GVector(self.0.iter().filter(|(i, _)| keep(**i)).map(|(i, c)| (*i, c.clone())).collect())
    }
}

impl Coefficient for GVector {
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        for (i, c) in other.iter() {
            self.add_to(i, c.clone());
        }
    }
    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return GVector::zero();
        }
        GVector(self.0.iter().map(|(i, c)| (*i, c * s)).collect())
    }
}

impl fmt::Debug for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// One failed axiom, with both sides of the identity.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Antisymmetry { x: String, y: String, xy: GVector, yx: GVector },
    Parity { x: String, y: String, result: GVector },
    Grading { x: String, y: String, result: GVector },
    Jacobi { x: String, y: String, z: String, lhs: GVector, rhs: GVector },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { x, y, xy, yx } => {
                write!(f, "antisymmetry fails for ({x}, {y}): [{x},{y}] = {xy:?}, [{y},{x}] = {yx:?}")
            }
            Violation::Parity { x, y, result } => {
                write!(f, "bracket [{x},{y}] = {result:?} has the wrong parity")
            }
            Violation::Grading { x, y, result } => {
                write!(f, "bracket [{x},{y}] = {result:?} has the wrong degree")
            }
            Violation::Jacobi { x, y, z, lhs, rhs } => write!(
                f,
                "Jacobi fails for ({x}, {y}, {z}): [{x},[{y},{z}]] = {lhs:?}, [[{x},{y}],{z}] + sign [{y},[{x},{z}]] = {rhs:?}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        writeln!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: String, rank: usize },
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unsupported format {name:?} version {version}")]
    Format { name: String, version: u32 },
    #[error("algebra fails validation:\n{0}")]
    Axioms(ValidationReport),
}

/// A Lie superalgebra with a homogeneous basis.
///
/// Brackets are stored for `i < j` and for odd diagonal pairs; the other
/// order follows from super-antisymmetry. A dense lookup table is built on
/// construction.
#[derive(Clone, PartialEq)]
pub struct LieSuperAlgebra {
    name: String,
    basis: Vec<BasisElement>,
    stored: BTreeMap<(usize, usize), GVector>,
    table: Vec<GVector>,
}

impl fmt::Debug for LieSuperAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieSuperAlgebra({}, dim {})", self.name, self.dim())
    }
}

impl LieSuperAlgebra {
    /// Assemble from stored brackets (keys with `i < j`, or `i == j` for odd
    /// elements). No validation is done here.
    pub fn from_parts(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        stored: BTreeMap<(usize, usize), GVector>,
    ) -> Self {
        let n = basis.len();
        let stored: BTreeMap<_, _> = stored.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let mut table = vec![GVector::zero(); n * n];
        for (&(i, j), v) in &stored {
            table[i * n + j] = v.clone();
            if i != j {
                let sign = !(basis[i].parity.sign_with(basis[j].parity));
                table[j * n + i] = if sign { v.negated() } else { v.clone() };
            }
        }
        LieSuperAlgebra { name: name.into(), basis, stored, table }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn is_graded(&self) -> bool {
        self.basis.iter().all(|b| b.degree.is_some())
    }

    /// Depth `l` of the grading: the largest magnitude of a negative degree.
    pub fn grading_depth(&self) -> Option<i32> {
        if !self.is_graded() {
            return None;
        }
        Some(self.basis.iter().filter_map(|b| b.degree).map(|d| (-d).max(0)).max().unwrap_or(0))
    }

    pub fn stored_brackets(&self) -> &BTreeMap<(usize, usize), GVector> {
        &self.stored
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &GVector {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, a: &GVector, b: &GVector) -> GVector {
        let mut out = GVector::zero();
        for (i, ci) in a.iter() {
            for (j, cj) in b.iter() {
                let c = ci * cj;
                for (k, ck) in self.bracket_basis(i, j).iter() {
                    out.add_to(k, &c * ck);
                }
            }
        }
        out
    }

    /// Parity of a vector, if it is homogeneous.
    pub fn vector_parity(&self, v: &GVector) -> Option<Parity> {
        let mut ps = v.iter().map(|(i, _)| self.parity(i));
        let first = ps.next().unwrap_or(Parity::Even);
        ps.all(|p| p == first).then_some(first)
    }

    /// Exhaustive check of antisymmetry, parity, grading and super-Jacobi.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i..n {
                let xy = self.bracket_basis(i, j);
                let yx = self.bracket_basis(j, i);
                let sym = self.parity(i).sign_with(self.parity(j));
                let expect = if sym { xy.clone() } else { xy.negated() };
                if *yx != expect || (i == j && !sym && !xy.is_empty()) {
                    violations.push(Violation::Antisymmetry {
                        x: self.label(i).into(),
                        y: self.label(j).into(),
                        xy: xy.clone(),
                        yx: yx.clone(),
                    });
                }
                let p = self.parity(i).add(self.parity(j));
                if xy.iter().any(|(k, _)| self.parity(k) != p) {
                    violations.push(Violation::Parity {
                        x: self.label(i).into(),
                        y: self.label(j).into(),
                        result: xy.clone(),
                    });
                }
                if self.is_graded() {
                    let d = self.basis[i].degree.unwrap() + self.basis[j].degree.unwrap();
                    if xy.iter().any(|(k, _)| self.basis[k].degree != Some(d)) {
                        violations.push(Violation::Grading {
                            x: self.label(i).into(),
                            y: self.label(j).into(),
                            result: xy.clone(),
                        });
                    }
                }
            }
        }
        let jacobi: Vec<Violation> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut out = Vec::new();
                for j in i..n {
                    for k in j..n {
                        if let Some(v) = self.jacobi_violation(i, j, k) {
                            out.push(v);
                        }
                    }
                }
                out
            })
            .collect();
        violations.extend(jacobi);
        ValidationReport { violations }
    }

    /// `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]` on basis elements.
    fn jacobi_violation(&self, i: usize, j: usize, k: usize) -> Option<Violation> {
        let (x, y, z) = (GVector::basis(i), GVector::basis(j), GVector::basis(k));
        let lhs = self.bracket(&x, self.bracket_basis(j, k));
        let t1 = self.bracket(self.bracket_basis(i, j), &z);
        let t2 = self.bracket(&y, self.bracket_basis(i, k));
        let rhs = if self.parity(i).sign_with(self.parity(j)) { t1.sub(&t2) } else { t1.add(&t2) };
        (lhs != rhs).then(|| Violation::Jacobi {
            x: self.label(i).into(),
            y: self.label(j).into(),
            z: self.label(k).into(),
            lhs,
            rhs,
        })
    }

    /// Copy with one stored structure constant shifted; used to exercise the
    /// validator.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, delta: Scalar) -> Self {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let mut stored = self.stored.clone();
        stored.entry((a, b)).or_default().add_to(k, delta);
        LieSuperAlgebra::from_parts(self.name.clone(), self.basis.clone(), stored)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gvector_arithmetic() {
        let a = GVector::from_pairs([(0, Scalar::one()), (2, Scalar::from_int(3))]);
        let b = GVector::from_pairs([(2, Scalar::from_int(-3))]);
        assert_eq!(a.add(&b), GVector::basis(0));
        assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn sl2_brackets() {
        let g = build_simply_laced(Family::A, 1).unwrap();
        let (e, f, h) = (g.index_of("e").unwrap(), g.index_of("f").unwrap(), g.index_of("h").unwrap());
        let ef = GVector::basis(e).add(&GVector::basis(f));
        assert!(g.bracket(&ef, &ef).is_empty());
        let expect = GVector::from_pairs([(e, Scalar::from_int(2)), (f, Scalar::from_int(-2))]);
        assert_eq!(g.bracket(&GVector::basis(h), &ef), expect);
    }

    #[test]
    fn odd_self_bracket() {
        let basis = vec![
            BasisElement { index: 0, label: "t".into(), parity: Parity::Odd, degree: None },
            BasisElement { index: 1, label: "z".into(), parity: Parity::Even, degree: None },
        ];
        let mut stored = BTreeMap::new();
        stored.insert((0, 0), GVector::single(1, Scalar::from_int(2)));
        let g = LieSuperAlgebra::from_parts("t", basis, stored);
        assert!(g.validate().passed());
        assert_eq!(g.bracket(&GVector::basis(0), &GVector::basis(0)), GVector::single(1, Scalar::from_int(2)));
    }

    #[test]
    fn perturbation_breaks_jacobi() {
        let g = build_gl(2);
        assert!(g.validate().passed());
        // [E11, E12] = E12 becomes 2 E12
        let bad = g.perturbed(0, 1, 1, Scalar::one());
        let report = bad.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Jacobi { .. })));
    }
}
