//! Direct-sum decompositions `g = g_- + h`.
//!
//! Downstream code works in an adapted basis where `g_-` and `h` are spanned
//! by basis vectors. When the user's `g_-` is already coordinate aligned the
//! adapted algebra is the original one; otherwise the algebra is rewritten in
//! the basis `minus ++ h`.

use std::fmt;

use thiserror::Error;

use crate::liealg::{BasisElement, GVector, LieSuperAlgebra};
use crate::scalar::Scalar;
use crate::superpoly::{Coefficient, Indeterminate, Parity, SuperPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompError {
    #[error("algebra {0} carries no Z-grading")]
    MissingGrading(String),
    #[error("g_- and h do not form a direct sum: {0}")]
    NotDirectSum(String),
    #[error("h is not closed under the bracket: [{x}, {y}] = {bracket} leaves h")]
    HNotClosed { x: String, y: String, bracket: String },
    #[error("vector {0} is not homogeneous in parity")]
    Inhomogeneous(String),
    #[error("cannot parse vector {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompKind {
    Triangular,
    Custom,
}

#[derive(Clone)]
pub struct Decomposition {
    kind: DecompKind,
    original: LieSuperAlgebra,
    algebra: LieSuperAlgebra,
    minus: Vec<usize>,
    h: Vec<usize>,
    /// Adapted basis vectors in original coordinates; `None` when aligned.
    change: Option<BasisChange>,
    is_subalgebra: bool,
    in_minus: Vec<Option<usize>>,
}

#[derive(Clone)]
struct BasisChange {
    vectors: Vec<GVector>,
    inverse: Vec<Vec<Scalar>>,
}

impl fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Decomposition({}, |g_-| = {}, |h| = {})", self.algebra.name(), self.minus.len(), self.h.len())
    }
}

impl Decomposition {
    /// Negative degrees against non-negative degrees.
    pub fn triangular(alg: &LieSuperAlgebra) -> Result<Self, DecompError> {
        if !alg.is_graded() {
            return Err(DecompError::MissingGrading(alg.name().to_string()));
        }
        let minus: Vec<usize> = (0..alg.dim()).filter(|&i| alg.basis()[i].degree.unwrap() < 0).collect();
        let h: Vec<usize> = (0..alg.dim()).filter(|&i| alg.basis()[i].degree.unwrap() >= 0).collect();
        Ok(Self::assemble(DecompKind::Triangular, alg.clone(), alg.clone(), minus, h, None))
    }

    /// Arbitrary spanning vectors for `g_-` and `h` (original coordinates).
    pub fn custom(alg: &LieSuperAlgebra, minus: &[GVector], h: &[GVector]) -> Result<Self, DecompError> {
        let n = alg.dim();
        let mut all: Vec<GVector> = minus.to_vec();
        all.extend_from_slice(h);
        for v in &all {
            if v.is_empty() {
                return Err(DecompError::NotDirectSum("zero spanning vector".into()));
            }
            if alg.vector_parity(v).is_none() {
                return Err(DecompError::Inhomogeneous(describe(alg, v)));
            }
        }
        let r_minus = rank(minus, n);
        let r_h = rank(h, n);
        let r_all = rank(&all, n);
        if r_minus != minus.len() || r_h != h.len() {
            return Err(DecompError::NotDirectSum("spanning vectors are linearly dependent".into()));
        }
        if r_all < r_minus + r_h {
            return Err(DecompError::NotDirectSum(format!(
                "dim g_- + dim h = {} but the sum has dimension {r_all}",
                r_minus + r_h
            )));
        }
        if r_all != n {
            return Err(DecompError::NotDirectSum(format!("the sum has dimension {r_all}, algebra has {n}")));
        }
        // h closure, in original coordinates
        for (a, x) in h.iter().enumerate() {
            for y in &h[a..] {
                let b = alg.bracket(x, y);
                let mut with: Vec<GVector> = h.to_vec();
                with.push(b.clone());
                if !b.is_empty() && rank(&with, n) > h.len() {
                    return Err(DecompError::HNotClosed {
                        x: describe(alg, x),
                        y: describe(alg, y),
                        bracket: describe(alg, &b),
                    });
                }
            }
        }
        let aligned = all.iter().all(|v| v.len() == 1 && v.iter().all(|(_, c)| c.is_one()));
        let m = minus.len();
        if aligned {
            let idx = |v: &GVector| v.iter().next().unwrap().0;
            let minus_idx = minus.iter().map(idx).collect();
            let h_idx = h.iter().map(idx).collect();
            return Ok(Self::assemble(DecompKind::Custom, alg.clone(), alg.clone(), minus_idx, h_idx, None));
        }
        let inverse = invert(&all, n).expect("full rank checked above");
        let coords = |w: &GVector| -> GVector { apply(&inverse, w) };
        let basis: Vec<BasisElement> = all
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let degs: Vec<Option<i32>> = v.iter().map(|(i, _)| alg.basis()[i].degree).collect();
                let degree = if degs.windows(2).all(|w| w[0] == w[1]) { degs[0] } else { None };
                BasisElement { index: k, label: describe(alg, v), parity: alg.vector_parity(v).unwrap(), degree }
            })
            .collect();
        let mut stored = std::collections::BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                if i == j && basis[i].parity == Parity::Even {
                    continue;
                }
                let w = coords(&alg.bracket(&all[i], &all[j]));
                if !w.is_empty() {
                    stored.insert((i, j), w);
                }
            }
        }
        let adapted = LieSuperAlgebra::from_parts(format!("{} (adapted)", alg.name()), basis, stored);
        let change = BasisChange { vectors: all, inverse };
        Ok(Self::assemble(DecompKind::Custom, alg.clone(), adapted, (0..m).collect(), (m..n).collect(), Some(change)))
    }

    fn assemble(
        kind: DecompKind,
        original: LieSuperAlgebra,
        algebra: LieSuperAlgebra,
        minus: Vec<usize>,
        h: Vec<usize>,
        change: Option<BasisChange>,
    ) -> Self {
        let mut in_minus = vec![None; algebra.dim()];
        for (pos, &i) in minus.iter().enumerate() {
            in_minus[i] = Some(pos);
        }
        let is_subalgebra = minus.iter().all(|&i| {
            minus.iter().all(|&j| algebra.bracket_basis(i, j).iter().all(|(k, _)| in_minus[k].is_some()))
        });
        Decomposition { kind, original, algebra, minus, h, change, is_subalgebra, in_minus }
    }

    pub fn kind(&self) -> DecompKind {
        self.kind
    }

    /// The algebra in the adapted basis.
    pub fn algebra(&self) -> &LieSuperAlgebra {
        &self.algebra
    }

    pub fn original(&self) -> &LieSuperAlgebra {
        &self.original
    }

    pub fn is_aligned(&self) -> bool {
        self.change.is_none()
    }

    /// Adapted indices spanning `g_-`; position `i` is the dual variable `X^i`.
    pub fn minus(&self) -> &[usize] {
        &self.minus
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn is_subalgebra(&self) -> bool {
        self.is_subalgebra
    }

    pub fn is_minus(&self, i: usize) -> bool {
        self.in_minus[i].is_some()
    }

    /// Position of an adapted basis index inside `g_-`.
    pub fn minus_position(&self, i: usize) -> Option<usize> {
        self.in_minus[i]
    }

    pub fn var_count(&self) -> usize {
        self.minus.len()
    }

    /// The dual variable `X^i` (same parity as `P_i`).
    pub fn var(&self, i: usize) -> Indeterminate {
        Indeterminate { index: i, parity: self.algebra.parity(self.minus[i]) }
    }

    pub fn var_label(&self, i: usize) -> &str {
        self.algebra.label(self.minus[i])
    }

    /// Original coordinates to adapted coordinates.
    pub fn to_adapted(&self, v: &GVector) -> GVector {
        match &self.change {
            None => v.clone(),
            Some(c) => apply(&c.inverse, v),
        }
    }

    pub fn from_adapted(&self, v: &GVector) -> GVector {
        match &self.change {
            None => v.clone(),
            Some(c) => {
                let mut out = GVector::zero();
                for (k, ck) in v.iter() {
                    out.add_assign(&c.vectors[k].scale(ck));
                }
                out
            }
        }
    }

    pub fn project_minus(&self, v: &GVector) -> GVector {
        v.restrict(|i| self.is_minus(i))
    }

    pub fn project_h(&self, v: &GVector) -> GVector {
        v.restrict(|i| !self.is_minus(i))
    }

    pub fn project_minus_poly(&self, p: &SuperPoly<GVector>) -> SuperPoly<GVector> {
        p.map(|v| self.project_minus(v))
    }

    pub fn project_h_poly(&self, p: &SuperPoly<GVector>) -> SuperPoly<GVector> {
        p.map(|v| self.project_h(v))
    }
}

/// Human-readable linear combination of labels.
pub fn describe(alg: &LieSuperAlgebra, v: &GVector) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (i, c)) in v.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        if !a.is_one() {
            out.push_str(&format!("{a}*"));
        }
        out.push_str(alg.label(i));
    }
    out
}

/// Parse `"E_{32} + E_{12}"`, `"2 h_{1} - 1/2 e_{10}"` or a bare label.
/// Terms are separated by `" + "` or `" - "` (with spaces).
pub fn parse_vector(alg: &LieSuperAlgebra, text: &str) -> Result<GVector, DecompError> {
    let bad = || DecompError::Parse(text.to_string());
    let mut v = GVector::zero();
    let mut rest = format!("+ {}", text.trim());
    while !rest.is_empty() {
        let (neg, body) = if let Some(r) = rest.strip_prefix("+ ") {
            (false, r)
        } else if let Some(r) = rest.strip_prefix("- ") {
            (true, r)
        } else {
            return Err(bad());
        };
        let end = [body.find(" + "), body.find(" - ")].into_iter().flatten().min().unwrap_or(body.len());
        let term = body[..end].trim();
        let (coeff, label) = match term.split_once(char::is_whitespace) {
            Some((c, l)) => (c.trim_end_matches('*').parse::<Scalar>().map_err(|_| bad())?, l.trim()),
            None => (Scalar::one(), term),
        };
        let label = label.trim_start_matches('*').trim();
        let i = alg.index_of(label).ok_or_else(bad)?;
        v.add_to(i, coeff.signed(neg));
        rest = body[end..].trim_start().to_string();
    }
    Ok(v)
}

fn rank(vectors: &[GVector], n: usize) -> usize {
    let mut rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| dense(v, n)).collect();
    row_reduce(&mut rows)
}

fn dense(v: &GVector, n: usize) -> Vec<Scalar> {
    let mut d = vec![Scalar::zero(); n];
    for (i, c) in v.iter() {
        d[i] = c.clone();
    }
    d
}

/// Gaussian elimination in place; returns the rank.
fn row_reduce(rows: &mut [Vec<Scalar>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                for j in 0..cols {
                    let t = &rows[r][j] * &f;
                    rows[k][j] -= &t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Inverse of the matrix whose columns are `vectors`.
fn invert(vectors: &[GVector], n: usize) -> Option<Vec<Vec<Scalar>>> {
    // augmented [M | I] with M[i][k] = vectors[k][i]
    let mut rows: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row: Vec<Scalar> = vectors.iter().map(|v| v.get(i)).collect();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    // eliminate on the left block only
    let mut r = 0;
    for c in 0..n {
        let p = (r..n).find(|&k| !rows[k][c].is_zero())?;
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..n {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                for j in 0..2 * n {
                    let t = &rows[r][j] * &f;
                    rows[k][j] -= &t;
                }
            }
        }
        r += 1;
    }
    Some(rows.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn apply(m: &[Vec<Scalar>], v: &GVector) -> GVector {
    let mut out = GVector::zero();
    for (i, row) in m.iter().enumerate() {
        let mut s = Scalar::zero();
        for (j, c) in v.iter() {
            s += &(&row[j] * c);
        }
        out.add_to(i, s);
    }
    out
}
