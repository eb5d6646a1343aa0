//! Supercommutative polynomials in graded indeterminates.
//!
//! A [`Monomial`] is a product of indeterminates kept sorted by index. Odd
//! indeterminates anticommute and square to zero, so every product and every
//! derivative carries a sign. [`SuperPoly`] is a finite map from monomials to
//! coefficients in some value space `W` (scalars, algebra vectors, matrices).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{factorial, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Parity of a product.
    pub fn add(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != other.is_odd())
    }

    /// `true` when `(-1)^{|self||other|} = -1`.
    pub fn sign_with(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Indeterminate {
    pub index: usize,
    pub parity: Parity,
}

impl Indeterminate {
    pub fn even(index: usize) -> Self {
        Indeterminate { index, parity: Parity::Even }
    }

    pub fn odd(index: usize) -> Self {
        Indeterminate { index, parity: Parity::Odd }
    }
}

/// A sorted product of indeterminates. No odd factor occurs twice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    factors: Vec<Indeterminate>,
}

/// Sort a factor sequence into canonical order.
///
/// Returns `None` when an odd factor repeats; otherwise the sign (`true`
/// meaning `-1`) picked up from transposing odd factors.
pub fn normalize(factors: &[Indeterminate]) -> Option<(bool, Monomial)> {
    let mut v = factors.to_vec();
    let mut neg = false;
    // insertion sort, counting odd-odd swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1].index > v[j].index {
            if v[j - 1].parity.is_odd() && v[j].parity.is_odd() {
                neg = !neg;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0].index == w[1].index && w[0].parity.is_odd() {
            return None;
        }
    }
    Some((neg, Monomial { factors: v }))
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(x: Indeterminate) -> Self {
        Monomial { factors: vec![x] }
    }

    /// Build from factors already known to be sorted and valid.
    pub fn from_sorted(factors: Vec<Indeterminate>) -> Self {
        debug_assert!(normalize(&factors).map(|(s, _)| !s).unwrap_or(false));
        Monomial { factors }
    }

    pub fn factors(&self) -> &[Indeterminate] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn odd_count(&self) -> usize {
        self.factors.iter().filter(|x| x.parity.is_odd()).count()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.odd_count() % 2 == 1)
    }

    pub fn exponent(&self, index: usize) -> usize {
        self.factors.iter().filter(|x| x.index == index).count()
    }

    /// Exponents grouped by index, in index order.
    pub fn exponents(&self) -> Vec<(Indeterminate, usize)> {
        let mut out: Vec<(Indeterminate, usize)> = Vec::new();
        for &x in &self.factors {
            match out.last_mut() {
                Some((y, m)) if y.index == x.index => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// `self * other`, normalized.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.is_one() {
            return Some((false, other.clone()));
        }
        if other.is_one() {
            return Some((false, self.clone()));
        }
        // merge: moving a factor of `other` left past odd factors of `self`
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut neg = false;
        let (mut i, mut j) = (0, 0);
        let mut odd_left_in_a = self.odd_count();
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].index <= b[j].index);
            if take_a {
                if i < a.len() && j < b.len() && a[i].index == b[j].index && a[i].parity.is_odd() {
                    return None;
                }
                if a[i].parity.is_odd() {
                    odd_left_in_a -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if b[j].parity.is_odd() && odd_left_in_a % 2 == 1 {
                    neg = !neg;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        Some((neg, Monomial { factors: out }))
    }

    /// Left derivative in the variable `x`: returns the multiplicity factor,
    /// the sign and the struck monomial, or `None` if `x` does not occur.
    pub fn left_derivative(&self, x: Indeterminate) -> Option<(usize, bool, Monomial)> {
        let pos = self.factors.iter().position(|y| y.index == x.index)?;
        let mult = self.exponent(x.index);
        let neg = x.parity.is_odd()
            && self.factors[..pos].iter().filter(|y| y.parity.is_odd()).count() % 2 == 1;
        let mut rest = self.factors.clone();
        rest.remove(pos);
        Some((mult, neg, Monomial { factors: rest }))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|(x, m)| if m == 1 { format!("X{}", x.index) } else { format!("X{}^{}", x.index, m) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// A value space for polynomial coefficients.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, s: &Scalar) -> Self;

    fn negated(&self) -> Self {
        self.scale(&-Scalar::one())
    }
}

impl Coefficient for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

/// A finite sum of monomials with coefficients in `W`, optionally truncated
/// at a maximal degree.
#[derive(Clone, PartialEq)]
pub struct SuperPoly<W> {
    terms: BTreeMap<Monomial, W>,
    truncation: Option<usize>,
}

impl<W: Coefficient> fmt::Debug for SuperPoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<W: Coefficient> Default for SuperPoly<W> {
    fn default() -> Self {
        SuperPoly::zero(None)
    }
}

impl<W: Coefficient> SuperPoly<W> {
    pub fn zero(truncation: Option<usize>) -> Self {
        SuperPoly { terms: BTreeMap::new(), truncation }
    }

    pub fn constant(w: W, truncation: Option<usize>) -> Self {
        Self::term(Monomial::one(), w, truncation)
    }

    pub fn term(m: Monomial, w: W, truncation: Option<usize>) -> Self {
        let mut p = Self::zero(truncation);
        p.add_term(m, w);
        p
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// Change the cap, dropping terms above it.
    pub fn with_truncation(mut self, truncation: Option<usize>) -> Self {
        self.truncation = truncation;
        if let Some(t) = truncation {
            self.terms.retain(|m, _| m.degree() <= t);
        }
        self
    }

    fn fits(&self, m: &Monomial) -> bool {
        self.truncation.map_or(true, |t| m.degree() <= t)
    }

    /// Add `w * m`. Terms above the truncation degree are dropped.
    pub fn add_term(&mut self, m: Monomial, w: W) {
        if w.is_zero() || !self.fits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(w);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&w);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_signed_term(&mut self, m: Monomial, w: W, neg: bool) {
        if neg {
            self.add_term(m, w.negated());
        } else {
            self.add_term(m, w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &W)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&W> {
        self.terms.get(m)
    }

    /// Maximal degree of a stored term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone().with_truncation(min_trunc(self.truncation, other.truncation));
        for (m, w) in &other.terms {
            out.add_term(m.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|w| w.negated())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|w| w.scale(s))
    }

    pub fn map<V: Coefficient>(&self, f: impl Fn(&W) -> V) -> SuperPoly<V> {
        let mut out = SuperPoly::zero(self.truncation);
        for (m, w) in &self.terms {
            out.add_term(m.clone(), f(w));
        }
        out
    }

    /// Graded left derivative with respect to `x`.
    pub fn partial(&self, x: Indeterminate) -> Self {
        let mut out = Self::zero(self.truncation);
        for (m, w) in &self.terms {
            if let Some((mult, neg, rest)) = m.left_derivative(x) {
                let c = w.scale(&Scalar::from_int(mult as i64));
                out.add_signed_term(rest, c, neg);
            }
        }
        out
    }

    /// Substitute `X -> -X`: each term picks up `(-1)^degree`.
    pub fn negate_vars(&self) -> Self {
        let mut out = Self::zero(self.truncation);
        for (m, w) in &self.terms {
            out.add_signed_term(m.clone(), w.clone(), m.degree() % 2 == 1);
        }
        out
    }

    /// Left multiplication by a single monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.truncation);
        for (n, w) in &self.terms {
            if let Some((neg, p)) = m.mul(n) {
                out.add_signed_term(p, w.clone(), neg);
            }
        }
        out
    }
}

impl<W: Coefficient> SuperPoly<W> {
    pub fn into_terms(self) -> BTreeMap<Monomial, W> {
        self.terms
    }
}

fn min_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

pub type ScalarPoly = SuperPoly<Scalar>;

impl ScalarPoly {
    pub fn one() -> Self {
        SuperPoly::constant(Scalar::one(), None)
    }

    pub fn var(x: Indeterminate) -> Self {
        SuperPoly::term(Monomial::var(x), Scalar::one(), None)
    }

    pub fn monomial(factors: &[Indeterminate]) -> Self {
        match normalize(factors) {
            Some((neg, m)) => {
                let mut p = SuperPoly::zero(None);
                p.add_signed_term(m, Scalar::one(), neg);
                p
            }
            None => SuperPoly::zero(None),
        }
    }
}

/// Product `a * b` of a scalar polynomial with a `W`-valued one.
pub fn mul<W: Coefficient>(a: &ScalarPoly, b: &SuperPoly<W>) -> SuperPoly<W> {
    let mut out = SuperPoly::zero(min_trunc(a.truncation, b.truncation));
    for (ma, ca) in &a.terms {
        for (mb, wb) in &b.terms {
            if let Some((neg, m)) = ma.mul(mb) {
                out.add_signed_term(m, wb.scale(ca), neg);
            }
        }
    }
    out
}

/// Pairing of a single monomial in the dual variables with a single monomial
/// in the basis variables: zero unless the multisets agree, otherwise the
/// product of multiplicity factorials times `(-1)^{q(q-1)/2}` where `q` is the
/// number of odd factors.
pub fn pair_monomials(f: &Monomial, e: &Monomial) -> Scalar {
    if f != e {
        return Scalar::zero();
    }
    let mut out = Scalar::one();
    for (_, m) in f.exponents() {
        out = out * Scalar::from(factorial(m as u32));
    }
    let q = f.odd_count();
    out.signed((q * q.saturating_sub(1) / 2) % 2 == 1)
}

/// Bilinear pairing between a polynomial in `X` and an element of the
/// symmetric algebra written in the dual variables `P`.
pub fn pair(f: &ScalarPoly, e: &ScalarPoly) -> Scalar {
    let mut out = Scalar::zero();
    for (m, c) in &f.terms {
        if let Some(d) = e.terms.get(m) {
            out += &(c * d * pair_monomials(m, m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Indeterminate {
        Indeterminate::even(i)
    }
    fn t(i: usize) -> Indeterminate {
        Indeterminate::odd(i)
    }

    #[test]
    fn normalize_examples() {
        assert!(normalize(&[t(2), t(2)]).is_none());
        assert_eq!(normalize(&[x(2), x(1)]), Some((false, Monomial::from_sorted(vec![x(1), x(2)]))));
        assert_eq!(normalize(&[t(2), t(1)]), Some((true, Monomial::from_sorted(vec![t(1), t(2)]))));
        assert_eq!(normalize(&[t(3), x(2), t(1)]).unwrap().0, true);
    }

    #[test]
    fn mul_examples() {
        let one = ScalarPoly::one();
        let p = ScalarPoly::var(x(0)).add(&ScalarPoly::one());
        assert_eq!(mul(&one, &p), p);
        assert!(mul(&ScalarPoly::var(t(1)), &ScalarPoly::var(t(1))).is_zero());
        let q = ScalarPoly::var(x(0)).sub(&ScalarPoly::one());
        let expect = ScalarPoly::monomial(&[x(0), x(0)]).sub(&ScalarPoly::one());
        assert_eq!(mul(&p, &q), expect);
    }

    #[test]
    fn mul_matches_normalize() {
        let a = Monomial::from_sorted(vec![t(1), x(2), t(4)]);
        let b = Monomial::from_sorted(vec![t(0), t(3), x(5)]);
        let mut seq = a.factors().to_vec();
        seq.extend_from_slice(b.factors());
        assert_eq!(a.mul(&b), normalize(&seq));
    }

    #[test]
    fn partial_examples() {
        let p = ScalarPoly::monomial(&[x(0), x(0), x(0)]);
        assert_eq!(p.partial(x(0)), ScalarPoly::monomial(&[x(0), x(0)]).scale(&Scalar::from_int(3)));
        let q = ScalarPoly::monomial(&[t(1), t(2)]);
        assert_eq!(q.partial(t(1)), ScalarPoly::var(t(2)));
        assert_eq!(q.partial(t(2)), ScalarPoly::var(t(1)).neg());
    }

    #[test]
    fn pair_examples() {
        let x1 = ScalarPoly::var(x(1));
        assert_eq!(pair(&x1, &x1), Scalar::one());
        let x12 = ScalarPoly::monomial(&[x(1), x(2)]);
        assert_eq!(pair(&x12, &x12), Scalar::one());
        let x11 = ScalarPoly::monomial(&[x(1), x(1)]);
        assert_eq!(pair(&x11, &x11), Scalar::from_int(2));
        let t12 = ScalarPoly::monomial(&[t(1), t(2)]);
        assert_eq!(pair(&t12, &t12), Scalar::from_int(-1));
        assert!(pair(&x1, &x12).is_zero());
    }

    #[test]
    fn negate_vars_examples() {
        let p = ScalarPoly::one()
            .add(&ScalarPoly::var(x(0)))
            .add(&ScalarPoly::monomial(&[x(0), x(0), x(0)]));
        let q = ScalarPoly::one()
            .sub(&ScalarPoly::var(x(0)))
            .sub(&ScalarPoly::monomial(&[x(0), x(0), x(0)]));
        assert_eq!(p.negate_vars(), q);
        assert_eq!(p.negate_vars().negate_vars(), p);
        let sq = ScalarPoly::monomial(&[x(0), x(0)]);
        assert_eq!(sq.negate_vars(), sq);
    }

    #[test]
    fn truncation_caps_products() {
        let p = ScalarPoly::var(x(0)).with_truncation(Some(2));
        let p3 = mul(&p, &mul(&p, &p));
        assert!(p3.is_zero());
        assert_eq!(mul(&p, &p).degree(), Some(2));
    }
}
