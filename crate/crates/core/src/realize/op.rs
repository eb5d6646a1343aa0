//! Differential operators with polynomial coefficients in supercommuting
//! variables, tensored with `End(V)`.
//!
//! A term `c * m * d^D (x) E_{rs}` is stored in normal order: the coefficient
//! monomial `m` sits to the left of the derivative monomial `d^D`, which means
//! `d_{D_1} ... d_{D_k}` with `d_{D_k}` applied first.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::weight::WeightPoly;
use crate::scalar::Scalar;
use crate::superpoly::{Indeterminate, Monomial, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Acts on `V`-valued polynomials in `X`; first order.
    Coinduced,
    /// Acts on `S(g_-) (x) V`, polynomials in `P`.
    Induced,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpKey {
    pub coeff: Monomial,
    pub deriv: Monomial,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("result has degree {degree}, above the truncation {truncation}")]
    TruncationOverflow { degree: usize, truncation: usize },
}

#[derive(Clone, PartialEq)]
pub struct DiffOperator {
    pub side: Side,
    v_parities: Vec<Parity>,
    terms: BTreeMap<OpKey, WeightPoly>,
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, w)| format!("({w}) {} D[{}] E{}{}", k.coeff, k.deriv, k.row, k.col))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Element of `S (x) V`: polynomial coefficients per basis vector of `V`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ModuleElement(BTreeMap<(Monomial, usize), WeightPoly>);

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|((m, v), w)| format!("({w}) {m} v{v}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: Monomial, v: usize) -> Self {
        let mut e = Self::zero();
        e.add_term(m, v, WeightPoly::one());
        e
    }

    pub fn add_term(&mut self, m: Monomial, v: usize, w: WeightPoly) {
        if w.is_zero() {
            return;
        }
        let key = (m, v);
        let e = self.0.entry(key.clone()).or_default();
        *e = e.add(&w);
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Monomial, usize), &WeightPoly)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Monomial, v: usize) -> WeightPoly {
        self.0.get(&(m.clone(), v)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.keys().map(|(m, _)| m.degree()).max()
    }
}

/// `d^D f` for a derivative monomial, as a factor and a monomial.
pub fn apply_derivatives(deriv: &Monomial, f: &Monomial) -> Option<(Scalar, Monomial)> {
    let mut c = Scalar::one();
    let mut cur = f.clone();
    for &x in deriv.factors().iter().rev() {
        let (mult, neg, rest) = cur.left_derivative(x)?;
        c = (c * Scalar::from_int(mult as i64)).signed(neg);
        cur = rest;
    }
    Some((c, cur))
}

/// Move derivatives past a coefficient: `d^D o m = sum c * m' d^{D'}`.
pub fn normal_order(deriv: &Monomial, m: &Monomial) -> Vec<(Scalar, Monomial, Monomial)> {
    let Some((&x, rest)) = deriv.factors().split_first() else {
        return vec![(Scalar::one(), m.clone(), Monomial::one())];
    };
    if rest.is_empty() {
        // d_x m = (d_x m) + (-1)^{|x||m|} m d_x
        let mut out = Vec::with_capacity(2);
        if let Some((mult, neg, m2)) = m.left_derivative(x) {
            out.push((Scalar::from_int(mult as i64).signed(neg), m2, Monomial::one()));
        }
        out.push((Scalar::one().signed(x.parity.is_odd() && m.parity().is_odd()), m.clone(), deriv.clone()));
        return out;
    }
    let rest = Monomial::from_sorted(rest.to_vec());
    let mut acc: BTreeMap<(Monomial, Monomial), Scalar> = BTreeMap::new();
    let mut push = |c: Scalar, a: Monomial, b: Monomial| {
        let e = acc.entry((a, b)).or_insert_with(Scalar::zero);
        *e += &c;
    };
    for (c, m1, e1) in normal_order(&rest, m) {
        if let Some((mult, neg, m2)) = m1.left_derivative(x) {
            push((&c * Scalar::from_int(mult as i64)).signed(neg), m2, e1.clone());
        }
        if let Some((neg, e2)) = Monomial::var(x).mul(&e1) {
            let swap = x.parity.is_odd() && m1.parity().is_odd();
            push(c.signed(neg ^ swap), m1, e2);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (c, a, b)).collect()
}

impl DiffOperator {
    pub fn zero(side: Side, v_parities: Vec<Parity>) -> Self {
        DiffOperator { side, v_parities, terms: BTreeMap::new() }
    }

    pub fn v_parities(&self) -> &[Parity] {
        &self.v_parities
    }

    pub fn add_term(&mut self, key: OpKey, w: WeightPoly) {
        if w.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_default();
        *e = e.add(&w);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &WeightPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn key_parity(&self, k: &OpKey) -> bool {
        k.coeff.parity().is_odd()
            ^ k.deriv.parity().is_odd()
            ^ self.v_parities[k.row].is_odd()
            ^ self.v_parities[k.col].is_odd()
    }

    /// Common parity of all terms, `None` if mixed. The zero operator is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|k| self.key_parity(k));
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(Parity::from_odd(first))
    }

    pub fn max_derivative_order(&self) -> usize {
        self.terms.keys().map(|k| k.deriv.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, w) in &other.terms {
            out.add_term(k.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.side, self.v_parities.clone());
        for (k, w) in &self.terms {
            out.add_term(k.clone(), w.scale(s));
        }
        out
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = BTreeMap::new();
        self.compose_into(other, &Scalar::one(), &mut acc);
        self.with_terms(acc)
    }

    fn with_terms(&self, mut terms: BTreeMap<OpKey, WeightPoly>) -> Self {
        terms.retain(|_, w| !w.is_zero());
        DiffOperator { side: self.side, v_parities: self.v_parities.clone(), terms }
    }

    /// `acc += s * (self o other)`.
    fn compose_into(&self, other: &Self, s: &Scalar, acc: &mut BTreeMap<OpKey, WeightPoly>) {
        let mut by_row: BTreeMap<usize, Vec<(&OpKey, &WeightPoly, bool)>> = BTreeMap::new();
        for (k2, w2) in &other.terms {
            let a2_odd = k2.coeff.parity().is_odd() ^ k2.deriv.parity().is_odd();
            by_row.entry(k2.row).or_default().push((k2, w2, a2_odd));
        }
        for (k1, w1) in &self.terms {
            let Some(row) = by_row.get(&k1.col) else { continue };
            let b1_odd = self.v_parities[k1.row].is_odd() ^ self.v_parities[k1.col].is_odd();
            for &(k2, w2, a2_odd) in row {
                for (c, m, d) in normal_order(&k1.deriv, &k2.coeff) {
                    let Some((n1, coeff)) = k1.coeff.mul(&m) else { continue };
                    let Some((n2, deriv)) = d.mul(&k2.deriv) else { continue };
                    let sign = (b1_odd && a2_odd) ^ n1 ^ n2;
                    let c = (c * s).signed(sign);
                    acc.entry(OpKey { coeff, deriv, row: k1.row, col: k2.col }).or_default().add_product(w1, w2, &c);
                }
            }
        }
    }

    /// `[A, B] = AB - (-1)^{|A||B|} BA`, extended bilinearly over homogeneous
    /// terms.
    pub fn supercommutator(&self, other: &Self) -> Self {
        let mut acc = BTreeMap::new();
        let pairs = match (self.parity(), other.parity()) {
            (Some(pa), Some(pb)) => vec![(self.clone(), pa.is_odd(), other.clone(), pb.is_odd())],
            _ => {
                let (a_parts, b_parts) = (self.split_parity(), other.split_parity());
                let mut v = Vec::new();
                for (pa, a) in [false, true].into_iter().zip(a_parts) {
                    for (pb, b) in [false, true].into_iter().zip(b_parts.clone()) {
                        v.push((a.clone(), pa, b, pb));
                    }
                }
                v
            }
        };
        for (a, pa, b, pb) in &pairs {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            a.compose_into(b, &Scalar::one(), &mut acc);
            b.compose_into(a, &Scalar::from_int(if *pa && *pb { 1 } else { -1 }), &mut acc);
        }
        self.with_terms(acc)
    }

    fn split_parity(&self) -> [Self; 2] {
        let mut parts = [Self::zero(self.side, self.v_parities.clone()), Self::zero(self.side, self.v_parities.clone())];
        for (k, w) in &self.terms {
            parts[self.key_parity(k) as usize].terms.insert(k.clone(), w.clone());
        }
        parts
    }

    /// `(A (x) B)(f (x) v) = (-1)^{|B||f|} A f (x) B v`. With a truncation the
    /// result degree must not exceed it.
    pub fn apply(&self, x: &ModuleElement, truncation: Option<usize>) -> Result<ModuleElement, ApplyError> {
        let mut out = ModuleElement::zero();
        for ((f, s), wf) in x.iter() {
            for (k, w) in &self.terms {
                if k.col != *s {
                    continue;
                }
                let Some((c, rest)) = apply_derivatives(&k.deriv, f) else { continue };
                let Some((neg, m)) = k.coeff.mul(&rest) else { continue };
                let b_odd = self.v_parities[k.row].is_odd() ^ self.v_parities[k.col].is_odd();
                let sign = (b_odd && f.parity().is_odd()) ^ neg;
                out.add_term(m, k.row, w.mul(wf).scale(&c.signed(sign)));
            }
        }
        if let (Some(t), Some(d)) = (truncation, out.degree()) {
            if d > t {
                return Err(ApplyError::TruncationOverflow { degree: d, truncation: t });
            }
        }
        Ok(out)
    }
}

/// All monomials of degree at most `max_degree` in the given variables, odd
/// variables at most once, ordered by degree.
pub fn monomials_up_to(vars: &[Indeterminate], max_degree: usize) -> Vec<Monomial> {
    let mut layers = vec![vec![Monomial::one()]];
    for d in 1..=max_degree {
        let mut next = Vec::new();
        for m in &layers[d - 1] {
            let last = m.factors().last().map(|x| x.index);
            for &x in vars {
                if last.is_some_and(|l| x.index < l || (x.index == l && x.parity.is_odd())) {
                    continue;
                }
                let mut f = m.factors().to_vec();
                f.push(x);
                next.push(Monomial::from_sorted(f));
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Indeterminate {
        Indeterminate::even(i)
    }

    fn mono(f: &[Indeterminate]) -> Monomial {
        Monomial::from_sorted(f.to_vec())
    }

    fn op1(coeff: Monomial, deriv: Monomial, w: i64) -> DiffOperator {
        let mut o = DiffOperator::zero(Side::Coinduced, vec![Parity::Even]);
        o.add_term(OpKey { coeff, deriv, row: 0, col: 0 }, WeightPoly::from(w));
        o
    }

    #[test]
    fn weyl_relation() {
        // [d, X] = 1
        let d = op1(Monomial::one(), mono(&[x(0)]), 1);
        let xm = op1(mono(&[x(0)]), Monomial::one(), 1);
        assert_eq!(d.supercommutator(&xm), op1(Monomial::one(), Monomial::one(), 1));
    }

    #[test]
    fn odd_weyl_relation() {
        // {d_t, t} = 1 for odd t
        let t = Indeterminate::odd(0);
        let mut d = DiffOperator::zero(Side::Coinduced, vec![Parity::Even]);
        d.add_term(OpKey { coeff: Monomial::one(), deriv: mono(&[t]), row: 0, col: 0 }, WeightPoly::one());
        let mut tm = DiffOperator::zero(Side::Coinduced, vec![Parity::Even]);
        tm.add_term(OpKey { coeff: mono(&[t]), deriv: Monomial::one(), row: 0, col: 0 }, WeightPoly::one());
        assert_eq!(d.supercommutator(&tm), op1(Monomial::one(), Monomial::one(), 1));
        assert!(d.supercommutator(&d).is_zero());
    }

    #[test]
    fn apply_derivative() {
        let d = op1(Monomial::one(), mono(&[x(0)]), 1);
        let r = d.apply(&ModuleElement::basis(mono(&[x(0), x(0), x(0)]), 0), None).unwrap();
        assert_eq!(r, {
            let mut e = ModuleElement::zero();
            e.add_term(mono(&[x(0), x(0)]), 0, WeightPoly::from(3));
            e
        });
        let xm = op1(mono(&[x(0)]), Monomial::one(), 1);
        assert!(xm.apply(&ModuleElement::basis(mono(&[x(0)]), 0), Some(1)).is_err());
    }

    #[test]
    fn composition_matches_application() {
        // (X d^2)(X^2 d) applied to X^3 two ways
        let a = op1(mono(&[x(0)]), mono(&[x(0), x(0)]), 1);
        let b = op1(mono(&[x(0), x(0)]), mono(&[x(0)]), 1);
        let v = ModuleElement::basis(mono(&[x(0), x(0), x(0)]), 0);
        let seq = a.apply(&b.apply(&v, None).unwrap(), None).unwrap();
        assert_eq!(a.compose(&b).apply(&v, None).unwrap(), seq);
    }

    #[test]
    fn monomial_enumeration() {
        let vars = [Indeterminate::even(0), Indeterminate::odd(1)];
        let ms = monomials_up_to(&vars, 3);
        // 1, x, t, x^2, xt, x^3, x^2 t
        assert_eq!(ms.len(), 7);
    }
}
