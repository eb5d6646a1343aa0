//! Polynomials in symbolic weight parameters `lambda_1, lambda_2, ...`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::superpoly::Coefficient;

/// Sparse polynomial with exact coefficients. Keys are exponent vectors with
/// trailing zeros removed, so the constant term has the empty key.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightPoly(BTreeMap<Vec<u32>, Scalar>);

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl WeightPoly {
    pub fn zero() -> Self {
        WeightPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut w = Self::zero();
        w.add_monomial(Vec::new(), c);
        w
    }

    /// The parameter `lambda_{i+1}`.
    pub fn param(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut w = Self::zero();
        w.add_monomial(e, Scalar::one());
        w
    }

    pub fn add_monomial(&mut self, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = trim(exps);
        let entry = self.0.entry(e.clone()).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Number of parameters that occur.
    pub fn param_count(&self) -> usize {
        self.0.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &WeightPoly) -> WeightPoly {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_monomial(e.clone(), c.clone());
        }
        out
    }

    /// `self += s * a * b` in place.
    pub fn add_product(&mut self, a: &WeightPoly, b: &WeightPoly, s: &Scalar) {
        for (e1, c1) in &a.0 {
            for (e2, c2) in &b.0 {
                let e = if e2.is_empty() {
                    e1.clone()
                } else if e1.is_empty() {
                    e2.clone()
                } else {
                    let n = e1.len().max(e2.len());
                    (0..n).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect()
                };
                let c = c1 * c2 * s;
                match self.0.get_mut(&e) {
                    Some(x) => {
                        *x += &c;
                        if x.is_zero() {
                            self.0.remove(&e);
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            self.0.insert(e, c);
                        }
                    }
                }
            }
        }
    }

    pub fn sub(&self, other: &WeightPoly) -> WeightPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeightPoly {
        WeightPoly(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    pub fn scale(&self, s: &Scalar) -> WeightPoly {
        if s.is_zero() {
            return Self::zero();
        }
        WeightPoly(self.0.iter().map(|(e, c)| (e.clone(), c * s)).collect())
    }

    pub fn mul(&self, other: &WeightPoly) -> WeightPoly {
        let mut out = Self::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                let n = e1.len().max(e2.len());
                let e = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_monomial(e, c1 * c2);
            }
        }
        out
    }

    /// Substitute numeric values for the parameters.
    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.0
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (i, &k) in e.iter().enumerate() {
                    t *= &values[i].pow(k);
                }
                t
            })
            .sum()
    }

    /// TeX form. With `single` the only parameter prints as `\lambda`.
    pub fn to_tex(&self, single: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // highest total degree first
        let mut terms: Vec<_> = self.0.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars = tex_params(e, single);
            if vars.is_empty() {
                out.push_str(&tex_scalar(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&tex_scalar(&a));
                    out.push(' ');
                }
                out.push_str(&vars);
            }
        }
        out
    }
}

pub fn tex_scalar(a: &Scalar) -> String {
    if a.is_integer() {
        a.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

fn tex_params(e: &[u32], single: bool) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let base = if single { "\\lambda".to_string() } else { format!("\\lambda_{{{}}}", i + 1) };
        parts.push(if k == 1 { base } else { format!("{base}^{{{k}}}") });
    }
    parts.join(" ")
}

impl From<Scalar> for WeightPoly {
    fn from(c: Scalar) -> Self {
        WeightPoly::constant(c)
    }
}

impl From<i64> for WeightPoly {
    fn from(c: i64) -> Self {
        WeightPoly::constant(Scalar::from_int(c))
    }
}

impl fmt::Debug for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("l{}", i + 1) } else { format!("l{}^{k}", i + 1) })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Coefficient for WeightPoly {
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        *self = WeightPoly::add(self, other);
    }
    fn scale(&self, s: &Scalar) -> Self {
        WeightPoly::scale(self, s)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

#[derive(Serialize, Deserialize)]
struct WeightTerm {
    exponents: Vec<u32>,
    coeff: Scalar,
}

impl Serialize for WeightPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<WeightTerm> =
            self.0.iter().map(|(e, c)| WeightTerm { exponents: e.clone(), coeff: c.clone() }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<WeightTerm>::deserialize(d)?;
        let mut w = WeightPoly::zero();
        for t in terms {
            w.add_monomial(t.exponents, t.coeff);
        }
        Ok(w)
    }
}
