//! TeX and structured (JSON) output for a realization.
//!
//! # TeX schema
//!
//! One display equation per basis element, in basis order:
//!
//! ```text
//! \[ T(e) = -X^{2}\partial_{X} - \lambda X \]
//! ```
//!
//! `T` on the coinduced side, `I` on the induced side. Variables are `X`
//! (coinduced) or `P` (induced), subscripted `X_{i}` from 1 when there is more
//! than one. A term is `coefficient monomial derivative matrix-unit`:
//!
//! * the coefficient is an integer, `\frac{p}{q}`, or a polynomial in
//!   `\lambda` (`\lambda_{i}` for several weights), parenthesised when it has
//!   more than one term; a coefficient `1` is omitted unless nothing follows;
//! * powers print as `X^{k}`, derivatives as `\partial_{X}` or
//!   `\partial_{X}^{k}`;
//! * for `dim V > 1` the term ends in the matrix unit `E_{rc}` (1-based);
//! * terms are sorted by total degree (coefficient plus derivative), highest
//!   first, then by their key; the zero operator prints as `0`.
//!
//! # Structured schema
//!
//! [`OperatorFile`]: variables with parities, the parities of `V`, and for each
//! generator a list of terms `{coeff, monomial, derivative, entry}` where
//! `coeff` is a weight polynomial, `monomial` and `derivative` are exponent
//! vectors (`derivative` is `null` for none) and `entry` is the `(row, col)`
//! of `V` (`null` when `dim V = 1`).

use coinduce::decomp::Decomposition;
use coinduce::realize::{tex_scalar, DiffOperator, OpKey, Realization, Side, WeightPoly};
use coinduce::superpoly::{Indeterminate, Monomial, Parity};
use serde::{Deserialize, Serialize};

pub const OPERATOR_FORMAT: &str = "coinduce-operators";
pub const OPERATOR_FORMAT_VERSION: u32 = 1;

fn var_name(side: Side, i: usize, count: usize) -> String {
    let base = match side {
        Side::Coinduced => "X",
        Side::Induced => "P",
    };
    if count == 1 {
        base.to_string()
    } else {
        format!("{base}_{{{}}}", i + 1)
    }
}

fn tex_monomial(m: &Monomial, side: Side, count: usize) -> String {
    let mut out = String::new();
    for (x, k) in m.exponents() {
        out.push_str(&var_name(side, x.index, count));
        if k > 1 {
            out.push_str(&format!("^{{{k}}}"));
        }
    }
    out
}

fn tex_derivative(m: &Monomial, side: Side, count: usize) -> String {
    let mut out = String::new();
    for (x, k) in m.exponents() {
        out.push_str(&format!("\\partial_{{{}}}", var_name(side, x.index, count)));
        if k > 1 {
            out.push_str(&format!("^{{{k}}}"));
        }
    }
    out
}

/// TeX for one operator's right-hand side.
pub fn tex_operator(op: &DiffOperator, var_count: usize, weight_count: usize) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let side = op.side;
    let single = weight_count == 1;
    let dim = op.v_parities().len();
    let mut terms: Vec<(&OpKey, &WeightPoly)> = op.terms().collect();
    terms.sort_by(|a, b| {
        let da = a.0.coeff.degree() + a.0.deriv.degree();
        let db = b.0.coeff.degree() + b.0.deriv.degree();
        db.cmp(&da).then_with(|| a.0.cmp(b.0))
    });
    let mut out = String::new();
    for (n, (key, w)) in terms.into_iter().enumerate() {
        let mut body = tex_monomial(&key.coeff, side, var_count);
        body.push_str(&tex_derivative(&key.deriv, side, var_count));
        if dim > 1 {
            body.push_str(&format!("E_{{{}{}}}", key.row + 1, key.col + 1));
        }
        let (neg, coeff) = match w.as_constant() {
            Some(c) => {
                let a = c.abs();
                let text = if a.is_one() && !body.is_empty() { String::new() } else { tex_scalar(&a) };
                (c.is_negative(), text)
            }
            None => {
                let single_term = w.terms().count() == 1;
                if single_term {
                    let lead_neg = w.terms().next().map(|(_, c)| c.is_negative()).unwrap_or(false);
                    let abs = if lead_neg { w.neg() } else { w.clone() };
                    (lead_neg, abs.to_tex(single))
                } else {
                    (false, format!("({})", w.to_tex(single)))
                }
            }
        };
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&coeff);
        if !coeff.is_empty() && !body.is_empty() && w.as_constant().is_none() {
            out.push(' ');
        }
        out.push_str(&body);
    }
    out
}

/// The whole TeX document body.
pub fn emit_tex(decomp: &Decomposition, real: &Realization) -> String {
    let alg = decomp.algebra();
    let head = match real.side {
        Side::Coinduced => "T",
        Side::Induced => "I",
    };
    let weights = weight_count(real);
    let mut out = String::new();
    for (g, op) in real.ops.iter().enumerate() {
        out.push_str(&format!(
            "\\[ {head}({}) = {} \\]\n",
            alg.label(g),
            tex_operator(op, decomp.var_count(), weights)
        ));
    }
    out
}

fn weight_count(real: &Realization) -> usize {
    real.ops
        .iter()
        .flat_map(|op| op.terms().map(|(_, w)| w.param_count()))
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub label: String,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: WeightPoly,
    pub monomial: Vec<usize>,
    pub derivative: Option<Vec<usize>>,
    pub entry: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub generator: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub format: String,
    pub version: u32,
    pub algebra: String,
    pub side: Side,
    pub variables: Vec<VariableSpec>,
    pub representation: Vec<Parity>,
    pub truncated: bool,
    pub operators: Vec<OperatorRecord>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("not an operator file: {0}")]
    Json(String),
    #[error("unsupported operator format {0:?} version {1}")]
    Version(String, u32),
    #[error("term {0}: exponent vector has the wrong length")]
    Length(String),
    #[error("term {0}: odd variable with exponent above 1")]
    OddPower(String),
    #[error("term {0}: entry outside the representation")]
    Entry(String),
}

fn exponents(m: &Monomial, count: usize) -> Vec<usize> {
    let mut v = vec![0; count];
    for (x, k) in m.exponents() {
        v[x.index] = k;
    }
    v
}

fn monomial_of(exps: &[usize], vars: &[VariableSpec], ctx: &str) -> Result<Monomial, ParseError> {
    if exps.len() != vars.len() {
        return Err(ParseError::Length(ctx.into()));
    }
    let mut factors = Vec::new();
    for (i, (&k, v)) in exps.iter().zip(vars).enumerate() {
        if v.parity.is_odd() && k > 1 {
            return Err(ParseError::OddPower(ctx.into()));
        }
        let x = Indeterminate { index: i, parity: v.parity };
        factors.extend(std::iter::repeat_n(x, k));
    }
    Ok(Monomial::from_sorted(factors))
}

pub fn to_operator_file(decomp: &Decomposition, real: &Realization) -> OperatorFile {
    let alg = decomp.algebra();
    let n = decomp.var_count();
    let dim = real.rep.dim();
    let variables = (0..n)
        .map(|i| VariableSpec { label: decomp.var_label(i).to_string(), parity: decomp.var(i).parity })
        .collect();
    let operators = real
        .ops
        .iter()
        .enumerate()
        .map(|(g, op)| OperatorRecord {
            generator: alg.label(g).to_string(),
            terms: op
                .terms()
                .map(|(k, w)| TermRecord {
                    coeff: w.clone(),
                    monomial: exponents(&k.coeff, n),
                    derivative: if k.deriv.is_one() { None } else { Some(exponents(&k.deriv, n)) },
                    entry: if dim == 1 { None } else { Some((k.row, k.col)) },
                })
                .collect(),
        })
        .collect();
    OperatorFile {
        format: OPERATOR_FORMAT.into(),
        version: OPERATOR_FORMAT_VERSION,
        algebra: alg.name().to_string(),
        side: real.side,
        variables,
        representation: real.rep.parities.clone(),
        truncated: real.truncated,
        operators,
    }
}

pub fn emit_structured(decomp: &Decomposition, real: &Realization) -> String {
    let mut s = serde_json::to_string_pretty(&to_operator_file(decomp, real)).expect("operator file serializes");
    s.push('\n');
    s
}

/// Operators in file order, with their generator labels.
pub fn parse_structured(text: &str) -> Result<(OperatorFile, Vec<(String, DiffOperator)>), ParseError> {
    let file: OperatorFile = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if file.format != OPERATOR_FORMAT || file.version != OPERATOR_FORMAT_VERSION {
        return Err(ParseError::Version(file.format, file.version));
    }
    let dim = file.representation.len();
    let mut ops = Vec::new();
    for rec in &file.operators {
        let mut op = DiffOperator::zero(file.side, file.representation.clone());
        for t in &rec.terms {
            let coeff = monomial_of(&t.monomial, &file.variables, &rec.generator)?;
            let deriv = match &t.derivative {
                Some(d) => monomial_of(d, &file.variables, &rec.generator)?,
                None => Monomial::one(),
            };
            let (row, col) = t.entry.unwrap_or((0, 0));
            if row >= dim || col >= dim {
                return Err(ParseError::Entry(rec.generator.clone()));
            }
            op.add_term(OpKey { coeff, deriv, row, col }, t.coeff.clone());
        }
        ops.push((rec.generator.clone(), op));
    }
    Ok((file, ops))
}
