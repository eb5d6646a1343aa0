//! JSON description of an algebra by labels and nonzero brackets.
//!
//! ```json
//! {
//!   "format": "coinduce-algebra",
//!   "version": 1,
//!   "name": "gl(1|1)",
//!   "basis": [
//!     { "label": "E_{11}", "parity": "even", "degree": 0 },
//!     { "label": "p+", "parity": "odd", "degree": 1 }
//!   ],
//!   "brackets": [
//!     { "left": "E_{11}", "right": "p+", "result": [{ "label": "p+", "coeff": "1" }] }
//!   ]
//! }
//! ```
//!
//! Brackets may be given in either order; giving both orders is allowed as
//! long as they agree with super-antisymmetry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, BasisElement, GVector, LieSuperAlgebra, ValidationReport, Violation};
use crate::scalar::Scalar;
use crate::superpoly::{Coefficient, Parity};

pub const FORMAT_NAME: &str = "coinduce-algebra";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub format: String,
    pub version: u32,
    pub name: String,
    pub basis: Vec<BasisSpec>,
    pub brackets: Vec<BracketSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub label: String,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub result: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub label: String,
    pub coeff: Scalar,
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("algebra spec serializes");
        s.push('\n');
        s
    }

    /// Canonical description of an algebra: stored brackets only.
    pub fn from_algebra(alg: &LieSuperAlgebra) -> Self {
        let basis = alg
            .basis()
            .iter()
            .map(|b| BasisSpec { label: b.label.clone(), parity: b.parity, degree: b.degree })
            .collect();
        let brackets = alg
            .stored_brackets()
            .iter()
            .map(|(&(i, j), v)| BracketSpec {
                left: alg.label(i).to_string(),
                right: alg.label(j).to_string(),
                result: v.iter().map(|(k, c)| TermSpec { label: alg.label(k).to_string(), coeff: c.clone() }).collect(),
            })
            .collect();
        AlgebraSpec {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            name: alg.name().to_string(),
            basis,
            brackets,
        }
    }

    /// Build and validate. Conflicting bracket entries and axiom failures are
    /// reported as [`AlgebraError::Axioms`].
    pub fn build(&self) -> Result<LieSuperAlgebra, AlgebraError> {
        if self.format != FORMAT_NAME || self.version != FORMAT_VERSION {
            return Err(AlgebraError::Format { name: self.format.clone(), version: self.version });
        }
        let mut index = BTreeMap::new();
        let mut basis = Vec::with_capacity(self.basis.len());
        for (k, b) in self.basis.iter().enumerate() {
            if index.insert(b.label.clone(), k).is_some() {
                return Err(AlgebraError::DuplicateLabel(b.label.clone()));
            }
            basis.push(BasisElement { index: k, label: b.label.clone(), parity: b.parity, degree: b.degree });
        }
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| AlgebraError::UnknownLabel(l.to_string()));

        // gather both orders as given
        let mut given: BTreeMap<(usize, usize), GVector> = BTreeMap::new();
        for br in &self.brackets {
            let (i, j) = (lookup(&br.left)?, lookup(&br.right)?);
            let mut v = GVector::zero();
            for t in &br.result {
                v.add_to(lookup(&t.label)?, t.coeff.clone());
            }
            given.entry((i, j)).or_default().add_assign(&v);
        }

        let mut violations = Vec::new();
        let mut stored = BTreeMap::new();
        for (&(i, j), v) in &given {
            let sym = basis[i].parity.sign_with(basis[j].parity);
            if i == j {
                if !sym && !v.is_empty() {
                    violations.push(Violation::Antisymmetry {
                        x: basis[i].label.clone(),
                        y: basis[i].label.clone(),
                        xy: v.clone(),
                        yx: v.clone(),
                    });
                }
                stored.insert((i, i), v.clone());
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            let forward = if i < j { v.clone() } else if sym { v.clone() } else { v.negated() };
            if let Some(other) = given.get(&(j, i)) {
                let expect = if sym { v.clone() } else { v.negated() };
                if *other != expect && i < j {
                    violations.push(Violation::Antisymmetry {
                        x: basis[i].label.clone(),
                        y: basis[j].label.clone(),
                        xy: v.clone(),
                        yx: other.clone(),
                    });
                }
            }
            stored.entry((a, b)).or_insert(forward);
        }
        let alg = LieSuperAlgebra::from_parts(self.name.clone(), basis, stored);
        let mut report = alg.validate();
        violations.append(&mut report.violations);
        if violations.is_empty() {
            Ok(alg)
        } else {
            Err(AlgebraError::Axioms(ValidationReport { violations }))
        }
    }
}

/// Parse and validate a JSON algebra description.
pub fn load_custom(text: &str) -> Result<LieSuperAlgebra, AlgebraError> {
    let spec = AlgebraSpec::from_json(text)
        .map_err(|e| AlgebraError::Format { name: format!("unparseable: {e}"), version: 0 })?;
    spec.build()
}
