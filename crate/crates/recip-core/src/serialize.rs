//! JSON documents for systems and rational functions.
//!
//! Two document shapes cover the command-line surface.  A system document
//! carries the integer matrix `A` together with either a concrete
//! right-hand side `b` or per-coordinate sweep ranges `b_ranges`:
//!
//! ```json
//! {"A": [[3, -1, -2], [-1, 1, -1]], "b": [0, 0]}
//! {"A": [[3, -1, -2], [-1, 1, -1]], "b_ranges": [[-12, 12], [-12, 12]]}
//! ```
//!
//! A function document spells out a sum of Elliott-rational terms; each
//! exponent vector lists the lambda block first, then the x block, and
//! coefficients are integer ratios written as `"p"` or `"p/q"`:
//!
//! ```json
//! {"lambdas": 1, "xs": 1,
//!  "terms": [{"coef": "1", "num": [0, 0], "den": [{"mono": [1, 1], "mult": 1}]}]}
//! ```
//!
//! Deserialization validates exponent lengths against the declared space
//! and rejects unit monomials or zero multiplicities before they can trip
//! the library's internal assertions.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{ElliottFactor, ElliottRational, ElliottTerm, ExponentVector, VariableSpace};
use crate::ldsystem::{LDSystem, SystemError};

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("document is missing \"{0}\"")]
    MissingField(&'static str),
    #[error("cannot parse coefficient {0:?} as an integer ratio")]
    BadCoefficient(String),
    #[error("{what} has length {got}, expected {want}")]
    LengthMismatch { what: &'static str, got: usize, want: usize },
    #[error("denominator factor has an all-zero monomial")]
    UnitMonomial,
    #[error("denominator factor has multiplicity zero")]
    ZeroMultiplicity,
}

/// An integer system, with either a concrete right-hand side or ranges
/// for a sweep.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SystemDoc {
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_ranges: Option<Vec<[i64; 2]>>,
}

impl SystemDoc {
    pub fn from_json(text: &str) -> Result<Self, SerializeError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system document serialization cannot fail")
    }

    /// Builds the validated system; requires a concrete `b`.
    pub fn to_system(&self) -> Result<LDSystem, SerializeError> {
        let b = self.b.clone().ok_or(SerializeError::MissingField("b"))?;
        Ok(LDSystem::new(self.a.clone(), b)?)
    }

    /// Sweep ranges: explicit `b_ranges`, else the degenerate ranges of a
    /// concrete `b`.
    pub fn ranges(&self) -> Result<Vec<(i64, i64)>, SerializeError> {
        if let Some(rs) = &self.b_ranges {
            return Ok(rs.iter().map(|&[lo, hi]| (lo, hi)).collect());
        }
        if let Some(b) = &self.b {
            return Ok(b.iter().map(|&v| (v, v)).collect());
        }
        Err(SerializeError::MissingField("b_ranges"))
    }
}

/// One denominator factor `(1 - m)^mult`.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FactorDoc {
    pub mono: Vec<i64>,
    pub mult: u32,
}

/// One term `coef * m_num / prod (1 - m_j)^mult_j`.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TermDoc {
    pub coef: String,
    pub num: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub den: Vec<FactorDoc>,
}

/// A sum of terms over an `r + n` coordinate space.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FunctionDoc {
    pub lambdas: usize,
    pub xs: usize,
    pub terms: Vec<TermDoc>,
}

impl FunctionDoc {
    pub fn from_json(text: &str) -> Result<Self, SerializeError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("function document serialization cannot fail")
    }
}

pub fn doc_to_function(doc: &FunctionDoc) -> Result<ElliottRational, SerializeError> {
    let space = VariableSpace::new(doc.lambdas, doc.xs);
    let dim = space.dim();
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in &doc.terms {
        let coefficient = BigRational::from_str(t.coef.trim())
            .map_err(|_| SerializeError::BadCoefficient(t.coef.clone()))?;
        if t.num.len() != dim {
            return Err(SerializeError::LengthMismatch {
                what: "numerator exponent",
                got: t.num.len(),
                want: dim,
            });
        }
        let mut factors = Vec::with_capacity(t.den.len());
        for f in &t.den {
            if f.mono.len() != dim {
                return Err(SerializeError::LengthMismatch {
                    what: "factor monomial",
                    got: f.mono.len(),
                    want: dim,
                });
            }
            if f.mono.iter().all(|&e| e == 0) {
                return Err(SerializeError::UnitMonomial);
            }
            if f.mult == 0 {
                return Err(SerializeError::ZeroMultiplicity);
            }
            factors.push(ElliottFactor::new(ExponentVector::from_slice(&f.mono), f.mult));
        }
        terms.push(ElliottTerm::new(coefficient, ExponentVector::from_slice(&t.num), factors));
    }
    Ok(ElliottRational::from_terms(space, terms))
}

pub fn function_to_doc(f: &ElliottRational) -> FunctionDoc {
    FunctionDoc {
        lambdas: f.space.lambdas,
        xs: f.space.xs,
        terms: f
            .terms
            .iter()
            .map(|t| TermDoc {
                coef: t.coefficient.to_string(),
                num: t.numerator.0.clone(),
                den: t
                    .denominator
                    .iter()
                    .map(|fac| FactorDoc { mono: fac.monomial.0.clone(), mult: fac.multiplicity })
                    .collect(),
            })
            .collect(),
    }
}
