//! JSON encoding of field elements and decompositions, with the inverse
//! parsers used for round trips.

use std::str::FromStr;
use std::sync::Arc;

use det_waring::cyclotomic::{Cyc, CycField};
use det_waring::decompositions::{
    PowerDecomposition, PowerTerm, ProductDecomposition, ProductTerm, Scheme, Target, TermLabel,
};
use det_waring::multipoly::{LinForm, VarId};
use det_waring::perm::Perm;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid integer {0:?}")]
    Integer(String),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ParseError {
    ParseError::Invalid(msg.into())
}

/// An element of `Q(w_d)`: numerators over the power basis
/// `1, w, ..., w^{phi(d)-1}` and a common positive denominator. Integers
/// are written as strings so that no precision is lost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCyc {
    pub d: u32,
    pub num: Vec<String>,
    pub den: String,
    /// Human-readable form, ignored when parsing.
    pub root_power_combination: String,
}

impl JsonCyc {
    pub fn from_cyc(c: &Cyc) -> Self {
        Self {
            d: c.order(),
            num: c.numerators().iter().map(|n| n.to_string()).collect(),
            den: c.denominator().to_string(),
            root_power_combination: c.to_string(),
        }
    }

    pub fn to_cyc(&self, field: &Arc<CycField>) -> Result<Cyc, ParseError> {
        if self.d != field.order() {
            return Err(invalid(format!("element of Q(w_{}) where Q(w_{}) was expected", self.d, field.order())));
        }
        let int = |s: &str| BigInt::from_str(s).map_err(|_| ParseError::Integer(s.to_string()));
        let num = self.num.iter().map(|s| int(s)).collect::<Result<Vec<_>, _>>()?;
        Cyc::from_parts(field, num, int(&self.den)?).map_err(|e| invalid(e.to_string()))
    }
}

/// A sparse linear form entry `(i, j, coefficient)`.
pub type JsonEntry = (usize, usize, JsonCyc);

fn form_to_json(form: &LinForm) -> Vec<JsonEntry> {
    form.support()
        .into_iter()
        .map(|(v, c)| (v.row(), v.col(), JsonCyc::from_cyc(c)))
        .collect()
}

fn form_from_json(field: &Arc<CycField>, d: usize, entries: &[JsonEntry]) -> Result<LinForm, ParseError> {
    let mut parsed = Vec::with_capacity(entries.len());
    for (i, j, c) in entries {
        if !(1..=d).contains(i) || !(1..=d).contains(j) {
            return Err(invalid(format!("entry ({i}, {j}) outside a {d} x {d} matrix")));
        }
        parsed.push((VarId::new(*i, *j), c.to_cyc(field)?));
    }
    Ok(LinForm::from_entries(field, d, parsed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonIndex {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signs: Option<Vec<i8>>,
    /// Gurvits terms only; `null` marks the full row sum.
    #[serde(skip_serializing_if = "Option::is_none", default, deserialize_with = "present")]
    pub omitted: Option<Option<u32>>,
}

/// Distinguishes an explicit `null` from a missing field.
fn present<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Option<u32>>, D::Error> {
    Option::<u32>::deserialize(d).map(Some)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub index: JsonIndex,
    pub coeff: JsonCyc,
    pub form: Vec<JsonEntry>,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonDecomposition {
    pub d: usize,
    pub scheme: String,
    pub scale: String,
    pub target: String,
    pub terms: Vec<JsonTerm>,
}

fn index_to_json(label: &TermLabel) -> JsonIndex {
    let mut idx = JsonIndex {
        sigma: None,
        j: None,
        signs: None,
        omitted: None,
    };
    match label {
        TermLabel::Main { sigma, j } => {
            idx.sigma = Some(sigma.images());
            idx.j = Some(*j);
        }
        TermLabel::Classical { sigma, signs } => {
            idx.sigma = Some(sigma.images());
            idx.signs = Some(signs.clone());
        }
        TermLabel::Gurvits { sigma, omitted } => {
            idx.sigma = Some(sigma.images());
            idx.omitted = Some(*omitted);
        }
        TermLabel::Monomial { signs } => idx.signs = Some(signs.clone()),
    }
    idx
}

fn index_from_json(scheme: Scheme, idx: &JsonIndex) -> Result<TermLabel, ParseError> {
    let sigma = || -> Result<Perm, ParseError> {
        let images = idx.sigma.as_ref().ok_or_else(|| invalid("missing sigma"))?;
        Perm::from_images(images).map_err(|e| invalid(e.to_string()))
    };
    let signs = || idx.signs.clone().ok_or_else(|| invalid("missing signs"));
    Ok(match scheme {
        Scheme::Main => TermLabel::Main {
            sigma: sigma()?,
            j: idx.j.ok_or_else(|| invalid("missing j"))?,
        },
        Scheme::Classical => TermLabel::Classical {
            sigma: sigma()?,
            signs: signs()?,
        },
        Scheme::Gurvits => TermLabel::Gurvits {
            sigma: sigma()?,
            omitted: idx.omitted.ok_or_else(|| invalid("missing omitted"))?,
        },
        Scheme::Monomial => TermLabel::Monomial { signs: signs()? },
    })
}

pub fn decomposition_to_json(dec: &PowerDecomposition) -> JsonDecomposition {
    JsonDecomposition {
        d: dec.d,
        scheme: dec.scheme.name().to_string(),
        scale: dec.scale.to_string(),
        target: dec.target.name().to_string(),
        terms: dec
            .terms
            .iter()
            .map(|t| JsonTerm {
                index: index_to_json(&t.label),
                coeff: JsonCyc::from_cyc(&t.coeff),
                form: form_to_json(&t.form),
                exponent: t.exponent,
            })
            .collect(),
    }
}

pub fn decomposition_from_json(j: &JsonDecomposition) -> Result<PowerDecomposition, ParseError> {
    let scheme = Scheme::from_str(&j.scheme).map_err(|e| invalid(e.to_string()))?;
    let target = match j.target.as_str() {
        "det" => Target::Det,
        "diagonal-product" => Target::DiagonalProduct,
        other => return Err(invalid(format!("unknown target {other:?}"))),
    };
    if j.d == 0 || j.d > 255 {
        return Err(invalid(format!("d = {} out of range", j.d)));
    }
    let field = CycField::new(j.d as u32).map_err(|e| invalid(e.to_string()))?;
    let terms = j
        .terms
        .iter()
        .map(|t| {
            Ok(PowerTerm {
                label: index_from_json(scheme, &t.index)?,
                coeff: t.coeff.to_cyc(&field)?,
                form: form_from_json(&field, j.d, &t.form)?,
                exponent: t.exponent,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(PowerDecomposition {
        d: j.d,
        scheme,
        scale: BigInt::from_str(&j.scale).map_err(|_| ParseError::Integer(j.scale.clone()))?,
        target,
        terms,
    })
}

pub fn emit_decomposition(dec: &PowerDecomposition) -> String {
    serde_json::to_string_pretty(&decomposition_to_json(dec)).expect("serializable")
}

pub fn parse_decomposition(text: &str) -> Result<PowerDecomposition, ParseError> {
    decomposition_from_json(&serde_json::from_str(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonProductTerm {
    pub sign: i8,
    pub factors: Vec<Vec<JsonEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonProduct {
    pub d: usize,
    pub scheme: String,
    pub target: String,
    pub terms: Vec<JsonProductTerm>,
}

pub fn emit_product(pd: &ProductDecomposition) -> String {
    let j = JsonProduct {
        d: pd.d,
        scheme: "krishna-makam".to_string(),
        target: "det".to_string(),
        terms: pd
            .terms
            .iter()
            .map(|t| JsonProductTerm {
                sign: t.sign,
                factors: t.factors.iter().map(form_to_json).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

pub fn parse_product(text: &str) -> Result<ProductDecomposition, ParseError> {
    let j: JsonProduct = serde_json::from_str(text)?;
    let field = CycField::new(j.d as u32).map_err(|e| invalid(e.to_string()))?;
    let terms = j
        .terms
        .iter()
        .map(|t| {
            Ok(ProductTerm {
                sign: t.sign,
                factors: t
                    .factors
                    .iter()
                    .map(|f| form_from_json(&field, j.d, f))
                    .collect::<Result<_, ParseError>>()?,
            })
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(ProductDecomposition { d: j.d, terms })
}
