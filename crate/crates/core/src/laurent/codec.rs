//! JSON text encoding of polynomials: a list of `{"c": "p/q", "e": [..]}` terms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::coeff::{Coeff, CoeffParseError};
use super::poly::{ExpVec, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub c: String,
    pub e: Vec<i64>,
}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error(transparent)]
    Coeff(#[from] CoeffParseError),
    #[error("exponent vector of length {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("malformed polynomial: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn to_terms<C: Coeff>(p: &LaurentPoly<C>) -> Vec<TermDoc> {
    p.terms().map(|(e, c)| TermDoc { c: c.encode(), e: e.0.clone() }).collect()
}

pub fn from_terms<C: Coeff>(nvars: usize, terms: &[TermDoc]) -> Result<LaurentPoly<C>, CodecError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.e.len() != nvars {
            return Err(CodecError::Arity { expected: nvars, got: t.e.len() });
        }
        out.push((ExpVec(t.e.clone()), C::decode(&t.c)?));
    }
    Ok(LaurentPoly::from_terms(nvars, out))
}

pub fn to_json<C: Coeff>(p: &LaurentPoly<C>) -> serde_json::Value {
    serde_json::to_value(to_terms(p)).expect("term documents always serialize")
}

pub fn from_json<C: Coeff>(nvars: usize, v: &serde_json::Value) -> Result<LaurentPoly<C>, CodecError> {
    let terms: Vec<TermDoc> = serde_json::from_value(v.clone())?;
    from_terms(nvars, &terms)
}

impl<C: Coeff> Serialize for LaurentPoly<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_terms(self).serialize(s)
    }
}

/// A polynomial ratio serializes as its quotient when that is a Laurent polynomial.
impl<C: Coeff> Serialize for super::ratio::PolyRatio<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Frac<'a, C: Coeff> {
            num: &'a LaurentPoly<C>,
            den: &'a LaurentPoly<C>,
        }
        match self.to_poly() {
            Some(p) => Frac { num: &p, den: &LaurentPoly::one(p.nvars()) }.serialize(s),
            None => Frac { num: &self.num, den: &self.den }.serialize(s),
        }
    }
}
