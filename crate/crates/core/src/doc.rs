//! The JSON matrix document `{"vars", "k", "n", "L", "R", "provenance"?}`.
//!
//! L is k×n and R is n×k; entries use the term-list polynomial encoding. The coefficient
//! field is Gaussian as soon as any coefficient carries an imaginary part.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::laurent::codec::{from_terms, to_terms, TermDoc};
use crate::laurent::{Coeff, Gaussian, Rational};
use crate::matrix::SymbolicMatrix;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
}

fn field(field: impl Into<String>, msg: impl ToString) -> DocError {
    DocError::Field { field: field.into(), msg: msg.to_string() }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub vars: Vec<String>,
    pub k: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: Vec<Vec<Vec<TermDoc>>>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<Vec<TermDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

/// A parsed pair over whichever field the document needs.
#[derive(Debug, Clone)]
pub enum Pair {
    Rational(SymbolicMatrix<Rational>, SymbolicMatrix<Rational>),
    Gaussian(SymbolicMatrix<Gaussian>, SymbolicMatrix<Gaussian>),
}

impl MatrixDoc {
    pub fn from_pair<C: Coeff>(vars: Vec<String>, l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>, provenance: Option<Value>) -> Self {
        let enc = |m: &SymbolicMatrix<C>| m.to_rows().iter().map(|row| row.iter().map(to_terms).collect()).collect();
        MatrixDoc { vars, k: l.rows(), n: l.cols(), l: enc(l), r: enc(r), provenance }
    }

    pub fn is_gaussian(&self) -> bool {
        self.l.iter().chain(&self.r).flatten().flatten().any(|t| t.c.contains('i'))
    }

    fn matrix<C: Coeff>(&self, name: &str, rows: usize, cols: usize) -> Result<SymbolicMatrix<C>, DocError> {
        let data = if name == "L" { &self.l } else { &self.r };
        if data.len() != rows {
            return Err(field(name, format!("expected {rows} rows, found {}", data.len())));
        }
        let d = self.vars.len();
        let mut out = Vec::with_capacity(rows);
        for (x, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(field(format!("{name}[{x}]"), format!("expected {cols} entries, found {}", row.len())));
            }
            let mut parsed = Vec::with_capacity(cols);
            for (y, e) in row.iter().enumerate() {
                parsed.push(from_terms(d, e).map_err(|err| field(format!("{name}[{x}][{y}]"), err))?);
            }
            out.push(parsed);
        }
        SymbolicMatrix::from_rows(d, out).map_err(|e| field(name, e))
    }

    pub fn pair(&self) -> Result<Pair, DocError> {
        if self.k == 0 || self.k > self.n {
            return Err(field("k", format!("need 0 < k ≤ n, got k={} n={}", self.k, self.n)));
        }
        let (k, n) = (self.k, self.n);
        Ok(if self.is_gaussian() {
            Pair::Gaussian(self.matrix("L", k, n)?, self.matrix("R", n, k)?)
        } else {
            Pair::Rational(self.matrix("L", k, n)?, self.matrix("R", n, k)?)
        })
    }
}

pub fn parse_document(text: &str) -> Result<MatrixDoc, DocError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{rational, ExpVec, LaurentPoly};

    #[test]
    fn document_round_trip() {
        let l = SymbolicMatrix::from_i64(2, &[vec![1, 0, 3], vec![0, 1, -2]]);
        let mut r = SymbolicMatrix::from_i64(2, &[vec![1, 0], vec![0, 1], vec![5, 7]]);
        r.set(2, 1, LaurentPoly::monomial(ExpVec(vec![-1, 2]), rational(3, 4)));
        let doc = MatrixDoc::from_pair(vec!["t1".into(), "t2".into()], &l, &r, None);
        let text = serde_json::to_string(&doc).unwrap();
        let back = parse_document(&text).unwrap();
        let Pair::Rational(l2, r2) = back.pair().unwrap() else { panic!("rational expected") };
        assert_eq!((l2, r2), (l, r));
        assert!(!text.contains("provenance"));
    }

    #[test]
    fn gaussian_detection_and_field_errors() {
        let text = r#"{"vars":["t1"],"k":1,"n":2,"L":[[[{"c":"1","e":[0]}],[{"c":"1/2+1i","e":[1]}]]],"R":[[[{"c":"1","e":[0]}]],[[]]]}"#;
        assert!(matches!(parse_document(text).unwrap().pair().unwrap(), Pair::Gaussian(..)));
        let bad = r#"{"vars":["t1"],"k":1,"n":2,"L":[[[{"c":"1","e":[0,1]}],[]]],"R":[[[]],[[]]]}"#;
        let err = parse_document(bad).unwrap().pair().unwrap_err().to_string();
        assert!(err.contains("L[0][0]"), "{err}");
        assert!(parse_document("{\"vars\": [").is_err());
    }
}
