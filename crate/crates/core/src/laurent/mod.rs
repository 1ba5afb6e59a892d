//! Exact multivariate Laurent polynomials over ℚ or ℚ(i).

pub mod codec;
pub mod coeff;
pub mod poly;
pub mod ratio;

pub use coeff::{rational, Coeff, CoeffParseError, Gaussian, Rational};
pub use poly::{ExpVec, LaurentError, LaurentPoly};
pub use ratio::PolyRatio;

/// The shared variable context of one analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentContext {
    pub names: Vec<String>,
}

impl LaurentContext {
    pub fn new(names: Vec<String>) -> Self {
        LaurentContext { names }
    }

    /// Variables named `t1..td`.
    pub fn numbered(d: usize) -> Self {
        LaurentContext { names: (1..=d).map(|v| format!("t{v}")).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }
}
