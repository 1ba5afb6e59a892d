//! Exact analysis of monomial deformations of Cauchy–Binet factorizations.

pub mod laurent;
pub mod matrix;
pub mod matroid;
pub mod keys;
pub mod yterms;
pub mod integrability;
pub mod counterexamples;
pub mod canonical;
pub mod doc;

pub use laurent::{Coeff, ExpVec, Gaussian, LaurentPoly, PolyRatio, Rational};

pub type QPoly = LaurentPoly<Rational>;
pub type GPoly = LaurentPoly<Gaussian>;
