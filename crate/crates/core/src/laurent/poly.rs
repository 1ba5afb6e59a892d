use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

use super::coeff::Coeff;

/// Exponent vector of a monomial, compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(d: usize) -> Self {
        ExpVec(vec![0; d])
    }

    pub fn unit(d: usize, var: usize) -> Self {
        let mut v = vec![0; d];
        v[var] = 1;
        ExpVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (p, e) in self.0.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ExpVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("variable count mismatch: {0} vs {1}")]
    ContextMismatch(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("evaluation point has a zero coordinate at position {0}")]
    ZeroCoordinate(usize),
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointArity { expected: usize, got: usize },
    #[error("negative power of a non-unit")]
    NegativePower,
}

/// A Laurent polynomial in `d` variables with exact coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so two equal polynomials
/// are structurally equal and iterate in the same order. No zero coefficient is
/// ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<ExpVec, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(ExpVec::zero(nvars), c)
    }

    pub fn from_i64(nvars: usize, v: i64) -> Self {
        Self::constant(nvars, C::from_i64(v))
    }

    pub fn monomial(exp: ExpVec, c: C) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `t_{var+1}` raised to `power`.
    pub fn var(nvars: usize, var: usize, power: i64) -> Self {
        Self::monomial(ExpVec::unit(nvars, var).scale(power), C::one())
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (ExpVec, C)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length does not match variable count");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: ExpVec, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExpVec) -> Option<&C> {
        self.terms.get(e)
    }

    /// A unit of the Laurent ring is a single nonzero monomial.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_unit(&self) -> Option<(&ExpVec, &C)> {
        if self.is_unit() {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn constant_value(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The support Ψ(p): every exponent vector carrying a nonzero coefficient.
    pub fn exponent_map(&self) -> BTreeSet<ExpVec> {
        self.terms.keys().cloned().collect()
    }

    /// The exponent of a unit (the singleton of its support).
    pub fn unit_exponent(&self) -> Option<ExpVec> {
        self.as_unit().map(|(e, _)| e.clone())
    }

    /// If every term has the same exponent in `var`, that exponent.
    pub fn degree_in(&self, var: usize) -> Option<i64> {
        let mut it = self.terms.keys().map(|e| e.0[var]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&ExpVec, &C)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(LaurentError::ContextMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &ExpVec) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.add(shift), v.clone())).collect(),
        }
    }

    pub fn mul_term(&self, e: &ExpVec, c: &C) -> Self {
        self.shift(e).scale(c)
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        let (e, c) = self.as_unit()?;
        Some(Self::monomial(e.neg(), c.checked_inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self, LaurentError> {
        let base = if k < 0 {
            self.unit_inverse().ok_or(LaurentError::NegativePower)?
        } else {
            self.clone()
        };
        let mut acc = Self::one(self.nvars);
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.nvars];
        let mut hi = vec![i64::MIN; self.nvars];
        for e in self.terms.keys() {
            for v in 0..self.nvars {
                lo[v] = lo[v].min(e.0[v]);
                hi[v] = hi[v].max(e.0[v]);
            }
        }
        (lo, hi)
    }

    /// Exact quotient `self / q` in the Laurent ring.
    ///
    /// Division by a unit is a shift. Otherwise lex-leading-term long division is run;
    /// a true quotient has its per-variable degrees inside the box
    /// `[min(p)-min(q), max(p)-max(q)]`, which bounds the loop.
    pub fn divide_exact(&self, q: &Self) -> Result<Self, LaurentError> {
        self.check(q)?;
        if q.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if let Some(inv) = q.unit_inverse() {
            return Ok(self * &inv);
        }
        let (plo, phi) = self.bounds();
        let (qlo, qhi) = q.bounds();
        let lo: Vec<i64> = plo.iter().zip(&qlo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = phi.iter().zip(&qhi).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(LaurentError::InexactDivision);
        }
        let (qe, qc) = q.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let qc_inv = qc.checked_inv().expect("stored coefficients are nonzero");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            let e = re.sub(&qe);
            if e.0.iter().enumerate().any(|(v, &x)| x < lo[v] || x > hi[v]) {
                return Err(LaurentError::InexactDivision);
            }
            let c = rc.clone() * qc_inv.clone();
            rem = &rem - &q.mul_term(&e, &c);
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Exact square root, if `self` is the square of a Laurent polynomial.
    ///
    /// Same leading-term scheme as division: the root's leading term is forced, and
    /// each next term is read off the leading term of the remainder.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lo, hi) = self.bounds();
        if lo.iter().chain(&hi).any(|x| x % 2 != 0) {
            return None;
        }
        let lo: Vec<i64> = lo.iter().map(|x| x / 2).collect();
        let hi: Vec<i64> = hi.iter().map(|x| x / 2).collect();
        let (pe, pc) = self.leading().unwrap();
        let e0 = ExpVec(pe.0.iter().map(|x| x / 2).collect());
        let c0 = pc.exact_sqrt()?;
        let two_c0_inv = (c0.clone() + c0.clone()).checked_inv()?;
        let mut root = Self::monomial(e0.clone(), c0);
        let mut rem = self - &(&root * &root);
        while let Some((re, rc)) = rem.leading() {
            let e = re.sub(&e0);
            if e >= e0 || e.0.iter().enumerate().any(|(v, &x)| x < lo[v] || x > hi[v]) {
                return None;
            }
            let c = rc.clone() * two_c0_inv.clone();
            let term = Self::monomial(e, c);
            let two_root = &root + &root;
            rem = &(&rem - &(&term * &two_root)) - &(&term * &term);
            root = &root + &term;
        }
        Some(root)
    }

    /// Exact evaluation at a point with nonzero coordinates.
    pub fn eval(&self, point: &[C]) -> Result<C, LaurentError> {
        if point.len() != self.nvars {
            return Err(LaurentError::PointArity { expected: self.nvars, got: point.len() });
        }
        if let Some(p) = point.iter().position(|x| x.is_zero()) {
            return Err(LaurentError::ZeroCoordinate(p));
        }
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                m = m * x.powi(k).expect("coordinates are nonzero");
            }
            acc = acc + m;
        }
        Ok(acc)
    }

    /// Value at t = (1,…,1): the sum of the coefficients.
    pub fn eval_one(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Substitutes `t_v -> t^{images[v]}`, a monomial change of variables into `nvars_out` variables.
    pub fn monomial_substitute(&self, nvars_out: usize, images: &[ExpVec]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let it = self.terms.iter().map(|(e, c)| {
            let mut out = ExpVec::zero(nvars_out);
            for (k, img) in e.0.iter().zip(images) {
                out = out.add(&img.scale(*k));
            }
            (out, c.clone())
        });
        Self::from_terms(nvars_out, it)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<C: Coeff> $tr<&LaurentPoly<C>> for &LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
                self.$f(rhs).expect("Laurent polynomials from different contexts")
            }
        }
        impl<C: Coeff> $tr<LaurentPoly<C>> for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    /// Human-readable form, highest term first, e.g. `2*t1^2*t2^-1 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = Vec::new();
            for (v, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => mono.push(format!("t{}", v + 1)),
                    _ => mono.push(format!("t{}^{}", v + 1, k)),
                }
            }
            let cs = c.encode();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let body = if body.contains(['+', '-', ' ']) { format!("({body})") } else { body };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", body, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::coeff::{rational, Rational};

    type P = LaurentPoly<Rational>;

    fn t(v: usize, k: i64) -> P {
        P::var(2, v, k)
    }

    fn c(n: i64) -> P {
        P::from_i64(2, n)
    }

    #[test]
    fn addition_cancels_and_keeps_supports() {
        assert!((&t(0, 1) + &-&t(0, 1)).is_zero());
        let p = &(&c(2) * &t(0, 1)) + &(&c(3) * &(&t(0, 1) * &t(1, -1)));
        assert_eq!(p.len(), 2);
        assert_eq!(&p + &P::zero(2), p);
    }

    #[test]
    fn multiplication_examples() {
        let a = &t(0, 1) + &c(1);
        let b = &t(0, 1) - &c(1);
        assert_eq!(&a * &b, &t(0, 2) - &c(1));
        assert_eq!(&t(0, -1) * &t(0, 1), P::one(2));
        assert!((&P::zero(2) * &a).is_zero());
    }

    #[test]
    fn units_and_supports() {
        let u = &c(3) * &(&t(0, 2) * &t(1, -1));
        assert!(u.is_unit());
        assert!(!(&t(0, 1) + &c(1)).is_unit());
        assert!(!P::zero(2).is_unit());
        let p = &(&c(2) * &t(0, 1)) - &(&c(3) * &t(0, 2));
        assert_eq!(p.exponent_map().len(), 2);
        assert_eq!(c(5).exponent_map().into_iter().collect::<Vec<_>>(), vec![ExpVec::zero(2)]);
        assert!(P::zero(2).exponent_map().is_empty());
    }

    #[test]
    fn exact_division() {
        let p = &t(0, 2) + &t(0, 1);
        assert_eq!(p.divide_exact(&t(0, 1)).unwrap(), &t(0, 1) + &c(1));
        assert_eq!(t(0, 1).divide_exact(&t(1, 1)).unwrap(), &t(0, 1) * &t(1, -1));
        let e = (&t(0, 1) + &c(1)).divide_exact(&(&t(1, 1) + &c(1)));
        assert_eq!(e, Err(LaurentError::InexactDivision));
        assert_eq!(p.divide_exact(&P::zero(2)), Err(LaurentError::DivisionByZero));
        let a = &(&t(0, 1) + &t(1, -2)) + &c(3);
        let b = &(&t(0, -1) * &t(1, 1)) - &c(2);
        assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn evaluation() {
        let p = &t(0, 1) * &t(1, -1);
        let pt = [rational(2, 1), rational(4, 1)];
        assert_eq!(p.eval(&pt).unwrap(), rational(1, 2));
        let q = &(&c(3) * &t(0, 2)) - &c(5);
        assert_eq!(q.eval(&[rational(1, 1), rational(1, 1)]).unwrap(), q.eval_one());
        assert_eq!(t(0, 1).eval(&[rational(0, 1), rational(1, 1)]), Err(LaurentError::ZeroCoordinate(0)));
    }

    #[test]
    fn square_roots() {
        let a = &(&t(0, 1) - &(&c(2) * &t(1, -1))) + &c(3);
        assert_eq!((&a * &a).sqrt().map(|r| &r * &r), Some(&a * &a));
        assert_eq!((&t(0, 1) + &c(1)).sqrt(), None);
        assert_eq!(t(0, 1).sqrt(), None);
        assert_eq!(c(4).sqrt(), Some(c(2)));
    }

    #[test]
    fn degree_in_and_display() {
        let p = &(&c(2) * &(&t(0, 1) * &t(1, 3))) - &(&c(1) * &t(0, 1));
        assert_eq!(p.degree_in(0), Some(1));
        assert_eq!(p.degree_in(1), None);
        assert_eq!(p.to_string(), "2*t1*t2^3 - t1");
    }
}
