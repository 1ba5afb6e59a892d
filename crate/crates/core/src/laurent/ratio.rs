use std::fmt;

use super::coeff::Coeff;
use super::poly::{LaurentError, LaurentPoly};

/// A quotient `num / den` of Laurent polynomials, kept unreduced.
///
/// Equality is decided by cross-multiplication, so no GCD is ever needed. When the
/// denominator is a unit the ratio collapses to a polynomial via [`PolyRatio::to_poly`].
#[derive(Clone)]
pub struct PolyRatio<C> {
    pub num: LaurentPoly<C>,
    pub den: LaurentPoly<C>,
}

impl<C: Coeff> PolyRatio<C> {
    pub fn new(num: LaurentPoly<C>, den: LaurentPoly<C>) -> Result<Self, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        Ok(PolyRatio { num, den }.normalized())
    }

    pub fn from_poly(p: LaurentPoly<C>) -> Self {
        let den = LaurentPoly::one(p.nvars());
        PolyRatio { num: p, den }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_poly(LaurentPoly::constant(nvars, c))
    }

    pub fn from_i64(nvars: usize, v: i64) -> Self {
        Self::from_poly(LaurentPoly::from_i64(nvars, v))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    // Divides through by the denominator when it is a unit or divides the numerator exactly.
    fn normalized(self) -> Self {
        if self.den.is_unit() || !self.num.is_zero() {
            if let Ok(q) = self.num.divide_exact(&self.den) {
                return Self::from_poly(q);
            }
        }
        if self.num.is_zero() {
            return Self::from_poly(self.num);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_poly(&self) -> Option<LaurentPoly<C>> {
        self.num.divide_exact(&self.den).ok()
    }

    pub fn constant_value(&self) -> Option<C> {
        self.to_poly()?.constant_value()
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return PolyRatio { num: &self.num + &o.num, den: self.den.clone() }.normalized();
        }
        PolyRatio { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
            .normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        PolyRatio { num: &self.num * &o.num, den: &self.den * &o.den }.normalized()
    }

    pub fn neg(&self) -> Self {
        PolyRatio { num: -&self.num, den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, LaurentError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, LaurentError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn add_i64(&self, v: i64) -> Self {
        self.add(&Self::from_i64(self.nvars(), v))
    }

    pub fn eval(&self, point: &[C]) -> Result<C, LaurentError> {
        let d = self.den.eval(point)?;
        let inv = d.checked_inv().ok_or(LaurentError::DivisionByZero)?;
        Ok(self.num.eval(point)? * inv)
    }
}

impl<C: Coeff> PartialEq for PolyRatio<C> {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl<C: Coeff> Eq for PolyRatio<C> {}

impl<C: Coeff> fmt::Display for PolyRatio<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

impl<C: Coeff> fmt::Debug for PolyRatio<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyRatio[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::coeff::Rational;

    type P = LaurentPoly<Rational>;
    type Q = PolyRatio<Rational>;

    #[test]
    fn cross_multiplied_equality() {
        let t = P::var(1, 0, 1);
        let one = P::one(1);
        let a = Q::new(&t + &one, &t - &one).unwrap();
        let b = Q::new(&(&t + &one) * &t, &(&t - &one) * &t).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sub(&b), Q::from_i64(1, 0));
        assert!(a.mul(&a.inv().unwrap()).constant_value().is_some());
    }

    #[test]
    fn unit_denominators_collapse() {
        let t = P::var(1, 0, 1);
        let r = Q::new(&(&t * &t) + &t, t.clone()).unwrap();
        assert_eq!(r.to_poly().unwrap(), &t + &P::one(1));
        assert!(Q::new(t.clone(), P::zero(1)).is_err());
    }
}
