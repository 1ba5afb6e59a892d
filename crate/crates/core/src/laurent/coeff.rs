//! Exact coefficient fields: the rationals and the Gaussian rationals.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;
pub type Gaussian = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffParseError {
    #[error("malformed coefficient {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("complex coefficient {0:?} where a rational one is expected")]
    ComplexInRational(String),
}

/// An exact field usable as the coefficient ring of a Laurent polynomial.
///
/// Both implementations are exact; there is no floating point anywhere.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn checked_inv(&self) -> Option<Self>;
    fn from_rational(r: Rational) -> Self;
    /// The value as a rational, when it has no imaginary part.
    fn to_rational(&self) -> Option<Rational>;
    /// Squared absolute value.
    fn norm_sq(&self) -> Rational;
    /// An exact square root inside the field, if one exists.
    fn exact_sqrt(&self) -> Option<Self>;
    /// Sign convention used for deterministic normalizations: for a rational, `> 0`;
    /// for a Gaussian rational, the first nonzero part is positive.
    fn is_positive(&self) -> bool;
    fn encode(&self) -> String;
    fn decode(s: &str) -> Result<Self, CoeffParseError>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.checked_inv().map(|o| self.clone() * o)
    }

    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            k >>= 1;
        }
        Some(acc)
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_rational(s: &str) -> Result<Rational, CoeffParseError> {
    let t = s.trim();
    let bad = || CoeffParseError::Malformed(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(CoeffParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

fn sqrt_bigint(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn sqrt_rational(q: &Rational) -> Option<Rational> {
    Some(Rational::new(sqrt_bigint(q.numer())?, sqrt_bigint(q.denom())?))
}

impl Coeff for Rational {
    fn checked_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn norm_sq(&self) -> Rational {
        self * self
    }
    fn exact_sqrt(&self) -> Option<Self> {
        sqrt_rational(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn encode(&self) -> String {
        self.to_string()
    }
    fn decode(s: &str) -> Result<Self, CoeffParseError> {
        if s.contains('i') {
            return Err(CoeffParseError::ComplexInRational(s.to_string()));
        }
        parse_rational(s)
    }
}

impl Coeff for Gaussian {
    fn checked_inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(Complex::new(&self.re / &n, -&self.im / &n))
    }
    fn from_rational(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }
    fn to_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }
    fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn exact_sqrt(&self) -> Option<Self> {
        let zero = Rational::zero();
        if self.im.is_zero() {
            if self.re >= zero {
                return sqrt_rational(&self.re).map(|r| Complex::new(r, zero));
            }
            return sqrt_rational(&-&self.re).map(|r| Complex::new(zero, r));
        }
        // (a+bi)^2 = x+yi  =>  a^2 = (x + |z|)/2, b = y/(2a)
        let modulus = sqrt_rational(&self.norm_sq())?;
        let two = rational(2, 1);
        let a = sqrt_rational(&((&self.re + modulus) / &two))?;
        if a.is_zero() {
            return None;
        }
        let b = &self.im / (&two * &a);
        let root = Complex::new(a, b);
        (root.clone() * root.clone() == *self).then_some(root)
    }
    fn is_positive(&self) -> bool {
        if self.re.is_zero() {
            Signed::is_positive(&self.im)
        } else {
            Signed::is_positive(&self.re)
        }
    }
    fn encode(&self) -> String {
        if self.im.is_zero() {
            return self.re.to_string();
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{}{}{} i", self.re, sign, self.im.abs())
    }
    fn decode(s: &str) -> Result<Self, CoeffParseError> {
        let t = s.trim();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Complex::new(parse_rational(t)?, Rational::zero()));
        };
        let body = body.trim_end();
        // the imaginary part starts at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(p, c)| p > 0 && (c == '+' || c == '-'))
            .map(|(p, _)| p)
            .next_back();
        let (re, im) = match split {
            Some(p) => (parse_rational(&body[..p])?, &body[p..]),
            None => (Rational::zero(), body),
        };
        let im = im.replace(' ', "");
        let im = match im.as_str() {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other).map_err(|_| CoeffParseError::Malformed(s.to_string()))?,
        };
        Ok(Complex::new(re, im))
    }
}
