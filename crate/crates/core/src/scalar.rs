//! Coefficient fields: exact Gaussian rationals and double-precision complex.
//!
//! The algebra, symbol calculus and pipeline are generic over [`Coeff`], so a
//! single run never mixes the two kinds. [`Scalar`] is the type-erased form
//! used at the I/O boundary, where mixing is reported as an error.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rat;
use thiserror::Error;

/// Which arithmetic a value (or a whole run) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Exact,
    Float,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Exact => f.write_str("exact"),
            ScalarKind::Float => f.write_str("float"),
        }
    }
}

impl FromStr for ScalarKind {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(ScalarKind::Exact),
            "float" => Ok(ScalarKind::Float),
            other => Err(ScalarError::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("cannot combine {0} and {1} scalars")]
    KindMismatch(ScalarKind, ScalarKind),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid scalar literal: {0}")]
    Parse(String),
}

/// Field operations needed by the engine.
///
/// `is_zero` is exact for rationals and a literal `== 0` test for floats;
/// tolerance-aware comparisons live with the callers that need them.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    /// √-1.
    fn imag_unit() -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    /// Real value from a double; exact mode keeps the binary fraction exactly.
    fn from_f64(x: f64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    fn to_scalar(&self) -> Scalar;
    /// Magnitude used for float-mode pruning of rounding residue.
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Product without consuming either operand.
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(v)))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_ratio(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn pow(&self, exp: i32) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc * base.clone();
        }
        Some(acc)
    }
}

/// Complex number with exact rational real and imaginary parts, both kept in
/// lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    re: Rat,
    im: Rat,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational {
            re: Rat::from_big(re),
            im: Rat::from_big(im),
        }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational {
            re: Rat::from_big(re),
            im: Rat::zero(),
        }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Serialize for GaussRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GaussRational", 2)?;
        st.serialize_field("re", &format_ratio(&self.re()))?;
        st.serialize_field("im", &format_ratio(&self.im()))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GaussRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            re: String,
            im: String,
        }
        let parts = Parts::deserialize(d)?;
        let re = parse_ratio(&parts.re).map_err(serde::de::Error::custom)?;
        let im = parse_ratio(&parts.im).map_err(serde::de::Error::custom)?;
        Ok(GaussRational::new(re, im))
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{} - {}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{} + {}i", self.re, self.im)
                }
            }
        }
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign for GaussRational {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Coeff for GaussRational {
    const KIND: ScalarKind = ScalarKind::Exact;

    fn mul_ref(&self, rhs: &Self) -> Self {
        // Most coefficients are purely real or purely imaginary.
        match (
            self.im.is_zero(),
            rhs.im.is_zero(),
            self.re.is_zero(),
            rhs.re.is_zero(),
        ) {
            (true, true, _, _) => GaussRational {
                re: &self.re * &rhs.re,
                im: Rat::zero(),
            },
            (true, false, _, true) => GaussRational {
                re: Rat::zero(),
                im: &self.re * &rhs.im,
            },
            (false, true, true, _) => GaussRational {
                re: Rat::zero(),
                im: &self.im * &rhs.re,
            },
            (false, false, true, true) => GaussRational {
                re: -(&self.im * &rhs.im),
                im: Rat::zero(),
            },
            _ => GaussRational {
                re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
                im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
            },
        }
    }

    fn zero() -> Self {
        GaussRational {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }
    fn one() -> Self {
        GaussRational {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }
    fn imag_unit() -> Self {
        GaussRational {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }
    fn from_ratio(r: &BigRational) -> Self {
        GaussRational::real(r.clone())
    }
    fn from_f64(x: f64) -> Self {
        GaussRational::real(BigRational::from_float(x).unwrap_or_else(BigRational::zero))
    }
    fn from_frac(num: i64, den: i64) -> Self {
        GaussRational::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.im.is_zero() {
            return Some(GaussRational {
                re: self.re.recip()?,
                im: Rat::zero(),
            });
        }
        let den = (&(&self.re * &self.re) + &(&self.im * &self.im)).recip()?;
        Some(GaussRational {
            re: &self.re * &den,
            im: -(&self.im * &den),
        })
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
}

impl Coeff for Complex64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_ratio(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
}

/// Type-erased scalar used by scenario files and reports.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussRational),
    Float(Complex64),
}

impl Scalar {
    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Exact(_) => ScalarKind::Exact,
            Scalar::Float(_) => ScalarKind::Float,
        }
    }

    pub fn zero(kind: ScalarKind) -> Scalar {
        match kind {
            ScalarKind::Exact => Scalar::Exact(GaussRational::zero()),
            ScalarKind::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => g.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => Coeff::is_zero(g),
            Scalar::Float(z) => Coeff::is_zero(z),
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(GaussRational, GaussRational) -> GaussRational,
        float: impl FnOnce(Complex64, Complex64) -> Complex64,
    ) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a.clone(), b.clone()))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(ScalarError::KindMismatch(self.kind(), rhs.kind())),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(
                a.clone() * b.inv().ok_or(ScalarError::DivisionByZero)?,
            )),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a / b)),
            _ => Err(ScalarError::KindMismatch(self.kind(), rhs.kind())),
        }
    }

    /// Parses a real literal: `"p/q"` or an integer in exact mode, a decimal in
    /// float mode.
    pub fn parse_real(text: &str, kind: ScalarKind) -> Result<Scalar, ScalarError> {
        match kind {
            ScalarKind::Exact => parse_ratio(text).map(|r| Scalar::Exact(GaussRational::real(r))),
            ScalarKind::Float => text
                .trim()
                .parse::<f64>()
                .map(|v| Scalar::Float(Complex64::new(v, 0.0)))
                .map_err(|e| ScalarError::Parse(format!("{text:?}: {e}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => fmt::Display::fmt(g, f),
            Scalar::Float(z) => write!(f, "{}", z),
        }
    }
}

/// Parses `"p/q"`, `"p"` (optionally signed) into a reduced rational.
pub fn parse_ratio(text: &str) -> Result<BigRational, ScalarError> {
    let text = text.trim();
    let bad = || ScalarError::Parse(format!("{text:?} is not a rational literal p/q"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_frac(n, d)
    }

    #[test]
    fn rationals_are_reduced() {
        let r = parse_ratio("6/-4").unwrap();
        assert_eq!(format_ratio(&r), "-3/2");
        assert_eq!(format_ratio(&parse_ratio("8/4").unwrap()), "2");
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussRational::imag_unit();
        assert_eq!(i.clone() * i.clone(), -GaussRational::one());
        let z = q(1, 2) + i.clone() * q(3, 1);
        let inv = z.inv().unwrap();
        assert_eq!(z * inv, GaussRational::one());
        assert!(GaussRational::zero().inv().is_none());
        assert_eq!(q(2, 3).pow(-2).unwrap(), q(9, 4));
    }

    #[test]
    fn mixing_kinds_is_an_error() {
        let a = Scalar::Exact(q(1, 2));
        let b = Scalar::Float(Complex64::new(0.5, 0.0));
        assert_eq!(
            a.checked_add(&b),
            Err(ScalarError::KindMismatch(
                ScalarKind::Exact,
                ScalarKind::Float
            ))
        );
        assert!(a.checked_mul(&a).is_ok());
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(
            Scalar::parse_real("-7/21", ScalarKind::Exact).unwrap(),
            Scalar::Exact(q(-1, 3))
        );
        assert!(Scalar::parse_real("0.25", ScalarKind::Exact).is_err());
        assert_eq!(
            Scalar::parse_real("0.25", ScalarKind::Float).unwrap(),
            Scalar::Float(Complex64::new(0.25, 0.0))
        );
        assert_eq!(parse_ratio("1/0"), Err(ScalarError::DivisionByZero));
    }
}
