//! Truncated Taylor polynomials in `x` with Clifford-valued coefficients.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::clifford::CliffordElement;
use crate::scalar::Coeff;

/// Largest number of variables a [`Monomial`] can carry.
pub const MAX_VARS: usize = 8;

/// Precision of a jet: everything up to and including this total `x`-degree is
/// known. [`EXACT`] marks a polynomial with no truncation; negative means nothing is known.
pub type Order = i32;
pub const EXACT: Order = Order::MAX;

pub(crate) fn lower_order(o: Order) -> Order {
    if o == EXACT {
        EXACT
    } else {
        o - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("jets have {0} and {1} variables")]
    VarMismatch(usize, usize),
    #[error("constant term {0} is not an invertible scalar")]
    NotInvertible(String),
    #[error("inverting a non-constant jet needs a finite order")]
    InfiniteSeries,
    #[error("value at the origin is unknown (order {0})")]
    Unknown(Order),
}

/// Exponent vector of a monomial, in either `x` or `ξ`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial([u8; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn unit(i: usize) -> Self {
        let mut e = [0u8; MAX_VARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut e = [0u8; MAX_VARS];
        for (slot, &x) in e.iter_mut().zip(exps) {
            *slot = u8::try_from(x).expect("exponent fits in u8");
        }
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        u32::from(self.0[i])
    }

    pub fn exponents(&self, vars: usize) -> Vec<u32> {
        self.0[..vars].iter().map(|&e| u32::from(e)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    /// Lowers exponent `i` by one; `None` when it is already zero.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        let mut e = self.0;
        e[i] = e[i].checked_sub(1)?;
        Some(Monomial(e))
    }

    pub fn raise(&self, i: usize) -> Monomial {
        let mut e = self.0;
        e[i] += 1;
        Monomial(e)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("_{}", i + 1)
                } else {
                    format!("_{}^{e}", i + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(""))
        }
    }
}

/// Polynomial body of a jet.
pub(crate) type Poly<C> = BTreeMap<Monomial, CliffordElement<C>>;

pub(crate) fn poly_add_term<C: Coeff>(p: &mut Poly<C>, mono: Monomial, value: &CliffordElement<C>) {
    if value.is_zero() {
        return;
    }
    match p.get_mut(&mono) {
        Some(slot) => {
            slot.add_assign(value);
            if slot.is_zero() {
                p.remove(&mono);
            }
        }
        None => {
            p.insert(mono, value.clone());
        }
    }
}

pub(crate) fn poly_add<C: Coeff>(a: &mut Poly<C>, b: &Poly<C>) {
    for (mono, v) in b {
        poly_add_term(a, *mono, v);
    }
}

pub(crate) fn poly_truncate<C: Coeff>(p: &mut Poly<C>, order: Order) {
    if order != EXACT {
        p.retain(|mono, _| (mono.degree() as i64) <= i64::from(order));
    }
}

pub(crate) fn poly_mul<C: Coeff>(a: &Poly<C>, b: &Poly<C>, order: Order) -> Poly<C> {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mono = ma.mul(mb);
            if order != EXACT && i64::from(mono.degree()) > i64::from(order) {
                continue;
            }
            poly_add_term(&mut out, mono, &ca.mul(cb));
        }
    }
    out
}

pub(crate) fn poly_partial<C: Coeff>(p: &Poly<C>, mu: usize) -> Poly<C> {
    let mut out = Poly::new();
    for (mono, c) in p {
        if let Some(lower) = mono.lower(mu) {
            let k = C::from_i64(i64::from(mono.exponent(mu)));
            poly_add_term(&mut out, lower, &c.scale(&k));
        }
    }
    out
}

pub(crate) fn poly_map<C: Coeff>(
    p: &Poly<C>,
    f: impl Fn(&CliffordElement<C>) -> CliffordElement<C>,
) -> Poly<C> {
    let mut out = Poly::new();
    for (mono, c) in p {
        poly_add_term(&mut out, *mono, &f(c));
    }
    out
}

/// Taylor polynomial at the base point, known up to `order`.
#[derive(Clone, PartialEq)]
pub struct Jet<C> {
    vars: usize,
    dim: usize,
    order: Order,
    coeffs: Poly<C>,
}

impl<C: Coeff> Jet<C> {
    pub fn zero(vars: usize, dim: usize, order: Order) -> Self {
        Jet {
            vars,
            dim,
            order,
            coeffs: Poly::new(),
        }
    }

    pub fn constant(vars: usize, value: CliffordElement<C>, order: Order) -> Self {
        let mut j = Self::zero(vars, value.dim(), order);
        if order >= 0 {
            poly_add_term(&mut j.coeffs, Monomial::ONE, &value);
        }
        j
    }

    pub fn scalar(vars: usize, dim: usize, value: C, order: Order) -> Self {
        Self::constant(vars, CliffordElement::scalar(dim, value), order)
    }

    /// The coordinate function `x_{i+1}` as a scalar jet.
    pub fn coordinate(vars: usize, dim: usize, i: usize, order: Order) -> Self {
        let mut j = Self::zero(vars, dim, order);
        j.add_term(Monomial::unit(i), &CliffordElement::identity(dim));
        j
    }

    pub(crate) fn from_poly(vars: usize, dim: usize, order: Order, mut coeffs: Poly<C>) -> Self {
        poly_truncate(&mut coeffs, order);
        Jet {
            vars,
            dim,
            order,
            coeffs,
        }
    }

    pub(crate) fn into_poly(self) -> Poly<C> {
        self.coeffs
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CliffordElement<C>)> {
        self.coeffs.iter()
    }

    /// Adds `value · x^mono`; ignored beyond the jet's order.
    pub fn add_term(&mut self, mono: Monomial, value: &CliffordElement<C>) {
        if self.order == EXACT || i64::from(mono.degree()) <= i64::from(self.order) {
            poly_add_term(&mut self.coeffs, mono, value);
        }
    }

    pub fn coefficient(&self, mono: &Monomial) -> CliffordElement<C> {
        self.coeffs
            .get(mono)
            .cloned()
            .unwrap_or_else(|| CliffordElement::zero(self.dim))
    }

    /// Value at the origin, which must be known.
    pub fn at_origin(&self) -> Result<CliffordElement<C>, JetError> {
        if self.order < 0 {
            return Err(JetError::Unknown(self.order));
        }
        Ok(self.coefficient(&Monomial::ONE))
    }

    pub fn with_order(&self, order: Order) -> Self {
        Self::from_poly(
            self.vars,
            self.dim,
            self.order.min(order),
            self.coeffs.clone(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        poly_add(&mut coeffs, &other.coeffs);
        Self::from_poly(self.vars, self.dim, self.order.min(other.order), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Jet {
            coeffs: poly_map(&self.coeffs, CliffordElement::neg),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        Jet {
            coeffs: poly_map(&self.coeffs, |c| c.scale(s)),
            ..self.clone()
        }
    }

    /// Product truncated at the smaller of the two orders; `self` stays on the left.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Jet {
            vars: self.vars,
            dim: self.dim,
            order,
            coeffs: poly_mul(&self.coeffs, &other.coeffs, order),
        }
    }

    pub fn left_mul(&self, c: &CliffordElement<C>) -> Self {
        Jet {
            coeffs: poly_map(&self.coeffs, |x| c.mul(x)),
            ..self.clone()
        }
    }

    pub fn right_mul(&self, c: &CliffordElement<C>) -> Self {
        Jet {
            coeffs: poly_map(&self.coeffs, |x| x.mul(c)),
            ..self.clone()
        }
    }

    /// Formal `∂/∂x_{mu+1}`; the order drops by one.
    pub fn partial(&self, mu: usize) -> Self {
        Self::from_poly(
            self.vars,
            self.dim,
            lower_order(self.order),
            poly_partial(&self.coeffs, mu),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::scalar(self.vars, self.dim, C::one(), self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a jet whose constant term is an invertible scalar, by the
    /// geometric series in the non-constant part.
    pub fn inverse(&self) -> Result<Self, JetError> {
        let c0 = self.at_origin()?;
        let s = c0
            .as_scalar()
            .and_then(|s| s.inv())
            .ok_or_else(|| JetError::NotInvertible(c0.to_string()))?;
        let mut rest = self.clone();
        rest.coeffs.remove(&Monomial::ONE);
        if rest.is_zero() {
            return Ok(Self::scalar(self.vars, self.dim, s, self.order));
        }
        if self.order == EXACT {
            return Err(JetError::InfiniteSeries);
        }
        // (c0 + r)^{-1} = s Σ (-s r)^k, and r^k vanishes past the order.
        let step = rest.scale(&(-s.clone()));
        let mut term = Self::scalar(self.vars, self.dim, C::one(), self.order);
        let mut sum = term.clone();
        for _ in 0..self.order {
            term = term.mul(&step);
            sum = sum.add(&term);
        }
        Ok(sum.scale(&s))
    }

    /// Integer power, negative powers via [`Jet::inverse`].
    pub fn powi(&self, k: i32) -> Result<Self, JetError> {
        if k >= 0 {
            Ok(self.pow(k.unsigned_abs()))
        } else {
            Ok(self.inverse()?.pow(k.unsigned_abs()))
        }
    }
}

impl<C: Coeff> fmt::Debug for Jet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| format!("[{c}]x{m:?}"))
            .collect();
        let order = if self.order == EXACT {
            "exact".to_string()
        } else {
            format!("O(x^{})", self.order + 1)
        };
        write!(
            f,
            "{} ({order})",
            if body.is_empty() {
                "0".into()
            } else {
                body.join(" + ")
            }
        )
    }
}

/// Truncated product of two jets.
pub fn jet_multiply<C: Coeff>(a: &Jet<C>, b: &Jet<C>) -> Result<Jet<C>, JetError> {
    if a.vars != b.vars {
        return Err(JetError::VarMismatch(a.vars, b.vars));
    }
    Ok(a.mul(b))
}

pub fn jet_partial_x<C: Coeff>(a: &Jet<C>, mu: usize) -> Jet<C> {
    a.partial(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    type Q = GaussRational;

    fn x(i: usize) -> Jet<Q> {
        Jet::coordinate(4, 4, i, 2)
    }

    fn one() -> Jet<Q> {
        Jet::scalar(4, 4, Q::one(), 2)
    }

    #[test]
    fn truncated_product() {
        let x1x2 = x(0).mul(&x(1));
        assert_eq!(
            x1x2.coefficient(&Monomial::from_exponents(&[1, 1])),
            CliffordElement::identity(4)
        );
        // (1 - q)(1 + q) with q quadratic is 1 at order 2.
        let q = x(0).mul(&x(1)).scale(&Q::from_frac(1, 6));
        assert_eq!(one().sub(&q).mul(&one().add(&q)), one());
        let cubic = x1x2.mul(&x(2));
        assert!(cubic.is_zero());
    }

    #[test]
    fn clifford_coefficients_square() {
        let e1 = Jet::constant(4, CliffordElement::<Q>::generator(4, 0), 2);
        assert_eq!(e1.mul(&e1), one().neg());
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(x(0).mul(&x(1)).partial(0).with_order(1), x(1).with_order(1));
        assert!(one().partial(1).is_zero());
        assert_eq!(one().partial(1).order(), 1);
        assert_eq!(
            Jet::<Q>::scalar(4, 4, Q::one(), EXACT).partial(0).order(),
            EXACT
        );
    }

    #[test]
    fn inverse_series() {
        let a = one().add(&x(0).scale(&Q::from_i64(2)));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), one());
        let exact = Jet::<Q>::scalar(4, 4, Q::one(), EXACT).add(&Jet::coordinate(4, 4, 0, EXACT));
        assert_eq!(exact.inverse(), Err(JetError::InfiniteSeries));
        let e1 = Jet::constant(4, CliffordElement::<Q>::generator(4, 0), 2);
        assert!(matches!(e1.inverse(), Err(JetError::NotInvertible(_))));
    }
}
