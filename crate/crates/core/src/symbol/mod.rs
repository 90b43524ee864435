//! Pseudodifferential symbols at a point: finite sums of
//! `(x-jet) · ξ^β · ‖ξ‖^{2k}` grouped by homogeneity degree `|β| + 2k`.
//!
//! Each homogeneous component carries one precision [`Order`] for all of its
//! `x`-jets. A component with no terms and a finite order is a function known
//! to vanish only to that order, e.g. a connection term that is zero at the
//! base point but whose derivatives are not modelled.

mod calculus;
mod jet;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use calculus::{
    inverse_power_symbols, iterated_power_at_origin, iterated_power_oracle, symbol_compose,
    symbol_compose_at_origin, symbol_invert_order2, symbol_partial_xi,
};
pub use jet::{jet_multiply, jet_partial_x, Jet, JetError, Monomial, Order, EXACT, MAX_VARS};

use crate::clifford::CliffordElement;
use crate::scalar::{Coeff, ScalarKind};
use crate::sphere::monomial_integral;
use jet::{
    lower_order, poly_add, poly_add_term, poly_map, poly_mul, poly_partial, poly_truncate, Poly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error(
        "degree {requested} requested but the symbol is only known down to degree {known_from}"
    )]
    UnknownDegree { requested: i32, known_from: i32 },
    #[error("expected homogeneity degree {expected}, term has degree {found}")]
    WrongDegree { expected: i32, found: i32 },
    #[error("leading symbol is not an invertible scalar multiple of |xi|^2 at the origin: {0}")]
    NotInvertible(String),
    #[error("leading symbol varies in x but its precision is exact, so the inverse series does not terminate")]
    InfiniteSeries,
    #[error("symbol is missing its degree {0} component")]
    MissingDegree(i32),
    #[error("power formula needs m >= 2, got {0}")]
    PowerTooSmall(u32),
    #[error("power formula needs a scalar-valued leading inverse")]
    NonScalar,
    #[error("value at the origin is unknown in degree {degree} (order {order})")]
    UnknownValue { degree: i32, order: Order },
    #[error("symbols live over {0} and {1} variables")]
    VarMismatch(usize, usize),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Relative tolerance for float-mode rounding residue.
pub const FLOAT_TOL: f64 = 1e-10;

/// `ξ^β ‖ξ‖^{2k}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiKey {
    pub beta: Monomial,
    pub k: i32,
}

impl XiKey {
    pub fn new(beta: Monomial, k: i32) -> Self {
        XiKey { beta, k }
    }

    pub fn degree(&self) -> i32 {
        self.beta.degree() as i32 + 2 * self.k
    }
}

impl fmt::Debug for XiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi{:?}|xi|^{}", self.beta, 2 * self.k)
    }
}

/// One homogeneous component of a symbol.
#[derive(Clone, PartialEq)]
pub struct Component<C> {
    pub(crate) order: Order,
    pub(crate) terms: BTreeMap<XiKey, Poly<C>>,
}

impl<C: Coeff> Component<C> {
    fn empty(order: Order) -> Self {
        Component {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_poly(&mut self, key: XiKey, poly: &Poly<C>) {
        let slot = self.terms.entry(key).or_default();
        poly_add(slot, poly);
        poly_truncate(slot, self.order);
        if slot.is_empty() {
            self.terms.remove(&key);
        }
    }

    fn merge(&mut self, other: &Component<C>) {
        self.order = self.order.min(other.order);
        for (k, p) in &other.terms {
            self.add_poly(*k, p);
        }
        for p in self.terms.values_mut() {
            poly_truncate(p, self.order);
        }
        self.terms.retain(|_, p| !p.is_empty());
    }

    fn map_polys(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut out = Component::empty(self.order);
        for (k, p) in &self.terms {
            out.add_poly(*k, &f(p));
        }
        out
    }

    fn mul(&self, other: &Component<C>) -> Self {
        let order = self.order.min(other.order);
        let mut out = Component::empty(order);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                let key = XiKey::new(ka.beta.mul(&kb.beta), ka.k + kb.k);
                out.add_poly(key, &poly_mul(pa, pb, order));
            }
        }
        out
    }

    /// Polynomial in `ξ` after rewriting every term over the common factor
    /// `‖ξ‖^{2K}`, `K` the smallest norm power present, using `‖ξ‖² = Σ ξ_i²`.
    fn canonical(&self, vars: usize, base_k: i32) -> BTreeMap<Monomial, Poly<C>> {
        let mut out: BTreeMap<Monomial, Poly<C>> = BTreeMap::new();
        for (key, poly) in &self.terms {
            let mut expansion = vec![(key.beta, 1i64)];
            for _ in 0..(key.k - base_k) {
                let mut next: BTreeMap<Monomial, i64> = BTreeMap::new();
                for (mono, c) in &expansion {
                    for i in 0..vars {
                        *next.entry(mono.raise(i).raise(i)).or_default() += c;
                    }
                }
                expansion = next.into_iter().collect();
            }
            for (mono, c) in expansion {
                let scaled = poly_map(poly, |e| e.scale(&C::from_i64(c)));
                let slot = out.entry(mono).or_default();
                poly_add(slot, &scaled);
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    fn min_k(&self) -> i32 {
        self.terms.keys().map(|k| k.k).min().unwrap_or(0)
    }
}

/// Symbol over `vars` coordinates with Clifford coefficients of dimension `dim`.
#[derive(Clone, PartialEq)]
pub struct Symbol<C> {
    vars: usize,
    dim: usize,
    /// Components of degree below this are unknown, not zero.
    known_from: i32,
    components: BTreeMap<i32, Component<C>>,
}

impl<C: Coeff> Symbol<C> {
    /// The exact zero symbol.
    pub fn zero(vars: usize, dim: usize) -> Self {
        Symbol {
            vars,
            dim,
            known_from: i32::MIN,
            components: BTreeMap::new(),
        }
    }

    /// A single term `jet · ξ^β ‖ξ‖^{2k}`.
    pub fn term(beta: Monomial, k: i32, jet: &Jet<C>) -> Self {
        let mut s = Self::zero(jet.vars(), jet.dim());
        s.add_term(XiKey::new(beta, k), jet);
        s
    }

    /// `‖ξ‖^{2k}` with identity coefficient, known exactly.
    pub fn norm_power(vars: usize, dim: usize, k: i32) -> Self {
        Self::term(Monomial::ONE, k, &Jet::scalar(vars, dim, C::one(), EXACT))
    }

    /// `Σ_j c_j ξ_j` with constant coefficients.
    pub fn linear_in_xi(coeffs: &[CliffordElement<C>], vars: usize, order: Order) -> Self {
        let dim = coeffs.first().map_or(0, CliffordElement::dim);
        let mut s = Self::zero(vars, dim);
        s.ensure_component(1, order);
        for (j, c) in coeffs.iter().enumerate() {
            s.add_term(
                XiKey::new(Monomial::unit(j), 0),
                &Jet::constant(vars, c.clone(), order),
            );
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn known_from(&self) -> i32 {
        self.known_from
    }

    /// Declares degrees below `degree` unknown.
    pub fn with_known_from(mut self, degree: i32) -> Self {
        self.known_from = self.known_from.max(degree);
        self.components.retain(|d, _| *d >= degree);
        self
    }

    pub fn hi(&self) -> Option<i32> {
        self.components.keys().next_back().copied()
    }

    pub fn lo(&self) -> Option<i32> {
        self.components.keys().next().copied()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn component(&self, degree: i32) -> Option<&Component<C>> {
        self.components.get(&degree)
    }

    /// Precision of a component; absent components are exact zeros.
    pub fn order_of(&self, degree: i32) -> Order {
        self.components.get(&degree).map_or(EXACT, |c| c.order)
    }

    pub fn min_order(&self) -> Order {
        self.components
            .values()
            .map(|c| c.order)
            .min()
            .unwrap_or(EXACT)
    }

    /// Registers a component of the given degree known to `order`, so that a
    /// function vanishing at the base point keeps its limited precision.
    pub fn ensure_component(&mut self, degree: i32, order: Order) {
        let comp = self
            .components
            .entry(degree)
            .or_insert_with(|| Component::empty(order));
        if order < comp.order {
            let mut lowered = Component::empty(order);
            lowered.merge(comp);
            *comp = lowered;
        }
    }

    pub fn add_term(&mut self, key: XiKey, jet: &Jet<C>) {
        let degree = key.degree();
        self.ensure_component(degree, jet.order());
        let comp = self
            .components
            .get_mut(&degree)
            .expect("component just ensured");
        let mut poly = jet.clone().into_poly();
        poly_truncate(&mut poly, comp.order);
        comp.add_poly(key, &poly);
        self.normalize();
    }

    fn normalize(&mut self) {
        self.components
            .retain(|_, c| !(c.terms.is_empty() && c.order == EXACT));
    }

    /// Iterates `(key, jet)` over every term.
    pub fn terms(&self) -> impl Iterator<Item = (XiKey, Jet<C>)> + '_ {
        self.components.values().flat_map(move |comp| {
            comp.terms.iter().map(move |(k, p)| {
                (
                    *k,
                    Jet::from_poly(self.vars, self.dim, comp.order, p.clone()),
                )
            })
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.known_from = self.known_from.max(other.known_from);
        for (d, comp) in &other.components {
            match out.components.get_mut(d) {
                Some(mine) => mine.merge(comp),
                None => {
                    out.components.insert(*d, comp.clone());
                }
            }
        }
        out.components.retain(|d, _| *d >= out.known_from);
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        self.map_polys(|p| poly_map(p, CliffordElement::neg))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_polys(|p| poly_map(p, |c| c.scale(s)))
    }

    pub fn left_mul_clifford(&self, c: &CliffordElement<C>) -> Self {
        self.map_polys(|p| poly_map(p, |x| c.mul(x)))
    }

    pub fn right_mul_clifford(&self, c: &CliffordElement<C>) -> Self {
        self.map_polys(|p| poly_map(p, |x| x.mul(c)))
    }

    /// Multiplies every coefficient on the left by a jet.
    pub fn left_mul_jet(&self, j: &Jet<C>) -> Self {
        Symbol::term(Monomial::ONE, 0, j).mul(self)
    }

    fn map_polys(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut out = Symbol {
            components: BTreeMap::new(),
            ..self.clone()
        };
        for (d, comp) in &self.components {
            out.components.insert(*d, comp.map_polys(&f));
        }
        out.normalize();
        out
    }

    /// Upper bound of unknown degrees in a product.
    fn product_known_from(&self, other: &Self) -> i32 {
        let lhs = match other.hi() {
            Some(h) => self.known_from.saturating_add(h),
            None => i32::MIN,
        };
        let rhs = match self.hi() {
            Some(h) => other.known_from.saturating_add(h),
            None => i32::MIN,
        };
        lhs.max(rhs)
    }

    /// Pointwise product (no derivative corrections), keeping degrees `>= lowest`.
    pub fn mul_from(&self, other: &Self, lowest: i32) -> Self {
        let mut out = Symbol::zero(self.vars, self.dim);
        for (da, ca) in &self.components {
            for (db, cb) in &other.components {
                let d = da + db;
                if d < lowest {
                    continue;
                }
                let prod = ca.mul(cb);
                match out.components.get_mut(&d) {
                    Some(mine) => mine.merge(&prod),
                    None => {
                        out.components.insert(d, prod);
                    }
                }
            }
        }
        out.normalize();
        out.known_from = self.product_known_from(other).max(lowest);
        out
    }

    /// Pointwise product of symbols.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_from(other, i32::MIN)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Symbol::norm_power(self.vars, self.dim, 0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂ξ_{mu+1}`: monomial rule plus `∂‖ξ‖^{2k} = 2k‖ξ‖^{2k-2}ξ_mu`.
    pub fn partial_xi(&self, mu: usize) -> Self {
        let mut out = Symbol {
            components: BTreeMap::new(),
            ..self.clone()
        };
        out.known_from = self.known_from.saturating_sub(1);
        for (d, comp) in &self.components {
            let mut next = Component::empty(comp.order);
            for (key, poly) in &comp.terms {
                let b = key.beta.exponent(mu);
                if let Some(lower) = key.beta.lower(mu) {
                    let f = C::from_i64(i64::from(b));
                    next.add_poly(XiKey::new(lower, key.k), &poly_map(poly, |c| c.scale(&f)));
                }
                if key.k != 0 {
                    let f = C::from_i64(2 * i64::from(key.k));
                    next.add_poly(
                        XiKey::new(key.beta.raise(mu), key.k - 1),
                        &poly_map(poly, |c| c.scale(&f)),
                    );
                }
            }
            out.components.insert(d - 1, next);
        }
        out.normalize();
        out
    }

    /// `∂/∂x_{mu+1}` of every coefficient; each component loses one order.
    pub fn partial_x(&self, mu: usize) -> Self {
        let mut out = Symbol {
            components: BTreeMap::new(),
            ..self.clone()
        };
        for (d, comp) in &self.components {
            let order = lower_order(comp.order);
            let mut next = Component::empty(order);
            for (key, poly) in &comp.terms {
                next.add_poly(*key, &poly_partial(poly, mu));
            }
            out.components.insert(*d, next);
        }
        out.normalize();
        out
    }

    /// Only the component of the given degree.
    pub fn degree_part(&self, degree: i32) -> Self {
        let mut out = Symbol::zero(self.vars, self.dim);
        if let Some(c) = self.components.get(&degree) {
            out.components.insert(degree, c.clone());
        }
        out.normalize();
        out
    }

    /// Components with degree in `lo..=hi`; lower degrees become unknown.
    pub fn degree_window(&self, lo: i32, hi: i32) -> Self {
        let mut out = self.clone();
        out.components.retain(|d, _| *d >= lo && *d <= hi);
        out.known_from = out.known_from.max(lo);
        out
    }

    /// Replaces every jet by its value at the origin (an exact constant).
    pub fn at_origin(&self) -> Result<Self, SymbolError> {
        let mut out = Symbol {
            components: BTreeMap::new(),
            ..self.clone()
        };
        for (d, comp) in &self.components {
            if comp.order < 0 {
                return Err(SymbolError::UnknownValue {
                    degree: *d,
                    order: comp.order,
                });
            }
            let mut next = Component::empty(EXACT);
            for (key, poly) in &comp.terms {
                let mut p = poly.clone();
                poly_truncate(&mut p, 0);
                next.add_poly(*key, &p);
            }
            out.components.insert(*d, next);
        }
        out.normalize();
        Ok(out)
    }

    /// Truncates every component to at most `order`.
    pub fn with_order(&self, order: Order) -> Self {
        let mut out = self.clone();
        for comp in out.components.values_mut() {
            if order < comp.order {
                comp.order = order;
                for p in comp.terms.values_mut() {
                    poly_truncate(p, order);
                }
                comp.terms.retain(|_, p| !p.is_empty());
            }
        }
        out.normalize();
        out
    }

    /// True when every component is zero after rewriting `‖ξ‖²` as `Σξ_i²`.
    pub fn is_zero(&self) -> bool {
        self.components
            .values()
            .all(|c| c.canonical(self.vars, c.min_k()).is_empty())
    }

    /// `self - other` vanishes in every degree, to the precision both carry.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Largest coefficient magnitude of the canonical form.
    pub fn max_magnitude(&self) -> f64 {
        self.components
            .values()
            .flat_map(|c| c.canonical(self.vars, c.min_k()).into_values())
            .flat_map(|p| p.into_values())
            .map(|e| e.max_magnitude())
            .fold(0.0, f64::max)
    }

    /// Rewrites every component over its smallest norm power, merging terms
    /// that differ only in how `‖ξ‖²` is spelled.
    pub fn compact(&self) -> Self {
        let mut out = Symbol {
            components: BTreeMap::new(),
            ..self.clone()
        };
        for (d, comp) in &self.components {
            let base_k = comp.min_k();
            let mut next = Component::empty(comp.order);
            for (beta, poly) in comp.canonical(self.vars, base_k) {
                next.add_poly(XiKey::new(beta, base_k), &poly);
            }
            out.components.insert(*d, next);
        }
        out.normalize();
        out
    }

    /// Canonical form with every coefficient of magnitude at most `abs_tol`
    /// removed; used to clear float rounding residue.
    pub fn canonical_pruned(&self, abs_tol: f64) -> Self {
        let mut out = Symbol {
            components: BTreeMap::new(),
            ..self.clone()
        };
        for (d, comp) in &self.components {
            let base_k = comp.min_k();
            let mut next = Component::empty(comp.order);
            for (beta, poly) in comp.canonical(self.vars, base_k) {
                let mut p = Poly::new();
                for (mono, e) in &poly {
                    poly_add_term(&mut p, *mono, &e.prune_below(abs_tol));
                }
                next.add_poly(XiKey::new(beta, base_k), &p);
            }
            out.components.insert(*d, next);
        }
        out.normalize();
        out
    }

    /// In float mode, [`Symbol::canonical_pruned`] with threshold
    /// `FLOAT_TOL * max(scale, 1)`; unchanged in exact mode.
    pub fn cleaned(&self, scale: f64) -> Self {
        match C::KIND {
            ScalarKind::Exact => self.clone(),
            ScalarKind::Float => self.canonical_pruned(FLOAT_TOL * scale.max(1.0)),
        }
    }

    /// Exact agreement in exact mode; agreement within [`FLOAT_TOL`] relative
    /// to the larger operand in float mode.
    pub fn matches(&self, other: &Self) -> bool {
        let scale = self.max_magnitude().max(other.max_magnitude());
        self.sub(other).cleaned(scale).is_zero()
    }

    /// True when every coefficient is a multiple of the identity.
    pub fn is_scalar_valued(&self) -> bool {
        self.components
            .values()
            .flat_map(|c| c.terms.values())
            .flat_map(|p| p.values())
            .all(|e| e.as_scalar().is_some())
    }

    /// `∫_{|ξ|=1} σ_{-n}(x_0, ξ) dξ` in units of `Vol(S^{n-1})`.
    pub fn integrate_over_sphere(&self) -> Result<CliffordElement<C>, SymbolError> {
        let n = self.vars as i32;
        if self.known_from > -n {
            return Err(SymbolError::UnknownDegree {
                requested: -n,
                known_from: self.known_from,
            });
        }
        let mut acc = CliffordElement::zero(self.dim);
        let Some(comp) = self.components.get(&-n) else {
            return Ok(acc);
        };
        if comp.order < 0 {
            return Err(SymbolError::UnknownValue {
                degree: -n,
                order: comp.order,
            });
        }
        for (key, poly) in &comp.terms {
            if let Some(c0) = poly.get(&Monomial::ONE) {
                acc.add_assign(&integrate_symbol_term_over_sphere(key, c0, self.vars)?);
            }
        }
        Ok(acc)
    }
}

/// `∫_{|ξ|=1} A ξ^β ‖ξ‖^{2k} dξ` in units of `Vol(S^{n-1})`, for a term of degree `-n`.
pub fn integrate_symbol_term_over_sphere<C: Coeff>(
    key: &XiKey,
    coefficient: &CliffordElement<C>,
    n: usize,
) -> Result<CliffordElement<C>, SymbolError> {
    if key.degree() != -(n as i32) {
        return Err(SymbolError::WrongDegree {
            expected: -(n as i32),
            found: key.degree(),
        });
    }
    let moment = monomial_integral(&key.beta.exponents(n), n);
    Ok(coefficient.scale(&C::from_ratio(&moment.rational)))
}

impl<C: Coeff> fmt::Debug for Symbol<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Symbol(vars={}, known_from={})",
            self.vars, self.known_from
        )?;
        for (d, comp) in self.components.iter().rev() {
            writeln!(f, "  degree {d} (order {}):", comp.order)?;
            for (key, poly) in &comp.terms {
                let j = Jet::from_poly(self.vars, self.dim, comp.order, poly.clone());
                writeln!(f, "    {key:?} * {j:?}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
