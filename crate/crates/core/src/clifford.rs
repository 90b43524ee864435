//! Clifford algebra over an orthonormal frame with `c(e_i)c(e_j) + c(e_j)c(e_i) = -2δ_ij`.
//!
//! Elements are sparse maps from basis blades to coefficients. A blade is a
//! bitmask over the generators, bit `i` standing for `e_{i+1}`, and always
//! denotes the ordered product `e_{i1} e_{i2} ... e_{ik}` with `i1 < ... < ik`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Coeff;

/// Largest frame dimension supported; blade masks are `u32`.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("trace requires dimension 2m = {expected}, element has dimension {found}")]
    TraceDimension { expected: usize, found: usize },
    #[error("frame dimension {0} outside 1..={MAX_DIM}")]
    UnsupportedDimension(usize),
}

/// Components of a tangent vector at the base point in the orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameVector<C> {
    components: Vec<C>,
}

impl<C: Coeff> FrameVector<C> {
    pub fn new(components: Vec<C>) -> Self {
        FrameVector { components }
    }

    pub fn zero(dim: usize) -> Self {
        FrameVector {
            components: vec![C::zero(); dim],
        }
    }

    /// The frame vector `e_{index+1}` (zero-based index).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.components[index] = C::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[C] {
        &self.components
    }

    pub fn get(&self, i: usize) -> &C {
        &self.components[i]
    }

    /// Euclidean frame pairing `g(a, b) = Σ a_i b_i` (bilinear, no conjugation).
    pub fn dot(&self, other: &Self) -> C {
        let mut acc = C::zero();
        for (a, b) in self.components.iter().zip(&other.components) {
            acc += a.clone() * b.clone();
        }
        acc
    }

    pub fn norm_sq(&self) -> C {
        self.dot(self)
    }

    pub fn scale(&self, s: &C) -> Self {
        FrameVector {
            components: self
                .components
                .iter()
                .map(|c| c.clone() * s.clone())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FrameVector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Coeff::is_zero)
    }
}

/// A basis blade, stored as a bitmask of generator indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Builds a blade from distinct zero-based generator indices given in
    /// increasing order.
    pub fn from_indices(indices: &[usize]) -> Blade {
        let mut mask = 0u32;
        for &i in indices {
            debug_assert!(
                mask & (1 << i) == 0 && mask >> i == 0,
                "indices must increase"
            );
            mask |= 1 << i;
        }
        Blade(mask)
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    /// Product of two blades: the resulting blade and whether the sign is negative.
    ///
    /// Reordering parity counts, for each generator of `a`, the generators of
    /// `b` with a smaller index. Each shared generator squares to `-1`.
    pub fn product(a: Blade, b: Blade) -> (Blade, bool) {
        let mut swaps = 0u32;
        let mut rest = a.0 >> 1;
        while rest != 0 {
            swaps += (rest & b.0).count_ones();
            rest >>= 1;
        }
        let squares = (a.0 & b.0).count_ones();
        (Blade(a.0 ^ b.0), (swaps + squares) % 2 == 1)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let names: Vec<String> = self.indices().map(|i| format!("e{}", i + 1)).collect();
        f.write_str(&names.join("^"))
    }
}

/// Sparse element of the Clifford algebra of an `dim`-dimensional frame.
#[derive(Clone, PartialEq)]
pub struct CliffordElement<C> {
    dim: usize,
    terms: BTreeMap<Blade, C>,
}

impl<C: Coeff> CliffordElement<C> {
    pub fn zero(dim: usize) -> Self {
        CliffordElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: C) -> Self {
        Self::from_blade(dim, Blade::SCALAR, value)
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, C::one())
    }

    pub fn from_blade(dim: usize, blade: Blade, value: C) -> Self {
        let mut e = Self::zero(dim);
        e.add_term(blade, value);
        e
    }

    /// `c(e_{index+1})`.
    pub fn generator(dim: usize, index: usize) -> Self {
        Self::from_blade(dim, Blade(1 << index), C::one())
    }

    /// Clifford action `c(v) = Σ v_i c(e_i)`.
    pub fn from_vector(v: &FrameVector<C>) -> Self {
        let mut e = Self::zero(v.dim());
        for (i, c) in v.components().iter().enumerate() {
            e.add_term(Blade(1 << i), c.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, blade: Blade) -> C {
        self.terms.get(&blade).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the empty blade.
    pub fn scalar_part(&self) -> C {
        self.coefficient(Blade::SCALAR)
    }

    pub fn add_term(&mut self, blade: Blade, value: C) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += value;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (b, c) in &other.terms {
            self.add_term(*b, c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (b, c) in &self.terms {
            out.add_term(*b, c.clone() * s.clone());
        }
        out
    }

    /// Geometric product; panics on dimension mismatch (see [`clifford_product`]).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "Clifford dimension mismatch");
        let mut out = Self::zero(self.dim);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let (blade, negative) = Blade::product(*ba, *bb);
                let v = ca.mul_ref(cb);
                out.add_term(blade, if negative { -v } else { v });
            }
        }
        out
    }

    pub fn grade_project(&self, k: u32) -> Self {
        CliffordElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Returns `Some(s)` when the element is `s · 1`.
    pub fn as_scalar(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Blade::SCALAR).cloned(),
            _ => None,
        }
    }

    /// Drops coefficients whose magnitude is below `tol · max|coeff|`.
    ///
    /// Only meaningful in float mode; exact elements never carry residue.
    pub fn prune(&self, tol: f64) -> Self {
        let scale = self
            .terms
            .values()
            .map(Coeff::magnitude)
            .fold(0.0, f64::max);
        CliffordElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.magnitude() > tol * scale)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Largest coefficient magnitude.
    /// Drops coefficients with magnitude at most `abs_tol`.
    pub fn prune_below(&self, abs_tol: f64) -> Self {
        CliffordElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.magnitude() > abs_tol)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(Coeff::magnitude)
            .fold(0.0, f64::max)
    }
}

impl<C: Coeff> fmt::Debug for CliffordElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Display for CliffordElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("({c})·{b}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `c(v)` as a grade-1 element.
pub fn clifford_of_vector<C: Coeff>(v: &FrameVector<C>) -> CliffordElement<C> {
    CliffordElement::from_vector(v)
}

pub fn clifford_product<C: Coeff>(
    a: &CliffordElement<C>,
    b: &CliffordElement<C>,
) -> Result<CliffordElement<C>, CliffordError> {
    if a.dim != b.dim {
        return Err(CliffordError::DimensionMismatch(a.dim, b.dim));
    }
    Ok(a.mul(b))
}

/// Fiberwise trace on spinors of a `2m`-dimensional frame: `2^m` times the
/// scalar coefficient. Every non-empty blade is traceless.
pub fn clifford_trace<C: Coeff>(a: &CliffordElement<C>, m: usize) -> Result<C, CliffordError> {
    if a.dim != 2 * m {
        return Err(CliffordError::TraceDimension {
            expected: 2 * m,
            found: a.dim,
        });
    }
    Ok(a.scalar_part() * C::from_i64(1i64 << m))
}

pub fn grade_project<C: Coeff>(a: &CliffordElement<C>, k: u32) -> CliffordElement<C> {
    a.grade_project(k)
}

/// Ordered product `c(v_1) c(v_2) ... c(v_k)`.
pub fn product_of_vectors<C: Coeff>(vectors: &[FrameVector<C>], dim: usize) -> CliffordElement<C> {
    vectors
        .iter()
        .fold(CliffordElement::identity(dim), |acc, v| {
            acc.mul(&CliffordElement::from_vector(v))
        })
}
