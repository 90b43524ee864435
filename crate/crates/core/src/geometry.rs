//! Jets and symbols of the geometric operators at a base point `x_0` in
//! normal coordinates: metric expansions, the scalar Laplacian, and the
//! rescaled Dirac operator `c(V)(D + i c(X))c(V)`.
//!
//! Normal coordinates are hard-wired: `g(x_0) = δ`, `∂g(x_0) = 0` and the spin
//! connection vanishes at `x_0`. Vector fields are carried to first order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::clifford::{clifford_of_vector, CliffordElement, FrameVector};
use crate::scalar::{Coeff, ScalarKind};
use crate::symbol::{
    symbol_compose, symbol_invert_order2, Jet, Monomial, Symbol, SymbolError, XiKey,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("the vector field V is not zero at any point, but |V(x0)|^2 = 0")]
    ZeroField,
    #[error("{field}: expected length {expected}, found {found}")]
    Dimension {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("curvature index {index} out of range for dimension {n}")]
    CurvatureIndex { index: usize, n: usize },
    #[error("curvature components conflict at R{indices:?}: {existing} vs {implied}")]
    CurvatureConflict {
        indices: [usize; 4],
        existing: String,
        implied: String,
    },
    #[error("first Bianchi identity fails at R{indices:?}: cyclic sum {sum}")]
    Bianchi { indices: [usize; 4], sum: String },
    #[error("{what} disagrees with its closed form:\n{detail}")]
    Mismatch { what: String, detail: String },
    #[error("m must be at least 1 and at most 4, got {0}")]
    Rank(usize),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Algebraic curvature tensor `R_{acbd}` at `x_0`, stored densely.
///
/// Antisymmetric in `(a,c)` and in `(b,d)`, symmetric under `(a,c) <-> (b,d)`,
/// and satisfying the first Bianchi identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    n: usize,
    values: Vec<BigRational>,
}

impl CurvatureData {
    pub fn flat(n: usize) -> Self {
        CurvatureData {
            n,
            values: vec![BigRational::zero(); n.pow(4)],
        }
    }

    fn idx(&self, [a, c, b, d]: [usize; 4]) -> usize {
        ((a * self.n + c) * self.n + b) * self.n + d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, c: usize, b: usize, d: usize) -> &BigRational {
        &self.values[self.idx([a, c, b, d])]
    }

    /// Builds the tensor from a few components (zero-based indices), filling in
    /// every image under the antisymmetries and pair symmetry, then checks the
    /// Bianchi identity.
    pub fn from_components(
        n: usize,
        components: &[([usize; 4], BigRational)],
    ) -> Result<Self, GeometryError> {
        let mut out = Self::flat(n);
        let mut set = vec![false; n.pow(4)];
        for (indices, value) in components {
            if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
                return Err(GeometryError::CurvatureIndex { index: bad, n });
            }
            let [a, c, b, d] = *indices;
            let neg = -value.clone();
            let orbit = [
                ([a, c, b, d], value),
                ([c, a, b, d], &neg),
                ([a, c, d, b], &neg),
                ([c, a, d, b], value),
                ([b, d, a, c], value),
                ([d, b, a, c], &neg),
                ([b, d, c, a], &neg),
                ([d, b, c, a], value),
            ];
            for (image, v) in orbit {
                let k = out.idx(image);
                if set[k] && out.values[k] != *v {
                    return Err(GeometryError::CurvatureConflict {
                        indices: image,
                        existing: out.values[k].to_string(),
                        implied: v.to_string(),
                    });
                }
                set[k] = true;
                out.values[k] = v.clone();
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// Checks all symmetries; [`CurvatureData::from_components`] guarantees
    /// the first three by construction.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let n = self.n;
        for a in 0..n {
            for c in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        let r = self.get(a, c, b, d);
                        let checks = [
                            (-self.get(c, a, b, d)),
                            (-self.get(a, c, d, b)),
                            self.get(b, d, a, c).clone(),
                        ];
                        if let Some(other) = checks.iter().find(|x| *x != r) {
                            return Err(GeometryError::CurvatureConflict {
                                indices: [a, c, b, d],
                                existing: r.to_string(),
                                implied: other.to_string(),
                            });
                        }
                        let sum = r + self.get(a, b, d, c) + self.get(a, d, c, b);
                        if !sum.is_zero() {
                            return Err(GeometryError::Bianchi {
                                indices: [a, c, b, d],
                                sum: sum.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `Ric_{cd} = Σ_a R_{acad}`; this is the contraction for which
    /// `√det g = 1 - Ric_{ab}x^a x^b / 6`.
    pub fn ricci(&self) -> Vec<Vec<BigRational>> {
        let n = self.n;
        (0..n)
            .map(|c| {
                (0..n)
                    .map(|d| (0..n).map(|a| self.get(a, c, a, d).clone()).sum())
                    .collect()
            })
            .collect()
    }

    /// Sum of two Kulkarni-Nomizu products of random symmetric rational
    /// matrices, which satisfies every curvature symmetry automatically.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        #[allow(clippy::needless_range_loop)]
        let mut sym = || {
            let mut h = vec![vec![BigRational::zero(); n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = BigRational::new(
                        BigInt::from(rng.random_range(-2..=2)),
                        BigInt::from(rng.random_range(1..=2)),
                    );
                    h[i][j] = v.clone();
                    h[j][i] = v;
                }
            }
            h
        };
        let pairs = [(sym(), sym()), (sym(), sym())];
        let mut out = Self::flat(n);
        for a in 0..n {
            for c in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        let mut v = BigRational::zero();
                        for (h, k) in &pairs {
                            v += &h[a][b] * &k[c][d] + &h[c][d] * &k[a][b]
                                - &h[a][d] * &k[c][b]
                                - &h[c][b] * &k[a][d];
                        }
                        let i = out.idx([a, c, b, d]);
                        out.values[i] = v;
                    }
                }
            }
        }
        out
    }

    pub fn is_flat(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Nonzero components with zero-based indices.
    pub fn nonzero_components(&self) -> Vec<([usize; 4], BigRational)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for c in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        let v = self.get(a, c, b, d);
                        if !v.is_zero() {
                            out.push(([a, c, b, d], v.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

/// `g_{ab}`, `g^{ab}` and `√det g` to second order in `x`, as scalar jets.
#[derive(Debug, Clone)]
pub struct NormalMetricJets<C: Coeff> {
    pub g_lower: Vec<Vec<Jet<C>>>,
    pub g_upper: Vec<Vec<Jet<C>>>,
    pub sqrt_det: Jet<C>,
}

fn scalar_jet<C: Coeff>(n: usize, value: C) -> Jet<C> {
    Jet::scalar(n, n, value, 2)
}

/// `Σ_{c,d} f(c,d) x^c x^d` as a scalar jet.
fn quadratic_jet<C: Coeff>(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Jet<C> {
    let mut j = Jet::zero(n, n, 2);
    for c in 0..n {
        for d in 0..n {
            let v = f(c, d);
            if !v.is_zero() {
                let mono = Monomial::unit(c).mul(&Monomial::unit(d));
                j.add_term(mono, &CliffordElement::scalar(n, C::from_ratio(&v)));
            }
        }
    }
    j
}

/// `g_{ab} = δ_{ab} - R_{acbd}x^c x^d/3`, `g^{ab} = δ_{ab} + R_{acbd}x^c x^d/3`,
/// `√det g = 1 - Ric_{ab}x^a x^b/6`.
pub fn build_metric_jets<C: Coeff>(curv: &CurvatureData) -> NormalMetricJets<C> {
    let n = curv.n();
    let third = BigRational::new(1.into(), 3.into());
    let mut g_lower = Vec::with_capacity(n);
    let mut g_upper = Vec::with_capacity(n);
    for a in 0..n {
        let mut lower_row = Vec::with_capacity(n);
        let mut upper_row = Vec::with_capacity(n);
        for b in 0..n {
            let delta = if a == b { C::one() } else { C::zero() };
            let quad: Jet<C> = quadratic_jet(n, |c, d| curv.get(a, c, b, d) * &third);
            lower_row.push(scalar_jet(n, delta.clone()).sub(&quad));
            upper_row.push(scalar_jet(n, delta).add(&quad));
        }
        g_lower.push(lower_row);
        g_upper.push(upper_row);
    }
    let ric = curv.ricci();
    let sixth = BigRational::new(1.into(), 6.into());
    let sqrt_det = scalar_jet(n, C::one()).sub(&quadratic_jet(n, |c, d| &ric[c][d] * &sixth));
    NormalMetricJets {
        g_lower,
        g_upper,
        sqrt_det,
    }
}

/// Full symbol of the scalar Laplacian `-|g|^{-1/2} ∂_a(|g|^{1/2} g^{ab} ∂_b)`:
/// `σ_2 = g^{ab}ξ_aξ_b` and `σ_1 = -i |g|^{-1/2} ∂_a(|g|^{1/2} g^{ab}) ξ_b`.
pub fn laplacian_symbol<C: Coeff>(jets: &NormalMetricJets<C>) -> Result<Symbol<C>, GeometryError> {
    let n = jets.sqrt_det.vars();
    let mut sigma = Symbol::zero(n, n);
    sigma.ensure_component(2, 2);
    sigma.ensure_component(1, 1);
    for a in 0..n {
        for b in 0..n {
            let key = XiKey::new(Monomial::unit(a).mul(&Monomial::unit(b)), 0);
            sigma.add_term(key, &jets.g_upper[a][b]);
        }
    }
    let inv_sqrt = jets.sqrt_det.inverse().map_err(SymbolError::from)?;
    let minus_i = -C::imag_unit();
    for b in 0..n {
        let mut div = Jet::zero(n, n, 1);
        for a in 0..n {
            div = div.add(&jets.sqrt_det.mul(&jets.g_upper[a][b]).partial(a));
        }
        let coeff = inv_sqrt.mul(&div).scale(&minus_i);
        sigma.add_term(XiKey::new(Monomial::unit(b), 0), &coeff);
    }
    Ok(sigma)
}

/// `(2i/3) Ric_{ab} x^a ξ_b`, known to first order.
pub fn laplacian_sigma1_closed_form<C: Coeff>(curv: &CurvatureData) -> Symbol<C> {
    let n = curv.n();
    let ric = curv.ricci();
    let mut s = Symbol::zero(n, n);
    s.ensure_component(1, 1);
    let factor = C::imag_unit() * C::from_frac(2, 3);
    for b in 0..n {
        let mut j = Jet::zero(n, n, 1);
        for (a, row) in ric.iter().enumerate() {
            j.add_term(
                Monomial::unit(a),
                &CliffordElement::scalar(n, C::from_ratio(&row[b]) * factor.clone()),
            );
        }
        s.add_term(XiKey::new(Monomial::unit(b), 0), &j);
    }
    s
}

/// Parametrix terms of the Laplacian in closed form:
/// `q_{-2} = ‖ξ‖^{-4}(δ_{ab} - R_{acbd}x^c x^d/3)ξ_aξ_b` to second order and
/// `q_{-3} = -(2i/3) Ric_{ab} x^a ξ_b ‖ξ‖^{-4}` to first order.
pub fn laplacian_inverse_closed_form<C: Coeff>(curv: &CurvatureData) -> (Symbol<C>, Symbol<C>) {
    let n = curv.n();
    let jets = build_metric_jets::<C>(curv);
    let mut q2 = Symbol::zero(n, n);
    q2.ensure_component(-2, 2);
    for a in 0..n {
        for b in 0..n {
            let key = XiKey::new(Monomial::unit(a).mul(&Monomial::unit(b)), -2);
            q2.add_term(key, &jets.g_lower[a][b]);
        }
    }
    let sigma1 = laplacian_sigma1_closed_form::<C>(curv);
    let q3 = sigma1.mul(&Symbol::norm_power(n, n, -2)).neg();
    (q2, q3)
}

/// Inverts the jet-built Laplacian and compares with
/// [`laplacian_inverse_closed_form`]; on success returns `(q_{-2}, q_{-3})`.
pub fn laplacian_inverse_check<C: Coeff>(
    curv: &CurvatureData,
) -> Result<(Symbol<C>, Symbol<C>), GeometryError> {
    let jets = build_metric_jets::<C>(curv);
    let sigma = laplacian_symbol(&jets)?;
    let closed_sigma1 = laplacian_sigma1_closed_form::<C>(curv);
    expect_match(
        "first-order Laplacian symbol",
        &sigma.degree_part(1),
        &closed_sigma1,
        1,
    )?;
    let (q2, q3) = symbol_invert_order2(&sigma)?;
    let (c2, c3) = laplacian_inverse_closed_form::<C>(curv);
    expect_match("q_{-2}", &q2, &c2, 2)?;
    expect_match("q_{-3}", &q3, &c3, 1)?;
    Ok((q2, q3))
}

fn expect_match<C: Coeff>(
    what: &str,
    got: &Symbol<C>,
    expected: &Symbol<C>,
    min_order: i32,
) -> Result<(), GeometryError> {
    let order = got.min_order();
    if order < min_order {
        return Err(GeometryError::Mismatch {
            what: what.into(),
            detail: format!("computed only to order {order}, need {min_order}"),
        });
    }
    if got.matches(expected) {
        Ok(())
    } else {
        Err(GeometryError::Mismatch {
            what: what.into(),
            detail: format!(
                "computed:\n{got:?}\nclosed form:\n{expected:?}\ndifference:\n{:?}",
                got.sub(expected)
            ),
        })
    }
}

/// `V(x_0)` together with its first derivatives `∂_j V_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldJet<C> {
    pub value: FrameVector<C>,
    /// `jacobian[α][j] = ∂_j V_α (x_0)`.
    pub jacobian: Vec<Vec<C>>,
}

impl<C: Coeff> VectorFieldJet<C> {
    pub fn constant(value: FrameVector<C>) -> Self {
        let n = value.dim();
        VectorFieldJet {
            value,
            jacobian: vec![vec![C::zero(); n]; n],
        }
    }

    /// Column `j` of the Jacobian, i.e. `∂_j V`.
    pub fn derivative(&self, j: usize) -> FrameVector<C> {
        FrameVector::new(self.jacobian.iter().map(|row| row[j].clone()).collect())
    }

    /// `∇_a V = J a` (normal coordinates at `x_0`).
    pub fn covariant(&self, a: &FrameVector<C>) -> FrameVector<C> {
        FrameVector::new(
            self.jacobian
                .iter()
                .map(|row| {
                    let mut acc = C::zero();
                    for (r, x) in row.iter().zip(a.components()) {
                        acc += r.clone() * x.clone();
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `div V = Σ_j ∂_j V_j`.
    pub fn divergence(&self) -> C {
        let mut acc = C::zero();
        for (j, row) in self.jacobian.iter().enumerate() {
            acc += row[j].clone();
        }
        acc
    }

    /// `c(V)` as a first-order jet: `c(V(x_0)) + Σ_j x_j c(∂_j V)`.
    pub fn clifford_jet(&self) -> Jet<C> {
        let n = self.value.dim();
        let mut j = Jet::constant(n, clifford_of_vector(&self.value), 1);
        for k in 0..n {
            j.add_term(Monomial::unit(k), &clifford_of_vector(&self.derivative(k)));
        }
        j
    }
}

/// Pointwise data at `x_0` defining one density evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<C> {
    pub m: usize,
    pub v_field: VectorFieldJet<C>,
    pub x_field: FrameVector<C>,
    pub u: FrameVector<C>,
    pub v: FrameVector<C>,
    pub w: FrameVector<C>,
    pub curvature: Option<CurvatureData>,
    pub seed: Option<u64>,
}

/// Largest `m` the symbol layer supports (`2m <=` [`crate::symbol::MAX_VARS`]).
pub const MAX_M: usize = crate::symbol::MAX_VARS / 2;

impl<C: Coeff> Scenario<C> {
    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.m == 0 || self.m > MAX_M {
            return Err(GeometryError::Rank(self.m));
        }
        let n = self.n();
        let check = |field: &str, found: usize| {
            if found == n {
                Ok(())
            } else {
                Err(GeometryError::Dimension {
                    field: field.into(),
                    expected: n,
                    found,
                })
            }
        };
        check("V.value", self.v_field.value.dim())?;
        check("V.jacobian", self.v_field.jacobian.len())?;
        for (i, row) in self.v_field.jacobian.iter().enumerate() {
            check(&format!("V.jacobian[{i}]"), row.len())?;
        }
        check("X", self.x_field.dim())?;
        check("u", self.u.dim())?;
        check("v", self.v.dim())?;
        check("w", self.w.dim())?;
        if let Some(curv) = &self.curvature {
            check("curvature", curv.n())?;
            curv.validate()?;
        }
        if self.norm_sq().is_zero() {
            return Err(GeometryError::ZeroField);
        }
        Ok(())
    }

    /// `N = ‖V(x_0)‖²`.
    pub fn norm_sq(&self) -> C {
        self.v_field.value.norm_sq()
    }

    /// `d‖V‖²` with components `∂_j‖V‖² = 2 Σ_α V_α ∂_j V_α`.
    pub fn d_norm_sq(&self) -> FrameVector<C> {
        let two = C::from_i64(2);
        FrameVector::new(
            (0..self.n())
                .map(|j| self.v_field.value.dot(&self.v_field.derivative(j)) * two.clone())
                .collect(),
        )
    }

    /// `a(‖V‖²) = Σ_j a_j ∂_j‖V‖²`.
    pub fn directional(&self, a: &FrameVector<C>) -> C {
        a.dot(&self.d_norm_sq())
    }

    /// `‖V(x)‖²` as a first-order scalar jet.
    pub fn norm_sq_jet(&self) -> Jet<C> {
        let n = self.n();
        let mut j = Jet::scalar(n, n, self.norm_sq(), 1);
        for (k, c) in self.d_norm_sq().components().iter().enumerate() {
            j.add_term(Monomial::unit(k), &CliffordElement::scalar(n, c.clone()));
        }
        j
    }

    /// Copy with `V` replaced by `λV` (value and Jacobian).
    pub fn scaled_field(&self, lambda: &C) -> Self {
        let mut out = self.clone();
        out.v_field.value = self.v_field.value.scale(lambda);
        for row in &mut out.v_field.jacobian {
            for x in row.iter_mut() {
                *x = x.clone() * lambda.clone();
            }
        }
        out
    }

    /// Random scenario: small rationals (numerators in -3..=3, denominators in
    /// 1..=3) in exact mode, standard normals in float mode.
    pub fn random<R: Rng>(m: usize, rng: &mut R) -> Self {
        let n = 2 * m;
        let vec =
            |rng: &mut R| FrameVector::new((0..n).map(|_| random_coeff::<C, R>(rng)).collect());
        let mut value = vec(rng);
        while value.norm_sq().is_zero() {
            value = vec(rng);
        }
        let jacobian = (0..n)
            .map(|_| (0..n).map(|_| random_coeff::<C, R>(rng)).collect())
            .collect();
        Scenario {
            m,
            v_field: VectorFieldJet { value, jacobian },
            x_field: vec(rng),
            u: vec(rng),
            v: vec(rng),
            w: vec(rng),
            curvature: None,
            seed: None,
        }
    }
}

pub fn random_coeff<C: Coeff, R: Rng>(rng: &mut R) -> C {
    match C::KIND {
        ScalarKind::Exact => C::from_frac(rng.random_range(-3..=3), rng.random_range(1..=3)),
        ScalarKind::Float => C::from_f64(rng.sample(StandardNormal)),
    }
}

/// `σ_1 = i Σ_j c(V)c(e_j)c(V) ξ_j` with `c(V)` to first order, and
/// `σ_0 = Σ_j c(V)c(e_j)∂_j c(V) + i c(V)c(X)c(V)` at `x_0`. The connection
/// term of `σ_0` vanishes at `x_0`; its derivatives are not modelled, so
/// `σ_0` is only known at order zero.
pub fn rescaled_dirac_symbols<C: Coeff>(s: &Scenario<C>) -> Result<Symbol<C>, GeometryError> {
    s.validate()?;
    let n = s.n();
    let cv = s.v_field.clifford_jet();
    let i = C::imag_unit();
    let mut sigma = Symbol::zero(n, n);
    for j in 0..n {
        let coeff = cv
            .right_mul(&CliffordElement::generator(n, j))
            .mul(&cv)
            .scale(&i);
        sigma.add_term(XiKey::new(Monomial::unit(j), 0), &coeff);
    }
    let cv0 = clifford_of_vector(&s.v_field.value);
    let mut sigma0 = cv0.mul(&clifford_of_vector(&s.x_field)).mul(&cv0).scale(&i);
    for j in 0..n {
        let dj = clifford_of_vector(&s.v_field.derivative(j));
        sigma0.add_assign(&cv0.mul(&CliffordElement::generator(n, j)).mul(&dj));
    }
    sigma.ensure_component(0, 0);
    sigma.add_term(XiKey::new(Monomial::ONE, 0), &Jet::constant(n, sigma0, 0));
    Ok(sigma)
}

/// The three groups of `ξ_j` coefficients in the degree-1 symbol of the
/// square at `x_0`: the Jacobian part `2iN c(V)c(∂_j V)`, the `X` part
/// `N c(V)(c(e_j)c(X) + c(X)c(e_j))c(V)` and the `d‖V‖²` part
/// `-i c(V)c(d‖V‖²)c(e_j)c(V)`.
pub fn square_sigma1_pieces<C: Coeff>(s: &Scenario<C>) -> [Vec<CliffordElement<C>>; 3] {
    let n = s.n();
    let big_n = s.norm_sq();
    let i = C::imag_unit();
    let cv = clifford_of_vector(&s.v_field.value);
    let cx = clifford_of_vector(&s.x_field);
    let cdn = clifford_of_vector(&s.d_norm_sq());
    let two_i_n = C::from_i64(2) * i.clone() * big_n.clone();
    let mut out: [Vec<CliffordElement<C>>; 3] = Default::default();
    for j in 0..n {
        let ej = CliffordElement::generator(n, j);
        let dv = clifford_of_vector(&s.v_field.derivative(j));
        out[0].push(cv.mul(&dv).scale(&two_i_n));
        let anti = ej.mul(&cx).add(&cx.mul(&ej));
        out[1].push(cv.mul(&anti).mul(&cv).scale(&big_n));
        out[2].push(cv.mul(&cdn).mul(&ej).mul(&cv).scale(&(-i.clone())));
    }
    out
}

/// Closed form of the leading symbols of the square:
/// `σ_2 = ‖V‖⁴‖ξ‖²` to first order, and `σ_1` at `x_0` as the sum of
/// [`square_sigma1_pieces`].
pub fn rescaled_dirac_square_closed_form<C: Coeff>(
    s: &Scenario<C>,
) -> Result<Symbol<C>, GeometryError> {
    s.validate()?;
    let n = s.n();
    let nj = s.norm_sq_jet();
    let mut sigma = Symbol::term(Monomial::ONE, 1, &nj.mul(&nj));
    for piece in square_sigma1_pieces(s) {
        sigma = sigma.add(&Symbol::linear_in_xi(&piece, n, 0));
    }
    Ok(sigma)
}

/// Degrees 2 and 1 of `σ(D̃) ∘ σ(D̃)`.
pub fn rescaled_dirac_square_symbols<C: Coeff>(
    s: &Scenario<C>,
) -> Result<Symbol<C>, GeometryError> {
    let sigma = rescaled_dirac_symbols(s)?;
    Ok(symbol_compose(&sigma, &sigma, 1)?)
}

/// Closed form of the leading parametrix terms of the square:
/// `q_{-2} = N^{-2}‖ξ‖^{-2}` to first order and, at `x_0`,
/// `q_{-3} = -N^{-4}‖ξ‖^{-4}σ_1 + 2i‖ξ‖^{-4} ξ_μ ∂_μ(N^{-2})`.
pub fn rescaled_dirac_inverse_closed_form<C: Coeff>(
    s: &Scenario<C>,
) -> Result<(Symbol<C>, Symbol<C>), GeometryError> {
    let n = s.n();
    let n_inv2 = s.norm_sq_jet().powi(-2).map_err(SymbolError::from)?;
    let q2 = Symbol::term(Monomial::ONE, -1, &n_inv2);
    let sigma1 = rescaled_dirac_square_closed_form(s)?.degree_part(1);
    let big_n = s.norm_sq();
    let n_inv4 = big_n.pow(-4).ok_or(GeometryError::ZeroField)?;
    let mut q3 = sigma1.mul(&Symbol::norm_power(n, n, -2)).scale(&(-n_inv4));
    let two_i = C::imag_unit() * C::from_i64(2);
    let mut grad = Vec::with_capacity(n);
    for mu in 0..n {
        let d = n_inv2.partial(mu).at_origin().map_err(SymbolError::from)?;
        grad.push(d.scale(&two_i));
    }
    let linear = Symbol::linear_in_xi(&grad, n, 0);
    q3 = q3.add(&linear.mul(&Symbol::norm_power(n, n, -2)));
    Ok((q2, q3))
}

/// `(q_{-2}, q_{-3})` of the square obtained by inverting the composed symbol.
pub fn rescaled_dirac_inverse_symbols<C: Coeff>(
    s: &Scenario<C>,
) -> Result<(Symbol<C>, Symbol<C>), GeometryError> {
    let square = rescaled_dirac_square_symbols(s)?;
    Ok(symbol_invert_order2(&square)?)
}

/// Compares the composed square and its inverse with the closed forms.
pub fn check_square_and_inverse<C: Coeff>(s: &Scenario<C>) -> Result<(), GeometryError> {
    check_square(s)?;
    check_inverse(s)
}

/// Degrees 2 and 1 of the composed square against the closed form.
pub fn check_square<C: Coeff>(s: &Scenario<C>) -> Result<(), GeometryError> {
    let composed = rescaled_dirac_square_symbols(s)?;
    let closed = rescaled_dirac_square_closed_form(s)?;
    expect_match(
        "degree-2 symbol of the square",
        &composed.degree_part(2),
        &closed.degree_part(2),
        1,
    )?;
    expect_match(
        "degree-1 symbol of the square",
        &composed.degree_part(1).at_origin()?,
        &closed.degree_part(1).at_origin()?,
        0,
    )?;
    Ok(())
}

/// The inverted square against the closed form, and the left-inverse property.
pub fn check_inverse<C: Coeff>(s: &Scenario<C>) -> Result<(), GeometryError> {
    let composed = rescaled_dirac_square_symbols(s)?;
    let (q2, q3) = symbol_invert_order2(&composed)?;
    let (c2, c3) = rescaled_dirac_inverse_closed_form(s)?;
    expect_match("q_{-2} of the square", &q2, &c2, 1)?;
    expect_match(
        "q_{-3} of the square",
        &q3.at_origin()?,
        &c3.at_origin()?,
        0,
    )?;
    let q = q2.add(&q3).with_known_from(-3);
    let product = symbol_compose(&composed, &q, -1)?.at_origin()?;
    let one = Symbol::norm_power(s.n(), s.n(), 0);
    expect_match("left inverse, degree 0", &product.degree_part(0), &one, 0)?;
    expect_match(
        "left inverse, degree -1",
        &product.degree_part(-1),
        &Symbol::zero(s.n(), s.n()),
        0,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests;
