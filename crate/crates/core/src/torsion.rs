//! The torsion density at `x_0`: the term-by-term route (`H_1`, `L_1..L_5`,
//! `K_1`, `K_2`), the generic composition route, the printed closed forms they
//! are checked against, and the trace and contraction identities behind them.
//!
//! All densities are coefficients of `2^m Vol(S^{2m-1})`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::clifford::{
    clifford_of_vector, clifford_trace, product_of_vectors, CliffordElement, CliffordError,
    FrameVector,
};
use crate::geometry::{rescaled_dirac_symbols, square_sigma1_pieces, GeometryError, Scenario};
use crate::scalar::{Coeff, Scalar, ScalarKind};
use crate::sphere::sphere_volume;
use crate::symbol::{
    inverse_power_symbols, iterated_power_at_origin, symbol_compose, symbol_compose_at_origin,
    symbol_invert_order2, Jet, Monomial, Symbol, SymbolError, EXACT, FLOAT_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("the torsion density needs m >= 2, got {0}")]
    RankTooSmall(usize),
    #[error("contraction identities are numbered 1 to 15, got {0}")]
    ItemOutOfRange(usize),
    #[error("trace identities take 2, 4 or 6 vectors, got {0}")]
    TraceArity(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

/// A density coefficient together with its unit `2^m Vol(S^{2m-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityValue {
    pub coefficient: Scalar,
    pub m: usize,
}

impl DensityValue {
    pub fn new<C: Coeff>(coefficient: &C, m: usize) -> Self {
        DensityValue {
            coefficient: coefficient.to_scalar(),
            m,
        }
    }

    /// `2^m Vol(S^{2m-1})`.
    pub fn unit(m: usize) -> f64 {
        2f64.powi(m as i32) * sphere_volume(2 * m)
    }

    /// The coefficient with the unit multiplied in.
    pub fn absolute(&self) -> Complex64 {
        self.coefficient.to_complex() * Self::unit(self.m)
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * 2^{}*Vol(S^{})",
            self.coefficient,
            self.m,
            2 * self.m - 1
        )
    }
}

/// Scalar invariants of a scenario at `x_0` that every closed form is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct Invariants<C> {
    pub m: usize,
    /// `N = ‖V‖²`.
    pub norm_sq: C,
    pub g_uv: C,
    pub g_uw: C,
    pub g_vw: C,
    pub g_ux: C,
    pub g_vx: C,
    pub g_wx: C,
    /// `a(N)` for `a = u, v, w`.
    pub u_n: C,
    pub v_n: C,
    pub w_n: C,
    /// `g(a, ∇_V V)` for `a = u, v, w`.
    pub u_acc: C,
    pub v_acc: C,
    pub w_acc: C,
    /// `g(V, a)` for `a = u, v, w`.
    pub vu: C,
    pub vv: C,
    pub vw: C,
    /// `g(a, ∇_b V)`.
    pub u_dv: C,
    pub v_du: C,
    pub u_dw: C,
    pub w_du: C,
    pub v_dw: C,
    pub w_dv: C,
    pub div: C,
}

impl<C: Coeff> Invariants<C> {
    pub fn of(s: &Scenario<C>) -> Self {
        let f = &s.v_field;
        let val = &f.value;
        let (u, v, w, x) = (&s.u, &s.v, &s.w, &s.x_field);
        let acc = f.covariant(val);
        Invariants {
            m: s.m,
            norm_sq: s.norm_sq(),
            g_uv: u.dot(v),
            g_uw: u.dot(w),
            g_vw: v.dot(w),
            g_ux: u.dot(x),
            g_vx: v.dot(x),
            g_wx: w.dot(x),
            u_n: s.directional(u),
            v_n: s.directional(v),
            w_n: s.directional(w),
            u_acc: u.dot(&acc),
            v_acc: v.dot(&acc),
            w_acc: w.dot(&acc),
            vu: val.dot(u),
            vv: val.dot(v),
            vw: val.dot(w),
            u_dv: u.dot(&f.covariant(v)),
            v_du: v.dot(&f.covariant(u)),
            u_dw: u.dot(&f.covariant(w)),
            w_du: w.dot(&f.covariant(u)),
            v_dw: v.dot(&f.covariant(w)),
            w_dv: w.dot(&f.covariant(v)),
            div: f.divergence(),
        }
    }

    /// The fifteen unsigned products the contraction identities reduce to, in
    /// item order.
    pub fn contraction_products(&self) -> [C; 15] {
        let p = |a: &C, b: &C| a.clone() * b.clone();
        let d = |a: &C, b: &C| self.div.clone() * a.clone() * b.clone();
        [
            p(&self.u_n, &self.g_vw),
            p(&self.v_n, &self.g_uw),
            p(&self.w_n, &self.g_uv),
            p(&self.u_acc, &self.g_vw),
            p(&self.v_acc, &self.g_uw),
            p(&self.w_acc, &self.g_uv),
            p(&self.vw, &self.u_dv),
            p(&self.vw, &self.v_du),
            d(&self.vw, &self.g_uv),
            p(&self.vv, &self.u_dw),
            p(&self.vv, &self.w_du),
            d(&self.vv, &self.g_uw),
            p(&self.vu, &self.v_dw),
            p(&self.vu, &self.w_dv),
            d(&self.vu, &self.g_vw),
        ]
    }

    /// `S = g(u,v)w(N) - g(u,w)v(N) + g(v,w)u(N)`.
    pub fn s_combination(&self) -> C {
        self.g_uv.clone() * self.w_n.clone() - self.g_uw.clone() * self.v_n.clone()
            + self.g_vw.clone() * self.u_n.clone()
    }

    /// `g(u,v)g(w,X) - g(u,w)g(v,X) + g(v,w)g(u,X)`.
    pub fn x_combination(&self) -> C {
        self.g_uv.clone() * self.g_wx.clone() - self.g_uw.clone() * self.g_vx.clone()
            + self.g_vw.clone() * self.g_ux.clone()
    }

    /// `N^k`.
    fn n_pow(&self, k: i32) -> C {
        self.norm_sq
            .pow(k)
            .expect("validated scenarios have N != 0")
    }

    /// `Σ_k c_k/2 · t_k` over the contraction products.
    fn weighted(&self, halves: &[i64; 15]) -> C {
        let mut acc = C::zero();
        for (c, t) in halves.iter().zip(self.contraction_products()) {
            acc += C::from_frac(*c, 2) * t;
        }
        acc
    }

    /// `S(N^{-2})`, the `S` combination with `a(N^{-2}) = -2N^{-3}a(N)`.
    fn s_of_inverse_square(&self) -> C {
        C::from_i64(-2) * self.n_pow(-3) * self.s_combination()
    }
}

/// Right-hand sides of the contraction identities as printed, in halves of
/// the products of [`Invariants::contraction_products`].
pub const PRINTED_CONTRACTIONS: [i64; 15] = [-1, 1, -1, 2, -2, -2, -2, 2, -2, 2, -2, -2, 2, 2, -2];

/// Printed closed forms of every density term, evaluated on a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperTerms<C> {
    pub h1: C,
    pub l: [C; 5],
    pub k: [C; 2],
    /// The printed sum of the `L` terms.
    pub h2: C,
    /// The printed sum of the `K` terms.
    pub h3: C,
}

impl<C: Coeff> PaperTerms<C> {
    pub fn of(inv: &Invariants<C>) -> Self {
        const H1: [i64; 15] = [-1, 1, -1, 2, -2, 2, -2, 2, -2, 2, -2, -2, -2, 2, -2];
        const L1: [i64; 15] = [-1, 1, -1, -2, 2, -2, -2, 2, 2, 2, -2, -2, -2, 2, 2];
        const K1: [i64; 15] = [-1, 1, -1, 2, -2, 2, 2, -2, -2, -2, 2, 2, 2, -2, -2];
        const K2: [i64; 15] = [-1, 1, -1, 2, -2, 2, -2, 2, -2, 2, -2, -2, -2, 2, -2];
        const H3: [i64; 15] = [-2, 2, -2, 4, -4, 4, 0, 0, -4, 0, 0, 0, 0, 0, -4];
        let m = inv.m as i64;
        let i = C::imag_unit();
        let lead = inv.n_pow(-2 * inv.m as i32 + 1);
        let x_part = inv.n_pow(-2 * inv.m as i32 + 2) * inv.x_combination();
        let high = inv.n_pow(-2 * inv.m as i32 + 4) * inv.s_of_inverse_square();
        let l = [
            lead.clone() * inv.weighted(&L1),
            -(i.clone() * x_part.clone()),
            -(C::from_frac(1, 2) * lead.clone() * inv.s_combination()),
            -high.clone(),
            C::from_frac(1 - m, 2) * high.clone(),
        ];
        let h2 = l[0].clone() + l[1].clone() + l[2].clone() - C::from_frac(m + 1, 2) * high;
        PaperTerms {
            h1: i * x_part - lead.clone() * inv.weighted(&H1),
            l,
            k: [
                lead.clone() * inv.weighted(&K1),
                lead.clone() * inv.weighted(&K2),
            ],
            h2,
            h3: lead * inv.weighted(&H3),
        }
    }
}

/// `(2m-3)/2 · N^{-2m+1} · S`.
pub fn closed_form_density<C: Coeff>(s: &Scenario<C>) -> Result<C, TorsionError> {
    s.validate()?;
    let inv = Invariants::of(s);
    let m = s.m as i64;
    Ok(C::from_frac(2 * m - 3, 2) * inv.n_pow(-2 * s.m as i32 + 1) * inv.s_combination())
}

/// `c(V)c(u)c(v)c(w)c(V)` at `x_0`.
pub fn torsion_prefactor_element<C: Coeff>(
    s: &Scenario<C>,
) -> Result<CliffordElement<C>, TorsionError> {
    s.validate()?;
    let v = &s.v_field.value;
    Ok(product_of_vectors(
        &[v.clone(), s.u.clone(), s.v.clone(), s.w.clone(), v.clone()],
        s.n(),
    ))
}

/// Scalar part of `∫ prefactor · σ_{-n}`, i.e. the density coefficient.
fn density_of<C: Coeff>(
    prefactor: &CliffordElement<C>,
    sigma: &Symbol<C>,
) -> Result<C, TorsionError> {
    // the prefactor is constant, so it can be applied after integrating
    Ok(prefactor.mul(&sigma.integrate_over_sphere()?).scalar_part())
}

fn scalar_norm<C: Coeff>(n: usize, value: C, k: i32) -> Symbol<C> {
    Symbol::term(Monomial::ONE, k, &Jet::scalar(n, n, value, EXACT))
}

fn xi_linear<C: Coeff>(coeffs: &[CliffordElement<C>]) -> Symbol<C> {
    Symbol::linear_in_xi(coeffs, coeffs.len(), EXACT)
}

fn require_rank<C: Coeff>(s: &Scenario<C>) -> Result<(), TorsionError> {
    s.validate()?;
    if s.m < 2 {
        return Err(TorsionError::RankTooSmall(s.m));
    }
    Ok(())
}

/// `N^{-2m}‖ξ‖^{-2m}`, the leading symbol of `D̃^{-2m}` at `x_0`.
fn leading_power<C: Coeff>(s: &Scenario<C>) -> Symbol<C> {
    let m = s.m as i32;
    scalar_norm(s.n(), s.norm_sq().pow(-2 * m).expect("N != 0"), -m)
}

/// `H_1 = ∫ tr[prefactor · σ_{-2m}(D̃^{-2m}) σ_0(D̃)]`.
pub fn h1_density<C: Coeff>(s: &Scenario<C>) -> Result<C, TorsionError> {
    require_rank(s)?;
    let prefactor = torsion_prefactor_element(s)?;
    let sigma0 = rescaled_dirac_symbols(s)?.degree_part(0);
    density_of(&prefactor, &leading_power(s).mul(&sigma0))
}

/// The five groups of `σ_{-2m-1}(D̃^{-2m}) σ_1(D̃)`: `L_1..L_3` from the
/// Jacobian, `X` and `d‖V‖²` parts of `σ_1(D̃²)` inside `q_{-3}`, `L_4` from
/// the derivative of `N^{-2}` inside `q_{-3}`, `L_5` from the remaining sum of
/// the power formula.
pub fn h2_density<C: Coeff>(s: &Scenario<C>) -> Result<[C; 5], TorsionError> {
    require_rank(s)?;
    let n = s.n();
    let m = s.m as i32;
    let prefactor = torsion_prefactor_element(s)?;
    let sigma1 = rescaled_dirac_symbols(s)?.degree_part(1).at_origin()?;
    let big_n = s.norm_sq();
    let outer = scalar_norm(
        n,
        C::from_i64(i64::from(m)) * big_n.pow(-2 * (m - 1)).expect("N != 0"),
        -(m - 1),
    );
    let n_inv4 = big_n.pow(-4).expect("N != 0");
    let mut out: Vec<C> = Vec::with_capacity(5);
    for piece in square_sigma1_pieces(s) {
        let q3_part = xi_linear(&piece).mul(&scalar_norm(n, -n_inv4.clone(), -2));
        out.push(density_of(&prefactor, &outer.mul(&q3_part).mul(&sigma1))?);
    }
    // 2i‖ξ‖^{-4} ξ_μ ∂_μ(N^{-2}) with ∂_μ N^{-2} = -2N^{-3} ∂_μ N
    let factor = C::imag_unit() * C::from_i64(-4) * big_n.pow(-3).expect("N != 0");
    let grad: Vec<CliffordElement<C>> = s
        .d_norm_sq()
        .components()
        .iter()
        .map(|d| CliffordElement::scalar(n, factor.clone() * d.clone()))
        .collect();
    let q3_part = xi_linear(&grad).mul(&scalar_norm(n, C::one(), -2));
    out.push(density_of(&prefactor, &outer.mul(&q3_part).mul(&sigma1))?);
    let q2 = closed_q2(s)?;
    let (_, rest) = inverse_power_symbols(&q2, &Symbol::zero(n, n), s.m as u32)?;
    out.push(density_of(&prefactor, &rest.mul(&sigma1))?);
    Ok(out.try_into().expect("five terms"))
}

/// `N(x)^{-2}‖ξ‖^{-2}` to first order.
fn closed_q2<C: Coeff>(s: &Scenario<C>) -> Result<Symbol<C>, TorsionError> {
    let jet = s.norm_sq_jet().powi(-2).map_err(SymbolError::from)?;
    Ok(Symbol::term(Monomial::ONE, -1, &jet))
}

/// `-i Σ_μ ∂_{ξ_μ}σ_{-2m}(D̃^{-2m}) ∂_{x_μ}σ_1(D̃)` split by which `c(V)` in
/// `σ_1 = i c(V)c(ξ)c(V)` the derivative hits: `K_1` the left, `K_2` the right.
pub fn h3_density<C: Coeff>(s: &Scenario<C>) -> Result<[C; 2], TorsionError> {
    require_rank(s)?;
    let n = s.n();
    let prefactor = torsion_prefactor_element(s)?;
    let lead = leading_power(s);
    let cv = clifford_of_vector(&s.v_field.value);
    let i = C::imag_unit();
    let mut k = [Symbol::zero(n, n), Symbol::zero(n, n)];
    for mu in 0..n {
        let dv = clifford_of_vector(&s.v_field.derivative(mu));
        let d_lead = lead.partial_xi(mu).scale(&(-i.clone()));
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for j in 0..n {
            let ej = CliffordElement::generator(n, j);
            left.push(dv.mul(&ej).mul(&cv).scale(&i));
            right.push(cv.mul(&ej).mul(&dv).scale(&i));
        }
        k[0] = k[0].add(&d_lead.mul(&xi_linear(&left)));
        k[1] = k[1].add(&d_lead.mul(&xi_linear(&right)));
    }
    Ok([
        density_of(&prefactor, &k[0])?,
        density_of(&prefactor, &k[1])?,
    ])
}

/// Degree `-2m` of `σ(D^{-2m}) ∘ σ(D)` for a first-order `σ(D)`, multiplied
/// by the prefactor and integrated. `D^{-2m}` comes from inverting the
/// composed square and composing the inverse with itself.
pub fn composition_density<C: Coeff>(
    sigma: &Symbol<C>,
    prefactor: &CliffordElement<C>,
    m: usize,
) -> Result<C, TorsionError> {
    if m < 2 {
        return Err(TorsionError::RankTooSmall(m));
    }
    let square = symbol_compose(sigma, sigma, 1)?;
    let (q2, q3) = symbol_invert_order2(&square)?;
    let power = iterated_power_at_origin(&q2.add(&q3), m as u32)?;
    let d = -2 * m as i32;
    let full = symbol_compose_at_origin(&power, sigma, d)?.degree_part(d);
    density_of(prefactor, &full)
}

/// The density by generic symbol composition, independent of the term split.
pub fn composition_oracle_density<C: Coeff>(s: &Scenario<C>) -> Result<C, TorsionError> {
    require_rank(s)?;
    composition_density(
        &rescaled_dirac_symbols(s)?,
        &torsion_prefactor_element(s)?,
        s.m,
    )
}

/// Density of the unrescaled Dirac operator with prefactor `c(u)c(v)c(w)`:
/// `σ_1 = i c(ξ)` is constant to first order in normal coordinates and
/// `σ_0(x_0) = 0`.
pub fn plain_dirac_torsion_density<C: Coeff>(
    u: &FrameVector<C>,
    v: &FrameVector<C>,
    w: &FrameVector<C>,
    m: usize,
) -> Result<C, TorsionError> {
    let n = 2 * m;
    for a in [u, v, w] {
        if a.dim() != n {
            return Err(GeometryError::Dimension {
                field: "u, v, w".into(),
                expected: n,
                found: a.dim(),
            }
            .into());
        }
    }
    let i = C::imag_unit();
    let mut sigma = Symbol::zero(n, n);
    for j in 0..n {
        let coeff = Jet::constant(n, CliffordElement::generator(n, j).scale(&i), 1);
        sigma.add_term(crate::symbol::XiKey::new(Monomial::unit(j), 0), &coeff);
    }
    sigma.ensure_component(0, 0);
    let prefactor = product_of_vectors(&[u.clone(), v.clone(), w.clone()], n);
    composition_density(&sigma, &prefactor, m)
}

/// Every term of the density by both routes, with the printed closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct TermBreakdown<C> {
    pub m: usize,
    pub h1: C,
    pub l: [C; 5],
    pub k: [C; 2],
    /// `h1 + Σ l + Σ k`.
    pub assembled: C,
    pub composition_oracle: C,
    pub paper: PaperTerms<C>,
    pub theorem: C,
}

impl<C: Coeff> TermBreakdown<C> {
    pub fn h2(&self) -> C {
        self.l.iter().fold(C::zero(), |a, b| a + b.clone())
    }

    pub fn h3(&self) -> C {
        self.k[0].clone() + self.k[1].clone()
    }

    pub fn density(&self, value: &C) -> DensityValue {
        DensityValue::new(value, self.m)
    }
}

pub fn assemble_density<C: Coeff>(s: &Scenario<C>) -> Result<TermBreakdown<C>, TorsionError> {
    let h1 = h1_density(s)?;
    let l = h2_density(s)?;
    let k = h3_density(s)?;
    let mut assembled = h1.clone();
    for t in l.iter().chain(k.iter()) {
        assembled += t.clone();
    }
    Ok(TermBreakdown {
        m: s.m,
        h1,
        l,
        k,
        assembled,
        composition_oracle: composition_oracle_density(s)?,
        paper: PaperTerms::of(&Invariants::of(s)),
        theorem: closed_form_density(s)?,
    })
}

/// Exact equality in exact mode; `|a - b| <= tol · max(|a|, |b|, 1)` in float
/// mode.
pub fn values_agree<C: Coeff>(a: &C, b: &C, tol: f64) -> bool {
    match C::KIND {
        ScalarKind::Exact => a == b,
        ScalarKind::Float => {
            let scale = a.magnitude().max(b.magnitude()).max(1.0);
            (a.clone() - b.clone()).magnitude() <= tol * scale
        }
    }
}

/// Both sides of one contraction identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCheck<C> {
    pub item: usize,
    /// Brute-force index sum.
    pub lhs: C,
    /// Printed closed form.
    pub rhs: C,
}

impl<C: Coeff> ContractionCheck<C> {
    pub fn holds(&self) -> bool {
        values_agree(&self.lhs, &self.rhs, FLOAT_TOL)
    }
}

/// `Σ_{i,j,α} g^{ij} ∂_j V_α · [bracket]` at `x_0` for item `item` (1-based),
/// summed over explicit indices with `g(a,∂_i) = a_i`, `g(a,e_α) = a_α` and
/// `g(∂_i,e_α) = δ_{iα}`, against the printed right-hand side.
pub fn contraction_identity<C: Coeff>(
    item: usize,
    s: &Scenario<C>,
) -> Result<ContractionCheck<C>, TorsionError> {
    if !(1..=15).contains(&item) {
        return Err(TorsionError::ItemOutOfRange(item));
    }
    s.validate()?;
    let n = s.n();
    let vf = &s.v_field.value;
    let (u, v, w) = (&s.u, &s.v, &s.w);
    let g = |a: &FrameVector<C>, b: &FrameVector<C>| a.dot(b);
    let c = |a: &FrameVector<C>, i: usize| a.get(i).clone();
    let bracket = |i: usize, al: usize| -> C {
        let delta = if i == al { C::one() } else { C::zero() };
        match item {
            1 => -(c(vf, al) * c(u, i) * g(v, w)),
            2 => c(vf, al) * g(u, w) * c(v, i),
            3 => -(c(vf, al) * g(u, v) * c(w, i)),
            4 => c(vf, i) * c(u, al) * g(v, w),
            5 => -(c(vf, i) * g(u, w) * c(v, al)),
            6 => c(vf, i) * g(u, v) * c(w, al),
            7 => -(g(vf, w) * c(u, al) * c(v, i)),
            8 => g(vf, w) * c(u, i) * c(v, al),
            9 => -(g(vf, w) * g(u, v) * delta),
            10 => g(vf, v) * c(u, al) * c(w, i),
            11 => -(g(vf, v) * c(u, i) * c(w, al)),
            12 => g(vf, v) * g(u, w) * delta,
            13 => -(g(vf, u) * c(v, al) * c(w, i)),
            14 => g(vf, u) * c(v, i) * c(w, al),
            _ => -(g(vf, u) * g(v, w) * delta),
        }
    };
    let mut lhs = C::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                continue;
            }
            for al in 0..n {
                lhs += s.v_field.jacobian[al][j].clone() * bracket(i, al);
            }
        }
    }
    let inv = Invariants::of(s);
    let rhs = C::from_frac(PRINTED_CONTRACTIONS[item - 1], 2)
        * inv.contraction_products()[item - 1].clone();
    Ok(ContractionCheck { item, lhs, rhs })
}

/// Both evaluations of a trace identity.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCheck<C> {
    pub symbolic: C,
    pub formula: C,
}

impl<C: Coeff> TraceCheck<C> {
    pub fn holds(&self) -> bool {
        values_agree(&self.symbolic, &self.formula, FLOAT_TOL)
    }
}

/// `tr[c(X_1)...c(X_k)]` for `k = 2, 4, 6` by Clifford multiplication and by
/// the pairing formulas (written out term by term as printed).
pub fn trace_identity<C: Coeff>(
    vectors: &[FrameVector<C>],
    m: usize,
) -> Result<TraceCheck<C>, TorsionError> {
    let n = 2 * m;
    if let Some(bad) = vectors.iter().find(|x| x.dim() != n) {
        return Err(CliffordError::DimensionMismatch(bad.dim(), n).into());
    }
    let symbolic = clifford_trace(&product_of_vectors(vectors, n), m)?;
    let g = |a: usize, b: usize| vectors[a - 1].dot(&vectors[b - 1]);
    let bracket = match vectors.len() {
        2 => -g(1, 2),
        4 => g(1, 4) * g(2, 3) - g(1, 3) * g(2, 4) + g(1, 2) * g(3, 4),
        6 => {
            const TERMS: [(i64, [usize; 6]); 15] = [
                (-1, [1, 6, 2, 5, 3, 4]),
                (1, [1, 6, 2, 4, 3, 5]),
                (-1, [1, 6, 2, 3, 4, 5]),
                (1, [1, 5, 2, 6, 3, 4]),
                (-1, [1, 5, 2, 4, 3, 6]),
                (1, [1, 5, 2, 3, 4, 6]),
                (-1, [1, 4, 2, 6, 3, 5]),
                (1, [1, 4, 2, 5, 3, 6]),
                (-1, [1, 4, 2, 3, 5, 6]),
                (1, [1, 3, 2, 6, 4, 5]),
                (-1, [1, 3, 2, 5, 4, 6]),
                (1, [1, 3, 2, 4, 5, 6]),
                (-1, [1, 2, 3, 6, 4, 5]),
                (1, [1, 2, 3, 5, 4, 6]),
                (-1, [1, 2, 3, 4, 5, 6]),
            ];
            let mut acc = C::zero();
            for (sign, [a, b, c, d, e, f]) in TERMS {
                acc += C::from_i64(sign) * g(a, b) * g(c, d) * g(e, f);
            }
            acc
        }
        k => return Err(TorsionError::TraceArity(k)),
    };
    let tr_id = C::from_i64(1 << m);
    Ok(TraceCheck {
        symbolic,
        formula: bracket * tr_id,
    })
}
