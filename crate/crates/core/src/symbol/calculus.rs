use crate::clifford::CliffordElement;
use crate::scalar::Coeff;

use super::{Monomial, Symbol, SymbolError, EXACT};

pub fn symbol_partial_xi<C: Coeff>(s: &Symbol<C>, mu: usize) -> Symbol<C> {
    s.partial_xi(mu)
}

/// Symbol of the composition `PQ`, keeping homogeneity degrees `>= lowest`:
///
/// `σ(PQ) = Σ_α (-i)^{|α|} / α! · ∂_ξ^α σ(P) · ∂_x^α σ(Q)`.
///
/// Each `ξ`-derivative lowers the degree by one, so only `|α| <= hi(p) + hi(q) - lowest`
/// contribute. Multi-indices are enumerated once each as non-decreasing index
/// sequences.
pub fn symbol_compose<C: Coeff>(
    p: &Symbol<C>,
    q: &Symbol<C>,
    lowest: i32,
) -> Result<Symbol<C>, SymbolError> {
    compose_with(p, q, lowest, |dp, dq| Ok(dp.mul_from(dq, lowest)))
}

/// [`symbol_compose`] evaluated at `x = 0`. Only `p(0)` and the `x`-jets of
/// `q` enter, so `p` may be known at the origin alone; this is how iterated
/// compositions stay cheap.
pub fn symbol_compose_at_origin<C: Coeff>(
    p: &Symbol<C>,
    q: &Symbol<C>,
    lowest: i32,
) -> Result<Symbol<C>, SymbolError> {
    compose_with(p, q, lowest, |dp, dq| {
        let (Some(hp), Some(hq)) = (dp.hi(), dq.hi()) else {
            return Ok(Symbol::zero(dp.vars(), dp.dim()));
        };
        let dp = dp.degree_window(lowest - hq, hp).at_origin()?;
        let dq = dq.degree_window(lowest - hp, hq).at_origin()?;
        Ok(dp.mul_from(&dq, lowest))
    })
}

fn compose_with<C: Coeff>(
    p: &Symbol<C>,
    q: &Symbol<C>,
    lowest: i32,
    product: impl Fn(&Symbol<C>, &Symbol<C>) -> Result<Symbol<C>, SymbolError>,
) -> Result<Symbol<C>, SymbolError> {
    if p.vars() != q.vars() {
        return Err(SymbolError::VarMismatch(p.vars(), q.vars()));
    }
    let (Some(hp), Some(hq)) = (p.hi(), q.hi()) else {
        return Ok(Symbol::zero(p.vars(), p.dim()).with_known_from(lowest));
    };
    let known_from = p.product_known_from(q);
    if lowest < known_from {
        return Err(SymbolError::UnknownDegree {
            requested: lowest,
            known_from,
        });
    }
    let max_alpha = hp + hq - lowest;
    let mut out = Symbol::zero(p.vars(), p.dim());
    if max_alpha >= 0 {
        let mut counts = vec![0u32; p.vars()];
        let mut walk = Walk {
            product: &product,
            remaining: max_alpha,
            counts: &mut counts,
            out: &mut out,
        };
        walk.visit(p, q, 0, C::one())?;
    }
    Ok(out.with_known_from(lowest))
}

/// Depth-first walk over multi-indices `α` as non-decreasing index sequences.
struct Walk<'a, C, F> {
    product: &'a F,
    remaining: i32,
    counts: &'a mut [u32],
    out: &'a mut Symbol<C>,
}

impl<C: Coeff, F: Fn(&Symbol<C>, &Symbol<C>) -> Result<Symbol<C>, SymbolError>> Walk<'_, C, F> {
    fn visit(
        &mut self,
        dp: &Symbol<C>,
        dq: &Symbol<C>,
        start: usize,
        factor: C,
    ) -> Result<(), SymbolError> {
        if dp.hi().is_none() || dq.hi().is_none() {
            return Ok(());
        }
        let contribution = (self.product)(dp, dq)?.scale(&factor);
        *self.out = self.out.add(&contribution);
        if self.remaining == 0 {
            return Ok(());
        }
        let minus_i = -C::imag_unit();
        for mu in start..dp.vars() {
            self.counts[mu] += 1;
            self.remaining -= 1;
            let f = factor.clone() * minus_i.clone() * C::from_frac(1, i64::from(self.counts[mu]));
            self.visit(&dp.partial_xi(mu), &dq.partial_x(mu), mu, f)?;
            self.remaining += 1;
            self.counts[mu] -= 1;
        }
        Ok(())
    }
}

/// First two terms of the parametrix of an order-two symbol `p_2 + p_1 + p_0`.
///
/// The leading part must be `c‖ξ‖²` at the origin with `c` an invertible
/// scalar; its `x`-dependent remainder `R` is inverted by the geometric series
/// `q_{-2} = Σ_k (-L^{-1}R)^k L^{-1}`, which terminates at the precision of
/// `p_2`. Then
///
/// `q_{-3} = -q_{-2} (p_1 q_{-2} - i Σ_j ∂_{ξ_j} p_2 ∂_{x_j} q_{-2})`.
pub fn symbol_invert_order2<C: Coeff>(
    p: &Symbol<C>,
) -> Result<(Symbol<C>, Symbol<C>), SymbolError> {
    let p2 = p.degree_part(2);
    let p1 = p.degree_part(1);
    if p2.hi().is_none() {
        return Err(SymbolError::MissingDegree(2));
    }
    let (vars, dim) = (p.vars(), p.dim());
    let order = p.order_of(2);

    let scale = p2.max_magnitude();
    let lead = p2.at_origin()?.cleaned(scale);
    let c = leading_scalar(&lead).ok_or_else(|| SymbolError::NotInvertible(format!("{lead:?}")))?;
    let c_inv = c
        .inv()
        .ok_or_else(|| SymbolError::NotInvertible(format!("{lead:?}")))?;
    let norm2 = Symbol::norm_power(vars, dim, 1);
    if !lead.matches(&norm2.scale(&c)) {
        return Err(SymbolError::NotInvertible(format!("{lead:?}")));
    }
    let l_inv = Symbol::norm_power(vars, dim, -1).scale(&c_inv);
    let rest = p2.sub(&norm2.scale(&c)).cleaned(scale);

    let mut q2 = l_inv.clone();
    if !rest.is_zero() {
        if order == EXACT {
            return Err(SymbolError::InfiniteSeries);
        }
        let step = l_inv.mul(&rest).neg();
        let mut power = l_inv.clone();
        for _ in 0..order {
            power = step.mul(&power);
            q2 = q2.add(&power);
        }
    }
    q2.ensure_component(-2, order);
    q2 = q2.with_order(order);

    let mut bracket = p1.mul(&q2);
    let i = C::imag_unit();
    for j in 0..vars {
        let correction = p2.partial_xi(j).mul(&q2.partial_x(j)).scale(&i);
        bracket = bracket.sub(&correction);
    }
    let q3 = q2.mul(&bracket).neg();
    Ok((q2.degree_part(-2), q3.degree_part(-3)))
}

/// Coefficient `c` when a constant degree-2 symbol looks like `c‖ξ‖²`: read
/// off the `ξ_1²` coefficient of its canonical form.
fn leading_scalar<C: Coeff>(lead: &Symbol<C>) -> Option<C> {
    let comp = lead.component(2)?;
    let base_k = comp.min_k();
    if base_k > 1 {
        return None;
    }
    let probe = Monomial::from_exponents(&[2 * (1 - base_k) as u32]);
    let canon = comp.canonical(lead.vars(), base_k);
    let poly = canon.get(&probe)?;
    poly.get(&Monomial::ONE)
        .and_then(CliffordElement::as_scalar)
}

/// Leading two terms of `σ(Q^m)` from those of `σ(Q)`, for scalar `q_{-2}`:
///
/// `s_{-2m} = q_{-2}^m`,
/// `s_{-2m-1} = m q_{-2}^{m-1} q_{-3} - i Σ_{k=0}^{m-2} Σ_μ ∂_{ξ_μ}(q_{-2}^{m-k-1}) ∂_{x_μ}(q_{-2}) q_{-2}^k`.
pub fn inverse_power_symbols<C: Coeff>(
    q2: &Symbol<C>,
    q3: &Symbol<C>,
    m: u32,
) -> Result<(Symbol<C>, Symbol<C>), SymbolError> {
    if m < 2 {
        return Err(SymbolError::PowerTooSmall(m));
    }
    if !q2.is_scalar_valued() {
        return Err(SymbolError::NonScalar);
    }
    let lead = q2.pow(m);
    let mut sub = q2.pow(m - 1).mul(q3).scale(&C::from_i64(i64::from(m)));
    let i = C::imag_unit();
    for k in 0..=(m - 2) {
        let outer = q2.pow(m - k - 1);
        let tail = q2.pow(k);
        for mu in 0..q2.vars() {
            let term = outer.partial_xi(mu).mul(&q2.partial_x(mu)).mul(&tail);
            sub = sub.sub(&term.scale(&i));
        }
    }
    let d = -2 * m as i32;
    Ok((lead.degree_part(d), sub.degree_part(d - 1)))
}

/// Leading two terms of `σ(Q^m)` by composing `σ(Q)` with itself `m - 1` times.
///
/// `q` is taken as an expansion known down to its lowest present degree.
pub fn iterated_power_oracle<C: Coeff>(q: &Symbol<C>, m: u32) -> Result<Symbol<C>, SymbolError> {
    iterate_power(q, m, symbol_compose)
}

/// [`iterated_power_oracle`] at `x = 0` only.
pub fn iterated_power_at_origin<C: Coeff>(q: &Symbol<C>, m: u32) -> Result<Symbol<C>, SymbolError> {
    let acc = iterate_power(q, m, symbol_compose_at_origin)?;
    acc.at_origin()
}

fn iterate_power<C: Coeff>(
    q: &Symbol<C>,
    m: u32,
    compose: impl Fn(&Symbol<C>, &Symbol<C>, i32) -> Result<Symbol<C>, SymbolError>,
) -> Result<Symbol<C>, SymbolError> {
    let q = match q.lo() {
        Some(lo) => q.clone().with_known_from(lo),
        None => return Ok(q.clone()),
    };
    let mut acc = q.clone();
    for j in 1..m as i32 {
        acc = compose(&acc, &q, -2 * (j + 1) - 1)?.compact();
    }
    Ok(acc)
}
