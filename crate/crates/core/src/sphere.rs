//! Monomial integrals over the unit sphere `S^{n-1}`.
//!
//! Exact results are rational multiples of `Vol(S^{n-1})`, which is kept as a
//! symbolic unit so π never enters rational arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::function::gamma::gamma;

/// `rational · Vol(S^{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereValue {
    pub rational: BigRational,
    pub n: usize,
}

impl SphereValue {
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rational) * sphere_volume(self.n)
    }
}

impl fmt::Display for SphereValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·Vol(S^{})", self.rational, self.n - 1)
    }
}

/// `Vol(S^{n-1}) = 2π^{n/2} / Γ(n/2)`.
pub fn sphere_volume(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

type MemoKey = (Vec<u32>, usize);

static MEMO: LazyLock<Mutex<HashMap<MemoKey, BigRational>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `∫_{S^{n-1}} ξ^α dξ / Vol(S^{n-1})`.
///
/// Pairing the first index with each later one (the Wick recursion) gives
/// `I(α) = (α_a - 1)/(|α| - 2 + n) · I(α - 2e_a)` for any `a` with `α_a ≥ 2`.
pub fn monomial_integral(alpha: &[u32], n: usize) -> SphereValue {
    assert!(n >= 2, "sphere integrals need n >= 2");
    assert!(alpha.len() <= n, "multi-index longer than the dimension");
    if alpha.iter().any(|a| a % 2 == 1) {
        return SphereValue {
            rational: BigRational::zero(),
            n,
        };
    }
    let mut key: Vec<u32> = alpha.iter().copied().filter(|&a| a > 0).collect();
    key.sort_unstable();
    SphereValue {
        rational: even_moment(key, n),
        n,
    }
}

fn even_moment(key: Vec<u32>, n: usize) -> BigRational {
    if key.is_empty() {
        return BigRational::one();
    }
    let memo_key = (key, n);
    if let Some(hit) = MEMO.lock().expect("sphere memo poisoned").get(&memo_key) {
        return hit.clone();
    }
    let (mut key, _) = memo_key.clone();
    let total: u32 = key.iter().sum();
    let a = key[0];
    let factor = BigRational::new(BigInt::from(a - 1), BigInt::from(total as usize - 2 + n));
    if a == 2 {
        key.remove(0);
    } else {
        key[0] -= 2;
        key.sort_unstable();
    }
    let value = factor * even_moment(key, n);
    MEMO.lock()
        .expect("sphere memo poisoned")
        .insert(memo_key, value.clone());
    value
}

/// Standard closed form `2∏Γ(a_i + 1/2) / Γ(Σ(a_i + 1/2))` with `a_i = α_i / 2`,
/// taken over all `n` coordinates.
pub fn monomial_integral_closed_form(alpha: &[u32], n: usize) -> f64 {
    assert!(n >= 2 && alpha.len() <= n);
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let halves: Vec<f64> = (0..n)
        .map(|i| alpha.get(i).map_or(0.0, |&a| a as f64 / 2.0) + 0.5)
        .collect();
    let numerator: f64 = halves.iter().map(|&h| gamma(h)).product();
    2.0 * numerator / gamma(halves.iter().sum())
}

/// Every exponent vector of length `n` with total degree `degree`.
pub fn multi_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn low_moments() {
        assert_eq!(monomial_integral(&[0, 0, 0, 0], 4).rational, q(1, 1));
        assert_eq!(monomial_integral(&[1, 1, 0, 0], 4).rational, q(0, 1));
        assert_eq!(monomial_integral(&[2, 0, 0, 0], 4).rational, q(1, 4));
        assert_eq!(monomial_integral(&[4, 0, 0, 0], 4).rational, q(1, 8));
        assert_eq!(monomial_integral(&[2, 2, 0, 0], 4).rational, q(1, 24));
    }

    #[test]
    fn closed_form_values() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((monomial_integral_closed_form(&[0, 0, 0, 0], 4) - 2.0 * pi2).abs() < 1e-12);
        assert!((monomial_integral_closed_form(&[2, 2, 0, 0], 4) - pi2 / 12.0).abs() < 1e-12);
        assert!((monomial_integral_closed_form(&[4, 0, 0, 0], 4) - pi2 / 4.0).abs() < 1e-12);
        assert_eq!(monomial_integral_closed_form(&[1, 0, 0, 0], 4), 0.0);
    }

    #[test]
    fn recursion_matches_closed_form() {
        for n in [4usize, 6] {
            for degree in (0..=8).step_by(2) {
                for alpha in multi_indices(n, degree) {
                    let exact = monomial_integral(&alpha, n).to_f64();
                    let oracle = monomial_integral_closed_form(&alpha, n);
                    if oracle == 0.0 {
                        assert_eq!(exact, 0.0);
                    } else {
                        assert!(
                            ((exact - oracle) / oracle).abs() <= 1e-12,
                            "{alpha:?} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn enumerates_all_multi_indices() {
        assert_eq!(multi_indices(4, 2).len(), 10);
        assert_eq!(
            multi_indices(2, 3),
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]
        );
    }
}
