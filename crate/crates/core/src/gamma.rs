//! Dense matrix representation of the Clifford algebra, used as a floating
//! point oracle for the sparse blade arithmetic.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clifford::{clifford_trace, Blade, CliffordElement};
use crate::scalar::{Coeff, GaussRational};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Largest `m` for which matrices are built (`2^5 = 32` rows).
pub const MAX_GAMMA_M: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("gamma matrices are built for 1 <= m <= {MAX_GAMMA_M}, got m = {0}")]
    OutOfRange(usize),
    #[error("element has dimension {element}, representation has {gammas} generators")]
    DimensionMismatch { element: usize, gammas: usize },
}

fn pauli() -> [ComplexMatrix; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
    ]
}

fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(DMatrix::identity(1, 1), |acc, f| acc.kronecker(*f))
}

/// Builds `γ_1..γ_{2m}` with `γ_i γ_j + γ_j γ_i = -2δ_ij I`.
///
/// Hermitian generators `Γ` with `Γ² = I` come from the Jordan-Wigner
/// strings `Z⊗..⊗Z⊗X⊗I⊗..` and `Z⊗..⊗Z⊗Y⊗I⊗..`; then `γ = iΓ`.
pub fn build_gamma_matrices(m: usize) -> Result<Vec<ComplexMatrix>, GammaError> {
    if m == 0 || m > MAX_GAMMA_M {
        return Err(GammaError::OutOfRange(m));
    }
    let [x, y, z] = pauli();
    let id = DMatrix::<Complex64>::identity(2, 2);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        for middle in [&x, &y] {
            let factors: Vec<&ComplexMatrix> = (0..m)
                .map(|slot| match slot.cmp(&k) {
                    std::cmp::Ordering::Less => &z,
                    std::cmp::Ordering::Equal => middle,
                    std::cmp::Ordering::Greater => &id,
                })
                .collect();
            out.push(kron_all(&factors) * i);
        }
    }
    Ok(out)
}

/// Maps a Clifford element to its matrix: blade `{i1<..<ik}` goes to `γ_{i1}..γ_{ik}`.
pub fn represent_element<C: Coeff>(
    a: &CliffordElement<C>,
    gammas: &[ComplexMatrix],
) -> Result<ComplexMatrix, GammaError> {
    if a.dim() != gammas.len() {
        return Err(GammaError::DimensionMismatch {
            element: a.dim(),
            gammas: gammas.len(),
        });
    }
    let size = gammas.first().map_or(1, |g| g.nrows());
    let mut out = DMatrix::zeros(size, size);
    for (blade, coeff) in a.terms() {
        out += blade_matrix(*blade, gammas) * coeff.to_complex();
    }
    Ok(out)
}

fn blade_matrix(blade: Blade, gammas: &[ComplexMatrix]) -> ComplexMatrix {
    let size = gammas.first().map_or(1, |g| g.nrows());
    blade
        .indices()
        .fold(DMatrix::identity(size, size), |acc, i| acc * &gammas[i])
}

/// Largest entry of `γ_i γ_j + γ_j γ_i + 2δ_ij I` over all pairs.
pub fn anticommutation_residual(gammas: &[ComplexMatrix]) -> f64 {
    let size = gammas.first().map_or(1, |g| g.nrows());
    let id = DMatrix::<Complex64>::identity(size, size);
    let mut worst = 0.0f64;
    for (i, gi) in gammas.iter().enumerate() {
        for (j, gj) in gammas.iter().enumerate() {
            let mut r = gi * gj + gj * gi;
            if i == j {
                r += &id * Complex64::new(2.0, 0.0);
            }
            worst = worst.max(max_abs(&r));
        }
    }
    worst
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Outcome of [`verify_representation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationReport {
    pub trials: usize,
    pub max_product_deviation: f64,
    pub max_trace_deviation: f64,
}

impl RepresentationReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_product_deviation.max(self.max_trace_deviation)
    }
}

/// A random element with small Gaussian-rational coefficients on a few blades.
pub fn random_element<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_terms: usize,
) -> CliffordElement<GaussRational> {
    let mut e = CliffordElement::zero(dim);
    let count = rng.random_range(1..=max_terms.max(1));
    for _ in 0..count {
        let blade = Blade(rng.random_range(0..(1u32 << dim)));
        let re = GaussRational::from_frac(rng.random_range(-5..=5), rng.random_range(1..=4));
        let im = GaussRational::from_frac(rng.random_range(-5..=5), rng.random_range(1..=4));
        e.add_term(blade, re + im * GaussRational::imag_unit());
    }
    e
}

/// Compares exact products and traces of random elements against the matrix
/// representation.
pub fn verify_representation(
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<RepresentationReport, GammaError> {
    let gammas = build_gamma_matrices(m)?;
    let dim = 2 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RepresentationReport {
        trials,
        max_product_deviation: 0.0,
        max_trace_deviation: 0.0,
    };
    for trial in 0..trials {
        let (a, b) = if trial == 0 && trials == 1 {
            (
                CliffordElement::identity(dim),
                CliffordElement::identity(dim),
            )
        } else {
            (
                random_element(&mut rng, dim, 6),
                random_element(&mut rng, dim, 6),
            )
        };
        let ab = a.mul(&b);
        let ma = represent_element(&a, &gammas)?;
        let mb = represent_element(&b, &gammas)?;
        let mab = represent_element(&ab, &gammas)?;
        report.max_product_deviation = report
            .max_product_deviation
            .max(max_abs(&(&ma * &mb - &mab)));
        let exact = clifford_trace(&ab, m)
            .expect("dimension is 2m")
            .to_complex();
        report.max_trace_deviation = report.max_trace_deviation.max((mab.trace() - exact).norm());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{clifford_of_vector, FrameVector};

    #[test]
    fn generators_satisfy_relation() {
        for m in 1..=MAX_GAMMA_M {
            let g = build_gamma_matrices(m).unwrap();
            assert_eq!(g.len(), 2 * m);
            assert_eq!(g[0].nrows(), 1 << m);
            assert!(anticommutation_residual(&g) <= 1e-14);
        }
        assert_eq!(build_gamma_matrices(0), Err(GammaError::OutOfRange(0)));
        assert_eq!(build_gamma_matrices(6), Err(GammaError::OutOfRange(6)));
    }

    #[test]
    fn identity_has_trace_two_to_the_m() {
        let g = build_gamma_matrices(2).unwrap();
        let id = represent_element(&CliffordElement::<GaussRational>::identity(4), &g).unwrap();
        assert!((id.trace() - Complex64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_vector_trace_is_minus_pairing() {
        let g = build_gamma_matrices(2).unwrap();
        let u = FrameVector::new(
            vec![1.0, 2.0, -1.0, 0.5]
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
        );
        let v = FrameVector::new(
            vec![0.0, 1.0, 3.0, 2.0]
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
        );
        let prod = clifford_of_vector(&u).mul(&clifford_of_vector(&v));
        let t = represent_element(&prod, &g).unwrap().trace();
        assert!((t + u.dot(&v) * 4.0).norm() < 1e-12);
    }

    #[test]
    fn representation_matches_exact_arithmetic() {
        assert!(verify_representation(2, 100, 7).unwrap().max_deviation() <= 1e-10);
        assert!(verify_representation(3, 100, 8).unwrap().max_deviation() <= 1e-10);
        assert_eq!(verify_representation(1, 1, 0).unwrap().max_deviation(), 0.0);
    }

    #[test]
    fn mismatched_dimension_is_rejected() {
        let g = build_gamma_matrices(2).unwrap();
        let e = CliffordElement::<GaussRational>::identity(6);
        assert!(matches!(
            represent_element(&e, &g),
            Err(GammaError::DimensionMismatch { .. })
        ));
    }
}
