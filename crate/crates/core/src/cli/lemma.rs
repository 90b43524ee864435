use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CliError, SCHEMA_VERSION};
use crate::clifford::{clifford_of_vector, FrameVector};
use crate::gamma::{
    anticommutation_residual, build_gamma_matrices, represent_element, verify_representation,
};
use crate::geometry::{
    check_inverse, check_square, laplacian_inverse_check, random_coeff, CurvatureData, Scenario,
};
use crate::scalar::{Coeff, GaussRational};
use crate::sphere::{
    monomial_integral, monomial_integral_closed_form, multi_indices, sphere_volume,
};
use crate::torsion::{contraction_identity, trace_identity};

type Q = GaussRational;

/// Targeted verifications available from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaName {
    /// Parametrix of the normal-coordinate Laplacian.
    Laplacian,
    /// Leading symbols of the square of the rescaled operator.
    Square,
    /// Leading parametrix symbols of that square.
    Inverse,
    /// Traces of 2-, 4- and 6-fold Clifford products.
    Trace,
    /// The fifteen Jacobian contraction identities.
    Contraction,
    /// Sphere moments against the Gamma-function formula.
    Sphere,
    /// Gamma-matrix representation.
    Gamma,
}

impl LemmaName {
    pub const ALL: [LemmaName; 7] = [
        LemmaName::Laplacian,
        LemmaName::Square,
        LemmaName::Inverse,
        LemmaName::Trace,
        LemmaName::Contraction,
        LemmaName::Sphere,
        LemmaName::Gamma,
    ];
}

impl fmt::Display for LemmaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variants serialize");
        f.write_str(s.as_str().expect("string"))
    }
}

impl FromStr for LemmaName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
            let names: Vec<String> = LemmaName::ALL.iter().map(|n| n.to_string()).collect();
            CliError::Usage(format!(
                "unknown lemma {s:?}; expected one of {}",
                names.join(", ")
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub schema: u32,
    pub name: LemmaName,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
    pub pass: bool,
}

impl LemmaSummary {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }
}

fn case(label: String, outcome: Result<(), String>) -> CaseResult {
    CaseResult {
        label,
        pass: outcome.is_ok(),
        detail: outcome.err(),
    }
}

fn laplacian(rng: &mut ChaCha8Rng) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for n in [4, 6] {
        for k in 0..5 {
            let curv = CurvatureData::random(n, rng);
            let outcome = laplacian_inverse_check::<Q>(&curv)
                .map(|_| ())
                .map_err(|e| e.to_string());
            out.push(case(format!("n={n} curvature #{k}"), outcome));
        }
    }
    out
}

fn scenarios(rng: &mut ChaCha8Rng, per_m: usize) -> Vec<Scenario<Q>> {
    [2, 3]
        .into_iter()
        .flat_map(|m| (0..per_m).map(move |_| m))
        .map(|m| Scenario::random(m, rng))
        .collect()
}

fn square(rng: &mut ChaCha8Rng) -> Vec<CaseResult> {
    scenarios(rng, 10)
        .iter()
        .enumerate()
        .map(|(k, s)| {
            case(
                format!("m={} scenario #{k}", s.m),
                check_square(s).map_err(|e| e.to_string()),
            )
        })
        .collect()
}

fn inverse(rng: &mut ChaCha8Rng) -> Vec<CaseResult> {
    scenarios(rng, 10)
        .iter()
        .enumerate()
        .map(|(k, s)| {
            case(
                format!("m={} scenario #{k}", s.m),
                check_inverse(s).map_err(|e| e.to_string()),
            )
        })
        .collect()
}

fn trace(rng: &mut ChaCha8Rng) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for m in [2, 3] {
        let gammas = build_gamma_matrices(m).expect("m <= 5");
        for tuple in 0..50 {
            for k in [2, 4, 6] {
                let vectors: Vec<FrameVector<Q>> = (0..k)
                    .map(|_| FrameVector::new((0..2 * m).map(|_| random_coeff(rng)).collect()))
                    .collect();
                let outcome = trace_identity(&vectors, m)
                    .map_err(|e| e.to_string())
                    .and_then(|t| {
                        if !t.holds() {
                            return Err(format!(
                                "symbolic {} vs formula {}",
                                t.symbolic, t.formula
                            ));
                        }
                        let size = 1usize << m;
                        let mut product =
                            nalgebra::DMatrix::<num_complex::Complex64>::identity(size, size);
                        for x in &vectors {
                            product *= represent_element(&clifford_of_vector(x), &gammas)
                                .map_err(|e| e.to_string())?;
                        }
                        let dev = (product.trace() - t.symbolic.to_complex()).norm();
                        if dev <= 1e-10 {
                            Ok(())
                        } else {
                            Err(format!("matrix trace deviates by {dev:.3e}"))
                        }
                    });
                out.push(case(format!("m={m} tuple #{tuple} k={k}"), outcome));
            }
        }
    }
    out
}

fn contraction(rng: &mut ChaCha8Rng) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for k in 0..10 {
        let s = Scenario::<Q>::random(2, rng);
        for item in 1..=15 {
            let outcome = contraction_identity(item, &s)
                .map_err(|e| e.to_string())
                .and_then(|c| {
                    if c.holds() {
                        Ok(())
                    } else {
                        Err(format!("index sum {} vs closed form {}", c.lhs, c.rhs))
                    }
                });
            out.push(case(format!("scenario #{k} item {item}"), outcome));
        }
    }
    out
}

fn sphere() -> Vec<CaseResult> {
    let mut out = Vec::new();
    for n in [4, 6] {
        for degree in (0..=8).step_by(2) {
            let mut worst = 0.0f64;
            let mut sum_rule = Ok(());
            for alpha in multi_indices(n, degree) {
                let exact = monomial_integral(&alpha, n);
                let reference = monomial_integral_closed_form(&alpha, n);
                let got = exact.to_f64();
                if reference != 0.0 {
                    worst = worst.max(((got - reference) / reference).abs());
                } else if got != 0.0 {
                    worst = f64::INFINITY;
                }
                if degree <= 6 {
                    let mut total = num_rational::BigRational::from_integer(0.into());
                    for a in 0..n {
                        let mut raised = alpha.clone();
                        raised[a] += 2;
                        total += monomial_integral(&raised, n).rational;
                    }
                    if total != exact.rational && sum_rule.is_ok() {
                        sum_rule = Err(format!("sum rule fails at {alpha:?}"));
                    }
                }
            }
            let outcome = if worst <= 1e-12 {
                sum_rule
            } else {
                Err(format!("relative error {worst:.3e}"))
            };
            out.push(case(format!("n={n} |alpha|={degree}"), outcome));
        }
        let vol = sphere_volume(n);
        let zero_moment = monomial_integral_closed_form(&vec![0; n], n);
        out.push(case(
            format!("n={n} volume"),
            if ((vol - zero_moment) / vol).abs() <= 1e-12 {
                Ok(())
            } else {
                Err(format!("{vol} vs {zero_moment}"))
            },
        ));
    }
    out
}

fn gamma(seed: u64) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for m in 1..=3 {
        let outcome = build_gamma_matrices(m)
            .map_err(|e| e.to_string())
            .and_then(|g| {
                let r = anticommutation_residual(&g);
                if r <= 1e-14 {
                    Ok(())
                } else {
                    Err(format!("anticommutation residual {r:.3e}"))
                }
            })
            .and_then(|()| verify_representation(m, 100, seed).map_err(|e| e.to_string()))
            .and_then(|rep| {
                if rep.max_deviation() <= 1e-10 {
                    Ok(())
                } else {
                    Err(format!("max deviation {:.3e}", rep.max_deviation()))
                }
            });
        out.push(case(format!("m={m}, 100 trials"), outcome));
    }
    out
}

/// Runs one targeted verification and collects a result per case.
pub fn lemma_check(name: LemmaName, seed: u64) -> LemmaSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = match name {
        LemmaName::Laplacian => laplacian(&mut rng),
        LemmaName::Square => square(&mut rng),
        LemmaName::Inverse => inverse(&mut rng),
        LemmaName::Trace => trace(&mut rng),
        LemmaName::Contraction => contraction(&mut rng),
        LemmaName::Sphere => sphere(),
        LemmaName::Gamma => gamma(seed),
    };
    LemmaSummary {
        schema: SCHEMA_VERSION,
        name,
        seed,
        pass: cases.iter().all(|c| c.pass),
        cases,
    }
}
