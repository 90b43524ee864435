use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{comparisons, CliError, SCHEMA_VERSION};
use crate::clifford::FrameVector;
use crate::geometry::{random_coeff, Scenario, VectorFieldJet};
use crate::scalar::{Coeff, GaussRational, ScalarKind};
use crate::torsion::{assemble_density, h1_density, h2_density, h3_density, values_agree};

/// Failure count and largest residual `|computed - reference|` of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckStat {
    pub name: String,
    pub failures: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema: u32,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: ScalarKind,
    pub tolerance: f64,
    pub checks: Vec<CheckStat>,
    pub failures: usize,
    pub pass: bool,
}

impl SweepSummary {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{:<width$}  {}  failures {:>4}  max residual {:.3e}\n",
                    c.name,
                    if c.failures == 0 { "ok  " } else { "FAIL" },
                    c.failures,
                    c.max_residual
                )
            })
            .collect()
    }
}

struct Tally {
    checks: Vec<CheckStat>,
    tolerance: f64,
}

impl Tally {
    fn record<C: Coeff>(&mut self, name: &str, computed: &C, reference: &C) {
        let residual = (computed.clone() - reference.clone()).magnitude();
        let ok = values_agree(computed, reference, self.tolerance);
        let stat = match self.checks.iter_mut().find(|c| c.name == name) {
            Some(s) => s,
            None => {
                self.checks.push(CheckStat {
                    name: name.to_string(),
                    failures: 0,
                    max_residual: 0.0,
                });
                self.checks.last_mut().expect("just pushed")
            }
        };
        stat.max_residual = stat.max_residual.max(residual);
        if !ok {
            stat.failures += 1;
        }
    }
}

/// `h1 + Σ l + Σ k` without the composition route.
fn term_density<C: Coeff>(s: &Scenario<C>) -> Result<C, CliError> {
    let mut total = h1_density(s)?;
    for t in h2_density(s)?.into_iter().chain(h3_density(s)?) {
        total += t;
    }
    Ok(total)
}

fn random_vector<C: Coeff, R: Rng>(n: usize, rng: &mut R) -> FrameVector<C> {
    FrameVector::new((0..n).map(|_| random_coeff::<C, R>(rng)).collect())
}

/// A Jacobian perturbation `a bᵀ` with `a ⟂ V(x_0)`, which leaves `d‖V‖²`
/// unchanged.
fn jacobian_shift<C: Coeff, R: Rng>(s: &Scenario<C>, rng: &mut R) -> Scenario<C> {
    let n = s.n();
    let val = &s.v_field.value;
    let a = random_vector::<C, R>(n, rng);
    let a = a.scale(&s.norm_sq()).add(&val.scale(&(-val.dot(&a))));
    let b = random_vector::<C, R>(n, rng);
    let mut out = s.clone();
    for (al, row) in out.v_field.jacobian.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = x.clone() + a.get(al).clone() * b.get(j).clone();
        }
    }
    out
}

fn trial<C: Coeff>(
    s: &Scenario<C>,
    rng: &mut ChaCha8Rng,
    tally: &mut Tally,
) -> Result<(), CliError> {
    let n = s.n();
    let t = assemble_density(s)?;
    for (name, computed, reference) in comparisons(&t, None)? {
        tally.record(&name, &computed, &reference);
    }
    let density = t.assembled.clone();
    let zero = C::zero();

    let mut other = s.clone();
    other.x_field = random_vector(n, rng);
    tally.record("x independence", &term_density(&other)?, &density);

    let imag = C::imag_unit() * C::from_f64(density.to_complex().im);
    tally.record("reality", &imag, &zero);

    let extra = random_vector::<C, _>(n, rng);
    for (name, slot) in [
        ("linearity in u", 0),
        ("linearity in v", 1),
        ("linearity in w", 2),
    ] {
        let with = |x: FrameVector<C>| {
            let mut sc = s.clone();
            *[&mut sc.u, &mut sc.v, &mut sc.w][slot] = x;
            sc
        };
        let base = [&s.u, &s.v, &s.w][slot];
        let lhs = term_density(&with(base.add(&extra)))?;
        let rhs = density.clone() + term_density(&with(extra.clone()))?;
        tally.record(name, &lhs, &rhs);
    }

    let mut swapped = s.clone();
    std::mem::swap(&mut swapped.u, &mut swapped.w);
    tally.record("u-w symmetry", &term_density(&swapped)?, &density);

    tally.record(
        "jacobian enters through d|V|^2",
        &term_density(&jacobian_shift(s, rng))?,
        &density,
    );

    let lambda = C::from_i64(2);
    let factor = lambda.pow(-4 * s.m as i32 + 4).expect("nonzero");
    tally.record(
        "scaling",
        &term_density(&s.scaled_field(&lambda))?,
        &(density * factor),
    );

    let constant = Scenario {
        v_field: VectorFieldJet::constant(s.v_field.value.clone()),
        ..s.clone()
    };
    tally.record("constant |V|^2 vanishes", &term_density(&constant)?, &zero);
    Ok(())
}

fn sweep_in<C: Coeff>(
    m: usize,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<SweepSummary, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally {
        checks: Vec::new(),
        tolerance,
    };
    for _ in 0..trials {
        let s = Scenario::<C>::random(m, &mut rng);
        trial(&s, &mut rng, &mut tally)?;
    }
    let failures = tally.checks.iter().map(|c| c.failures).sum();
    Ok(SweepSummary {
        schema: SCHEMA_VERSION,
        m,
        trials,
        seed,
        mode: C::KIND,
        tolerance,
        checks: tally.checks,
        failures,
        pass: failures == 0,
    })
}

/// Runs every pipeline invariant and printed-form comparison on `trials`
/// random scenarios.
pub fn verify_sweep(
    m: usize,
    trials: usize,
    seed: u64,
    mode: ScalarKind,
    tolerance: f64,
) -> Result<SweepSummary, CliError> {
    if !(2..=3).contains(&m) {
        return Err(CliError::Usage(format!("sweeps take m = 2 or 3, got {m}")));
    }
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    match mode {
        ScalarKind::Exact => sweep_in::<GaussRational>(m, trials, seed, tolerance),
        ScalarKind::Float => sweep_in::<Complex64>(m, trials, seed, tolerance),
    }
}
