//! One test per acceptance criterion. Each prints a single
//! `PRIMARY criterion N: PASS|FAIL` line with a short measurement summary,
//! then asserts on the same verdict.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_torsion::cli::{load_scenario, run_report, ScenarioDoc, DEFAULT_TOLERANCE};
use spectral_torsion::clifford::clifford_of_vector;
use spectral_torsion::gamma::{build_gamma_matrices, represent_element};
use spectral_torsion::geometry::{
    check_inverse, check_square, laplacian_inverse_check, random_coeff, CurvatureData, Scenario,
    VectorFieldJet,
};
use spectral_torsion::sphere::{
    monomial_integral, monomial_integral_closed_form, multi_indices, sphere_volume,
};
use spectral_torsion::torsion::{
    assemble_density, contraction_identity, h1_density, h2_density, h3_density,
    plain_dirac_torsion_density, trace_identity, values_agree, DensityValue,
};
use spectral_torsion::{Coeff, FrameVector, GaussRational};

type Q = GaussRational;

fn verdict(n: u32, pass: bool, elapsed: Duration, detail: &str) {
    println!(
        "PRIMARY criterion {n}: {} ({detail}; {:.2} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "criterion {n}: {detail}");
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn derived_scenario() -> Scenario<Q> {
    let mut v_field = VectorFieldJet::constant(FrameVector::basis(4, 0));
    v_field.jacobian[0][1] = Q::one();
    let e2 = FrameVector::basis(4, 1);
    Scenario {
        m: 2,
        v_field,
        x_field: FrameVector::zero(4),
        u: e2.clone(),
        v: e2.clone(),
        w: e2,
        curvature: None,
        seed: None,
    }
}

#[test]
fn criterion_01_trace_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut checked, mut failures, mut worst) = (0, Vec::new(), 0.0f64);
    for m in [2, 3] {
        let gammas = build_gamma_matrices(m).unwrap();
        let size = 1 << m;
        for tuple in 0..200 {
            for k in [2, 4, 6] {
                let vectors: Vec<FrameVector<Q>> = (0..k)
                    .map(|_| FrameVector::new((0..2 * m).map(|_| random_coeff(&mut rng)).collect()))
                    .collect();
                let t = trace_identity(&vectors, m).unwrap();
                let mut product = DMatrix::<Complex64>::identity(size, size);
                for x in &vectors {
                    product *= represent_element(&clifford_of_vector(x), &gammas).unwrap();
                }
                let dev = (product.trace() - t.symbolic.to_complex()).norm();
                worst = worst.max(dev);
                checked += 1;
                if t.symbolic != t.formula || dev > 1e-10 {
                    failures.push(format!("m={m} tuple {tuple} k={k}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(10);
    verdict(
        1,
        pass,
        elapsed,
        &format!(
            "{checked} traces, {} mismatches {:?}, gamma deviation {worst:.1e}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_02_sphere_integrals() {
    let start = Instant::now();
    let (mut worst, mut sum_rule_failures, mut count) = (0.0f64, 0, 0);
    for n in [4usize, 6] {
        for degree in (0..=8).step_by(2) {
            for alpha in multi_indices(n, degree) {
                let exact = monomial_integral(&alpha, n);
                let reference = monomial_integral_closed_form(&alpha, n);
                count += 1;
                if reference == 0.0 {
                    if !exact.rational.numer().eq(&0.into()) {
                        worst = f64::INFINITY;
                    }
                } else {
                    worst = worst.max(((exact.to_f64() - reference) / reference).abs());
                }
                if degree <= 6 {
                    let raised: BigRational = (0..n)
                        .map(|a| {
                            let mut b = alpha.clone();
                            b[a] += 2;
                            monomial_integral(&b, n).rational
                        })
                        .sum();
                    if raised != exact.rational {
                        sum_rule_failures += 1;
                    }
                }
            }
        }
        let zero = monomial_integral_closed_form(&vec![0; n], n);
        worst = worst.max(((zero - sphere_volume(n)) / zero).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12 && sum_rule_failures == 0 && elapsed < Duration::from_secs(1);
    verdict(
        2,
        pass,
        elapsed,
        &format!(
            "{count} moments, max relative error {worst:.1e}, {sum_rule_failures} sum-rule failures"
        ),
    );
}

#[test]
fn criterion_03_laplacian_parametrix() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in [4, 6] {
        for k in 0..10 {
            let curv = CurvatureData::random(n, &mut rng);
            assert!(curv.validate().is_ok());
            checked += 1;
            if let Err(e) = laplacian_inverse_check::<Q>(&curv) {
                failures.push(format!("n={n} #{k}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(5);
    verdict(
        3,
        pass,
        elapsed,
        &format!("{checked} curvature tensors, failures {failures:?}"),
    );
}

#[test]
fn criterion_04_square_and_inverse_symbols() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut failures = Vec::new();
    for k in 0..50 {
        let m = 2 + k % 2;
        let s = Scenario::<Q>::random(m, &mut rng);
        if let Err(e) = check_square(&s).and_then(|()| check_inverse(&s)) {
            failures.push(format!("m={m} #{k}: {e}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(30);
    verdict(
        4,
        pass,
        elapsed,
        &format!("50 scenarios, failures {failures:?}"),
    );
}

#[test]
fn criterion_05_contraction_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut failing_items = [0usize; 15];
    for k in 0..100 {
        let s = Scenario::<Q>::random(2 + k % 2, &mut rng);
        for item in 1..=15 {
            if !contraction_identity(item, &s).unwrap().holds() {
                failing_items[item - 1] += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let summary: Vec<String> = failing_items
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, c)| format!("item {} fails on {c}/100", i + 1))
        .collect();
    let pass = summary.is_empty() && elapsed < Duration::from_secs(5);
    verdict(
        5,
        pass,
        elapsed,
        &format!(
            "1500 identities, {}",
            if summary.is_empty() {
                "none failing".into()
            } else {
                summary.join(", ")
            }
        ),
    );
}

const TERM_NAMES: [&str; 8] = ["h1", "l1", "l2", "l3", "l4", "l5", "k1", "k2"];

fn term_mismatches<C: Coeff>(s: &Scenario<C>, tol: f64, counts: &mut [usize; 8]) {
    let t = assemble_density(s).unwrap();
    let ours = [
        &t.h1, &t.l[0], &t.l[1], &t.l[2], &t.l[3], &t.l[4], &t.k[0], &t.k[1],
    ];
    let printed = [
        &t.paper.h1,
        &t.paper.l[0],
        &t.paper.l[1],
        &t.paper.l[2],
        &t.paper.l[3],
        &t.paper.l[4],
        &t.paper.k[0],
        &t.paper.k[1],
    ];
    for i in 0..8 {
        if !values_agree(ours[i], printed[i], tol) {
            counts[i] += 1;
        }
    }
}

fn describe(counts: &[usize; 8], total: usize) -> String {
    let parts: Vec<String> = TERM_NAMES
        .iter()
        .zip(counts)
        .filter(|(_, &c)| c > 0)
        .map(|(name, c)| format!("{name} {c}/{total}"))
        .collect();
    if parts.is_empty() {
        "all match".into()
    } else {
        parts.join(", ")
    }
}

#[test]
fn criterion_06_per_term_closed_forms() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut exact = [0usize; 8];
    for _ in 0..50 {
        term_mismatches(&Scenario::<Q>::random(2, &mut rng), 0.0, &mut exact);
    }
    let mut float = [0usize; 8];
    for _ in 0..10 {
        term_mismatches(
            &Scenario::<Complex64>::random(3, &mut rng),
            1e-9,
            &mut float,
        );
    }
    let elapsed = start.elapsed();
    let pass = exact.iter().chain(&float).all(|&c| c == 0);
    verdict(
        6,
        pass,
        elapsed,
        &format!(
            "exact m=2 mismatches: {}; float m=3 mismatches: {}",
            describe(&exact, 50),
            describe(&float, 10)
        ),
    );
}

#[test]
fn criterion_07_composition_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut failures = Vec::new();
    let mut nonzero = 0;
    for m in [2, 3] {
        for k in 0..50 {
            let t = assemble_density(&Scenario::<Q>::random(m, &mut rng)).unwrap();
            if t.assembled != t.composition_oracle {
                failures.push(format!("m={m} #{k}"));
            }
            if !t.assembled.is_zero() {
                nonzero += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        7,
        failures.is_empty(),
        elapsed,
        &format!("100 scenarios, failures {failures:?}, nonzero densities {nonzero}"),
    );
}

#[test]
fn criterion_08_theorem_end_to_end() {
    let start = Instant::now();
    let derived = assemble_density(&derived_scenario()).unwrap();
    let theorem_abs = DensityValue::new(&derived.theorem, 2).absolute();
    let eight_pi_sq = 8.0 * std::f64::consts::PI.powi(2);
    let theorem_ok =
        (theorem_abs.re - eight_pi_sq).abs() <= 1e-9 * eight_pi_sq && theorem_abs.im == 0.0;

    // Either the pipeline agrees with the closed form, or the report carries a
    // complete per-term table that documents where they part ways.
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut docs = vec![ScenarioDoc::from_scenario(&derived_scenario())];
    for m in [2, 3] {
        for _ in 0..3 {
            docs.push(ScenarioDoc::from_scenario(&Scenario::<Q>::random(
                m, &mut rng,
            )));
        }
    }
    let (mut agree, mut documented, mut undocumented) = (0, 0, 0);
    for (i, doc) in docs.iter().enumerate() {
        let report = run_report(doc, DEFAULT_TOLERANCE).unwrap();
        let theorem_diff = report
            .diffs
            .iter()
            .find(|d| d.name == "assembled - theorem")
            .unwrap();
        let has_table = TERM_NAMES.iter().all(|t| {
            report
                .diffs
                .iter()
                .any(|d| d.name == format!("terms.{t} - paper.{t}"))
        }) && report.diffs.iter().any(|d| d.name == "h2 - paper.h2")
            && report.diffs.iter().any(|d| d.name == "h3 - paper.h3");
        if theorem_diff.pass {
            agree += 1;
        } else if has_table && !report.pass && report.diff_table().contains("FAIL") {
            documented += 1;
        } else {
            undocumented += 1;
        }
        if i == 0 {
            print!("{}", report.diff_table());
        }
    }
    let elapsed = start.elapsed();
    let pass = theorem_ok && undocumented == 0 && elapsed < Duration::from_secs(60);
    verdict(
        8,
        pass,
        elapsed,
        &format!(
            "derived theorem value {:.4} vs 8π² {eight_pi_sq:.4}, machine coefficient {}; \
             {agree} scenarios agree, {documented} disagree with a per-term table, {undocumented} undocumented",
            theorem_abs.re, derived.assembled
        ),
    );
}

/// `h1 + Σ l + Σ k` without the composition oracle.
fn assembled(s: &Scenario<Q>) -> Q {
    let l = h2_density(s).unwrap();
    let k = h3_density(s).unwrap();
    l.into_iter()
        .chain(k)
        .fold(h1_density(s).unwrap(), |a, b| a + b)
}

#[test]
fn criterion_09_cancellations() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut problems = Vec::new();

    for m in [2, 3] {
        let base = Scenario::<Q>::random(m, &mut rng);
        let reference = assembled(&base);
        for k in 0..10 {
            let s = Scenario {
                x_field: FrameVector::new((0..2 * m).map(|_| random_coeff(&mut rng)).collect()),
                ..base.clone()
            };
            if assembled(&s) != reference {
                problems.push(format!("X variation {k} at m={m}"));
            }
        }

        for (label, lambda) in [("2", Q::from_i64(2)), ("1/3", Q::from_frac(1, 3))] {
            let scaled = assembled(&base.scaled_field(&lambda));
            let factor = lambda.pow(-4 * m as i32 + 4).unwrap();
            if scaled != factor * reference.clone() {
                problems.push(format!("scaling by {label} at m={m}"));
            }
        }

        // constant |V|^2: zero Jacobian, or a Jacobian whose rows are all
        // orthogonal to V
        let mut constant = base.clone();
        for row in &mut constant.v_field.jacobian {
            row.iter_mut().for_each(|x| *x = Q::zero());
        }
        let n = 2 * m;
        let value = base.v_field.value.clone();
        let mut rotating = constant.clone();
        let a: Vec<Q> = (0..n).map(|_| random_coeff(&mut rng)).collect();
        let a = FrameVector::new(a);
        let proj = a.dot(&value) * value.norm_sq().inv().unwrap();
        let a_perp = a.add(&value.scale(&-proj));
        let b: Vec<Q> = (0..n)
            .map(|_| Q::from_i64(rng.random_range(-3..=3)))
            .collect();
        for (row, a) in rotating.v_field.jacobian.iter_mut().zip(a_perp.components()) {
            for (x, bj) in row.iter_mut().zip(&b) {
                *x = a.clone() * bj.clone();
            }
        }
        assert!(rotating.d_norm_sq().is_zero());
        for (label, s) in [("constant field", constant), ("rotating field", rotating)] {
            if !assembled(&s).is_zero() {
                problems.push(format!("{label} at m={m}"));
            }
        }

        if !plain_dirac_torsion_density(&base.u, &base.v, &base.w, m)
            .unwrap()
            .is_zero()
        {
            problems.push(format!("plain Dirac at m={m}"));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        9,
        problems.is_empty(),
        elapsed,
        &format!("X independence, scaling, constant |V|^2, plain Dirac; problems {problems:?}"),
    );
}

#[test]
fn criterion_10_negative_control() {
    let start = Instant::now();
    let doc = load_scenario(fixture("negative_control.json")).unwrap();
    let report = run_report(&doc, DEFAULT_TOLERANCE).unwrap();
    let failing: Vec<&str> = report
        .diffs
        .iter()
        .filter(|d| !d.pass)
        .map(|d| d.name.as_str())
        .collect();
    let status = Command::new(env!("CARGO_BIN_EXE_spectral-torsion"))
        .args(["run", "--scenario"])
        .arg(fixture("negative_control.json"))
        .output()
        .unwrap()
        .status
        .code();
    let unperturbed = ScenarioDoc {
        perturb: None,
        ..doc.clone()
    };
    let clean = run_report(&unperturbed, DEFAULT_TOLERANCE).unwrap().pass;
    let elapsed = start.elapsed();
    let pass = status == Some(1) && failing == ["terms.l2 - paper.l2"] && clean;
    verdict(
        10,
        pass,
        elapsed,
        &format!("exit code {status:?}, failing diffs {failing:?}, unperturbed passes: {clean}"),
    );
}
