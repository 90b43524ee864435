//! Scenario files, reports, sweeps and targeted lemma checks behind the
//! `spectral-torsion` binary.
//!
//! Exit-code contract: 0 when every comparison passes, 1 when a verification
//! fails, 2 for usage or input errors.

mod lemma;
mod schema;
mod sweep;

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, Scenario};
use crate::scalar::{format_ratio, Coeff, GaussRational, Scalar, ScalarKind};
use crate::torsion::{assemble_density, values_agree, DensityValue, TermBreakdown, TorsionError};

pub use lemma::{lemma_check, CaseResult, LemmaName, LemmaSummary};
pub use schema::{
    CurvatureEntry, FieldDoc, Literal, Perturbation, ScenarioDoc, TermName, SCHEMA_VERSION,
};
pub use sweep::{verify_sweep, CheckStat, SweepSummary};

/// Default relative tolerance for float-mode comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("invalid scenario at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

impl CliError {
    /// Input and usage problems map to 2; there is no error that means a
    /// failed verification, which is reported through `pass` flags instead.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub(crate) fn invalid(path: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        let path = match &e {
            GeometryError::Dimension {
                field,
                expected,
                found,
            } => {
                return CliError::invalid(
                    field.clone(),
                    format!("expected length {expected}, found {found}"),
                )
            }
            GeometryError::ZeroField => "V.value",
            GeometryError::Rank(_) => "m",
            GeometryError::CurvatureIndex { .. }
            | GeometryError::CurvatureConflict { .. }
            | GeometryError::Bianchi { .. } => "curvature",
            GeometryError::Mismatch { .. } | GeometryError::Symbol(_) => "scenario",
        };
        CliError::invalid(path, e)
    }
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioDoc, CliError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc = ScenarioDoc::from_json(&text)?;
    doc.validate()?;
    Ok(doc)
}

/// A density as written in reports: exact coefficients of
/// `2^m*Vol(S^{2m-1})`, or float values with the unit multiplied in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensityDoc {
    Exact {
        rational: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        imaginary: Option<String>,
        unit: String,
    },
    Float {
        decimal: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        imaginary: Option<f64>,
    },
}

impl DensityDoc {
    pub fn new(value: &DensityValue) -> Self {
        match &value.coefficient {
            Scalar::Exact(g) => DensityDoc::Exact {
                rational: format_ratio(&g.re()),
                imaginary: (!g.is_real()).then(|| format_ratio(&g.im())),
                unit: format!("2^{}*Vol(S^{})", value.m, 2 * value.m - 1),
            },
            Scalar::Float(_) => {
                // adding 0.0 turns -0.0 into 0.0
                let z = value.absolute() + Complex64::new(0.0, 0.0);
                DensityDoc::Float {
                    decimal: z.re,
                    imaginary: (z.im != 0.0).then_some(z.im),
                }
            }
        }
    }

    fn of<C: Coeff>(value: &C, m: usize) -> Self {
        Self::new(&DensityValue::new(value, m))
    }
}

/// The eight pipeline terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermsDoc {
    pub h1: DensityDoc,
    pub l1: DensityDoc,
    pub l2: DensityDoc,
    pub l3: DensityDoc,
    pub l4: DensityDoc,
    pub l5: DensityDoc,
    pub k1: DensityDoc,
    pub k2: DensityDoc,
}

impl TermsDoc {
    fn of<C: Coeff>(h1: &C, l: &[C; 5], k: &[C; 2], m: usize) -> Self {
        let d = |v: &C| DensityDoc::of(v, m);
        TermsDoc {
            h1: d(h1),
            l1: d(&l[0]),
            l2: d(&l[1]),
            l3: d(&l[2]),
            l4: d(&l[3]),
            l5: d(&l[4]),
            k1: d(&k[0]),
            k2: d(&k[1]),
        }
    }
}

/// Printed closed forms: the per-term values and the printed group sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperDoc {
    #[serde(flatten)]
    pub terms: TermsDoc,
    pub h2: DensityDoc,
    pub h3: DensityDoc,
}

/// One comparison with both sides and their difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffDoc {
    pub name: String,
    pub computed: DensityDoc,
    pub reference: DensityDoc,
    pub difference: DensityDoc,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub mode: ScalarKind,
    pub m: usize,
    pub tolerance: f64,
    pub scenario: ScenarioDoc,
    pub terms: TermsDoc,
    pub assembled: DensityDoc,
    pub composition_oracle: DensityDoc,
    pub paper: PaperDoc,
    pub theorem: DensityDoc,
    pub diffs: Vec<DiffDoc>,
    pub pass: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Plain-text table of every comparison.
    pub fn diff_table(&self) -> String {
        let mut out = String::new();
        let width = self.diffs.iter().map(|d| d.name.len()).max().unwrap_or(0);
        for d in &self.diffs {
            out.push_str(&format!(
                "{:<width$}  {}  computed {}  reference {}  difference {}\n",
                d.name,
                if d.pass { "ok  " } else { "FAIL" },
                short(&d.computed),
                short(&d.reference),
                short(&d.difference),
            ));
        }
        out
    }
}

fn short(d: &DensityDoc) -> String {
    match d {
        DensityDoc::Exact {
            rational,
            imaginary,
            ..
        } => match imaginary {
            Some(im) => format!("{rational} + ({im})i"),
            None => rational.clone(),
        },
        DensityDoc::Float { decimal, imaginary } => match imaginary {
            Some(im) => format!("{decimal:.12e} + ({im:.12e})i"),
            None => format!("{decimal:.12e}"),
        },
    }
}

/// Every comparison a report makes, as `(name, computed, reference)`.
pub fn comparisons<C: Coeff>(
    t: &TermBreakdown<C>,
    perturb: Option<&Perturbation>,
) -> Result<Vec<(String, C, C)>, CliError> {
    let mut paper = t.paper.clone();
    let mut theorem = t.theorem.clone();
    if let Some(p) = perturb {
        let scale: C = p.scale.to_coeff("perturb.scale")?;
        let target = match p.term {
            TermName::H1 => &mut paper.h1,
            TermName::L1 => &mut paper.l[0],
            TermName::L2 => &mut paper.l[1],
            TermName::L3 => &mut paper.l[2],
            TermName::L4 => &mut paper.l[3],
            TermName::L5 => &mut paper.l[4],
            TermName::K1 => &mut paper.k[0],
            TermName::K2 => &mut paper.k[1],
            TermName::H2 => &mut paper.h2,
            TermName::H3 => &mut paper.h3,
            TermName::Theorem => &mut theorem,
        };
        *target = target.clone() * scale;
    }
    let mut out = vec![(
        "assembled - composition_oracle".to_string(),
        t.assembled.clone(),
        t.composition_oracle.clone(),
    )];
    let named = [
        ("h1", &t.h1, &paper.h1),
        ("l1", &t.l[0], &paper.l[0]),
        ("l2", &t.l[1], &paper.l[1]),
        ("l3", &t.l[2], &paper.l[2]),
        ("l4", &t.l[3], &paper.l[3]),
        ("l5", &t.l[4], &paper.l[4]),
        ("k1", &t.k[0], &paper.k[0]),
        ("k2", &t.k[1], &paper.k[1]),
    ];
    for (name, ours, printed) in named {
        out.push((
            format!("terms.{name} - paper.{name}"),
            ours.clone(),
            printed.clone(),
        ));
    }
    out.push(("h2 - paper.h2".to_string(), t.h2(), paper.h2.clone()));
    out.push(("h3 - paper.h3".to_string(), t.h3(), paper.h3.clone()));
    out.push((
        "assembled - theorem".to_string(),
        t.assembled.clone(),
        theorem,
    ));
    Ok(out)
}

fn build_report<C: Coeff>(doc: &ScenarioDoc, tolerance: f64) -> Result<Report, CliError> {
    let s: Scenario<C> = doc.to_scenario()?;
    let t = assemble_density(&s)?;
    let m = s.m;
    let d = |v: &C| DensityDoc::of(v, m);
    let diffs: Vec<DiffDoc> = comparisons(&t, doc.perturb.as_ref())?
        .into_iter()
        .map(|(name, computed, reference)| DiffDoc {
            pass: values_agree(&computed, &reference, tolerance),
            difference: d(&(computed.clone() - reference.clone())),
            computed: d(&computed),
            reference: d(&reference),
            name,
        })
        .collect();
    let pass = diffs.iter().all(|x| x.pass);
    Ok(Report {
        schema: SCHEMA_VERSION,
        mode: C::KIND,
        m,
        tolerance,
        scenario: doc.clone(),
        terms: TermsDoc::of(&t.h1, &t.l, &t.k, m),
        assembled: d(&t.assembled),
        composition_oracle: d(&t.composition_oracle),
        paper: PaperDoc {
            terms: TermsDoc::of(&t.paper.h1, &t.paper.l, &t.paper.k, m),
            h2: d(&t.paper.h2),
            h3: d(&t.paper.h3),
        },
        theorem: d(&t.theorem),
        diffs,
        pass,
    })
}

/// Full breakdown and comparisons for one scenario. Exact mode compares
/// exactly; float mode uses `tolerance` relative to the larger side.
pub fn run_report(doc: &ScenarioDoc, tolerance: f64) -> Result<Report, CliError> {
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(CliError::Usage(format!(
            "tolerance must be a non-negative number, got {tolerance}"
        )));
    }
    match doc.mode {
        ScalarKind::Exact => build_report::<GaussRational>(doc, tolerance),
        ScalarKind::Float => build_report::<Complex64>(doc, tolerance),
    }
}
