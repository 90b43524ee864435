use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::clifford::FrameVector;
use crate::geometry::{CurvatureData, Scenario, VectorFieldJet};
use crate::scalar::{format_ratio, parse_ratio, Coeff, ScalarKind};

pub const SCHEMA_VERSION: u32 = 1;

/// A real literal: `"p/q"` or an integer in exact mode, a decimal number (or
/// decimal string) in float mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Text(String),
    Number(f64),
}

impl Literal {
    pub fn to_coeff<C: Coeff>(&self, path: &str) -> Result<C, CliError> {
        match C::KIND {
            ScalarKind::Exact => Ok(C::from_ratio(&self.to_ratio(ScalarKind::Exact, path)?)),
            ScalarKind::Float => match self {
                Literal::Number(x) => Ok(C::from_f64(*x)),
                Literal::Text(t) => t
                    .trim()
                    .parse::<f64>()
                    .map(C::from_f64)
                    .map_err(|_| CliError::invalid(path, format!("{t:?} is not a decimal"))),
            },
        }
    }

    fn to_ratio(&self, mode: ScalarKind, path: &str) -> Result<BigRational, CliError> {
        match (mode, self) {
            (ScalarKind::Exact, Literal::Text(t)) => {
                parse_ratio(t).map_err(|e| CliError::invalid(path, e))
            }
            (ScalarKind::Exact, Literal::Number(x)) => {
                if x.fract() == 0.0 && x.abs() <= 9.007_199_254_740_992e15 {
                    Ok(BigRational::from_integer((*x as i64).into()))
                } else {
                    Err(CliError::invalid(
                        path,
                        format!("exact mode takes \"p/q\" literals, got {x}"),
                    ))
                }
            }
            (ScalarKind::Float, _) => {
                let x: f64 = self.to_coeff::<num_complex::Complex64>(path)?.re;
                BigRational::from_float(x)
                    .ok_or_else(|| CliError::invalid(path, format!("{x} is not finite")))
            }
        }
    }

    fn from_coeff<C: Coeff>(c: &C) -> Self {
        match c.to_scalar() {
            crate::scalar::Scalar::Exact(g) => Literal::Text(format_ratio(&g.re())),
            crate::scalar::Scalar::Float(z) => Literal::Number(z.re),
        }
    }
}

/// `V(x_0)` and its Jacobian, `jacobian[α][j] = ∂_j V_α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub value: Vec<Literal>,
    pub jacobian: Vec<Vec<Literal>>,
}

/// One curvature component `R_{acbd}` with one-based indices `[a, c, b, d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureEntry {
    pub indices: [usize; 4],
    pub value: Literal,
}

/// Names of the report quantities a perturbation can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermName {
    H1,
    L1,
    L2,
    L3,
    L4,
    L5,
    K1,
    K2,
    H2,
    H3,
    Theorem,
}

impl FromStr for TermName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::Usage(format!("unknown term {s:?}")))
    }
}

/// Multiplies one printed closed form by `scale` before comparison. Used by
/// test fixtures to check that a wrong reference value is caught.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub term: TermName,
    pub scale: Literal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub schema: u32,
    pub m: usize,
    pub mode: ScalarKind,
    #[serde(rename = "V")]
    pub field: FieldDoc,
    #[serde(rename = "X")]
    pub x: Vec<Literal>,
    pub u: Vec<Literal>,
    pub v: Vec<Literal>,
    pub w: Vec<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<Vec<CurvatureEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<Perturbation>,
}

fn vector<C: Coeff>(lits: &[Literal], name: &str) -> Result<FrameVector<C>, CliError> {
    lits.iter()
        .enumerate()
        .map(|(i, l)| l.to_coeff(&format!("{name}[{i}]")))
        .collect::<Result<Vec<_>, _>>()
        .map(FrameVector::new)
}

fn literals<C: Coeff>(v: &FrameVector<C>) -> Vec<Literal> {
    v.components().iter().map(Literal::from_coeff).collect()
}

impl ScenarioDoc {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios always serialize")
    }

    /// Schema version, `m >= 2`, literal syntax for the mode, dimensions,
    /// `V(x_0) != 0`, curvature symmetries and the perturbation literal.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::invalid(
                "schema",
                format!("expected {SCHEMA_VERSION}, got {}", self.schema),
            ));
        }
        if self.m < 2 {
            return Err(CliError::invalid(
                "m",
                format!("the torsion density needs m >= 2, got {}", self.m),
            ));
        }
        match self.mode {
            ScalarKind::Exact => self.check::<crate::scalar::GaussRational>(),
            ScalarKind::Float => self.check::<num_complex::Complex64>(),
        }
    }

    fn check<C: Coeff>(&self) -> Result<(), CliError> {
        self.to_scenario::<C>()?;
        if let Some(p) = &self.perturb {
            p.scale.to_coeff::<C>("perturb.scale")?;
        }
        Ok(())
    }

    /// Builds and validates the scenario in arithmetic `C`, which must match
    /// the document's mode.
    pub fn to_scenario<C: Coeff>(&self) -> Result<Scenario<C>, CliError> {
        if C::KIND != self.mode {
            return Err(CliError::Usage(format!(
                "scenario is in {} mode, requested {}",
                self.mode,
                C::KIND
            )));
        }
        let value = vector(&self.field.value, "V.value")?;
        let jacobian = self
            .field
            .jacobian
            .iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, l)| l.to_coeff(&format!("V.jacobian[{a}][{j}]")))
                    .collect::<Result<Vec<C>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let curvature = match &self.curvature {
            None => None,
            Some(entries) => Some(self.curvature_data(entries)?),
        };
        let s = Scenario {
            m: self.m,
            v_field: VectorFieldJet { value, jacobian },
            x_field: vector(&self.x, "X")?,
            u: vector(&self.u, "u")?,
            v: vector(&self.v, "v")?,
            w: vector(&self.w, "w")?,
            curvature,
            seed: self.seed,
        };
        s.validate()?;
        Ok(s)
    }

    fn curvature_data(&self, entries: &[CurvatureEntry]) -> Result<CurvatureData, CliError> {
        let n = 2 * self.m;
        let mut comps = Vec::with_capacity(entries.len());
        for (k, e) in entries.iter().enumerate() {
            let path = format!("curvature[{k}]");
            if let Some(bad) = e.indices.iter().find(|&&i| i == 0 || i > n) {
                return Err(CliError::invalid(
                    format!("{path}.indices"),
                    format!("indices run from 1 to {n}, got {bad}"),
                ));
            }
            let value = e.value.to_ratio(self.mode, &format!("{path}.value"))?;
            comps.push((e.indices.map(|i| i - 1), value));
        }
        Ok(CurvatureData::from_components(n, &comps)?)
    }

    /// The document describing `s` (real parts only in exact mode).
    pub fn from_scenario<C: Coeff>(s: &Scenario<C>) -> Self {
        ScenarioDoc {
            schema: SCHEMA_VERSION,
            m: s.m,
            mode: C::KIND,
            field: FieldDoc {
                value: literals(&s.v_field.value),
                jacobian: s
                    .v_field
                    .jacobian
                    .iter()
                    .map(|row| row.iter().map(Literal::from_coeff).collect())
                    .collect(),
            },
            x: literals(&s.x_field),
            u: literals(&s.u),
            v: literals(&s.v),
            w: literals(&s.w),
            curvature: s.curvature.as_ref().map(|c| {
                c.nonzero_components()
                    .into_iter()
                    .filter(|(i, _)| i[0] < i[1] && i[2] < i[3] && (i[0], i[1]) <= (i[2], i[3]))
                    .map(|(i, r)| CurvatureEntry {
                        indices: i.map(|x| x + 1),
                        value: match C::KIND {
                            ScalarKind::Exact => Literal::Text(format_ratio(&r)),
                            ScalarKind::Float => Literal::Number(r.to_f64().unwrap_or(f64::NAN)),
                        },
                    })
                    .collect()
            }),
            seed: s.seed,
            perturb: None,
        }
    }
}
