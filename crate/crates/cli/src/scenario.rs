//! Scenario files: versioned JSON with model parameters, run plan, and
//! optional sweep and output sections.
//!
//! Unknown keys are rejected at every level. Numeric fields accept either
//! a plain JSON number or a π-expression string like `"pi/2"`, `"2pi"`,
//! or `"-3pi/4"`; angles are radians, energies and times natural units.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use purify_core::linalg::c64;
use purify_core::models::{MediatorParams, ModelKind, SuccessiveParams, TwoQubitParams};
use purify_core::quantum::ProjectorSpec;

use crate::error::CliError;

/// An f64 that deserializes from a number or a π-expression string.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Real(pub f64);

fn parse_pi_expr(s: &str) -> Option<f64> {
    let lower = s.trim().to_ascii_lowercase();
    let (neg, body) = match lower.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, lower.as_str()),
    };
    let at = body.find("pi")?;
    let (coef_s, tail) = body.split_at(at);
    let tail = &tail[2..];
    let coef_s = coef_s.trim();
    let coef = if coef_s.is_empty() {
        1.0
    } else {
        coef_s.parse::<f64>().ok()?
    };
    let tail = tail.trim();
    let div = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/')?.trim().parse::<f64>().ok()?;
        if d == 0.0 {
            return None;
        }
        d
    };
    let v = coef * std::f64::consts::PI / div;
    Some(if neg { -v } else { v })
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RealVisitor;
        impl<'de> Visitor<'de> for RealVisitor {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a number or a pi-expression string like \"pi/2\"")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<Real, E> {
                Ok(Real(x))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> Result<Real, E> {
                Ok(Real(x as f64))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<Real, E> {
                Ok(Real(x as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Real, E> {
                parse_pi_expr(s)
                    .map(Real)
                    .ok_or_else(|| E::custom(format!("cannot parse {s:?} as a pi expression")))
            }
        }
        d.deserialize_any(RealVisitor)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    /// "two_qubit" | "mediator" | "successive".
    pub model: String,
    /// Model-specific table, validated against the model named above.
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n_max: usize,
    #[serde(default)]
    pub record_states: bool,
    #[serde(default)]
    pub target: TargetSpec,
    #[serde(default)]
    pub initial: InitialSpec,
}

/// What fidelities are measured against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    /// "auto" (the predicted |u₀)) or a Bell-state name.
    Named(String),
    /// Explicit state amplitudes as [re, im] pairs.
    Amplitudes(Vec<[f64; 2]>),
}

impl Default for TargetSpec {
    fn default() -> Self {
        TargetSpec::Named("auto".into())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialSpec {
    #[default]
    MaximallyMixed,
    /// Ginibre-induced random density matrix, drawn from the --seed RNG.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<AxisFile>,
    /// Weight of the squared gap ratio in the combined objective.
    #[serde(default)]
    pub gap_weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisFile {
    pub param: String,
    pub min: Real,
    pub max: Real,
    pub n_points: usize,
    #[serde(default)]
    pub scale: ScaleFile,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleFile {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<crate::output::FileFormat>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoQubitFile {
    omega_a: Real,
    omega_b: Real,
    g: Real,
    h: Real,
    tau: Real,
    #[serde(default)]
    theta: Real,
    #[serde(default)]
    phi: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MediatorFile {
    omega_ab: Real,
    omega_c: Real,
    g: Real,
    h: Real,
    tau: Real,
    #[serde(default = "one")]
    alpha_re: Real,
    #[serde(default)]
    alpha_im: Real,
    #[serde(default)]
    beta_re: Real,
    #[serde(default)]
    beta_im: Real,
}

fn one() -> Real {
    Real(1.0)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuccessiveFile {
    omega: Real,
    g_a: Real,
    g_b: Real,
    t_a: Real,
    tau_a: Real,
    t_b: Real,
    tau_b: Real,
}

pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
    let sc: ScenarioFile =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("scenario: {e}")))?;
    if sc.version != 1 {
        return Err(CliError::Config(format!(
            "unsupported scenario version {} (expected 1)",
            sc.version
        )));
    }
    Ok(sc)
}

/// Second-stage parse of the params table against the named model.
pub fn model_kind(sc: &ScenarioFile) -> Result<ModelKind, CliError> {
    let table = sc.params.clone();
    match sc.model.as_str() {
        "two_qubit" => {
            let p: TwoQubitFile = serde_json::from_value(table)
                .map_err(|e| CliError::Config(format!("params: {e}")))?;
            Ok(ModelKind::TwoQubit(TwoQubitParams {
                omega_a: p.omega_a.0,
                omega_b: p.omega_b.0,
                g: p.g.0,
                h: p.h.0,
                tau: p.tau.0,
                projector: ProjectorSpec::Angles {
                    theta: p.theta.0,
                    phi: p.phi.0,
                },
            }))
        }
        "mediator" => {
            let p: MediatorFile = serde_json::from_value(table)
                .map_err(|e| CliError::Config(format!("params: {e}")))?;
            Ok(ModelKind::Mediator(MediatorParams {
                omega_ab: p.omega_ab.0,
                omega_c: p.omega_c.0,
                g: p.g.0,
                h: p.h.0,
                tau: p.tau.0,
                alpha: c64(p.alpha_re.0, p.alpha_im.0),
                beta: c64(p.beta_re.0, p.beta_im.0),
            }))
        }
        "successive" => {
            let p: SuccessiveFile = serde_json::from_value(table)
                .map_err(|e| CliError::Config(format!("params: {e}")))?;
            Ok(ModelKind::Successive(SuccessiveParams {
                omega: p.omega.0,
                g_a: p.g_a.0,
                g_b: p.g_b.0,
                t_a: p.t_a.0,
                tau_a: p.tau_a.0,
                t_b: p.t_b.0,
                tau_b: p.tau_b.0,
            }))
        }
        other => Err(CliError::Config(format!(
            "unknown model {other:?} (expected two_qubit, mediator, or successive)"
        ))),
    }
}
