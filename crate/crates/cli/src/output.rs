//! Deterministic table writers.
//!
//! CSV carries 17 significant digits so a double survives the round trip;
//! JSON leans on serde's shortest-exact float encoding. Both are stable
//! byte-for-byte for a given scenario and seed.

use purify_core::engine::{AsymptoticPrediction, PurificationTrajectory};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FileFormat::Csv => "csv",
            FileFormat::Json => "json",
        }
    }
}

fn cell(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_csv(traj: &PurificationTrajectory) -> String {
    let dim = traj
        .steps
        .first()
        .and_then(|s| s.state.as_ref())
        .map(|d| d.dim());
    let mut out = String::from("n,yield,fidelity,purity");
    if let Some(d) = dim {
        for i in 0..d {
            for j in 0..d {
                out.push_str(&format!(",rho_{i}_{j}_re,rho_{i}_{j}_im"));
            }
        }
    }
    out.push('\n');
    for s in &traj.steps {
        out.push_str(&format!(
            "{},{},{},{}",
            s.n,
            cell(s.probability),
            cell(s.fidelity),
            cell(s.purity)
        ));
        if let (Some(d), Some(state)) = (dim, s.state.as_ref()) {
            for i in 0..d {
                for j in 0..d {
                    let z = state.mat()[(i, j)];
                    out.push_str(&format!(",{},{}", cell(z.re), cell(z.im)));
                }
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct PredictionDoc {
    lambda0: [f64; 2],
    lambda0_mag: f64,
    gap_ratio: f64,
    yield_prefactor: f64,
    target: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct StepDoc {
    n: usize,
    #[serde(rename = "yield")]
    probability: f64,
    fidelity: f64,
    purity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct TrajectoryDoc {
    prediction: PredictionDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated_at: Option<usize>,
    steps: Vec<StepDoc>,
}

pub fn trajectory_json(traj: &PurificationTrajectory, pred: &AsymptoticPrediction) -> String {
    let doc = TrajectoryDoc {
        prediction: PredictionDoc {
            lambda0: [pred.lambda0.re, pred.lambda0.im],
            lambda0_mag: pred.lambda0.norm(),
            gap_ratio: pred.gap_ratio,
            yield_prefactor: pred.yield_prefactor,
            target: pred.target.iter().map(|z| [z.re, z.im]).collect(),
        },
        truncated_at: traj.truncated_at,
        steps: traj
            .steps
            .iter()
            .map(|s| StepDoc {
                n: s.n,
                probability: s.probability,
                fidelity: s.fidelity,
                purity: s.purity,
                rho: s.state.as_ref().map(|dm| {
                    let m = dm.mat();
                    let d = m.dim();
                    let mut flat = Vec::with_capacity(d * d);
                    for i in 0..d {
                        for j in 0..d {
                            let z = m[(i, j)];
                            flat.push([z.re, z.im]);
                        }
                    }
                    flat
                }),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}

/// One sweep table row; grid points first, refined optima flagged last.
#[derive(Serialize)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub lambda0_mag: Option<f64>,
    pub gap_ratio: Option<f64>,
    pub loss: Option<f64>,
    pub yield_prefactor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub refined: bool,
}

#[derive(Serialize)]
pub struct SweepDoc {
    pub axes: Vec<String>,
    pub gap_weight: f64,
    pub points: Vec<SweepRow>,
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

pub fn sweep_csv(doc: &SweepDoc) -> String {
    let mut out = doc.axes.join(",");
    out.push_str(",lambda0_mag,gap_ratio,loss,yield_prefactor,refined\n");
    for row in &doc.points {
        let coords: Vec<String> = row.coords.iter().map(|&x| cell(x)).collect();
        out.push_str(&coords.join(","));
        out.push_str(&format!(
            ",{},{},{},{},{}\n",
            opt_cell(row.lambda0_mag),
            opt_cell(row.gap_ratio),
            opt_cell(row.loss),
            opt_cell(row.yield_prefactor),
            u8::from(row.refined)
        ));
    }
    out
}

pub fn sweep_json(doc: &SweepDoc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("plain data serializes");
    text.push('\n');
    text
}
