//! The three subcommands. Each returns Ok or a [`CliError`] whose exit
//! code the binary propagates.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use purify_core::engine::{iterate, predict_asymptotics, AsymptoticPrediction, IterationPlan};
use purify_core::linalg::{c64, ComplexMatrix, ComplexVector};
use purify_core::models::run_duality;
use purify_core::models::ModelConfig;
use purify_core::optimizer::{combined_score, refine, sweep, Axis, AxisScale, SweepGrid};
use purify_core::quantum::{BellState, DensityMatrix};
use purify_core::Tolerances;

use crate::error::{map_core, CliError};
use crate::output::{self, FileFormat, SweepDoc, SweepRow};
use crate::scenario::{self, InitialSpec, ScaleFile, ScenarioFile, TargetSpec};

pub struct OutputOpts {
    pub path_flag: Option<PathBuf>,
    pub format_flag: Option<FileFormat>,
    pub seed: u64,
}

fn read_scenario(path: &Path) -> Result<ScenarioFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    scenario::parse(&text)
}

/// Flag > scenario > default, then the `PURIFY_OUTPUT_DIR` override for
/// relative paths.
fn effective_output(
    sc: &ScenarioFile,
    opts: &OutputOpts,
    default_stem: &str,
) -> (PathBuf, FileFormat) {
    let section = sc.output.clone().unwrap_or_default();
    let format = opts
        .format_flag
        .or(section.format)
        .unwrap_or(FileFormat::Csv);
    let path = opts
        .path_flag
        .clone()
        .or_else(|| section.path.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("{default_stem}.{}", format.extension())));
    let path = match std::env::var_os("PURIFY_OUTPUT_DIR") {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    };
    (path, format)
}

fn write_output(path: &Path, body: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, body)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

fn resolve_target(
    spec: &TargetSpec,
    pred: &AsymptoticPrediction,
    dim: usize,
) -> Result<ComplexVector, CliError> {
    match spec {
        TargetSpec::Named(name) if name == "auto" => Ok(pred.target.clone()),
        TargetSpec::Named(name) => {
            let bell = match name.as_str() {
                "phi_plus" => BellState::PhiPlus,
                "phi_minus" => BellState::PhiMinus,
                "psi_plus" => BellState::PsiPlus,
                "psi_minus" => BellState::PsiMinus,
                other => {
                    return Err(CliError::Config(format!(
                        "unknown target {other:?} (expected auto, a Bell state name, or amplitudes)"
                    )))
                }
            };
            if dim != 4 {
                return Err(CliError::Config(
                    "Bell-state targets need a two-qubit surviving register".into(),
                ));
            }
            Ok(bell.vector())
        }
        TargetSpec::Amplitudes(amps) => {
            if amps.len() != dim {
                return Err(CliError::Config(format!(
                    "target has {} amplitudes, the surviving register has dimension {dim}",
                    amps.len()
                )));
            }
            Ok(ComplexVector::from_fn(dim, |i| c64(amps[i][0], amps[i][1])))
        }
    }
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let gauss = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u.ln()).sqrt() * v.cos()
    };
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = c64(gauss(rng), gauss(rng));
        }
    }
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(c64(1.0 / tr, 0.0))).expect("Ginibre state is valid")
}

fn fmt_amplitudes(v: &ComplexVector) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn cmd_run(scenario_path: &Path, opts: &OutputOpts) -> Result<(), CliError> {
    let sc = read_scenario(scenario_path)?;
    let kind = scenario::model_kind(&sc)?;
    let run = sc
        .run
        .clone()
        .ok_or_else(|| CliError::Config("scenario has no run section".into()))?;
    if run.n_max == 0 {
        return Err(CliError::Config("run.n_max must be at least 1".into()));
    }

    let config = ModelConfig::new(kind);
    let dim = config.target_dim();
    let rho0 = match run.initial {
        InitialSpec::MaximallyMixed => DensityMatrix::maximally_mixed(dim),
        InitialSpec::Random => random_density(&mut ChaCha8Rng::seed_from_u64(opts.seed), dim),
    };
    let tol = Tolerances::DEFAULT;
    let v = config.projected_v().map_err(map_core)?;
    let pred = predict_asymptotics(&v, &rho0, &tol).map_err(map_core)?;
    let target = resolve_target(&run.target, &pred, dim)?;
    let plan = IterationPlan {
        n_max: run.n_max,
        record_states: run.record_states,
    };
    let traj = iterate(&v, &rho0, &target, &plan, &tol).map_err(map_core)?;

    let (path, format) = effective_output(&sc, opts, "trajectory");
    let body = match format {
        FileFormat::Csv => output::trajectory_csv(&traj),
        FileFormat::Json => output::trajectory_json(&traj, &pred),
    };
    write_output(&path, &body)?;

    println!("|lambda0| = {:.12}", pred.lambda0.norm());
    println!("gap ratio = {:.12}", pred.gap_ratio);
    println!("yield prefactor = {:.12}", pred.yield_prefactor);
    println!("target = {}", fmt_amplitudes(&pred.target));
    println!("wrote {} ({} rows)", path.display(), traj.steps.len());

    match traj.truncated_at {
        Some(step) => Err(CliError::Underflow(step)),
        None => Ok(()),
    }
}

pub fn cmd_sweep(scenario_path: &Path, opts: &OutputOpts) -> Result<(), CliError> {
    let sc = read_scenario(scenario_path)?;
    let kind = scenario::model_kind(&sc)?;
    let section = sc
        .sweep
        .clone()
        .ok_or_else(|| CliError::Config("scenario has no sweep section".into()))?;

    let config = ModelConfig::new(kind);
    let grid = SweepGrid {
        axes: section
            .axes
            .iter()
            .map(|a| Axis {
                param: a.param.clone(),
                min: a.min.0,
                max: a.max.0,
                n_points: a.n_points,
                scale: match a.scale {
                    ScaleFile::Linear => AxisScale::Linear,
                    ScaleFile::Log => AxisScale::Log,
                },
            })
            .collect(),
    };
    let tol = Tolerances::DEFAULT;
    let points = sweep(&config, &grid, section.gap_weight, &tol).map_err(map_core)?;

    let prefactor_at = |coords: &[f64]| -> Option<f64> {
        let mut c = config.clone();
        for (axis, &x) in grid.axes.iter().zip(coords) {
            c.set_param(&axis.param, x).ok()?;
        }
        let v = c.projected_v().ok()?;
        let rho0 = DensityMatrix::maximally_mixed(c.target_dim());
        predict_asymptotics(&v, &rho0, &tol)
            .ok()
            .map(|p| p.yield_prefactor)
    };

    let mut rows: Vec<SweepRow> = points
        .iter()
        .map(|p| SweepRow {
            coords: p.coords.clone(),
            lambda0_mag: p.score.as_ref().map(|s| s.lambda0_mag),
            gap_ratio: p.score.as_ref().map(|s| s.gap_ratio),
            loss: p.score.as_ref().map(|s| s.loss),
            yield_prefactor: p.score.as_ref().and_then(|_| prefactor_at(&p.coords)),
            error: p.error.map(|e| e.to_string()),
            refined: false,
        })
        .collect();

    // Polish the best grid point inside the axis bounds and append it as
    // a flagged row. Points arrive sorted, so the head is the best one.
    let best = points.first().filter(|p| p.score.is_some());
    if let Some(best) = best {
        let bounds: Vec<(f64, f64)> = grid.axes.iter().map(|a| (a.min, a.max)).collect();
        let mut objective = |coords: &[f64]| -> Result<f64, purify_core::Error> {
            let mut c = config.clone();
            for (axis, &x) in grid.axes.iter().zip(coords) {
                c.set_param(&axis.param, x)?;
            }
            Ok(combined_score(&c, section.gap_weight, &tol)?.combined)
        };
        let (coords, _) = refine(&mut objective, &best.coords, &bounds, &tol).map_err(map_core)?;
        let mut refined_config = config.clone();
        for (axis, &x) in grid.axes.iter().zip(&coords) {
            refined_config
                .set_param(&axis.param, x)
                .map_err(map_core)?;
        }
        let score = combined_score(&refined_config, section.gap_weight, &tol).map_err(map_core)?;
        rows.push(SweepRow {
            yield_prefactor: prefactor_at(&coords),
            coords,
            lambda0_mag: Some(score.lambda0_mag),
            gap_ratio: Some(score.gap_ratio),
            loss: Some(score.loss),
            error: None,
            refined: true,
        });
    }

    let doc = SweepDoc {
        axes: grid.axes.iter().map(|a| a.param.clone()).collect(),
        gap_weight: section.gap_weight,
        points: rows,
    };
    let (path, format) = effective_output(&sc, opts, "sweep");
    let body = match format {
        FileFormat::Csv => output::sweep_csv(&doc),
        FileFormat::Json => output::sweep_json(&doc),
    };
    write_output(&path, &body)?;

    match doc.points.iter().find(|r| r.lambda0_mag.is_some()) {
        Some(bestrow) => println!(
            "best grid point at ({}) with |lambda0| = {:.12}",
            bestrow
                .coords
                .iter()
                .map(|x| format!("{x:.6}"))
                .collect::<Vec<_>>()
                .join(", "),
            bestrow.lambda0_mag.unwrap_or(f64::NAN),
        ),
        None => println!("no grid point produced a valid score"),
    }
    println!("wrote {} ({} rows)", path.display(), doc.points.len());
    Ok(())
}

pub fn cmd_verify(seed: u64) -> Result<(), CliError> {
    const POINTS: usize = 64;
    let rows = run_duality(POINTS, seed, None).map_err(map_core)?;
    println!(
        "{:<18} {:>7} {:>13} {:>10} {:>7}",
        "family", "points", "max_residual", "tolerance", "status"
    );
    for r in &rows {
        println!(
            "{:<18} {:>7} {:>13.3e} {:>10.1e} {:>7}",
            r.family.name(),
            r.points,
            r.max_residual,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    if rows.iter().all(|r| r.pass) {
        println!("all {} closed forms agree with the numeric route", rows.len());
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
