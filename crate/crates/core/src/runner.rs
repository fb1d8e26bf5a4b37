//! Scenario execution: steps every roster estimator on shared signal
//! evaluations and writes the trajectory, summary and metadata files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::baselines::{ExcitationPowerEstimator, SignedPowerGradient};
use crate::ct::CtEstimator;
use crate::drem::{mix, DelayStack};
use crate::dt::DtEstimator;
use crate::error::{Error, Result};
use crate::lre::{make_vector_sample, ScalarLre};
use crate::metrics::{report, write_summary_csv, ConvergenceReport};
use crate::scalar::Scalar;
use crate::scenario::{CtVariant, DtVariant, EstimatorKind, Mode, Plant, RosterEntry, Scenario};
use crate::table::TrajectoryTable;

enum Instance<T> {
    Ct(CtVariant, CtEstimator<T>),
    Alg1(SignedPowerGradient<T>),
    Alg3(ExcitationPowerEstimator<T>),
    Dt(DtVariant, Vec<DtEstimator<T>>),
}

impl<T: Scalar> Instance<T> {
    fn build(entry: &RosterEntry<T>, step: T, q: usize) -> Result<Self> {
        Ok(match &entry.kind {
            EstimatorKind::Ct { variant, gains, theta0 } => {
                Instance::Ct(*variant, CtEstimator::new(*gains, step, *theta0)?)
            }
            EstimatorKind::Alg1 { gains, theta0 } => Instance::Alg1(SignedPowerGradient::new(*gains, step, *theta0)?),
            EstimatorKind::Alg3 { gains } => Instance::Alg3(ExcitationPowerEstimator::new(*gains, step)?),
            EstimatorKind::Dt { variant, gains, theta0 } => {
                Instance::Dt(*variant, (0..q).map(|_| DtEstimator::new(*gains, *theta0)).collect())
            }
        })
    }

    fn diagnostic_names(&self, label: &str) -> Vec<String> {
        let suffixes: &[&str] = match self {
            Instance::Ct(CtVariant::Fct, _) | Instance::Dt(DtVariant::Fct, _) => &["w", "w_c", "ie"],
            Instance::Ct(CtVariant::FctAp, _) => &["w_d", "w_d_c", "ie_window"],
            Instance::Dt(DtVariant::FctAp, _) => &["w_d", "w_d_c", "ie"],
            _ => &[],
        };
        suffixes.iter().map(|s| format!("{label}_{s}")).collect()
    }

    fn push_estimates(&self, row: &mut Vec<T>) {
        match self {
            Instance::Ct(variant, est) => {
                let o = est.outputs();
                row.push(match (variant, o.window) {
                    (CtVariant::Gradient, _) => o.theta_grad,
                    (CtVariant::Fct, _) => o.theta_fct,
                    (CtVariant::FctAp, Some(win)) => win.theta_fct_d,
                    (CtVariant::FctAp, None) => unreachable!("fct_ap gains always carry a window"),
                });
            }
            Instance::Alg1(est) => row.push(est.theta_hat()),
            Instance::Alg3(est) => row.push(est.theta_hat()),
            Instance::Dt(variant, ests) => row.extend(ests.iter().map(|e| match variant {
                DtVariant::Gradient => e.theta_hat(),
                DtVariant::Fct => e.fct(),
                DtVariant::FctAp => e.fct_ap(),
            })),
        }
    }

    fn push_diagnostics(&self, row: &mut Vec<T>) {
        let flag = |b: bool| if b { T::one() } else { T::zero() };
        match self {
            Instance::Ct(CtVariant::Fct, est) => {
                let o = est.outputs();
                row.extend([o.w, o.w_c, flag(o.ie_classic_met)]);
            }
            Instance::Ct(CtVariant::FctAp, est) => {
                if let Some(win) = est.outputs().window {
                    row.extend([win.w_d, win.w_d_c, flag(win.ie_window_met)]);
                }
            }
            // the weights depend on Δ only, so the first component speaks for all
            Instance::Dt(DtVariant::Fct, ests) => {
                let o = ests[0].outputs();
                row.extend([o.w, o.w_c, flag(o.ie_met)]);
            }
            Instance::Dt(DtVariant::FctAp, ests) => {
                let o = ests[0].outputs();
                row.extend([o.w_d, o.w_d_c, flag(o.w_d < ests[0].gains().rho)]);
            }
            _ => {}
        }
    }

    fn step_ct<L: ScalarLre<T>>(&mut self, lre: &L) {
        match self {
            Instance::Ct(_, est) => est.step(lre),
            Instance::Alg1(est) => est.step(lre),
            Instance::Alg3(est) => est.step(lre),
            Instance::Dt(..) => unreachable!("validated scenarios never mix modes"),
        }
    }

    fn step_dt(&mut self, delta: T, y_next: &[T]) {
        if let Instance::Dt(_, ests) = self {
            for (est, &y) in ests.iter_mut().zip(y_next) {
                est.step(delta, y);
            }
        }
    }
}

fn indexed(name: &str, q: usize) -> Vec<String> {
    if q == 1 {
        vec![name.to_string()]
    } else {
        (1..=q).map(|i| format!("{name}_{i}")).collect()
    }
}

/// Column names of the trajectory table, in emission order.
pub fn trajectory_header<T: Scalar>(scn: &Scenario<T>) -> Result<Vec<String>> {
    let q = scn.plant.dim();
    let instances = instantiate(scn)?;
    let mut header: Vec<String> = vec!["time".into(), "delta".into(), "y_meas".into()];
    header.extend(indexed("theta_true", q));
    for entry in &scn.roster {
        header.extend(indexed(&entry.label, q));
    }
    for (entry, inst) in scn.roster.iter().zip(&instances) {
        header.extend(inst.diagnostic_names(&entry.label));
    }
    Ok(header)
}

fn instantiate<T: Scalar>(scn: &Scenario<T>) -> Result<Vec<Instance<T>>> {
    let q = scn.plant.dim();
    scn.roster.iter().map(|e| Instance::build(e, scn.step, q)).collect()
}

/// Runs the scenario in memory and returns the decimated trajectory.
pub fn simulate<T: Scalar>(scn: &Scenario<T>) -> Result<TrajectoryTable<T>> {
    let mut table = TrajectoryTable::new(trajectory_header(scn)?)?;
    let mut instances = instantiate(scn)?;
    let n_steps = scn.total_steps();
    let h = scn.step;
    let width = table.header().len();
    let mut row = Vec::with_capacity(width);

    let mut emit = |n: usize, delta: T, y: T, theta: &[T], instances: &[Instance<T>]| -> Result<()> {
        if !n.is_multiple_of(scn.decimation) {
            return Ok(());
        }
        row.clear();
        row.extend([T::from_count(n) * h, delta, y]);
        row.extend_from_slice(theta);
        for inst in instances {
            inst.push_estimates(&mut row);
        }
        for inst in instances {
            inst.push_diagnostics(&mut row);
        }
        table.push_row(&row)
    };

    match (&scn.plant, scn.mode) {
        (Plant::Scalar(src), Mode::Ct) => {
            for n in 0..=n_steps {
                let t = T::from_count(n) * h;
                let s = src.sample(t);
                emit(n, s.delta, s.y_meas, &[src.theta(t)], &instances)?;
                if n < n_steps {
                    for inst in instances.iter_mut() {
                        inst.step_ct(src);
                    }
                }
            }
        }
        (Plant::Scalar(src), Mode::Dt) => {
            // the sample generated at k pairs Δ(k) with the measurement Y(k+1)
            for n in 0..=n_steps {
                let t = T::from_count(n) * h;
                let s = src.sample(t);
                emit(n, s.delta, s.y_meas, &[src.theta(t)], &instances)?;
                if n < n_steps {
                    for inst in instances.iter_mut() {
                        inst.step_dt(s.delta, &[s.y_meas]);
                    }
                }
            }
        }
        (Plant::Vector { phi, lags, profile, noise }, _) => {
            let mut stack = DelayStack::new(profile.dim(), lags.clone())?;
            for n in 0..=n_steps {
                let t = T::from_count(n) * h;
                let mut sample = make_vector_sample(phi, profile, t)?;
                if let Some(noise) = noise {
                    sample.y = sample.y + noise.eval(t);
                }
                let y_raw = sample.y;
                let mixed = mix(&stack.push(sample)?)?;
                emit(n, mixed.delta, y_raw, &profile.eval(t), &instances)?;
                if n < n_steps {
                    for inst in instances.iter_mut() {
                        inst.step_dt(mixed.delta, &mixed.y_mixed);
                    }
                }
            }
        }
    }
    Ok(table)
}

/// Convergence report for every estimate column.
pub fn summarize<T: Scalar>(scn: &Scenario<T>, table: &TrajectoryTable<T>) -> Result<Vec<ConvergenceReport<T>>> {
    let profile = scn.plant.profile();
    let mut out = Vec::new();
    for entry in &scn.roster {
        for (i, column) in indexed(&entry.label, profile.dim()).iter().enumerate() {
            out.push(report(table, column, profile.component(i), &scn.criterion, scn.horizon)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct RunMeta<'a> {
    name: &'a str,
    mode: &'a str,
    integrator: &'a str,
    excitation_quadrature: &'a str,
    step: f64,
    horizon: f64,
    decimation: usize,
    rows: usize,
    dt_sample_pairing: Option<&'a str>,
    ignored_gains: BTreeMap<String, BTreeMap<&'a str, f64>>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome<T> {
    pub table: TrajectoryTable<T>,
    pub reports: Vec<ConvergenceReport<T>>,
    pub trajectory_path: PathBuf,
    pub summary_path: PathBuf,
    pub meta_path: PathBuf,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Simulates the scenario and writes `<name>_trajectory.csv`,
/// `<name>_summary.csv` and `<name>_meta.toml` into `out_dir`.
pub fn run_scenario<T: Scalar>(scn: &Scenario<T>, out_dir: &Path) -> Result<RunOutcome<T>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let table = simulate(scn)?;
    let reports = summarize(scn, &table)?;

    let trajectory_path = out_dir.join(format!("{}_trajectory.csv", scn.name));
    table.write_csv(create(&trajectory_path)?).map_err(|e| Error::io(&trajectory_path, e))?;

    let summary_path = out_dir.join(format!("{}_summary.csv", scn.name));
    write_summary_csv(&reports, create(&summary_path)?).map_err(|e| Error::io(&summary_path, e))?;

    let ignored_gains = scn
        .config
        .estimators
        .iter()
        .zip(&scn.roster)
        .filter_map(|(cfg, entry)| {
            let ignored = cfg.ignored_gains();
            (!ignored.is_empty()).then(|| (entry.label.clone(), ignored.into_iter().collect()))
        })
        .collect();
    let (mode, integrator, quadrature, pairing) = match scn.mode {
        Mode::Ct => ("ct", "rk4", "simpson", None),
        Mode::Dt => ("dt", "none", "none", Some("delta(k) with y sampled at k as Y(k+1)")),
    };
    let meta = RunMeta {
        name: &scn.name,
        mode,
        integrator,
        excitation_quadrature: quadrature,
        step: scn.config.step,
        horizon: scn.config.horizon,
        decimation: scn.decimation,
        rows: table.len(),
        dt_sample_pairing: pairing,
        ignored_gains,
    };
    let meta_path = out_dir.join(format!("{}_meta.toml", scn.name));
    let text = toml::to_string(&meta).expect("metadata serializes");
    std::fs::write(&meta_path, text).map_err(|e| Error::io(&meta_path, e))?;

    Ok(RunOutcome { table, reports, trajectory_path, summary_path, meta_path })
}
