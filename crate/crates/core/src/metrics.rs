//! Post-run diagnostics on the emitted output grid.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signals::Piecewise;
use crate::table::TrajectoryTable;

/// Band and dwell used for convergence detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCriterion<T> {
    pub epsilon: T,
    pub hold: T,
    pub search_from: T,
}

impl<T: Scalar> ConvergenceCriterion<T> {
    /// `ε = 1e−3`, 0.5 s dwell.
    pub fn continuous_default() -> Self {
        Self { epsilon: T::lit(1e-3), hold: T::lit(0.5), search_from: T::zero() }
    }

    /// `ε = 1e−3`, two-sample dwell.
    pub fn discrete_default(ts: T) -> Self {
        Self { epsilon: T::lit(1e-3), hold: T::lit(2.0) * ts, search_from: T::zero() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRms<T> {
    pub t0: T,
    pub t1: T,
    pub rms: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub estimator: String,
    pub epsilon: T,
    pub hold: T,
    pub hit_time: Option<T>,
    pub intervals: Vec<IntervalRms<T>>,
}

// slack for comparing grid times that were produced as n·h
fn time_slack<T: Scalar>(times: &[T]) -> T {
    let span = times.last().copied().unwrap_or(T::one()).abs().max(T::one());
    span * T::lit(1e-9)
}

/// Earliest output time `t ≥ search_from` after which `|θ̂ − θ|` stays within
/// `epsilon` for the whole of `[t, t + hold]`; `None` if no such time exists
/// in the record.
pub fn convergence_time<T: Scalar>(
    table: &TrajectoryTable<T>,
    column: &str,
    target: &Piecewise<T>,
    criterion: &ConvergenceCriterion<T>,
) -> Result<Option<T>> {
    let est = table.column(column)?;
    let times = table.time();
    if times.is_empty() {
        return Ok(None);
    }
    let slack = time_slack(times);
    let inside: Vec<bool> = times
        .iter()
        .zip(est)
        .map(|(&t, &v)| (v - target.eval(t)).abs() <= criterion.epsilon)
        .collect();
    // run_end[i]: time of the last sample in the in-band run starting at i
    let mut run_end = vec![None; times.len()];
    for i in (0..times.len()).rev() {
        if inside[i] {
            run_end[i] = Some(match run_end.get(i + 1).copied().flatten() {
                Some(end) => end,
                None => times[i],
            });
        }
    }
    for (i, &t) in times.iter().enumerate() {
        if t + slack < criterion.search_from {
            continue;
        }
        if let Some(end) = run_end[i] {
            if end + slack >= t + criterion.hold {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// Root-mean-square of `θ̂ − θ` over the output samples with `t0 ≤ t < t1`.
pub fn interval_rms<T: Scalar>(
    table: &TrajectoryTable<T>,
    column: &str,
    target: &Piecewise<T>,
    t0: T,
    t1: T,
) -> Result<T> {
    let est = table.column(column)?;
    let slack = time_slack(table.time());
    let (sum, n) = table
        .time()
        .iter()
        .zip(est)
        .filter(|(&t, _)| t + slack >= t0 && t + slack < t1)
        .fold((T::zero(), 0usize), |(s, n), (&t, &v)| {
            let e = v - target.eval(t);
            (s + e * e, n + 1)
        });
    if n == 0 {
        return Err(Error::EmptyInterval { t0: t0.to_f64_lossy(), t1: t1.to_f64_lossy() });
    }
    Ok((sum / T::from_count(n)).sqrt())
}

/// Splits `[0, horizon]` at the profile's breakpoints.
pub fn profile_intervals<T: Scalar>(target: &Piecewise<T>, horizon: T) -> Vec<(T, T)> {
    let mut edges = vec![T::zero()];
    edges.extend(target.breakpoints().filter(|&b| b < horizon));
    edges.push(horizon + horizon * T::lit(1e-9) + T::lit(1e-12));
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

pub fn report<T: Scalar>(
    table: &TrajectoryTable<T>,
    column: &str,
    target: &Piecewise<T>,
    criterion: &ConvergenceCriterion<T>,
    horizon: T,
) -> Result<ConvergenceReport<T>> {
    let hit_time = convergence_time(table, column, target, criterion)?;
    let intervals = profile_intervals(target, horizon)
        .into_iter()
        .filter_map(|(t0, t1)| match interval_rms(table, column, target, t0, t1) {
            Ok(rms) => Some(Ok(IntervalRms { t0, t1: t1.min(horizon), rms })),
            Err(Error::EmptyInterval { .. }) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        estimator: column.to_string(),
        epsilon: criterion.epsilon,
        hold: criterion.hold,
        hit_time,
        intervals,
    })
}

/// One row per (estimator, interval).
pub fn write_summary_csv<T: Scalar, W: Write>(reports: &[ConvergenceReport<T>], mut out: W) -> std::io::Result<()> {
    writeln!(out, "estimator,epsilon,hold,hit_time,t0,t1,rms")?;
    for r in reports {
        let hit = r.hit_time.map(|t| format!("{t:?}")).unwrap_or_default();
        for iv in &r.intervals {
            writeln!(
                out,
                "{},{:?},{:?},{},{:?},{:?},{:?}",
                r.estimator, r.epsilon, r.hold, hit, iv.t0, iv.t1, iv.rms
            )?;
        }
    }
    Ok(())
}
