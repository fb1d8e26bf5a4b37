//! gnuplot scripts for trajectory tables.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{Mode, Scenario};
use crate::table::TrajectoryTable;

/// What to draw: estimate columns against the true-parameter columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub name: String,
    /// Discrete-time data is drawn with point markers, continuous-time with lines.
    pub discrete: bool,
    pub truths: Vec<String>,
    pub estimates: Vec<String>,
}

impl PlotSpec {
    pub fn from_scenario<T: Scalar>(scn: &Scenario<T>) -> Self {
        let q = scn.plant.dim();
        let cols = |base: &str| -> Vec<String> {
            if q == 1 {
                vec![base.to_string()]
            } else {
                (1..=q).map(|i| format!("{base}_{i}")).collect()
            }
        };
        Self {
            name: scn.name.clone(),
            discrete: scn.mode == Mode::Dt,
            truths: cols("theta_true"),
            estimates: scn.roster.iter().flat_map(|e| cols(&e.label)).collect(),
        }
    }

    pub fn script_name(&self) -> String {
        format!("{}.gp", self.name)
    }

    /// Renders the script; every referenced column must exist in `table`.
    pub fn render<T: Scalar>(&self, table: &TrajectoryTable<T>) -> Result<String> {
        if self.estimates.is_empty() {
            return Err(Error::EmptyRoster);
        }
        if table.is_empty() {
            return Err(Error::validation("table", "nothing to plot"));
        }
        for col in self.truths.iter().chain(&self.estimates) {
            table.column(col)?;
        }
        let style = if self.discrete { "points pt 7 ps 0.5" } else { "lines lw 1.5" };
        let csv = format!("{}_trajectory.csv", self.name);

        let mut s = String::new();
        let _ = writeln!(s, "# {}: estimates against the true parameter", self.name);
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set terminal pngcairo size 1000,600 noenhanced");
        let _ = writeln!(s, "set output '{}.png'", self.name);
        let _ = writeln!(s, "set xlabel 't [s]'");
        let _ = writeln!(s, "set ylabel 'theta'");
        let _ = writeln!(s, "set key outside right");
        let _ = writeln!(s, "set grid");
        let mut curves: Vec<String> = self
            .truths
            .iter()
            .map(|c| format!("'{csv}' using 'time':'{c}' with lines dt 2 lw 2 lc 'black' title '{c}'"))
            .collect();
        curves.extend(
            self.estimates
                .iter()
                .map(|c| format!("'{csv}' using 'time':'{c}' with {style} title '{c}'")),
        );
        let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
        Ok(s)
    }
}

/// Writes `<name>.gp` into `out_dir`, next to the trajectory CSV it reads.
pub fn emit_plots<T: Scalar>(spec: &PlotSpec, table: &TrajectoryTable<T>, out_dir: &Path) -> Result<PathBuf> {
    let script = spec.render(table)?;
    let path = out_dir.join(spec.script_name());
    std::fs::write(&path, script).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
