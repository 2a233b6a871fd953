//! Benchmark drivers shared by the command-line tool and the examples: a
//! single run of the well-prepared problem and a sweep over `eps`.

use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::diagnostics::ApObservables;
use crate::error::{Result, SolverError};
use crate::model::{well_prepared_init, ConservedField};
use crate::output::{write_fields, write_timeseries};
use crate::stepper::{run, RunControl, RunOutcome};

pub const FIELDS_INITIAL: &str = "fields_initial.csv";
pub const FIELDS_FINAL: &str = "fields_final.csv";
pub const TIMESERIES: &str = "timeseries.csv";

#[derive(Debug, Clone)]
pub struct Experiment {
    pub initial: ConservedField,
    pub outcome: RunOutcome,
}

impl Experiment {
    pub fn first(&self) -> &ApObservables {
        &self.outcome.series[0]
    }

    pub fn last(&self) -> &ApObservables {
        self.outcome.series.last().expect("series always holds t = 0")
    }

    /// Writes initial and final fields plus the time series into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| SolverError::io(dir, e))?;
        let files = [
            dir.join(FIELDS_INITIAL),
            dir.join(FIELDS_FINAL),
            dir.join(TIMESERIES),
        ];
        write_fields(&self.initial, &files[0])?;
        write_fields(&self.outcome.state, &files[1])?;
        write_timeseries(&self.outcome.series, &files[2])?;
        Ok(files.to_vec())
    }
}

/// Runs the well-prepared problem described by `cfg` (no files written).
pub fn run_well_prepared(cfg: &RunConfig) -> Result<Experiment> {
    cfg.validate()?;
    let initial = well_prepared_init(cfg.grid()?, cfg.eps)?;
    let outcome = run(
        initial.clone(),
        &cfg.regime()?,
        &cfg.step_config(),
        RunControl::new(cfg.t_final).observe_every(cfg.output_every),
        &mut [],
    )?;
    Ok(Experiment { initial, outcome })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub steps: usize,
    pub rho_dev_inf: f64,
    pub div_inf: f64,
    pub div_l2: f64,
    pub umax: f64,
    pub umax_initial: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "eps,steps,rho_dev_inf,div_inf,div_l2,umax";

    fn from_experiment(eps: f64, e: &Experiment) -> Self {
        let last = e.last();
        Self {
            eps,
            steps: e.outcome.steps,
            rho_dev_inf: last.rho_dev_inf,
            div_inf: last.div_inf,
            div_l2: last.div_l2,
            umax: last.umax,
            umax_initial: e.first().umax,
        }
    }
}

/// Repeats the run of `base` for each `eps`. With `parallel`, runs execute on
/// scoped threads; results are identical either way.
pub fn sweep_eps(base: &RunConfig, eps_values: &[f64], parallel: bool) -> Result<Vec<SweepRow>> {
    let one = |eps: f64| -> Result<SweepRow> {
        let cfg = RunConfig { eps, ..base.clone() };
        Ok(SweepRow::from_experiment(eps, &run_well_prepared(&cfg)?))
    };
    if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = eps_values.iter().map(|&e| s.spawn(move || one(e))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    } else {
        eps_values.iter().map(|&e| one(e)).collect()
    }
}

pub fn write_sweep_summary(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut text = format!("{}\n", SweepRow::CSV_HEADER);
    for r in rows {
        text.push_str(&format!(
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.eps, r.steps, r.rho_dev_inf, r.div_inf, r.div_l2, r.umax
        ));
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| SolverError::io(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| SolverError::io(path, e))
}

/// Plain-text table of a sweep.
pub fn format_sweep(rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{:>10} {:>6} {:>14} {:>14} {:>14} {:>10}\n",
        "eps", "steps", "rho_dev_inf", "div_inf", "div_l2", "umax"
    );
    for r in rows {
        s.push_str(&format!(
            "{:>10.4e} {:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.4}\n",
            r.eps, r.steps, r.rho_dev_inf, r.div_inf, r.div_l2, r.umax
        ));
    }
    s
}
