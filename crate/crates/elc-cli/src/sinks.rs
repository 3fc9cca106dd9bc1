//! File-writing sinks driven by the solver: CSV time series and ELC1
//! snapshots. Reports are buffered so the energy-law residual column can be
//! filled once the series is complete.

use elc_core::coefficients::LeslieCoefficients;
use elc_core::diagnostics::{energy_law_residuals, EnergyReport};
use elc_core::solver::{Sink, State};
use elc_core::{Error as CoreError, Result as CoreResult};
use std::path::{Path, PathBuf};

pub struct RunSinks {
    pub reports: Vec<EnergyReport>,
    pub warnings: Vec<(u64, String)>,
    csv_path: PathBuf,
    snapshot_dir: Option<PathBuf>,
    echo_warnings: bool,
}

impl RunSinks {
    pub fn new(out_dir: &Path, snapshots: bool, echo_warnings: bool) -> anyhow::Result<Self> {
        std::fs::create_dir_all(out_dir)?;
        let snapshot_dir = if snapshots {
            let dir = out_dir.join("snapshots");
            std::fs::create_dir_all(&dir)?;
            Some(dir)
        } else {
            None
        };
        Ok(RunSinks {
            reports: Vec::new(),
            warnings: Vec::new(),
            csv_path: out_dir.join("series.csv"),
            snapshot_dir,
            echo_warnings,
        })
    }

    /// Fills the residual column where the sampling allows it and writes the
    /// time series. Returns the reports for summary building.
    pub fn finalize(mut self, mu: &LeslieCoefficients) -> anyhow::Result<Vec<EnergyReport>> {
        fill_residuals_where_uniform(&mut self.reports, mu);
        write_series_csv(&self.csv_path, &self.reports)?;
        Ok(self.reports)
    }
}

/// The residual needs uniformly spaced samples; the final sample may sit off
/// the cadence when n_steps is not a multiple of sample_every, in which case
/// it is excluded from the residual pass (its column stays nan).
pub fn fill_residuals_where_uniform(reports: &mut [EnergyReport], mu: &LeslieCoefficients) {
    if elc_core::diagnostics::fill_law_residuals(reports, mu).is_ok() {
        return;
    }
    let len = reports.len();
    if len >= 4 {
        let _ = elc_core::diagnostics::fill_law_residuals(&mut reports[..len - 1], mu);
    }
}

pub fn write_series_csv(path: &Path, reports: &[EnergyReport]) -> anyhow::Result<()> {
    let mut out = String::new();
    out.push_str(
        "t,E_total,E_kin,E_grad,E_penalty,A,diss_mu1,diss_mu4,diss_director,diss_Ad,law_residual\n",
    );
    for r in reports {
        let residual = match r.law_residual {
            Some(v) => format!("{v:e}"),
            None => "nan".to_string(),
        };
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
            r.t,
            r.e_total,
            r.e_kin,
            r.e_grad,
            r.e_penalty,
            r.a_functional,
            r.diss_mu1,
            r.diss_mu4,
            r.diss_director,
            r.diss_ad,
            residual
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

impl Sink for RunSinks {
    fn on_sample(&mut self, _step: u64, _state: &State, report: &EnergyReport) -> CoreResult<()> {
        self.reports.push(report.clone());
        Ok(())
    }

    fn on_snapshot(&mut self, step: u64, state: &State) -> CoreResult<()> {
        if let Some(dir) = &self.snapshot_dir {
            let path = dir.join(format!("snapshot_{step:08}.elc"));
            crate::snapshot::write_snapshot(&path, state)
                .map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    fn on_warning(&mut self, step: u64, message: &str) {
        if self.echo_warnings {
            eprintln!("warning (step {step}): {message}");
        }
        self.warnings.push((step, message.to_string()));
    }
}

/// Convenience used by tests and fixtures: max |law residual| of a series.
pub fn max_abs_residual(reports: &[EnergyReport], mu: &LeslieCoefficients) -> Option<f64> {
    energy_law_residuals(reports, mu)
        .ok()
        .map(|v| v.iter().fold(0.0f64, |m, r| m.max(r.abs())))
}
