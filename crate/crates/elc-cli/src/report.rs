//! JSON run summary: regime, monotonicity, residual bounds, the A(t)
//! expansion closure at the final state and the decay fit.

use anyhow::Result;
use elc_core::coefficients::{classify_regime_default, LeslieCoefficients, RegimeTag};
use elc_core::diagnostics::{appendix_closure, convergence_monitor, EnergyReport};
use elc_core::solver::{RunConfig, State};
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct DecaySummary {
    pub d_initial: f64,
    pub threshold: f64,
    pub below_threshold_time: Option<f64>,
    pub fitted_power: Option<f64>,
    pub r_squared: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub regime: String,
    pub dissipation_margin: f64,
    pub monotone: bool,
    pub max_residual: Option<f64>,
    pub appendix_closure: Option<f64>,
    pub decay: DecaySummary,
    pub warnings: usize,
    pub final_t: f64,
}

pub fn regime_name(tag: RegimeTag) -> &'static str {
    match tag {
        RegimeTag::CaseI => "CaseI",
        RegimeTag::CaseII => "CaseII",
        RegimeTag::Neither => "Neither",
    }
}

/// Energy monotone within the per-step tolerance 1e-8 max(1, E(0)), scaled
/// by the sampling cadence.
pub fn is_monotone(reports: &[EnergyReport], sample_every: u32) -> bool {
    let e0 = reports.first().map(|r| r.e_total).unwrap_or(0.0);
    let tol = 1e-8 * e0.max(1.0) * f64::from(sample_every.max(1));
    reports.windows(2).all(|w| w[1].e_total <= w[0].e_total + tol)
}

pub fn build_summary(
    reports: &[EnergyReport],
    mu: &LeslieCoefficients,
    final_state: &State,
    cfg: &RunConfig,
    warnings: usize,
) -> RunSummary {
    let regime = classify_regime_default(mu);
    let max_residual = reports
        .iter()
        .filter_map(|r| r.law_residual)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r.abs(), |x| x.max(r.abs()))));
    let closure = appendix_closure(final_state, cfg).ok().and_then(|t| t.closure_error);
    let decay = convergence_monitor(reports, 1e-6);
    RunSummary {
        regime: regime_name(regime.tag).to_string(),
        dissipation_margin: regime.margin,
        monotone: is_monotone(reports, cfg.sample_every),
        max_residual,
        appendix_closure: closure,
        decay: DecaySummary {
            d_initial: decay.d_initial,
            threshold: decay.threshold,
            below_threshold_time: decay.below_threshold_time,
            fitted_power: decay.fitted_power,
            r_squared: decay.r_squared,
        },
        warnings,
        final_t: final_state.t,
    }
}

pub fn write_summary(path: &Path, summary: &RunSummary) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
