//! JSON run configuration.
//!
//! ```json
//! {
//!   "grid": {"dim": 2, "n": 64},
//!   "mu": [0.0, -0.5, 0.5, 1.0, 0.2, 0.2],
//!   "eps_penalty": 1.0,
//!   "dt": 1e-4,
//!   "t_end": 1.0,
//!   "init": {"type": "random_smooth", "seed": 7, "band": 2,
//!            "v_amplitude": 0.3, "d_amplitude": 0.4},
//!   "sample_every": 1,
//!   "snapshot_every": null,
//!   "dealias": true,
//!   "penalty_shift": 2.0
//! }
//! ```
//!
//! `init.type` is one of `taylor_green`, `random_smooth`,
//! `constant_director_perturbed` (plane-wave seeding; needs
//! `epsilon_leslie`, a lattice vector `k` and an amplitude) or `from_file`
//! (an ELC1 snapshot path).

use anyhow::{anyhow, bail, Context, Result};
use elc_core::coefficients::LeslieCoefficients;
use elc_core::linstab::{in_plane_geometry, unstable_mode, LeslieUnstableParams};
use elc_core::solver::{InitSpec, RunConfig, State};
use elc_core::spectral::TorusGrid;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitConfig {
    TaylorGreen {
        amplitude: f64,
        wavenumber: u32,
    },
    RandomSmooth {
        seed: u64,
        band: i64,
        v_amplitude: f64,
        d_amplitude: f64,
    },
    /// Seeds the growing plane wave of the linear stability analysis on the
    /// lattice wavevector `k` (the carrier is 2 pi k . x).
    ConstantDirectorPerturbed {
        amplitude: f64,
        epsilon_leslie: f64,
        k: [i64; 2],
    },
    FromFile {
        path: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    pub grid: GridConfig,
    pub mu: [f64; 6],
    #[serde(default = "default_eps")]
    pub eps_penalty: f64,
    pub dt: f64,
    pub t_end: f64,
    pub init: InitConfig,
    #[serde(default = "default_sample_every")]
    pub sample_every: u32,
    #[serde(default)]
    pub snapshot_every: Option<u32>,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default = "default_shift")]
    pub penalty_shift: f64,
}

fn default_eps() -> f64 {
    1.0
}

fn default_sample_every() -> u32 {
    1
}

fn default_true() -> bool {
    true
}

fn default_shift() -> f64 {
    2.0
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub n: Option<usize>,
    pub dim: Option<usize>,
}

/// A resolved run: the core configuration plus an optional explicit state
/// loaded from a snapshot file.
pub struct ResolvedRun {
    pub config: RunConfig,
    pub snapshot_state: Option<State>,
}

impl ConfigFile {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn resolve(&self, overrides: &Overrides) -> Result<ResolvedRun> {
        let dim = overrides.dim.unwrap_or(self.grid.dim);
        let n = overrides.n.unwrap_or(self.grid.n);
        let grid = TorusGrid::new(dim, n).map_err(|e| anyhow!("{e}"))?;
        let mu = LeslieCoefficients::new(self.mu, self.eps_penalty);
        let mut snapshot_state = None;
        let init = match &self.init {
            InitConfig::TaylorGreen { amplitude, wavenumber } => {
                InitSpec::TaylorGreen { amplitude: *amplitude, wavenumber: *wavenumber }
            }
            InitConfig::RandomSmooth { seed, band, v_amplitude, d_amplitude } => {
                InitSpec::RandomSmooth {
                    seed: overrides.seed.unwrap_or(*seed),
                    band: *band,
                    v_amplitude: *v_amplitude,
                    d_amplitude: *d_amplitude,
                }
            }
            InitConfig::ConstantDirectorPerturbed { amplitude, epsilon_leslie, k } => {
                if k == &[0, 0] {
                    bail!("plane-wave lattice vector k must be nonzero");
                }
                let params = LeslieUnstableParams { mu, epsilon_leslie: *epsilon_leslie };
                let theta0 = params.theta0().map_err(|e| anyhow!("{e}"))?;
                let phi = (k[1] as f64).atan2(k[0] as f64);
                let (nu, n_dir) = in_plane_geometry(theta0, phi);
                let m = 2.0
                    * std::f64::consts::PI
                    * ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
                let mode = unstable_mode(&params, m, nu, n_dir).map_err(|e| anyhow!("{e}"))?;
                InitSpec::ConstantDirectorPerturbed { mode, amplitude: *amplitude }
            }
            InitConfig::FromFile { path } => {
                let state = crate::snapshot::read_snapshot(Path::new(path))
                    .with_context(|| format!("loading snapshot {path}"))?;
                if state.grid() != grid {
                    bail!(
                        "snapshot grid {:?} does not match configured grid {:?}",
                        state.grid(),
                        grid
                    );
                }
                snapshot_state = Some(state);
                // Placeholder; simulate_from() is used when a state is given.
                InitSpec::TaylorGreen { amplitude: 0.0, wavenumber: 1 }
            }
        };
        let mut config = RunConfig::new(grid, mu, self.dt, self.t_end, init);
        config.sample_every = self.sample_every;
        config.snapshot_every = self.snapshot_every;
        config.dealias = self.dealias;
        config.penalty_shift = self.penalty_shift;
        if let Some(dt) = overrides.dt {
            config.dt = dt;
        }
        if let Some(t_end) = overrides.t_end {
            config.t_end = t_end;
        }
        Ok(ResolvedRun { config, snapshot_state })
    }
}

/// Standalone coefficient fragment accepted by the `coeffs` subcommand:
/// {"mu": [mu1..mu6], "eps_penalty": e}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffsFragment {
    pub mu: [f64; 6],
    #[serde(default = "default_eps")]
    pub eps_penalty: f64,
    #[serde(default)]
    pub epsilon_leslie: Option<f64>,
}

impl CoeffsFragment {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading coefficients {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing coefficients {}", path.display()))
    }

    pub fn coefficients(&self) -> LeslieCoefficients {
        LeslieCoefficients::new(self.mu, self.eps_penalty)
    }
}
