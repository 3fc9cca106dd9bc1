//! Named reference runs: the coefficient sets, initial data and step sizes
//! behind the standard experiments (Case I dissipation, Case II inequality,
//! Navier-Stokes reduction, near-minimizer relaxation and the growing
//! plane-wave validation).

use elc_core::coefficients::{case_ii_reference, sphere_like_reference, LeslieCoefficients};
use elc_core::linstab::{in_plane_geometry, lc_unstable_1, unstable_mode, LeslieUnstableParams, PlaneWaveMode};
use elc_core::solver::{InitSpec, RunConfig};
use elc_core::spectral::TorusGrid;
use std::f64::consts::PI;

/// Case I reference run: sphere-like set, band-limited random data on 64^2,
/// dt = 1e-4 over a unit horizon, sampled every step.
pub fn case_i_dissipation() -> RunConfig {
    let grid = TorusGrid::new(2, 64).unwrap();
    RunConfig {
        sample_every: 1,
        ..RunConfig::new(
            grid,
            sphere_like_reference(),
            1e-4,
            1.0,
            InitSpec::RandomSmooth { seed: 7, band: 2, v_amplitude: 0.3, d_amplitude: 0.4 },
        )
    }
}

/// Case II reference run used for the inequality-gap residual.
pub fn case_ii_inequality() -> RunConfig {
    let grid = TorusGrid::new(2, 32).unwrap();
    RunConfig {
        sample_every: 1,
        ..RunConfig::new(
            grid,
            case_ii_reference(),
            1e-4,
            0.3,
            InitSpec::RandomSmooth { seed: 11, band: 2, v_amplitude: 0.3, d_amplitude: 0.4 },
        )
    }
}

/// Navier-Stokes reduction: Taylor-Green at the lambda1 -> 0- limit where
/// only mu4 carries stress. The expected amplitude decay rate is
/// mu4 k^2 = 0.1 (2 pi)^2.
pub fn taylor_green_reduction() -> (RunConfig, f64) {
    let mu = LeslieCoefficients::new([0.0, -1e-5, 1e-5, 0.1, 0.0, 0.0], 1.0);
    let grid = TorusGrid::new(2, 64).unwrap();
    let cfg = RunConfig {
        sample_every: 50,
        ..RunConfig::new(grid, mu, 1e-4, 0.5, InitSpec::TaylorGreen { amplitude: 1e-3, wavenumber: 1 })
    };
    (cfg, 0.1 * (2.0 * PI) * (2.0 * PI))
}

/// Near-minimizer Case I run: unit director rotated by a small smooth angle
/// field plus a weak solenoidal velocity. D(t) = ||v||_H1 + ||G|| decays
/// through six orders within the horizon.
pub fn near_minimizer() -> RunConfig {
    let grid = TorusGrid::new(2, 32).unwrap();
    // eps = 0.25 tightens the length constraint so the slow |d| relaxation
    // (rate 2 eps^-2 / |lambda1|) does not floor the decay functional.
    let mu = LeslieCoefficients { eps_penalty: 0.25, ..sphere_like_reference() };
    RunConfig {
        sample_every: 10,
        ..RunConfig::new(
            grid,
            mu,
            1e-4,
            1.0,
            InitSpec::RandomSmooth { seed: 23, band: 2, v_amplitude: 0.05, d_amplitude: 0.1 },
        )
    }
}

/// The growing-mode validation run.
///
/// The reference coefficient window quotes its growth rate 0.4725 at the
/// wave number m = 2, which does not fit the 2 pi lattice of the unit torus.
/// All viscosities (and the epsilon gap) are homogeneous degree one, so the
/// run uses the same window rescaled to the lattice wave vector k = (5, 5):
/// theta0 and every regime verdict are unchanged and the physical growth
/// rate of the seeded mode is exactly the quoted 0.4725.
///
/// The seed sits near the top of the resolved band on purpose. The window
/// is unstable at every wavelength with rate growing like m^2 (and at other
/// propagation angles with a rate up to 1.9x the aligned one), so modes the
/// grid resolves above the seed amplify from roundoff and would overtake
/// the signal within the measurement horizon if the seed sat at large
/// scales. With the seed at |k|^2 = 450 the fastest resolvable mode (the
/// corner of the two-thirds band, |k|^2 = 882) out-grows the signal by less
/// than e^3 over one e-folding, which keeps roundoff-born contamination
/// orders of magnitude below the signal.
pub fn unstable_mode_run() -> (RunConfig, PlaneWaveMode, f64) {
    let base = lc_unstable_1();
    let k_lattice = [15i64, 15];
    let m_lattice =
        2.0 * PI * (((k_lattice[0] * k_lattice[0] + k_lattice[1] * k_lattice[1]) as f64).sqrt());
    let scale = (2.0 / m_lattice) * (2.0 / m_lattice);
    let mut mu = base.mu.scaled(scale);
    mu.eps_penalty = 1e-2;
    let params = LeslieUnstableParams { mu, epsilon_leslie: base.epsilon_leslie * scale };
    let theta0 = params.theta0().expect("reference window is valid");
    let phi = (k_lattice[1] as f64).atan2(k_lattice[0] as f64);
    let (nu, n) = in_plane_geometry(theta0, phi);
    let mode = unstable_mode(&params, m_lattice, nu, n).expect("reference window is valid");
    let target = mode.growth_rate();
    let grid = TorusGrid::new(2, 64).unwrap();
    let cfg = RunConfig {
        sample_every: 20,
        ..RunConfig::new(
            grid,
            mu,
            1e-3,
            1.0 / target, // one e-folding
            InitSpec::ConstantDirectorPerturbed { mode, amplitude: 1e-4 },
        )
    };
    (cfg, mode, target)
}

/// A smooth Case I state provider for the A(t) expansion closure: the
/// random-smooth initial data of the reference run.
pub fn appendix_probe() -> RunConfig {
    let grid = TorusGrid::new(2, 64).unwrap();
    RunConfig {
        sample_every: 0,
        ..RunConfig::new(
            grid,
            sphere_like_reference(),
            1e-5,
            1e-5,
            InitSpec::RandomSmooth { seed: 31, band: 3, v_amplitude: 0.3, d_amplitude: 0.3 },
        )
    }
}
