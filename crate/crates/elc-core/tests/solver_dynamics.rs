//! Dynamical behaviour of the IMEX stepper: fixed points, viscous decay,
//! conservation and stability invariants, self-convergence and determinism.

use elc_core::coefficients::{case_ii_reference, sphere_like_reference, LeslieCoefficients};
use elc_core::diagnostics::energy_law_residuals;
use elc_core::solver::{
    initial_state, rhs, simulate, step, InitSpec, MemorySink, RunConfig, Sink, State,
};
use elc_core::spectral::{divergence, norm_l2, TorusGrid, VectorField};
use elc_core::{Error, Result};

fn grid2(n: usize) -> TorusGrid {
    TorusGrid::new(2, n).unwrap()
}

fn random_smooth(seed: u64) -> InitSpec {
    InitSpec::RandomSmooth { seed, band: 2, v_amplitude: 0.3, d_amplitude: 0.4 }
}

#[test]
fn rest_state_is_an_exact_fixed_point() {
    let grid = grid2(16);
    let mu = sphere_like_reference();
    let d = VectorField::from_fn(grid, |_| [0.6, 0.8, 0.0]);
    let v = VectorField::zeros(grid);
    let state = State { v, d, t: 0.0 };
    let cfg = RunConfig::new(grid, mu, 1e-3, 1e-3, random_smooth(0));
    let next = step(&state, &cfg).unwrap();
    assert!(next.v.max_abs() < 1e-14);
    for i in 0..2 {
        for (a, b) in next.d.comp(i).data().iter().zip(state.d.comp(i).data()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
    // The rhs itself vanishes at the rest state.
    let (dv, dd) = rhs(&state, &mu).unwrap();
    assert!(dv.max_abs() < 1e-12);
    assert!(dd.max_abs() < 1e-12);
}

#[test]
fn taylor_green_decays_at_the_stokes_rate() {
    // All couplings at the lambda1 -> 0- limit: the director feedback on
    // the effective viscosity is O(|lambda1|), so the decay is the plain
    // Stokes rate mu4 k^2 of the Navier-Stokes reduction.
    let mu = LeslieCoefficients::new([0.0, -1e-5, 1e-5, 0.1, 0.0, 0.0], 1.0);
    let grid = grid2(32);
    let cfg = RunConfig::new(
        grid,
        mu,
        2e-4,
        0.4,
        InitSpec::TaylorGreen { amplitude: 1e-3, wavenumber: 1 },
    );
    let mut sink = MemorySink::default();
    let cfg = RunConfig { sample_every: 100, ..cfg };
    simulate(&cfg, &mut sink).unwrap();
    let first = &sink.reports[0];
    let last = sink.reports.last().unwrap();
    // E_kin ~ exp(-2 r t): r from the energy ratio over the run.
    let rate = -0.5 * (last.e_kin / first.e_kin).ln() / (last.t - first.t);
    let expect = 0.1 * (2.0 * core::f64::consts::PI).powi(2);
    assert!(
        (rate - expect).abs() <= 1e-3 * expect,
        "fitted rate {rate}, Stokes rate {expect}"
    );
}

struct InvariantSink {
    div_over_norm: Vec<f64>,
    mean_vx: Vec<f64>,
}

impl Sink for InvariantSink {
    fn on_sample(
        &mut self,
        _step: u64,
        state: &State,
        _report: &elc_core::diagnostics::EnergyReport,
    ) -> Result<()> {
        let div = divergence(&state.v).unwrap();
        let vnorm: f64 = state
            .v
            .components()
            .iter()
            .map(|c| norm_l2(c) * norm_l2(c))
            .sum::<f64>()
            .sqrt();
        self.div_over_norm.push(norm_l2(&div) / vnorm.max(1e-300));
        let mean = state.v.comp(0).data().iter().sum::<f64>() / state.grid().len() as f64;
        self.mean_vx.push(mean);
        Ok(())
    }
}

#[test]
fn divergence_free_and_mean_velocity_preserved() {
    let grid = grid2(32);
    let cfg = RunConfig {
        sample_every: 10,
        ..RunConfig::new(grid, sphere_like_reference(), 1e-3, 0.05, random_smooth(12))
    };
    let mut sink = InvariantSink { div_over_norm: Vec::new(), mean_vx: Vec::new() };
    simulate(&cfg, &mut sink).unwrap();
    assert!(sink.div_over_norm.len() >= 5);
    for r in &sink.div_over_norm {
        assert!(*r <= 1e-10, "relative divergence {r}");
    }
    let m0 = sink.mean_vx[0];
    for m in &sink.mean_vx {
        assert!((m - m0).abs() < 1e-12, "mean velocity drifted: {m0} -> {m}");
    }
}

#[test]
fn self_convergence_is_second_order() {
    let grid = grid2(16);
    let mu = sphere_like_reference();
    let init = InitSpec::RandomSmooth { seed: 4, band: 2, v_amplitude: 0.2, d_amplitude: 0.3 };
    let t_end = 0.02;
    let run = |dt: f64| -> State {
        let cfg = RunConfig { sample_every: 0, ..RunConfig::new(grid, mu, dt, t_end, init.clone()) };
        simulate(&cfg, &mut elc_core::solver::NullSink).unwrap()
    };
    let reference = run(1.25e-4);
    let err = |s: &State| -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            let dv: Vec<f64> = s
                .v
                .comp(i)
                .data()
                .iter()
                .zip(reference.v.comp(i).data())
                .map(|(a, b)| a - b)
                .collect();
            let dd: Vec<f64> = s
                .d
                .comp(i)
                .data()
                .iter()
                .zip(reference.d.comp(i).data())
                .map(|(a, b)| a - b)
                .collect();
            acc += dv.iter().map(|x| x * x).sum::<f64>() + dd.iter().map(|x| x * x).sum::<f64>();
        }
        acc.sqrt()
    };
    let e1 = err(&run(2e-3));
    let e2 = err(&run(1e-3));
    let order = (e1 / e2).log2();
    assert!(order >= 1.8, "observed order {order:.3} (errors {e1:.3e}, {e2:.3e})");
}

#[test]
fn case_i_energy_monotone_and_law_residual_small() {
    let grid = grid2(32);
    let mu = sphere_like_reference();
    let cfg = RunConfig { sample_every: 1, ..RunConfig::new(grid, mu, 1e-4, 0.05, random_smooth(7)) };
    let mut sink = MemorySink::default();
    simulate(&cfg, &mut sink).unwrap();
    let e0 = sink.reports[0].e_total;
    let tol = 1e-8 * e0.max(1.0);
    for w in sink.reports.windows(2) {
        assert!(
            w[1].e_total <= w[0].e_total + tol,
            "energy increased: {} -> {} at t = {}",
            w[0].e_total,
            w[1].e_total,
            w[1].t
        );
    }
    let residuals = energy_law_residuals(&sink.reports, &mu).unwrap();
    let max_res = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    assert!(max_res <= 1e-3, "energy-law residual {max_res}");
}

#[test]
fn case_ii_inequality_gap_stays_nonnegative_and_tiny() {
    let grid = grid2(32);
    let mu = case_ii_reference();
    let cfg = RunConfig { sample_every: 1, ..RunConfig::new(grid, mu, 1e-4, 0.05, random_smooth(19)) };
    let mut sink = MemorySink::default();
    simulate(&cfg, &mut sink).unwrap();
    let gaps = energy_law_residuals(&sink.reports, &mu).unwrap();
    for g in &gaps {
        assert!(*g >= 0.0);
        assert!(*g <= 1e-6, "inequality gap {g}");
    }
    // The energy decreases in Case II as well.
    let tol = 1e-8 * sink.reports[0].e_total.max(1.0);
    for w in sink.reports.windows(2) {
        assert!(w[1].e_total <= w[0].e_total + tol);
    }
}

#[test]
fn three_dimensional_run_keeps_the_invariants() {
    let grid = TorusGrid::new(3, 8).unwrap();
    let mu = sphere_like_reference();
    let cfg = RunConfig {
        sample_every: 5,
        ..RunConfig::new(
            grid,
            mu,
            5e-4,
            0.02,
            InitSpec::RandomSmooth { seed: 77, band: 2, v_amplitude: 0.2, d_amplitude: 0.2 },
        )
    };
    let mut sink = MemorySink::default();
    let fin = simulate(&cfg, &mut sink).unwrap();
    assert!(fin.is_finite());
    let tol = 1e-8 * sink.reports[0].e_total.max(1.0);
    for w in sink.reports.windows(2) {
        assert!(w[1].e_total <= w[0].e_total + tol, "3d energy rose");
    }
    let div = divergence(&fin.v).unwrap();
    let vnorm: f64 =
        fin.v.components().iter().map(|c| norm_l2(c) * norm_l2(c)).sum::<f64>().sqrt();
    assert!(norm_l2(&div) <= 1e-10 * vnorm.max(1e-300));
}

#[test]
fn simulate_is_deterministic() {
    let grid = grid2(16);
    let cfg = RunConfig {
        sample_every: 5,
        ..RunConfig::new(grid, sphere_like_reference(), 1e-3, 0.03, random_smooth(99))
    };
    let mut a = MemorySink::default();
    let sa = simulate(&cfg, &mut a).unwrap();
    let mut b = MemorySink::default();
    let sb = simulate(&cfg, &mut b).unwrap();
    assert_eq!(a.reports.len(), b.reports.len());
    for (x, y) in a.reports.iter().zip(&b.reports) {
        assert_eq!(x.e_total.to_bits(), y.e_total.to_bits());
        assert_eq!(x.a_functional.to_bits(), y.a_functional.to_bits());
    }
    for i in 0..2 {
        for (x, y) in sa.v.comp(i).data().iter().zip(sb.v.comp(i).data()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn zero_horizon_returns_initial_state_with_one_snapshot() {
    let grid = grid2(16);
    let cfg = RunConfig::new(grid, sphere_like_reference(), 1e-3, 0.0, random_smooth(1));
    struct Counter {
        samples: usize,
        snapshots: usize,
    }
    impl Sink for Counter {
        fn on_sample(
            &mut self,
            _s: u64,
            _st: &State,
            _r: &elc_core::diagnostics::EnergyReport,
        ) -> Result<()> {
            self.samples += 1;
            Ok(())
        }
        fn on_snapshot(&mut self, _s: u64, _st: &State) -> Result<()> {
            self.snapshots += 1;
            Ok(())
        }
    }
    let mut c = Counter { samples: 0, snapshots: 0 };
    let out = simulate(&cfg, &mut c).unwrap();
    assert_eq!(out.t, 0.0);
    assert_eq!(c.samples, 1);
    assert_eq!(c.snapshots, 1);
    let start = initial_state(grid, &cfg.init).unwrap();
    for i in 0..2 {
        for (a, b) in out.d.comp(i).data().iter().zip(start.d.comp(i).data()) {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn lambda1_guard_names_the_condition() {
    let grid = grid2(16);
    let mu = LeslieCoefficients::new([0.0, 0.5, 0.5, 1.0, 0.0, 0.0], 1.0); // lambda1 = 0
    let cfg = RunConfig::new(grid, mu, 1e-3, 0.01, random_smooth(3));
    match simulate(&cfg, &mut elc_core::solver::NullSink) {
        Err(Error::Domain { condition, .. }) => assert_eq!(condition, "lama1a"),
        other => panic!("expected lama1a rejection, got {other:?}"),
    }
}

#[test]
fn runaway_run_blows_up_loudly() {
    let grid = grid2(16);
    // Huge advective amplitude at a large dt: the explicit part must
    // overflow the sup-norm ceiling and abort with a step index.
    let mu = sphere_like_reference();
    let init = InitSpec::RandomSmooth { seed: 5, band: 3, v_amplitude: 3e3, d_amplitude: 0.2 };
    let cfg = RunConfig::new(grid, mu, 0.05, 5.0, init);
    match simulate(&cfg, &mut elc_core::solver::NullSink) {
        Err(Error::Blowup { step, .. }) => assert!(step >= 1),
        other => panic!("expected blowup, got {other:?}"),
    }
}

#[test]
fn cfl_advisory_is_emitted() {
    let grid = grid2(16);
    let mu = sphere_like_reference();
    let init = InitSpec::RandomSmooth { seed: 6, band: 2, v_amplitude: 2.0, d_amplitude: 0.1 };
    let cfg = RunConfig::new(grid, mu, 0.02, 0.04, init);
    let mut sink = MemorySink::default();
    let _ = simulate(&cfg, &mut sink);
    assert!(
        !sink.warnings.is_empty(),
        "dt n |v| = {} should trigger the advisory",
        0.02 * 16.0 * 2.0
    );
}
