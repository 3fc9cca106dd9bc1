//! The `verify` subcommand: numerical identity and property checks that
//! exercise the algebraic backbone (Parodi cancellation, stress splits, the
//! A(t) expansion closure, dispersion residuals) plus the transform and
//! projection invariants, printed as a pass/fail table.

use elc_core::coefficients::{
    classify_regime_default, dissipation_margin, simplified_model, sphere_like_reference,
    LeslieCoefficients, MoleculeKind, RegimeTag,
};
use elc_core::constitutive::{
    dot, ericksen_stress, eta_coefficients, gl_force, leslie_stress, n_from_d_equation,
    stress_split, tensor_vector,
};
use elc_core::diagnostics::{appendix_terms, energy_report, half_da_dt_exact};
use elc_core::linstab::{
    dispersion_residual, dispersion_roots, gpq, in_plane_geometry, lc_unstable_1,
    linearized_residuals, unstable_mode,
};
use elc_core::prng::SplitMix64;
use elc_core::solver::{initial_state, simulate, InitSpec, MemorySink, RunConfig, State};
use elc_core::spectral::{
    band_limited_noise, dealias_scalar, divergence, forward, inner, inverse, jacobian,
    laplacian_vector, leray_project, norm_l2, strain_vorticity, ScalarField, TorusGrid,
    VectorField,
};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// 16^2 / 8^2 grids and reduced draw counts, for CI use.
    pub small: bool,
    pub grid_n: Option<usize>,
}

struct Ctx {
    grid: TorusGrid,
    draws: usize,
}

impl Ctx {
    fn new(opts: &VerifyOptions) -> Self {
        let n = opts.grid_n.unwrap_or(if opts.small { 16 } else { 32 });
        Ctx { grid: TorusGrid::new(2, n).unwrap(), draws: if opts.small { 20 } else { 50 } }
    }

    fn vector(&self, band: i64, seed: u64) -> VectorField {
        let comps: Vec<ScalarField> = (0..self.grid.dim())
            .map(|i| band_limited_noise(self.grid, band, seed + 1000 * i as u64))
            .collect();
        VectorField::from_components(comps).unwrap()
    }

    fn solenoidal(&self, band: i64, seed: u64) -> VectorField {
        leray_project(&self.vector(band, seed)).unwrap()
    }

    /// Largest band whose quintic stress products stay fully resolved under
    /// the two-thirds mask.
    fn stress_band(&self) -> i64 {
        ((self.grid.n() as i64) / 15).max(1)
    }
}

fn vnorm_sq(v: &VectorField) -> f64 {
    v.components().iter().map(|c| norm_l2(c) * norm_l2(c)).sum()
}

fn vdot(a: &VectorField, b: &VectorField) -> f64 {
    a.components().iter().zip(b.components()).map(|(x, y)| inner(x, y).unwrap()).sum()
}

fn check(name: &'static str, worst: f64, bound: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= bound,
        detail: format!("worst {worst:.3e} <= {bound:.0e}"),
    }
}

fn transforms(ctx: &Ctx) -> CheckOutcome {
    let mut worst = 0.0f64;
    for seed in 0..4u64 {
        let f = band_limited_noise(ctx.grid, ctx.grid.n() as i64 / 2 - 1, 100 + seed);
        let back = inverse(&forward(&f));
        for (a, b) in back.data().iter().zip(f.data()) {
            worst = worst.max((a - b).abs());
        }
    }
    check("transform-round-trip", worst, 1e-12)
}

fn leray(ctx: &Ctx) -> CheckOutcome {
    let mut worst = 0.0f64;
    for seed in 0..4u64 {
        let v = ctx.vector(ctx.grid.n() as i64 / 3, 200 + seed);
        let p = leray_project(&v).unwrap();
        let div = divergence(&p).unwrap();
        worst = worst.max(norm_l2(&div) / vnorm_sq(&v).sqrt().max(1e-300));
        let pp = leray_project(&p).unwrap();
        for i in 0..2 {
            for (a, b) in pp.comp(i).data().iter().zip(p.comp(i).data()) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    check("leray-projection", worst, 1e-12)
}

fn dealias(ctx: &Ctx) -> CheckOutcome {
    let mut worst = 0.0f64;
    let low = band_limited_noise(ctx.grid, ctx.grid.n() as i64 / 3, 300);
    let kept = dealias_scalar(&low);
    for (a, b) in kept.data().iter().zip(low.data()) {
        worst = worst.max((a - b).abs());
    }
    let n = ctx.grid.n();
    let nyquist = ScalarField::from_fn(ctx.grid, |x| {
        (std::f64::consts::PI * n as f64 * x[0]).cos()
    });
    worst = worst.max(dealias_scalar(&nyquist).max_abs());
    check("dealias-two-thirds", worst, 1e-12)
}

fn parodi_cancellation(ctx: &Ctx) -> CheckOutcome {
    let mut rng = SplitMix64::new(40);
    let mut worst = 0.0f64;
    let band = (ctx.grid.n() as i64 / 6).max(1);
    for _ in 0..ctx.draws {
        let seed = rng.next_u64() % 1_000_000;
        let m = simplified_model(MoleculeKind::RodLike, -(1.0 + rng.next_f64()), 1.0, 1.0).unwrap();
        let (l1, l2) = (m.lambda1(), m.lambda2());
        let v = ctx.solenoidal(band, seed);
        let d = ctx.vector(band, seed + 7);
        let g = ctx.vector(band, seed + 13);
        let (a, _) = strain_vorticity(&v).unwrap();
        let ad = tensor_vector(&a, &d);
        let n = n_from_d_equation(&g, &ad, l1, l2).unwrap();
        let lhs = l1 * vnorm_sq(&n) + (l2 - m.mu2 - m.mu3) * vdot(&n, &ad);
        let rhs = vnorm_sq(&g) / l1 - l2 * l2 / l1 * vnorm_sq(&ad);
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    check("parodi-cancellation", worst, 1e-12)
}

fn stress_split_eta(ctx: &Ctx) -> CheckOutcome {
    let mut rng = SplitMix64::new(41);
    let mut worst = 0.0f64;
    let band = ctx.stress_band();
    for _ in 0..ctx.draws {
        let seed = rng.next_u64() % 1_000_000;
        let l1 = -(0.5 + rng.next_f64());
        let l2 = rng.next_symmetric();
        let v = ctx.solenoidal(band, seed + 1);
        let d = ctx.vector(band, seed + 2);
        let g = ctx.vector(band, seed + 3);
        let (a, _) = strain_vorticity(&v).unwrap();
        let ad = tensor_vector(&a, &d);
        let n = n_from_d_equation(&g, &ad, l1, l2).unwrap();
        let split = stress_split(&d, &g, l1, l2).unwrap();
        let (mu2, mu3) = (0.5 * (l1 - l2), -0.5 * (l1 + l2));
        let (eta5, eta6) = eta_coefficients(l1, l2);
        let scale = split.max_abs().max(1.0);
        for i in 0..2 {
            for j in 0..2 {
                for idx in 0..ctx.grid.len() {
                    let expect = mu2 * n.comp(i).data()[idx] * d.comp(j).data()[idx]
                        + mu3 * d.comp(i).data()[idx] * n.comp(j).data()[idx]
                        + eta5 * ad.comp(i).data()[idx] * d.comp(j).data()[idx]
                        + eta6 * d.comp(i).data()[idx] * ad.comp(j).data()[idx];
                    worst =
                        worst.max((split.entry(i, j).data()[idx] - expect).abs() / scale);
                }
            }
        }
    }
    check("stress-split-eta", worst, 1e-12)
}

fn simplified_stress(ctx: &Ctx) -> CheckOutcome {
    let mut rng = SplitMix64::new(42);
    let mut worst = 0.0f64;
    let band = ctx.stress_band();
    for kind in [MoleculeKind::RodLike, MoleculeKind::DiscLike, MoleculeKind::SphereLike] {
        for _ in 0..ctx.draws / 3 + 1 {
            let seed = rng.next_u64() % 1_000_000;
            let l1 = -(0.5 + rng.next_f64());
            let m = simplified_model(kind, l1, 0.9, 1.0).unwrap();
            let l2 = m.lambda2();
            let v = ctx.solenoidal(band, seed + 4);
            let d = ctx.vector(band, seed + 5);
            let g = ctx.vector(band, seed + 6);
            let (a, omega) = strain_vorticity(&v).unwrap();
            let ad = tensor_vector(&a, &d);
            let n = n_from_d_equation(&g, &ad, l1, l2).unwrap();
            let sigma = leslie_stress(&a, &omega, &n, &d, &m).unwrap();
            let scale = sigma.max_abs().max(1.0);
            for i in 0..2 {
                for j in 0..2 {
                    for idx in 0..ctx.grid.len() {
                        let expect = -(m.mu2 / l1) * g.comp(i).data()[idx] * d.comp(j).data()[idx]
                            - (m.mu3 / l1) * d.comp(i).data()[idx] * g.comp(j).data()[idx]
                            + m.mu4 * a.entry(i, j).data()[idx];
                        worst = worst
                            .max((sigma.entry(i, j).data()[idx] - expect).abs() / scale);
                    }
                }
            }
        }
    }
    check("simplified-model-stress", worst, 1e-12)
}

fn dissipation_two_route(ctx: &Ctx) -> CheckOutcome {
    let band = (ctx.grid.n() as i64 / 8).max(1);
    let mut worst = 0.0f64;
    for seed in 1..=3u64 {
        let m0 = simplified_model(MoleculeKind::RodLike, -1.4, 0.8, 1.0).unwrap();
        let m = LeslieCoefficients { mu1: 0.6, ..m0 };
        let (l1, l2) = (m.lambda1(), m.lambda2());
        let v = ctx.solenoidal(band, 500 + seed);
        let d = ctx.vector(band, 600 + seed);
        let g = ctx.vector(band, 700 + seed);
        let (a, omega) = strain_vorticity(&v).unwrap();
        let ad = tensor_vector(&a, &d);
        let n = n_from_d_equation(&g, &ad, l1, l2).unwrap();
        let sigma = leslie_stress(&a, &omega, &n, &d, &m).unwrap();
        let grad_v = jacobian(&v).unwrap();
        let mut contract = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                contract += inner(sigma.entry(i, j), grad_v.entry(i, j)).unwrap();
            }
        }
        let omega_d = tensor_vector(&omega, &d);
        let route1 =
            contract + vdot(&g, &omega_d) - l2 / l1 * vdot(&g, &ad) - vnorm_sq(&g) / l1;
        let dtad = dot(&d, &ad);
        let mut grad_v_sq = 0.0;
        for c in grad_v.components() {
            grad_v_sq += inner(c, c).unwrap();
        }
        let mut relax = n.clone();
        for i in 0..2 {
            let adi: Vec<f64> = ad.comp(i).data().to_vec();
            for (slot, adv) in relax.comp_mut(i).data_mut().iter_mut().zip(adi) {
                *slot += l2 / l1 * adv;
            }
        }
        let route2 = m.mu1 * inner(&dtad, &dtad).unwrap() + 0.5 * m.mu4 * grad_v_sq
            - l1 * vnorm_sq(&relax)
            + (m.mu5 + m.mu6 + l2 * l2 / l1) * vnorm_sq(&ad);
        worst = worst.max((route1 - route2).abs() / route2.abs().max(1.0));
    }
    check("dissipation-two-route", worst, 1e-11)
}

fn appendix_closure_exact(_ctx: &Ctx) -> CheckOutcome {
    // Fixed 32^2 band-2 states: every product in both routes fully resolved.
    let grid = TorusGrid::new(2, 32).unwrap();
    let mu = sphere_like_reference();
    let mut worst = 0.0f64;
    for seed in [3u64, 17] {
        let comps: Vec<ScalarField> =
            (0..2).map(|i| band_limited_noise(grid, 2, seed + i as u64)).collect();
        let v = leray_project(&VectorField::from_components(comps).unwrap()).unwrap();
        let mut d = VectorField::from_components(
            (0..2)
                .map(|i| band_limited_noise(grid, 2, seed + 100 + i as u64))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        for i in 0..2 {
            for x in d.comp_mut(i).data_mut() {
                *x = 0.9 + 0.3 * *x;
            }
        }
        let state = State { v: v.clone(), d, t: 0.0 };
        let exact = half_da_dt_exact(&state, &mu).unwrap();
        let terms = appendix_terms(&state, &mu).unwrap();
        let scale = terms.lhs_extra.abs().max(1.0);
        worst = worst.max((exact - terms.predicted_half_da_dt()).abs() / scale);
    }
    check("appendix-closure", worst, 1e-9)
}

fn dispersion(_ctx: &Ctx) -> CheckOutcome {
    let params = lc_unstable_1();
    let theta0 = params.theta0().unwrap();
    let mut worst = 0.0f64;
    let cos2 = theta0.cos().powi(2);
    worst = worst.max((cos2 - 0.075).abs());
    let (g, p, q) = gpq(theta0, &params.mu);
    worst = worst.max((g + 0.23625).abs());
    worst = worst.max(q.abs());
    worst = worst.max((p - 0.36125).abs());
    for m in [1.0, 2.0, 4.0] {
        let (w1, w2) = dispersion_roots(m, theta0, &params.mu).unwrap();
        let tol_scale = m * m * m * m * g.abs().max(1.0);
        worst = worst.max(dispersion_residual(w1, m, theta0, &params.mu) / tol_scale);
        worst = worst.max(dispersion_residual(w2, m, theta0, &params.mu) / tol_scale);
    }
    // Growth rate at m = 2.
    let (nu, n) = in_plane_geometry(theta0, 0.0);
    let mode = unstable_mode(&params, 2.0, nu, n).unwrap();
    worst = worst.max((mode.growth_rate() - 0.4725).abs());
    check("dispersion-reference", worst, 1e-12)
}

fn mode_residuals(_ctx: &Ctx) -> CheckOutcome {
    let params = lc_unstable_1();
    let theta0 = params.theta0().unwrap();
    let (nu, n) = in_plane_geometry(theta0, 0.0);
    let mode = unstable_mode(&params, 2.0, nu, n).unwrap();
    let res = linearized_residuals(&mode, &params.mu);
    let worst = res.iter().fold(0.0f64, |m, r| m.max(*r));
    check("linearized-mode-residual", worst, 1e-10)
}

fn case_i_stability_sweep(_ctx: &Ctx) -> CheckOutcome {
    let sets = [
        sphere_like_reference(),
        simplified_model(MoleculeKind::RodLike, -1.0, 0.8, 1.0).unwrap(),
        simplified_model(MoleculeKind::DiscLike, -0.7, 1.2, 1.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for mu in sets {
        for k in 0..=4 {
            let theta = k as f64 * std::f64::consts::FRAC_PI_2 / 4.0;
            for m in [1.0, 2.0, 4.0] {
                let (w1, w2) = dispersion_roots(m, theta, &mu).unwrap();
                worst = worst.max(w1.im / (m * m)).max(w2.im / (m * m));
            }
        }
    }
    check("case-i-spectral-stability", worst.max(0.0), 1e-12)
}

fn energy_consistency(ctx: &Ctx) -> CheckOutcome {
    let mu = sphere_like_reference();
    let state = initial_state(
        ctx.grid,
        &InitSpec::TaylorGreen { amplitude: 1.0, wavenumber: 1 },
    )
    .unwrap();
    let r = energy_report(&state, &mu).unwrap();
    let mut worst = (r.e_kin - 0.25).abs();
    worst = worst.max((r.e_total - (r.e_kin + r.e_grad + r.e_penalty)).abs());
    let margin = dissipation_margin(&mu).unwrap();
    worst = worst.max((margin - 0.4).abs());
    check("energy-and-margin-reference", worst, 1e-12)
}

fn regime_classification(_ctx: &Ctx) -> CheckOutcome {
    let cases = [
        (LeslieCoefficients::new([0.0, -0.5, 0.5, 1.0, 0.2, 0.2], 1.0), RegimeTag::CaseI),
        (LeslieCoefficients::new([0.0, 0.5, 1.35, 0.05, 0.0, 1.0], 1.0), RegimeTag::Neither),
        (LeslieCoefficients::new([0.0, -0.6, 0.4, 1.0, 0.3, 0.5], 1.0), RegimeTag::CaseII),
    ];
    let mut passed = true;
    let mut detail = String::new();
    for (mu, expect) in cases {
        let got = classify_regime_default(&mu).tag;
        if got != expect {
            passed = false;
        }
        detail.push_str(&format!("{got:?} "));
    }
    CheckOutcome { name: "regime-classification", passed, detail }
}

fn determinism(ctx: &Ctx) -> CheckOutcome {
    let cfg = RunConfig {
        sample_every: 5,
        ..RunConfig::new(
            ctx.grid,
            sphere_like_reference(),
            1e-3,
            0.02,
            InitSpec::RandomSmooth { seed: 77, band: 2, v_amplitude: 0.2, d_amplitude: 0.2 },
        )
    };
    let mut a = MemorySink::default();
    let sa = simulate(&cfg, &mut a).unwrap();
    let mut b = MemorySink::default();
    let sb = simulate(&cfg, &mut b).unwrap();
    let mut passed = a.reports.len() == b.reports.len();
    for (x, y) in a.reports.iter().zip(&b.reports) {
        passed &= x.e_total.to_bits() == y.e_total.to_bits();
    }
    for i in 0..2 {
        for (x, y) in sa.v.comp(i).data().iter().zip(sb.v.comp(i).data()) {
            passed &= x.to_bits() == y.to_bits();
        }
    }
    CheckOutcome {
        name: "determinism",
        passed,
        detail: "two identical runs, bit-compared".to_string(),
    }
}

fn gradient_check(ctx: &Ctx) -> CheckOutcome {
    // gl_force is the exact gradient of the penalty energy.
    let d = ctx.vector(3, 900);
    let w = ctx.vector(3, 901);
    let eps = 0.7;
    let f = gl_force(&d, eps);
    let analytic = vdot(&f, &w);
    let h = 1e-5;
    let energy_at = |sign: f64| -> f64 {
        let comps: Vec<ScalarField> = (0..2)
            .map(|i| {
                ScalarField::from_data(
                    ctx.grid,
                    d.comp(i)
                        .data()
                        .iter()
                        .zip(w.comp(i).data())
                        .map(|(a, b)| a + sign * h * b)
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        elc_core::constitutive::penalty_energy(
            &VectorField::from_components(comps).unwrap(),
            eps,
        )
    };
    let fd = (energy_at(1.0) - energy_at(-1.0)) / (2.0 * h);
    let worst = (analytic - fd).abs() / analytic.abs().max(1.0);
    check("penalty-gradient-check", worst, 1e-6)
}

fn ericksen_symmetry(ctx: &Ctx) -> CheckOutcome {
    let d = ctx.vector(4, 910);
    let e = ericksen_stress(&d).unwrap();
    let mut worst = 0.0f64;
    for idx in 0..ctx.grid.len() {
        worst = worst.max((e.entry(0, 1).data()[idx] - e.entry(1, 0).data()[idx]).abs());
    }
    // Positive semidefinite at every point (2x2: trace and det).
    for idx in 0..ctx.grid.len() {
        let a = e.entry(0, 0).data()[idx];
        let b = e.entry(0, 1).data()[idx];
        let c = e.entry(1, 1).data()[idx];
        if a + c < -1e-12 || a * c - b * b < -1e-9 {
            worst = worst.max(1.0);
        }
    }
    check("ericksen-symmetry-psd", worst, 1e-12)
}

fn laplacian_identity(ctx: &Ctx) -> CheckOutcome {
    let d = ctx.vector(ctx.grid.n() as i64 / 4, 920);
    let lap = laplacian_vector(&d).unwrap();
    let jac = jacobian(&d).unwrap();
    // div of each row of the jacobian equals the laplacian component.
    let mut worst = 0.0f64;
    for i in 0..2 {
        let row = VectorField::from_components(vec![
            jac.entry(i, 0).clone(),
            jac.entry(i, 1).clone(),
        ])
        .unwrap();
        let div = divergence(&row).unwrap();
        let scale = lap.comp(i).max_abs().max(1.0);
        for (a, b) in div.data().iter().zip(lap.comp(i).data()) {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    check("divergence-of-gradient", worst, 1e-11)
}

type CheckFn = fn(&Ctx) -> CheckOutcome;

const CHECKS: &[(&str, CheckFn)] = &[
    ("transform-round-trip", transforms),
    ("leray-projection", leray),
    ("dealias-two-thirds", dealias),
    ("divergence-of-gradient", laplacian_identity),
    ("parodi-cancellation", parodi_cancellation),
    ("stress-split-eta", stress_split_eta),
    ("simplified-model-stress", simplified_stress),
    ("dissipation-two-route", dissipation_two_route),
    ("penalty-gradient-check", gradient_check),
    ("ericksen-symmetry-psd", ericksen_symmetry),
    ("appendix-closure", appendix_closure_exact),
    ("dispersion-reference", dispersion),
    ("linearized-mode-residual", mode_residuals),
    ("case-i-spectral-stability", case_i_stability_sweep),
    ("energy-and-margin-reference", energy_consistency),
    ("regime-classification", regime_classification),
    ("determinism", determinism),
];

pub fn run_verify(opts: &VerifyOptions, filter: Option<&str>) -> Vec<CheckOutcome> {
    let ctx = Ctx::new(opts);
    CHECKS
        .iter()
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|(_, f)| f(&ctx))
        .collect()
}
