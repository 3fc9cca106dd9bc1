//! Plane-wave linear stability of the uniformly oriented rest state.
//!
//! Perturbations d = a e^{i(m nu.x - omega t)}, v = b e^{i(m nu.x - omega t)}
//! of the constrained system reduce to a 2x2 linear system in the amplitudes
//! with coefficients g, p, q depending on the angle theta between the
//! propagation direction nu and the director n (sin theta = nu . n). This
//! module evaluates those coefficients, finds the flow-alignment angles
//! where q vanishes, solves the dispersion relation for the complex
//! frequencies and constructs the growing mode that exists when Parodi's
//! relation fails under the Le1-Le5 coefficient window.

use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
#[allow(unused_imports)] // inherent std methods take over when std is linked
use crate::math::FloatMath;
use alloc::format;
use num_complex::Complex64;

/// Coefficients admitting an unstable plane wave, together with the gap
/// parameter epsilon of the mu3 relation.
#[derive(Debug, Clone, Copy)]
pub struct LeslieUnstableParams {
    pub mu: LeslieCoefficients,
    pub epsilon_leslie: f64,
}

/// A plane-wave mode (theta, m, nu, n, a, b, omega) plus the tension and
/// pressure amplitudes C and D that close the remaining two equations.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWaveMode {
    pub theta: f64,
    pub m: f64,
    pub nu: [f64; 3],
    pub n: [f64; 3],
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub omega: Complex64,
    /// Amplitude C = (m sin theta/2)(g + mu2 - mu4 + mu5 cos 2 theta) i; it
    /// multiplies the pressure wave in the residual evaluation.
    pub c_amp: Complex64,
    /// Amplitude D = -((lambda2-lambda1)/2) i m sin theta; it multiplies the
    /// director-tension wave in the residual evaluation.
    pub d_amp: Complex64,
}

impl PlaneWaveMode {
    /// Growth rate Im(omega); positive means instability.
    pub fn growth_rate(&self) -> f64 {
        self.omega.im
    }

    pub fn is_unstable(&self) -> bool {
        self.omega.im > 0.0
    }
}

/// The angle-dependent coefficient functions:
/// g = 2 mu1 cos^2 sin^2 + (mu3+mu6) cos^2 + mu4 + (mu5-mu2) sin^2,
/// p = mu2 sin^2 - mu3 cos^2,
/// q = (l1+l2) cos^2 + (l1-l2) sin^2.
pub fn gpq(theta: f64, mu: &LeslieCoefficients) -> (f64, f64, f64) {
    let c = theta.cos();
    let s = theta.sin();
    let c2 = c * c;
    let s2 = s * s;
    let l1 = mu.lambda1();
    let l2 = mu.lambda2();
    let g = 2.0 * mu.mu1 * c2 * s2 + (mu.mu3 + mu.mu6) * c2 + mu.mu4 + (mu.mu5 - mu.mu2) * s2;
    let p = mu.mu2 * s2 - mu.mu3 * c2;
    let q = (l1 + l2) * c2 + (l1 - l2) * s2;
    (g, p, q)
}

/// Solves p(theta) = q(theta) = 0 on [0, pi/2].
///
/// A common root exists exactly when Parodi's relation holds (then
/// theta0 = arctan sqrt(mu3/mu2)); otherwise returns `None`.
pub fn solve_pq_system(mu: &LeslieCoefficients, tol: f64) -> Result<Option<f64>> {
    let l1 = mu.lambda1();
    if l1 >= 0.0 {
        return Err(Error::domain(
            "lama1a",
            format!("lambda1 = mu2 - mu3 = {l1} must be negative"),
        ));
    }
    if (mu.mu5 - mu.mu6).abs() < mu.mu3 - mu.mu2 {
        return Err(Error::domain(
            "shear-alignment",
            format!(
                "|mu5 - mu6| = {} must be at least mu3 - mu2 = {}",
                (mu.mu5 - mu.mu6).abs(),
                mu.mu3 - mu.mu2
            ),
        ));
    }
    if mu.mu2 * mu.mu3 < 0.0 {
        return Err(Error::domain(
            "mu2mu3",
            format!("mu2 mu3 = {} must be >= 0", mu.mu2 * mu.mu3),
        ));
    }
    if !mu.satisfies_parodi(tol) {
        return Ok(None);
    }
    let theta0 = if mu.mu2 == 0.0 {
        core::f64::consts::FRAC_PI_2
    } else {
        let ratio = mu.mu3 / mu.mu2;
        ratio.max(0.0).sqrt().atan()
    };
    Ok(Some(theta0))
}

impl LeslieUnstableParams {
    /// Validates the Le1, Le2, Le3a and Le3 coefficient window.
    pub fn validate(&self) -> Result<()> {
        let m = &self.mu;
        let eps = self.epsilon_leslie;
        if !(m.mu6 > 0.0 && m.mu2 > 0.0) {
            return Err(Error::domain(
                "Le1",
                format!("mu6 = {} and mu2 = {} must both be positive", m.mu6, m.mu2),
            ));
        }
        if m.mu5 >= m.mu2.min(m.mu6) {
            return Err(Error::domain(
                "Le2",
                format!("mu5 = {} must be below min(mu2, mu6) = {}", m.mu5, m.mu2.min(m.mu6)),
            ));
        }
        let expected_mu3 = m.mu6 - m.mu5 + m.mu2 - eps;
        let scale: f64 = m.as_array().iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        if (m.mu3 - expected_mu3).abs() > 1e-12 * scale {
            return Err(Error::domain(
                "Le3a",
                format!("mu3 = {} must equal mu6 - mu5 + mu2 - eps = {expected_mu3}", m.mu3),
            ));
        }
        let cap = (m.mu6 - m.mu5)
            .min(2.0 * m.mu2)
            .min(2.0 * (m.mu6 - m.mu5) * (m.mu2 - m.mu5) / (4.0 * m.mu6 - 3.0 * m.mu5 + 3.0 * m.mu2));
        if !(eps > 0.0 && eps < cap) {
            return Err(Error::domain(
                "Le3",
                format!("epsilon = {eps} must lie in (0, {cap})"),
            ));
        }
        Ok(())
    }

    /// Flow-alignment angle theta0 = arctan sqrt((2(mu6-mu5)-eps)/eps) with
    /// one Newton polish on q; q(theta0) = 0 while p(theta0) != 0.
    pub fn theta0(&self) -> Result<f64> {
        self.validate()?;
        let m = &self.mu;
        let eps = self.epsilon_leslie;
        let mut theta = ((2.0 * (m.mu6 - m.mu5) - eps) / eps).sqrt().atan();
        // One Newton pass on q keeps the root tight near the Le3 boundary:
        // dq/dtheta = -2 lambda2 sin(2 theta).
        let l2 = m.lambda2();
        let dq = -2.0 * l2 * (2.0 * theta).sin();
        if dq.abs() > 1e-14 {
            let (_, _, q) = gpq(theta, m);
            theta -= q / dq;
        }
        Ok(theta.clamp(0.0, core::f64::consts::FRAC_PI_2))
    }
}

/// Determinant residual |lambda1 w^2 + i m^2 (lambda1 g/2 + p q/2 - 1) w
/// + m^4 g/2| of a candidate frequency.
pub fn dispersion_residual(omega: Complex64, m: f64, theta: f64, mu: &LeslieCoefficients) -> f64 {
    let (g, p, q) = gpq(theta, mu);
    let l1 = mu.lambda1();
    let b = Complex64::new(0.0, m * m * (l1 * g / 2.0 + p * q / 2.0 - 1.0));
    let c = Complex64::new(m.powi(4) * g / 2.0, 0.0);
    (l1 * omega * omega + b * omega + c).norm()
}

/// Roots of the dispersion relation at wave number m and angle theta,
/// ordered by ascending imaginary part. The state is linearly stable for
/// this (m, theta) exactly when both imaginary parts are <= 0.
pub fn dispersion_roots(
    m: f64,
    theta: f64,
    mu: &LeslieCoefficients,
) -> Result<(Complex64, Complex64)> {
    let l1 = mu.lambda1();
    if l1 == 0.0 {
        return Err(Error::domain("lama1", "dispersion relation undefined for lambda1 = 0"));
    }
    if m == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let (g, p, q) = gpq(theta, mu);
    let a = Complex64::new(l1, 0.0);
    let b = Complex64::new(0.0, m * m * (l1 * g / 2.0 + p * q / 2.0 - 1.0));
    let c = Complex64::new(m.powi(4) * g / 2.0, 0.0);
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Pick the sign that avoids cancellation in -b -+ disc.
    let bp = -b + disc;
    let bm = -b - disc;
    let big = if bp.norm() >= bm.norm() { bp } else { bm };
    let (r1, r2) = if big.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        let root1 = big / (2.0 * a);
        let root2 = c / (a * root1);
        (root1, root2)
    };
    if r1.im <= r2.im {
        Ok((r1, r2))
    } else {
        Ok((r2, r1))
    }
}

/// Places nu = (cos phi, sin phi, 0) and n in span{nu, e_perp} so that
/// nu . n = sin theta0 (the in-plane geometry).
pub fn in_plane_geometry(theta0: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let nu = [phi.cos(), phi.sin(), 0.0];
    let perp = [-phi.sin(), phi.cos(), 0.0];
    let s = theta0.sin();
    let c = theta0.cos();
    let n = [s * nu[0] + c * perp[0], s * nu[1] + c * perp[1], s * nu[2] + c * perp[2]];
    (nu, n)
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Builds the growing plane-wave mode of the unstable coefficient window:
/// a = 0, b = n - nu sin theta0, omega = -i m^2 g(theta0)/2 with
/// Im(omega) > 0.
pub fn unstable_mode(
    params: &LeslieUnstableParams,
    m: f64,
    nu: [f64; 3],
    n: [f64; 3],
) -> Result<PlaneWaveMode> {
    params.validate()?;
    if m == 0.0 || !m.is_finite() {
        return Err(Error::Usage(format!("wave number m = {m} must be nonzero and finite")));
    }
    let mu = &params.mu;
    let theta0 = params.theta0()?;
    let half_sum = 2.0 * mu.mu6 - mu.mu5 + mu.mu2;
    if !(mu.mu1 >= 0.0 && mu.mu1 < 0.25 * half_sum) {
        return Err(Error::domain(
            "Le4",
            format!("mu1 = {} must lie in [0, {})", mu.mu1, 0.25 * half_sum),
        ));
    }
    let (g, _, q) = gpq(theta0, mu);
    let cos2 = theta0.cos() * theta0.cos();
    if !(mu.mu4 >= 0.0 && mu.mu4 < 0.5 * half_sum * cos2) {
        return Err(Error::domain(
            "Le5",
            format!(
                "mu4 = {} must lie in [0, {}) for the mode to grow",
                mu.mu4,
                0.5 * half_sum * cos2
            ),
        ));
    }
    debug_assert!(q.abs() < 1e-10, "theta0 must be a q-root");
    let s = theta0.sin();
    if (dot3(&nu, &nu) - 1.0).abs() > 1e-10 || (dot3(&n, &n) - 1.0).abs() > 1e-10 {
        return Err(Error::Usage("nu and n must be unit vectors".into()));
    }
    if (dot3(&nu, &n) - s).abs() > 1e-10 {
        return Err(Error::Usage(format!(
            "nu . n = {} must equal sin(theta0) = {s}",
            dot3(&nu, &n)
        )));
    }
    let b = [n[0] - nu[0] * s, n[1] - nu[1] * s, n[2] - nu[2] * s];
    let omega = Complex64::new(0.0, -m * m * g / 2.0);
    let cos_2theta = (2.0 * theta0).cos();
    let c_amp = Complex64::new(0.0, m * s / 2.0 * (g + mu.mu2 - mu.mu4 + mu.mu5 * cos_2theta));
    let d_amp = Complex64::new(0.0, -(mu.lambda2() - mu.lambda1()) / 2.0 * m * s);
    Ok(PlaneWaveMode {
        theta: theta0,
        m,
        nu,
        n,
        a: [0.0; 3],
        b,
        omega,
        c_amp,
        d_amp,
    })
}

/// Relative residuals of the four linearized equations (momentum,
/// incompressibility, director, unit-length constraint) for a plane-wave
/// mode. Each residual is the largest component magnitude divided by the
/// largest term magnitude entering that equation.
pub fn linearized_residuals(mode: &PlaneWaveMode, mu: &LeslieCoefficients) -> [f64; 4] {
    let i = Complex64::new(0.0, 1.0);
    let m = mode.m;
    let omega = mode.omega;
    let nu = mode.nu;
    let n = mode.n;
    let a = mode.a;
    let b = mode.b;
    let pressure = mode.c_amp;
    let tension = mode.d_amp;
    let l1 = mu.lambda1();
    let l2 = mu.lambda2();
    let sin_t = dot3(&nu, &n);
    let n_dot_b = dot3(&n, &b);
    let nu_dot_a = dot3(&nu, &a);

    let mut worst_momentum: f64 = 0.0;
    let mut scale_momentum: f64 = 0.0;
    let mut worst_director: f64 = 0.0;
    let mut scale_director: f64 = 0.0;
    for k in 0..3 {
        // Momentum equation terms.
        let t = [
            -i * omega * b[k],
            i * m * nu[k] * pressure,
            Complex64::new(mu.mu1 * m * m * sin_t * sin_t * n_dot_b * n[k], 0.0),
            Complex64::new((mu.mu2 + mu.mu5) / 2.0 * m * m * sin_t * n_dot_b * nu[k], 0.0),
            Complex64::new((mu.mu3 + mu.mu6) / 2.0 * m * m * n_dot_b * n[k], 0.0),
            Complex64::new(mu.mu4 / 2.0 * m * m * b[k], 0.0),
            Complex64::new((mu.mu5 - mu.mu2) / 2.0 * m * m * sin_t * sin_t * b[k], 0.0),
            -mu.mu2 * m * omega * sin_t * a[k],
            -mu.mu3 * m * omega * nu_dot_a * n[k],
        ];
        let sum: Complex64 = t.iter().sum();
        worst_momentum = worst_momentum.max(sum.norm());
        let terms: f64 = t.iter().map(|z| z.norm()).sum();
        scale_momentum = scale_momentum.max(terms);

        // Director equation terms.
        let td = [
            i * l1 * omega * a[k],
            Complex64::new(m * m * a[k], 0.0),
            -tension * n[k],
            i * (l1 - l2) / 2.0 * m * sin_t * b[k],
            -i * (l1 + l2) / 2.0 * m * n_dot_b * nu[k],
        ];
        let sum: Complex64 = td.iter().sum();
        worst_director = worst_director.max(sum.norm());
        let terms: f64 = td.iter().map(|z| z.norm()).sum();
        scale_director = scale_director.max(terms);
    }
    let rel = |r: f64, s: f64| if s > 0.0 { r / s } else { 0.0 };
    let incompressibility = rel(m.abs() * dot3(&nu, &b).abs(), m.abs() * 3.0f64.sqrt());
    let unit_length = rel(dot3(&n, &a).abs(), dot3(&a, &a).sqrt().max(1.0));
    [
        rel(worst_momentum, scale_momentum),
        incompressibility,
        rel(worst_director, scale_director),
        unit_length,
    ]
}

/// The reference unstable coefficient set
/// mu = (0, 0.5, 1.35, 0.05, 0, 1) with epsilon = 0.15.
pub fn lc_unstable_1() -> LeslieUnstableParams {
    LeslieUnstableParams {
        mu: LeslieCoefficients::new([0.0, 0.5, 1.35, 0.05, 0.0, 1.0], 1.0),
        epsilon_leslie: 0.15,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{simplified_model, MoleculeKind};
    use crate::prng::SplitMix64;

    #[test]
    fn gpq_at_zero_angle() {
        let mu = LeslieCoefficients::new([0.3, -0.5, 0.5, 0.7, 0.1, 0.4], 1.0);
        let (g, p, q) = gpq(0.0, &mu);
        assert!((g - (mu.mu3 + mu.mu6 + mu.mu4)).abs() < 1e-15);
        assert!((p + mu.mu3).abs() < 1e-15);
        assert!((q - (mu.lambda1() + mu.lambda2())).abs() < 1e-15);
    }

    #[test]
    fn gpq_mu4_only_is_constant() {
        let mu = LeslieCoefficients::new([0.0, 0.0, 0.0, 0.9, 0.0, 0.0], 1.0);
        for k in 0..20 {
            let theta = k as f64 * core::f64::consts::FRAC_PI_2 / 19.0;
            let (g, p, q) = gpq(theta, &mu);
            assert!((g - 0.9).abs() < 1e-15);
            assert!(p.abs() < 1e-15);
            assert!(q.abs() < 1e-15);
        }
    }

    #[test]
    fn reference_fixture_values() {
        let params = lc_unstable_1();
        params.validate().unwrap();
        let theta0 = params.theta0().unwrap();
        let c2 = theta0.cos() * theta0.cos();
        assert!((c2 - 0.075).abs() < 1e-13, "cos^2 theta0 = {c2}");
        assert!((theta0 - 1.2933).abs() < 1e-4);
        let (g, p, q) = gpq(theta0, &params.mu);
        assert!((g + 0.23625).abs() < 1e-12, "g = {g}");
        assert!(q.abs() < 1e-12, "q = {q}");
        assert!((p - 0.36125).abs() < 1e-12, "p = {p}");
    }

    #[test]
    fn theta0_q_root_brackets_a_sign_change() {
        let params = lc_unstable_1();
        let theta0 = params.theta0().unwrap();
        let (_, _, qm) = gpq(theta0 - 1e-4, &params.mu);
        let (_, _, qp) = gpq(theta0 + 1e-4, &params.mu);
        assert!(qm * qp < 0.0, "q changes sign across theta0");
    }

    #[test]
    fn theta0_decreases_as_epsilon_grows() {
        let base = lc_unstable_1();
        let mut last = core::f64::consts::FRAC_PI_2;
        for k in 1..8 {
            let eps = 0.02 * k as f64;
            // Keep Le3a consistent: mu3 = mu6 - mu5 + mu2 - eps.
            let mut mu = base.mu;
            mu.mu3 = mu.mu6 - mu.mu5 + mu.mu2 - eps;
            let params = LeslieUnstableParams { mu, epsilon_leslie: eps };
            let theta0 = params.theta0().unwrap();
            assert!(theta0 < last, "theta0 must decrease with epsilon");
            last = theta0;
        }
    }

    #[test]
    fn pq_root_exists_exactly_under_parodi() {
        // Parodi set mu2 = 0.25, mu3 = 1, mu6 - mu5 = 1.25.
        let parodi = LeslieCoefficients::new([0.0, 0.25, 1.0, 0.5, 0.0, 1.25], 1.0);
        let theta0 =
            solve_pq_system(&parodi, parodi.default_parodi_tol()).unwrap().expect("root");
        assert!((theta0 - 2.0f64.atan()).abs() < 1e-13);
        let (_, p, q) = gpq(theta0, &parodi);
        assert!(p.abs() < 1e-12 && q.abs() < 1e-12);

        // mu3 = 0 with Parodi: the root sits at theta0 = 0.
        let edge = LeslieCoefficients::new([0.0, -1.0, 0.0, 0.5, 0.0, -1.0], 1.0);
        let theta0 = solve_pq_system(&edge, edge.default_parodi_tol()).unwrap().expect("root");
        assert_eq!(theta0, 0.0);

        // Non-Parodi reference set: no root, and p^2 + q^2 stays away from 0.
        let params = lc_unstable_1();
        assert!(solve_pq_system(&params.mu, params.mu.default_parodi_tol()).unwrap().is_none());
        let mut min_res = f64::INFINITY;
        for k in 0..=400 {
            let theta = k as f64 * core::f64::consts::FRAC_PI_2 / 400.0;
            let (_, p, q) = gpq(theta, &params.mu);
            min_res = min_res.min(p * p + q * q);
        }
        assert!(min_res > 1e-2, "joint residual floor {min_res}");
    }

    #[test]
    fn pq_preconditions_are_named() {
        let bad_l1 = LeslieCoefficients::new([0.0, 1.0, 0.5, 1.0, 0.0, 1.5], 1.0);
        match solve_pq_system(&bad_l1, 1e-12) {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "lama1a"),
            other => panic!("expected lama1a, got {other:?}"),
        }
        let bad_align = LeslieCoefficients::new([0.0, -1.0, 1.0, 1.0, 0.0, 0.5], 1.0);
        match solve_pq_system(&bad_align, 1e-12) {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "shear-alignment"),
            other => panic!("expected shear-alignment, got {other:?}"),
        }
        let bad_sign = LeslieCoefficients::new([0.0, -3.0, 1.0, 1.0, 0.0, 4.5], 1.0);
        match solve_pq_system(&bad_sign, 1e-12) {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "mu2mu3"),
            other => panic!("expected mu2mu3, got {other:?}"),
        }
    }

    #[test]
    fn parodi_iff_q_equals_two_p() {
        let mut rng = SplitMix64::new(2024);
        // Parodi family: q(theta) == 2 p(theta) for all theta.
        let parodi = simplified_model(MoleculeKind::RodLike, -1.7, 0.4, 1.0).unwrap();
        for _ in 0..100 {
            let theta = rng.next_f64() * core::f64::consts::FRAC_PI_2;
            let (_, p, q) = gpq(theta, &parodi);
            assert!((q - 2.0 * p).abs() <= 1e-12 * (1.0 + q.abs()));
        }
        // Non-Parodi set: the identity fails away from theta = pi/4.
        let broken = lc_unstable_1().mu;
        let mut max_gap: f64 = 0.0;
        for _ in 0..100 {
            let theta = rng.next_f64() * core::f64::consts::FRAC_PI_2;
            let (_, p, q) = gpq(theta, &broken);
            max_gap = max_gap.max((q - 2.0 * p).abs());
        }
        assert!(max_gap > 0.1);
    }

    #[test]
    fn dispersion_zero_wave_number() {
        let mu = lc_unstable_1().mu;
        let (w1, w2) = dispersion_roots(0.0, 0.7, &mu).unwrap();
        assert_eq!(w1, Complex64::new(0.0, 0.0));
        assert_eq!(w2, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dispersion_factorises_at_q_root() {
        let params = lc_unstable_1();
        let theta0 = params.theta0().unwrap();
        let m = 2.0;
        let (w1, w2) = dispersion_roots(m, theta0, &params.mu).unwrap();
        // Director root i m^2 / lambda1 = -4.70588...i and shear root
        // -i m^2 g/2 = +0.4725 i.
        let director = Complex64::new(0.0, m * m / params.mu.lambda1());
        let shear = Complex64::new(0.0, 0.4725);
        assert!((w1 - director).norm() < 1e-10, "w1 = {w1}");
        assert!((w2 - shear).norm() < 1e-10, "w2 = {w2}");
        let (g, _, _) = gpq(theta0, &params.mu);
        let tol = 1e-12 * m.powi(4) * g.abs().max(1.0);
        assert!(dispersion_residual(w1, m, theta0, &params.mu) < tol);
        assert!(dispersion_residual(w2, m, theta0, &params.mu) < tol);
    }

    #[test]
    fn case_i_sets_are_spectrally_stable() {
        let sets = [
            crate::coefficients::sphere_like_reference(),
            simplified_model(MoleculeKind::RodLike, -1.0, 0.8, 1.0).unwrap(),
            simplified_model(MoleculeKind::DiscLike, -0.7, 1.2, 1.0).unwrap(),
        ];
        for mu in sets {
            for k in 0..=4 {
                let theta = k as f64 * core::f64::consts::FRAC_PI_2 / 4.0;
                for m in [1.0, 2.0, 4.0] {
                    let (w1, w2) = dispersion_roots(m, theta, &mu).unwrap();
                    let tol = 1e-12 * m * m;
                    assert!(w1.im <= tol && w2.im <= tol, "unstable root for {mu:?}");
                }
            }
        }
    }

    #[test]
    fn unstable_mode_reference_numbers() {
        let params = lc_unstable_1();
        let theta0 = params.theta0().unwrap();
        let (nu, n) = in_plane_geometry(theta0, 0.0);
        let mode = unstable_mode(&params, 2.0, nu, n).unwrap();
        assert!((mode.growth_rate() - 0.4725).abs() < 1e-12);
        assert!(mode.is_unstable());
        // Constraint residuals: n.a = 0 trivially, nu.b = 0 by construction.
        assert!(dot3(&mode.n, &mode.a).abs() < 1e-12);
        assert!(dot3(&mode.nu, &mode.b).abs() < 1e-12);
        let res = linearized_residuals(&mode, &params.mu);
        for (k, r) in res.iter().enumerate() {
            assert!(*r <= 1e-10, "equation {k} residual {r}");
        }
    }

    #[test]
    fn unstable_mode_rejects_large_mu4() {
        let mut params = lc_unstable_1();
        params.mu.mu4 = 0.2; // above the Le5 cap 0.09375
        let theta0 = 1.2933;
        let (nu, n) = in_plane_geometry(theta0, 0.0);
        match unstable_mode(&params, 2.0, nu, n) {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "Le5"),
            other => panic!("expected Le5 rejection, got {other:?}"),
        }
    }

    #[test]
    fn unstable_mode_rejects_bad_geometry() {
        let params = lc_unstable_1();
        let nu = [1.0, 0.0, 0.0];
        let n = [0.0, 1.0, 0.0]; // nu.n = 0 != sin(theta0)
        assert!(matches!(unstable_mode(&params, 2.0, nu, n), Err(Error::Usage(_))));
    }

    #[test]
    fn le_window_violations_are_named() {
        let base = lc_unstable_1();
        let mut bad = base;
        bad.mu.mu2 = -0.1;
        match bad.validate() {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "Le1"),
            other => panic!("expected Le1, got {other:?}"),
        }
        let mut bad = base;
        bad.mu.mu5 = 0.9;
        // Keep Le3a consistent so the Le2 check is the one that trips.
        bad.mu.mu3 = bad.mu.mu6 - bad.mu.mu5 + bad.mu.mu2 - bad.epsilon_leslie;
        match bad.validate() {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "Le2"),
            other => panic!("expected Le2, got {other:?}"),
        }
        let mut bad = base;
        bad.mu.mu3 = 2.0;
        match bad.validate() {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "Le3a"),
            other => panic!("expected Le3a, got {other:?}"),
        }
        let mut bad = base;
        bad.epsilon_leslie = 0.5;
        bad.mu.mu3 = bad.mu.mu6 - bad.mu.mu5 + bad.mu.mu2 - bad.epsilon_leslie;
        match bad.validate() {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "Le3"),
            other => panic!("expected Le3, got {other:?}"),
        }
    }

    #[test]
    fn scale_covariance_of_gpq_and_growth() {
        let params = lc_unstable_1();
        let theta0 = params.theta0().unwrap();
        for c in [0.5, 2.0, 1.0 / (core::f64::consts::PI * core::f64::consts::PI)] {
            let scaled = LeslieUnstableParams {
                mu: params.mu.scaled(c),
                epsilon_leslie: c * params.epsilon_leslie,
            };
            let theta_scaled = scaled.theta0().unwrap();
            assert!((theta_scaled - theta0).abs() < 1e-12);
            let (g0, p0, q0) = gpq(0.6, &params.mu);
            let (g1, p1, q1) = gpq(0.6, &scaled.mu);
            assert!((g1 - c * g0).abs() < 1e-12 * (1.0 + g0.abs()));
            assert!((p1 - c * p0).abs() < 1e-12);
            assert!((q1 - c * q0).abs() < 1e-12);
            let (nu, n) = in_plane_geometry(theta_scaled, 0.0);
            let mode = unstable_mode(&scaled, 2.0, nu, n).unwrap();
            assert!((mode.growth_rate() - c * 0.4725).abs() < 1e-12 * (1.0 + c));
        }
    }
}
