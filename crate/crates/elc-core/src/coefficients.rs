//! Leslie coefficients, derived material constants and regime classification.
//!
//! The six viscosities mu1..mu6 determine the kinematic transport constants
//! lambda1 = mu2 - mu3 and lambda2 = mu5 - mu6. Whether Parodi's relation
//! mu2 + mu3 = mu6 - mu5 holds decides which form of the basic energy law
//! applies; the two admissible regimes are classified here together with the
//! dissipation margin of the non-Parodi quadratic form.

use crate::error::{Error, Result};
#[allow(unused_imports)] // inherent std methods take over when std is linked
use crate::math::FloatMath;
use alloc::format;

/// The six Leslie viscosities plus the Ginzburg--Landau penalty length eps.
///
/// The struct itself is a plain value and may hold any numbers; simulation
/// entry points call [`LeslieCoefficients::validate_for_simulation`] which
/// enforces mu4 > 0, mu1 >= 0, eps_penalty > 0 and lambda1 < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeslieCoefficients {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
    pub mu5: f64,
    pub mu6: f64,
    /// Penalty length scale of the relaxed unit-length constraint.
    pub eps_penalty: f64,
}

/// Constants derived from the viscosities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// lambda1 = mu2 - mu3 (rotational transport constant, must be < 0).
    pub lambda1: f64,
    /// lambda2 = mu5 - mu6 (stretching transport constant).
    pub lambda2: f64,
    /// Jeffrey shape parameter alpha = (1 - lambda2/lambda1)/2;
    /// `None` when lambda1 = 0 and the ratio is undefined.
    pub alpha: Option<f64>,
    /// mu2 + mu3 - mu6 + mu5; zero exactly when Parodi's relation holds.
    pub parodi_defect: f64,
}

/// Coefficient regime for the energy dissipation laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    /// Parodi's relation holds and lambda2^2/(-lambda1) <= mu5 + mu6.
    CaseI,
    /// No Parodi relation; strict dissipation via the 2x2 margin matrix.
    CaseII,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    /// Smallest eigenvalue of the dissipation quadratic form; 0 for `Neither`.
    pub margin: f64,
}

/// Special coefficient families of the reduced (stress-critical) model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoleculeKind {
    /// mu2 = lambda1 = -lambda2, mu3 = 0.
    RodLike,
    /// mu2 = 0, mu3 = -lambda1 = -lambda2.
    DiscLike,
    /// mu2 = lambda1/2, mu3 = -lambda1/2, lambda2 = 0.
    SphereLike,
}

impl LeslieCoefficients {
    pub fn new(mu: [f64; 6], eps_penalty: f64) -> Self {
        LeslieCoefficients {
            mu1: mu[0],
            mu2: mu[1],
            mu3: mu[2],
            mu4: mu[3],
            mu5: mu[4],
            mu6: mu[5],
            eps_penalty,
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.mu1, self.mu2, self.mu3, self.mu4, self.mu5, self.mu6]
    }

    pub fn lambda1(&self) -> f64 {
        self.mu2 - self.mu3
    }

    pub fn lambda2(&self) -> f64 {
        self.mu5 - self.mu6
    }

    pub fn parodi_defect(&self) -> f64 {
        self.mu2 + self.mu3 - self.mu6 + self.mu5
    }

    /// Default tolerance under which the Parodi defect is treated as zero:
    /// 1e-12 * max(1, sum |mu_i|), so analytically-Parodi sets survive
    /// floating-point entry.
    pub fn default_parodi_tol(&self) -> f64 {
        let sum: f64 = self.as_array().iter().map(|m| m.abs()).sum();
        1e-12 * sum.max(1.0)
    }

    pub fn satisfies_parodi(&self, tol: f64) -> bool {
        self.parodi_defect().abs() <= tol
    }

    /// Multiplies all six viscosities by `c`, leaving the penalty scale as is.
    /// Every regime condition is homogeneous, so classification is unchanged
    /// for c > 0 while stresses and growth rates scale linearly.
    pub fn scaled(&self, c: f64) -> Self {
        let m = self.as_array();
        LeslieCoefficients::new(
            [c * m[0], c * m[1], c * m[2], c * m[3], c * m[4], c * m[5]],
            self.eps_penalty,
        )
    }

    /// Checks the standing assumptions every simulation needs:
    /// mu1 >= 0, mu4 > 0, mu5 + mu6 >= 0, eps_penalty > 0 and lambda1 < 0.
    pub fn validate_for_simulation(&self) -> Result<()> {
        if !self.as_array().iter().all(|m| m.is_finite()) || !self.eps_penalty.is_finite() {
            return Err(Error::Data(format!("non-finite coefficient in {self:?}")));
        }
        if self.mu1 < 0.0 {
            return Err(Error::domain("mu14", format!("mu1 = {} must be >= 0", self.mu1)));
        }
        if self.mu4 <= 0.0 {
            return Err(Error::domain("mu14", format!("mu4 = {} must be > 0", self.mu4)));
        }
        if self.mu5 + self.mu6 < 0.0 {
            return Err(Error::domain(
                "mu56",
                format!("mu5 + mu6 = {} must be >= 0", self.mu5 + self.mu6),
            ));
        }
        if self.eps_penalty <= 0.0 {
            return Err(Error::Data(format!(
                "penalty scale eps = {} must be > 0",
                self.eps_penalty
            )));
        }
        let l1 = self.lambda1();
        if l1 >= 0.0 {
            return Err(Error::domain(
                "lama1a",
                format!("lambda1 = mu2 - mu3 = {l1} must be negative"),
            ));
        }
        Ok(())
    }
}

/// Derives lambda1, lambda2, the Jeffrey parameter and the Parodi defect.
pub fn derive_constants(mu: &LeslieCoefficients) -> DerivedConstants {
    let lambda1 = mu.lambda1();
    let lambda2 = mu.lambda2();
    let alpha = if lambda1 != 0.0 { Some(0.5 * (1.0 - lambda2 / lambda1)) } else { None };
    DerivedConstants { lambda1, lambda2, alpha, parodi_defect: mu.parodi_defect() }
}

fn sign_conditions_hold(mu: &LeslieCoefficients) -> bool {
    mu.lambda1() < 0.0 && mu.mu5 + mu.mu6 >= 0.0 && mu.mu1 >= 0.0 && mu.mu4 > 0.0
}

/// Classifies the coefficient set; `tol` bounds |parodi_defect| for Case I.
///
/// Case I is checked first and wins when both condition sets hold.
pub fn classify_regime(mu: &LeslieCoefficients, tol: f64) -> Regime {
    let l1 = mu.lambda1();
    let l2 = mu.lambda2();
    if sign_conditions_hold(mu) {
        if mu.satisfies_parodi(tol) && l2 * l2 / (-l1) <= mu.mu5 + mu.mu6 {
            let margin = margin_eigenvalue(mu);
            return Regime { tag: RegimeTag::CaseI, margin };
        }
        let cross = l2 - mu.mu2 - mu.mu3;
        if cross.abs() < 2.0 * (-l1).sqrt() * (mu.mu5 + mu.mu6).sqrt() {
            let margin = margin_eigenvalue(mu);
            return Regime { tag: RegimeTag::CaseII, margin };
        }
    }
    Regime { tag: RegimeTag::Neither, margin: 0.0 }
}

/// Classifies with the default Parodi tolerance.
pub fn classify_regime_default(mu: &LeslieCoefficients) -> Regime {
    classify_regime(mu, mu.default_parodi_tol())
}

fn margin_eigenvalue(mu: &LeslieCoefficients) -> f64 {
    let a = -mu.lambda1();
    let c = mu.mu5 + mu.mu6;
    let b = -(mu.lambda2() - mu.mu2 - mu.mu3) / 2.0;
    0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
}

/// Smallest eigenvalue eta of the symmetric dissipation matrix
/// [[-lambda1, -(lambda2-mu2-mu3)/2], [-(lambda2-mu2-mu3)/2, mu5+mu6]].
///
/// eta > 0 exactly when the strict non-Parodi dissipation inequality holds.
pub fn dissipation_margin(mu: &LeslieCoefficients) -> Result<f64> {
    let l1 = mu.lambda1();
    if l1 >= 0.0 {
        return Err(Error::domain(
            "lama1a",
            format!("lambda1 = mu2 - mu3 = {l1} must be negative"),
        ));
    }
    if mu.mu5 + mu.mu6 < 0.0 {
        return Err(Error::domain(
            "mu56",
            format!("mu5 + mu6 = {} must be >= 0", mu.mu5 + mu.mu6),
        ));
    }
    Ok(margin_eigenvalue(mu))
}

/// Fills the reduced-model coefficient family for the named molecule shape.
///
/// All three families satisfy Parodi's relation and sit on the critical
/// line lambda2^2 = (-lambda1)(mu5 + mu6); mu1 = 0 and mu4/eps come from the
/// caller.
pub fn simplified_model(
    kind: MoleculeKind,
    lambda1: f64,
    mu4: f64,
    eps_penalty: f64,
) -> Result<LeslieCoefficients> {
    if lambda1 >= 0.0 {
        return Err(Error::domain(
            "lama1a",
            format!("lambda1 = {lambda1} must be negative"),
        ));
    }
    let lambda2 = match kind {
        MoleculeKind::RodLike => -lambda1,
        MoleculeKind::DiscLike => lambda1,
        MoleculeKind::SphereLike => 0.0,
    };
    let mu2 = 0.5 * (lambda1 - lambda2);
    let mu3 = -0.5 * (lambda1 + lambda2);
    let mu5 = 0.5 * (lambda2 - lambda2 * lambda2 / lambda1);
    let mu6 = -0.5 * (lambda2 + lambda2 * lambda2 / lambda1);
    Ok(LeslieCoefficients { mu1: 0.0, mu2, mu3, mu4, mu5, mu6, eps_penalty })
}

/// The sphere-like Case I reference set mu = (0, -0.5, 0.5, 1, 0.2, 0.2).
pub fn sphere_like_reference() -> LeslieCoefficients {
    LeslieCoefficients::new([0.0, -0.5, 0.5, 1.0, 0.2, 0.2], 1.0)
}

/// A Case II reference set with nonzero Parodi defect and nonzero
/// cross-coupling: mu = (0.1, -0.55, 0.45, 1, 0.3, 0.5).
pub fn case_ii_reference() -> LeslieCoefficients {
    LeslieCoefficients::new([0.1, -0.55, 0.45, 1.0, 0.3, 0.5], 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(values: [f64; 6]) -> LeslieCoefficients {
        LeslieCoefficients::new(values, 1.0)
    }

    #[test]
    fn derive_constants_direct_substitution() {
        let c = derive_constants(&mu([0.0, 0.5, 1.35, 0.0, 0.0, 1.0]));
        assert!((c.lambda1 + 0.85).abs() < 1e-15);
        assert_eq!(c.lambda2, -1.0);
        assert!((c.parodi_defect - 0.85).abs() < 1e-15);
    }

    #[test]
    fn derive_constants_rod_like() {
        // Rod-like family at lambda1 = -1: mu2 = -1, mu3 = 0, mu5 - mu6 = 1.
        let m = simplified_model(MoleculeKind::RodLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.mu2, -1.0);
        assert_eq!(m.mu3, 0.0);
        assert_eq!(m.mu5, 1.0);
        assert_eq!(m.mu6, 0.0);
        let c = derive_constants(&m);
        assert_eq!(c.lambda1, -1.0);
        assert_eq!(c.lambda2, 1.0);
        assert_eq!(c.parodi_defect, 0.0);
    }

    #[test]
    fn derive_constants_zero_case() {
        let c = derive_constants(&mu([0.0; 6]));
        assert_eq!(c.lambda1, 0.0);
        assert_eq!(c.lambda2, 0.0);
        assert_eq!(c.parodi_defect, 0.0);
        assert!(c.alpha.is_none());
    }

    #[test]
    fn jeffrey_alpha() {
        // alpha = (1 - lambda2/lambda1)/2; rod-like has lambda2 = -lambda1
        // hence alpha = 1.
        let rod = simplified_model(MoleculeKind::RodLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(derive_constants(&rod).alpha, Some(1.0));
        let disc = simplified_model(MoleculeKind::DiscLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(derive_constants(&disc).alpha, Some(0.0));
        let sphere = simplified_model(MoleculeKind::SphereLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(derive_constants(&sphere).alpha, Some(0.5));
    }

    #[test]
    fn classify_sphere_like_is_case_i() {
        let m = mu([0.0, -0.5, 0.5, 1.0, 0.2, 0.2]);
        let r = classify_regime_default(&m);
        assert_eq!(r.tag, RegimeTag::CaseI);
        assert!((r.margin - 0.4).abs() < 1e-14);
    }

    #[test]
    fn classify_neither() {
        let m = mu([0.0, 0.5, 1.35, 0.05, 0.0, 1.0]);
        // defect = 0.85, |lambda2 - mu2 - mu3| = 2.85 > 2 sqrt(0.85) ~ 1.844.
        let r = classify_regime_default(&m);
        assert_eq!(r.tag, RegimeTag::Neither);
        assert_eq!(r.margin, 0.0);
    }

    #[test]
    fn classify_case_ii() {
        let m = mu([0.0, -0.6, 0.4, 1.0, 0.3, 0.5]);
        // defect = -0.4 breaks Case I; cross term is 0 < 2 sqrt(0.8).
        let r = classify_regime_default(&m);
        assert_eq!(r.tag, RegimeTag::CaseII);
        assert!(r.margin > 0.0);
    }

    #[test]
    fn margin_diagonal_equal_eigenvalues() {
        // Cross term 0 and mu5 + mu6 = -lambda1 = 1 gives eta = 1.
        let d = mu([0.0, -0.5, 0.5, 1.0, 0.5, 0.5]);
        assert_eq!(d.lambda1(), -1.0);
        assert_eq!(d.mu5 + d.mu6, 1.0);
        assert_eq!(d.lambda2() - d.mu2 - d.mu3, 0.0);
        assert!((dissipation_margin(&d).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn margin_sphere_like() {
        let m = sphere_like_reference();
        assert!((dissipation_margin(&m).unwrap() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn margin_boundary_vanishes() {
        // |lambda2 - mu2 - mu3| = 2 sqrt(-lambda1) sqrt(mu5+mu6) makes the
        // determinant zero, hence eta = 0.
        // lambda1 = -1, mu5+mu6 = 1, cross = lambda2 - (mu2+mu3) = -2.
        let m = mu([0.0, 0.25, 1.25, 1.0, 0.25, 0.75]);
        assert_eq!(m.lambda1(), -1.0);
        assert_eq!(m.lambda2() - m.mu2 - m.mu3, -2.0);
        assert!(dissipation_margin(&m).unwrap().abs() < 1e-14);
    }

    #[test]
    fn margin_rejects_bad_lambda1() {
        let m = mu([0.0, 1.0, 0.5, 1.0, 0.0, 0.0]);
        match dissipation_margin(&m) {
            Err(Error::Domain { condition, .. }) => assert_eq!(condition, "lama1a"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn simplified_models_match_reference_values() {
        let rod = simplified_model(MoleculeKind::RodLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!((rod.mu2, rod.mu3, rod.mu5, rod.mu6), (-1.0, 0.0, 1.0, 0.0));
        let sphere = simplified_model(MoleculeKind::SphereLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!((sphere.mu2, sphere.mu3, sphere.mu5, sphere.mu6), (-0.5, 0.5, 0.0, 0.0));
        let disc = simplified_model(MoleculeKind::DiscLike, -1.0, 1.0, 1.0).unwrap();
        assert_eq!((disc.mu2, disc.mu3), (0.0, 1.0));
        assert_eq!(disc.lambda2(), -1.0);
    }

    #[test]
    fn simplified_models_sit_on_critical_line() {
        for kind in [MoleculeKind::RodLike, MoleculeKind::DiscLike, MoleculeKind::SphereLike] {
            for l1 in [-0.3, -1.0, -2.5] {
                let m = simplified_model(kind, l1, 0.7, 1.0).unwrap();
                let c = derive_constants(&m);
                assert!(c.parodi_defect.abs() < 1e-15, "{kind:?} must satisfy Parodi");
                let lhs = c.lambda2 * c.lambda2;
                let rhs = (-c.lambda1) * (m.mu5 + m.mu6);
                assert!((lhs - rhs).abs() <= 1e-14 * lhs.max(1.0), "{kind:?} critical line");
            }
        }
    }

    #[test]
    fn simplified_model_rejects_nonnegative_lambda1() {
        assert!(simplified_model(MoleculeKind::RodLike, 0.0, 1.0, 1.0).is_err());
        assert!(simplified_model(MoleculeKind::DiscLike, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn classification_is_scale_covariant() {
        let sets = [
            mu([0.0, -0.5, 0.5, 1.0, 0.2, 0.2]),
            mu([0.1, -0.55, 0.45, 1.0, 0.3, 0.5]),
            mu([0.0, 0.5, 1.35, 0.05, 0.0, 1.0]),
        ];
        for m in sets {
            let base = classify_regime_default(&m);
            for c in [0.25, 3.0, 17.5] {
                let scaled = m.scaled(c);
                let r = classify_regime_default(&scaled);
                assert_eq!(r.tag, base.tag, "scale {c}");
                assert!((r.margin - c * base.margin).abs() <= 1e-12 * (1.0 + c * base.margin));
            }
        }
    }

    #[test]
    fn margin_positive_implies_admissible_regime() {
        let m = case_ii_reference();
        let eta = dissipation_margin(&m).unwrap();
        assert!(eta > 0.0);
        let r = classify_regime_default(&m);
        assert!(matches!(r.tag, RegimeTag::CaseI | RegimeTag::CaseII));
    }
}
