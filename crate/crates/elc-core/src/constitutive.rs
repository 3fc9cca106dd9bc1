//! Pointwise constitutive quantities of the nematic stress system: the
//! Ginzburg--Landau penalty force, kinematic transport terms, the Leslie
//! viscous stress, the Ericksen elastic stress and the conservative stress
//! split with its eta5/eta6 coefficients.

use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::spectral::{
    dealias_scalar, dealias_tensor, dealias_vector, jacobian, strain_vorticity, ScalarField,
    TensorField, VectorField,
};
use alloc::format;

/// Transport quantities entering the stress: the corotational rate
/// N = d_t + (v.grad) d - Omega d, the stretching A d and the scalar d^T A d.
#[derive(Debug, Clone)]
pub struct KinematicTerms {
    pub n_rate: VectorField,
    pub a_dot_d: VectorField,
    pub dt_a_d: ScalarField,
}

/// Penalty force f(d) = eps^-2 (|d|^2 - 1) d, the gradient of the relaxed
/// unit-length energy.
pub fn gl_force(d: &VectorField, eps_penalty: f64) -> VectorField {
    let inv_eps2 = 1.0 / (eps_penalty * eps_penalty);
    let grid = d.grid();
    let dim = grid.dim();
    let mut out = VectorField::zeros(grid);
    for idx in 0..grid.len() {
        let mut norm2 = 0.0;
        for i in 0..dim {
            let di = d.comp(i).data()[idx];
            norm2 += di * di;
        }
        let factor = inv_eps2 * (norm2 - 1.0);
        for i in 0..dim {
            out.comp_mut(i).data_mut()[idx] = factor * d.comp(i).data()[idx];
        }
    }
    out
}

/// Penalty energy density integral: \int (1/4) eps^-2 (|d|^2 - 1)^2.
pub fn penalty_energy(d: &VectorField, eps_penalty: f64) -> f64 {
    let inv_eps2 = 1.0 / (eps_penalty * eps_penalty);
    let grid = d.grid();
    let dim = grid.dim();
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        let mut norm2 = 0.0;
        for i in 0..dim {
            let di = d.comp(i).data()[idx];
            norm2 += di * di;
        }
        let dev = norm2 - 1.0;
        acc += 0.25 * inv_eps2 * dev * dev;
    }
    acc * grid.cell_volume()
}

/// Applies the penalty-force Jacobian f'(d) = eps^-2 [(|d|^2-1) I + 2 d d^T]
/// to `w`, pointwise.
pub fn gl_jacobian_apply(d: &VectorField, w: &VectorField, eps_penalty: f64) -> VectorField {
    let inv_eps2 = 1.0 / (eps_penalty * eps_penalty);
    let grid = d.grid();
    let dim = grid.dim();
    let mut out = VectorField::zeros(grid);
    for idx in 0..grid.len() {
        let mut norm2 = 0.0;
        let mut ddotw = 0.0;
        for i in 0..dim {
            let di = d.comp(i).data()[idx];
            norm2 += di * di;
            ddotw += di * w.comp(i).data()[idx];
        }
        for i in 0..dim {
            let di = d.comp(i).data()[idx];
            let wi = w.comp(i).data()[idx];
            out.comp_mut(i).data_mut()[idx] = inv_eps2 * ((norm2 - 1.0) * wi + 2.0 * ddotw * di);
        }
    }
    out
}

/// Pointwise matrix-vector product t(i,j) v_j.
pub fn tensor_vector(t: &TensorField, v: &VectorField) -> VectorField {
    let grid = t.grid();
    let dim = grid.dim();
    let mut out = VectorField::zeros(grid);
    for i in 0..dim {
        let oi = out.comp_mut(i).data_mut();
        for j in 0..dim {
            let tij = t.entry(i, j).data();
            let vj = v.comp(j).data();
            for (slot, (a, b)) in oi.iter_mut().zip(tij.iter().zip(vj)) {
                *slot += a * b;
            }
        }
    }
    out
}

/// Pointwise dot product of two vector fields.
pub fn dot(a: &VectorField, b: &VectorField) -> ScalarField {
    let grid = a.grid();
    let dim = grid.dim();
    let mut out = ScalarField::zeros(grid);
    for i in 0..dim {
        let ai = a.comp(i).data();
        let bi = b.comp(i).data();
        for (s, (x, y)) in out.data_mut().iter_mut().zip(ai.iter().zip(bi)) {
            *s += x * y;
        }
    }
    out
}

/// (v . grad) d via the spectral Jacobian, pointwise contraction.
pub(crate) fn advect(v: &VectorField, d: &VectorField) -> Result<VectorField> {
    let grad = jacobian(d)?;
    Ok(tensor_vector(&grad, v))
}

pub(crate) fn ensure_symmetric(a: &TensorField, tol: f64) -> Result<()> {
    let dim = a.grid().dim();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let upper = a.entry(i, j).data();
            let lower = a.entry(j, i).data();
            for (x, y) in upper.iter().zip(lower) {
                if (x - y).abs() > tol {
                    return Err(Error::Data(format!(
                        "strain tensor asymmetric beyond {tol}: |{x} - {y}|"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn ensure_antisymmetric(omega: &TensorField, tol: f64) -> Result<()> {
    let dim = omega.grid().dim();
    for i in 0..dim {
        for j in i..dim {
            let upper = omega.entry(i, j).data();
            let lower = omega.entry(j, i).data();
            for (x, y) in upper.iter().zip(lower) {
                if (x + y).abs() > tol {
                    return Err(Error::Data(format!(
                        "vorticity tensor not antisymmetric beyond {tol}: |{x} + {y}|"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Kinematic transport terms from (v, d, d_t); spectral derivatives,
/// dealiased products.
pub fn kinematic_terms(
    v: &VectorField,
    d: &VectorField,
    d_t: &VectorField,
) -> Result<KinematicTerms> {
    if v.grid() != d.grid() || d.grid() != d_t.grid() {
        return Err(Error::Usage("kinematic_terms fields live on different grids".into()));
    }
    let (a, omega) = strain_vorticity(v)?;
    let adv = advect(v, d)?;
    let omega_d = tensor_vector(&omega, d);
    let grid = v.grid();
    let dim = grid.dim();
    let mut n_rate = VectorField::zeros(grid);
    for i in 0..dim {
        let slot = n_rate.comp_mut(i).data_mut();
        let dti = d_t.comp(i).data();
        let advi = adv.comp(i).data();
        let odi = omega_d.comp(i).data();
        for idx in 0..slot.len() {
            slot[idx] = dti[idx] + advi[idx] - odi[idx];
        }
    }
    let a_dot_d = tensor_vector(&a, d);
    let dt_a_d = dot(d, &a_dot_d);
    Ok(KinematicTerms {
        n_rate: dealias_vector(&n_rate),
        a_dot_d: dealias_vector(&a_dot_d),
        dt_a_d: dealias_scalar(&dt_a_d),
    })
}

/// Leslie viscous stress
/// sigma = mu1 (d^T A d) d(x)d + mu2 N(x)d + mu3 d(x)N + mu4 A
///         + mu5 Ad(x)d + mu6 d(x)Ad,
/// assembled pointwise and dealiased.
pub fn leslie_stress(
    a: &TensorField,
    omega: &TensorField,
    n_rate: &VectorField,
    d: &VectorField,
    mu: &LeslieCoefficients,
) -> Result<TensorField> {
    ensure_symmetric(a, 1e-10)?;
    ensure_antisymmetric(omega, 1e-10)?;
    let raw = leslie_stress_raw(a, n_rate, d, mu);
    Ok(dealias_tensor(&raw))
}

/// Undealiased stress assembly shared with the solver, which masks the
/// assembled force once instead of each product.
pub(crate) fn leslie_stress_raw(
    a: &TensorField,
    n_rate: &VectorField,
    d: &VectorField,
    mu: &LeslieCoefficients,
) -> TensorField {
    let grid = a.grid();
    let dim = grid.dim();
    let a_dot_d = tensor_vector(a, d);
    let mut out = TensorField::zeros(grid);
    for idx in 0..grid.len() {
        // d^T A d at this point.
        let mut dtad = 0.0;
        for i in 0..dim {
            dtad += d.comp(i).data()[idx] * a_dot_d.comp(i).data()[idx];
        }
        for i in 0..dim {
            let di = d.comp(i).data()[idx];
            let ni = n_rate.comp(i).data()[idx];
            let adi = a_dot_d.comp(i).data()[idx];
            for j in 0..dim {
                let dj = d.comp(j).data()[idx];
                let nj = n_rate.comp(j).data()[idx];
                let adj = a_dot_d.comp(j).data()[idx];
                let aij = a.entry(i, j).data()[idx];
                out.entry_mut(i, j).data_mut()[idx] = mu.mu1 * dtad * di * dj
                    + mu.mu2 * ni * dj
                    + mu.mu3 * di * nj
                    + mu.mu4 * aij
                    + mu.mu5 * adi * dj
                    + mu.mu6 * di * adj;
            }
        }
    }
    out
}

/// Ericksen elastic stress (grad d (x) grad d)(i,j) = grad_i d . grad_j d.
pub fn ericksen_stress(d: &VectorField) -> Result<TensorField> {
    let grad = jacobian(d)?;
    Ok(ericksen_from_jacobian(&grad))
}

/// Ericksen stress assembled from a precomputed director Jacobian.
pub(crate) fn ericksen_from_jacobian(grad: &TensorField) -> TensorField {
    let grid = grad.grid();
    let dim = grid.dim();
    let mut out = TensorField::zeros(grid);
    for i in 0..dim {
        for j in 0..dim {
            let slot = out.entry_mut(i, j).data_mut();
            for k in 0..dim {
                // grad_i d_k * grad_j d_k
                let gki = grad.entry(k, i).data();
                let gkj = grad.entry(k, j).data();
                for (s, (x, y)) in slot.iter_mut().zip(gki.iter().zip(gkj)) {
                    *s += x * y;
                }
            }
        }
    }
    out
}

/// Conservative part of the induced stress,
/// sigma~ = -1/2 (1 - lambda2/lambda1) G(x)d + 1/2 (1 + lambda2/lambda1) d(x)G,
/// where G stands for (Laplace d - f(d)).
pub fn stress_split(
    d: &VectorField,
    g: &VectorField,
    lambda1: f64,
    lambda2: f64,
) -> Result<TensorField> {
    if lambda1 == 0.0 {
        return Err(Error::domain("lama1a", "stress split undefined for lambda1 = 0"));
    }
    let ratio = lambda2 / lambda1;
    let c_gd = -0.5 * (1.0 - ratio);
    let c_dg = 0.5 * (1.0 + ratio);
    let grid = d.grid();
    let dim = grid.dim();
    let mut out = TensorField::zeros(grid);
    for i in 0..dim {
        for j in 0..dim {
            let gi = g.comp(i).data();
            let dj = d.comp(j).data();
            let di = d.comp(i).data();
            let gj = g.comp(j).data();
            let slot = out.entry_mut(i, j).data_mut();
            for idx in 0..slot.len() {
                slot[idx] = c_gd * gi[idx] * dj[idx] + c_dg * di[idx] * gj[idx];
            }
        }
    }
    Ok(out)
}

/// The eta coefficients of the conservative split written in the
/// (N, A d) basis: sigma~ = mu2 N(x)d + mu3 d(x)N + eta5 Ad(x)d + eta6 d(x)Ad.
pub fn eta_coefficients(lambda1: f64, lambda2: f64) -> (f64, f64) {
    let eta5 = 0.5 * (lambda2 - lambda2 * lambda2 / lambda1);
    let eta6 = -0.5 * (lambda2 + lambda2 * lambda2 / lambda1);
    (eta5, eta6)
}

/// Manufactures N from the director equation given G = Laplace d - f(d):
/// N = -(1/lambda1) G - (lambda2/lambda1) A d.
pub fn n_from_d_equation(
    g: &VectorField,
    a_dot_d: &VectorField,
    lambda1: f64,
    lambda2: f64,
) -> Result<VectorField> {
    if lambda1 == 0.0 {
        return Err(Error::domain("lama1a", "director equation undefined for lambda1 = 0"));
    }
    let grid = g.grid();
    let dim = grid.dim();
    let mut out = VectorField::zeros(grid);
    for i in 0..dim {
        let slot = out.comp_mut(i).data_mut();
        for (s, (gi, adi)) in slot.iter_mut().zip(g.comp(i).data().iter().zip(a_dot_d.comp(i).data())) {
            *s = -(gi + lambda2 * adi) / lambda1;
        }
    }
    Ok(out)
}

/// Linear combination helper: out = sum_k coef_k * fields_k.
pub(crate) fn vector_combine(terms: &[(f64, &VectorField)]) -> VectorField {
    let grid = terms[0].1.grid();
    let dim = grid.dim();
    let mut out = VectorField::zeros(grid);
    for (c, field) in terms {
        for i in 0..dim {
            let src = field.comp(i).data();
            let dst = out.comp_mut(i).data_mut();
            for (s, x) in dst.iter_mut().zip(src) {
                *s += c * x;
            }
        }
    }
    out
}
