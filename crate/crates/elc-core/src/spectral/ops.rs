//! Differential and projection operators by exact spectral multipliers.

use super::{forward, inverse, ScalarField, SpectralScalar, TensorField, TorusGrid, VectorField};
use crate::error::{Error, Result};
#[allow(unused_imports)] // inherent std methods take over when std is linked
use crate::math::FloatMath;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

const TWO_PI: f64 = 2.0 * PI;

/// Multiplies by i 2 pi k along `axis`. The Nyquist mode is zeroed so the
/// derivative of a real field stays real and odd-symmetric.
pub(crate) fn deriv_spec(spec: &SpectralScalar, axis: usize) -> SpectralScalar {
    let grid = spec.grid();
    let n = grid.n();
    let mut out = spec.clone();
    let stride = n.pow(axis as u32);
    for (idx, z) in out.coef_mut().iter_mut().enumerate() {
        let i = (idx / stride) % n;
        let k = if 2 * i == n { 0 } else { grid.signed_mode(i) };
        let factor = Complex64::new(0.0, TWO_PI * k as f64);
        *z *= factor;
    }
    out
}

pub(crate) fn laplacian_spec(spec: &SpectralScalar) -> SpectralScalar {
    let grid = spec.grid();
    let mut out = spec.clone();
    for (idx, z) in out.coef_mut().iter_mut().enumerate() {
        let m = grid.modes(idx);
        let k2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
        *z *= -TWO_PI * TWO_PI * k2;
    }
    out
}

/// Exact spectral gradient of a scalar field.
pub fn gradient(f: &ScalarField) -> Result<VectorField> {
    f.ensure_finite("gradient input")?;
    let spec = forward(f);
    let comps = (0..f.grid().dim()).map(|axis| inverse(&deriv_spec(&spec, axis))).collect();
    VectorField::from_components(comps)
}

/// Exact spectral divergence of a vector field.
pub fn divergence(v: &VectorField) -> Result<ScalarField> {
    v.ensure_finite("divergence input")?;
    let grid = v.grid();
    let mut acc = SpectralScalar::zeros(grid);
    for axis in 0..grid.dim() {
        let d = deriv_spec(&forward(v.comp(axis)), axis);
        for (a, b) in acc.coef_mut().iter_mut().zip(d.coef()) {
            *a += b;
        }
    }
    Ok(inverse(&acc))
}

/// Exact spectral Laplacian of a scalar field.
pub fn laplacian(f: &ScalarField) -> Result<ScalarField> {
    f.ensure_finite("laplacian input")?;
    Ok(inverse(&laplacian_spec(&forward(f))))
}

/// Component-wise Laplacian of a vector field.
pub fn laplacian_vector(v: &VectorField) -> Result<VectorField> {
    v.ensure_finite("laplacian input")?;
    let comps = v.components().iter().map(|c| inverse(&laplacian_spec(&forward(c)))).collect();
    VectorField::from_components(comps)
}

/// Jacobian J with J(i, j) = d d_i / d x_j.
pub fn jacobian(d: &VectorField) -> Result<TensorField> {
    d.ensure_finite("jacobian input")?;
    let grid = d.grid();
    let dim = grid.dim();
    let mut comps = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let spec = forward(d.comp(i));
        for j in 0..dim {
            comps.push(inverse(&deriv_spec(&spec, j)));
        }
    }
    TensorField::from_components(grid, comps)
}

pub(crate) fn leray_spec(grid: TorusGrid, vhat: &mut [SpectralScalar]) {
    let dim = grid.dim();
    for idx in 0..grid.len() {
        let m = grid.modes(idx);
        let k2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
        if k2 == 0.0 {
            continue; // the spatial mean passes through untouched
        }
        let mut kdotv = Complex64::new(0.0, 0.0);
        for (axis, v) in vhat.iter().enumerate().take(dim) {
            kdotv += m[axis] as f64 * v.coef()[idx];
        }
        let scale = kdotv / k2;
        for (axis, v) in vhat.iter_mut().enumerate().take(dim) {
            v.coef_mut()[idx] -= m[axis] as f64 * scale;
        }
    }
}

/// Leray projection onto divergence-free fields; removes the mean-free
/// gradient part, keeps the spatial mean, and is idempotent.
pub fn leray_project(v: &VectorField) -> Result<VectorField> {
    let grid = v.grid();
    let mut vhat: Vec<SpectralScalar> = v.components().iter().map(forward).collect();
    leray_spec(grid, &mut vhat);
    VectorField::from_components(vhat.iter().map(inverse).collect())
}

/// Symmetric / antisymmetric split of the velocity gradient:
/// A = (grad v + grad v^T)/2 and Omega = (grad v - grad v^T)/2.
pub fn strain_vorticity(v: &VectorField) -> Result<(TensorField, TensorField)> {
    let grad = jacobian(v)?;
    let grid = v.grid();
    let dim = grid.dim();
    let mut a = TensorField::zeros(grid);
    let mut omega = TensorField::zeros(grid);
    for i in 0..dim {
        for j in 0..dim {
            let gij = grad.entry(i, j).data();
            let gji = grad.entry(j, i).data();
            let aij = a.entry_mut(i, j).data_mut();
            for (slot, (x, y)) in aij.iter_mut().zip(gij.iter().zip(gji)) {
                *slot = 0.5 * (x + y);
            }
            let oij = omega.entry_mut(i, j).data_mut();
            for (slot, (x, y)) in oij.iter_mut().zip(gij.iter().zip(gji)) {
                *slot = 0.5 * (x - y);
            }
        }
    }
    Ok((a, omega))
}

#[inline]
pub(crate) fn mode_kept(grid: TorusGrid, idx: usize) -> bool {
    let m = grid.modes(idx);
    let n = grid.n() as i64;
    (0..grid.dim()).all(|axis| 3 * m[axis].abs() <= n)
}

pub(crate) fn dealias_spec(spec: &mut SpectralScalar) {
    let grid = spec.grid();
    for idx in 0..grid.len() {
        if !mode_kept(grid, idx) {
            spec.coef_mut()[idx] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Two-thirds dealiasing: zeroes every mode with any |k| > n/3.
pub fn dealias_scalar(f: &ScalarField) -> ScalarField {
    let mut spec = forward(f);
    dealias_spec(&mut spec);
    inverse(&spec)
}

pub fn dealias_vector(v: &VectorField) -> VectorField {
    let comps = v.components().iter().map(dealias_scalar).collect();
    VectorField::from_components(comps).expect("component count unchanged")
}

pub fn dealias_tensor(t: &TensorField) -> TensorField {
    let comps = t.components().iter().map(dealias_scalar).collect();
    TensorField::from_components(t.grid(), comps).expect("component count unchanged")
}

/// L^2 inner product by trapezoidal quadrature (exact for band-limited
/// periodic fields). Fixed sequential summation order.
pub fn inner(f: &ScalarField, g: &ScalarField) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::Usage(format!(
            "inner product grids differ: {:?} vs {:?}",
            f.grid(),
            g.grid()
        )));
    }
    let mut acc = 0.0;
    for (a, b) in f.data().iter().zip(g.data()) {
        acc += a * b;
    }
    Ok(acc * f.grid().cell_volume())
}

pub fn norm_l2(f: &ScalarField) -> f64 {
    inner(f, f).expect("same grid").sqrt()
}

/// Full H^1 norm sqrt(||f||^2 + ||grad f||^2) with the spectral gradient.
pub fn norm_h1(f: &ScalarField) -> Result<f64> {
    let g = gradient(f)?;
    let mut acc = inner(f, f)?;
    for c in g.components() {
        acc += inner(c, c)?;
    }
    Ok(acc.sqrt())
}

pub(crate) fn inner_vector(u: &VectorField, v: &VectorField) -> Result<f64> {
    if u.grid() != v.grid() {
        return Err(Error::Usage("vector inner product grids differ".into()));
    }
    let mut acc = 0.0;
    for (a, b) in u.components().iter().zip(v.components()) {
        acc += inner(a, b)?;
    }
    Ok(acc)
}

pub fn norm_l2_vector(v: &VectorField) -> f64 {
    inner_vector(v, v).expect("same grid").sqrt()
}

pub fn norm_h1_vector(v: &VectorField) -> Result<f64> {
    let mut acc = inner_vector(v, v)?;
    for c in v.components() {
        let g = gradient(c)?;
        for gc in g.components() {
            acc += inner(gc, gc)?;
        }
    }
    Ok(acc.sqrt())
}

/// Random real field band-limited to |k| <= kmax on each axis, scaled to
/// max |f| = 1. Deterministic in the seed; used for reproducible smooth
/// initial data and in tests.
pub fn band_limited_noise(grid: TorusGrid, kmax: i64, seed: u64) -> ScalarField {
    let mut rng = crate::prng::SplitMix64::new(seed);
    let mut spec = SpectralScalar::zeros(grid);
    let len = grid.len();
    for idx in 0..len {
        let m = grid.modes(idx);
        if (0..grid.dim()).all(|a| m[a].abs() <= kmax) {
            spec.coef_mut()[idx] = Complex64::new(rng.next_symmetric(), rng.next_symmetric());
        }
    }
    // Symmetrise so the field is real: average with the reflected conjugate.
    let n = grid.n();
    let dim = grid.dim();
    let reflect = |idx: usize| -> usize {
        let mut rest = idx;
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..dim {
            let i = rest % n;
            rest /= n;
            out += ((n - i) % n) * stride;
            stride *= n;
        }
        out
    };
    let copy = spec.coef().to_vec();
    for idx in 0..len {
        let r = reflect(idx);
        spec.coef_mut()[idx] = 0.5 * (copy[idx] + copy[r].conj());
    }
    let mut field = inverse(&spec);
    let scale = field.max_abs().max(1e-12);
    for x in field.data_mut() {
        *x /= scale;
    }
    field
}
