//! Periodic fields on the unit torus [0,1)^dim and their spectral form.
//!
//! Fields live on a uniform n^dim grid (n a power of two) in row-major
//! order with the x index fastest. The paired spectral representation uses
//! full complex coefficients; real fields keep conjugate symmetry through
//! every operator defined here. Wavenumbers are 2 pi k with integer k.

pub mod fft;
mod ops;

pub use ops::{
    band_limited_noise, dealias_scalar, dealias_tensor, dealias_vector, divergence, gradient,
    inner, jacobian, laplacian, laplacian_vector, leray_project, norm_h1, norm_h1_vector, norm_l2,
    norm_l2_vector, strain_vorticity,
};
pub(crate) use ops::{dealias_spec, deriv_spec, laplacian_spec, leray_spec};

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use fft::Fft;
use num_complex::Complex64;

/// Uniform periodic grid on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
}

impl TorusGrid {
    /// `dim` must be 2 or 3 and `n` a power of two >= 8.
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::Usage(format!("grid dimension must be 2 or 3, got {dim}")));
        }
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::Usage(format!("grid size must be a power of two >= 8, got {n}")));
        }
        Ok(TorusGrid { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Total number of grid points n^dim; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Cell volume h^dim of the trapezoidal quadrature.
    pub fn cell_volume(&self) -> f64 {
        let mut v = 1.0;
        for _ in 0..self.dim {
            v *= self.spacing();
        }
        v
    }

    /// Coordinates of the flat index (x fastest), padded with zeros to 3D.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let mut out = [0.0; 3];
        let mut rest = idx;
        for axis in 0..self.dim {
            out[axis] = (rest % self.n) as f64 * h;
            rest /= self.n;
        }
        out
    }

    /// Signed integer mode for a coefficient index along one axis.
    /// The Nyquist index n/2 maps to +n/2.
    #[inline]
    pub fn signed_mode(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Signed modes of a flat spectral index, padded with zeros to 3D.
    #[inline]
    pub fn modes(&self, idx: usize) -> [i64; 3] {
        let mut out = [0i64; 3];
        let mut rest = idx;
        for axis in 0..self.dim {
            out[axis] = self.signed_mode(rest % self.n);
            rest /= self.n;
        }
        out
    }
}

/// Real scalar field sampled on a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: TorusGrid,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: TorusGrid) -> Self {
        ScalarField { grid, data: vec![0.0; grid.len()] }
    }

    pub fn from_data(grid: TorusGrid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::Usage(format!(
                "field data length {} does not match grid size {}",
                data.len(),
                grid.len()
            )));
        }
        Ok(ScalarField { grid, data })
    }

    pub fn from_fn(grid: TorusGrid, mut f: impl FnMut(&[f64; 3]) -> f64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            data.push(f(&grid.point(idx)));
        }
        ScalarField { grid, data }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub(crate) fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Data(format!("non-finite value in {what}")))
        }
    }
}

/// Real vector field with `dim` scalar components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: TorusGrid,
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn zeros(grid: TorusGrid) -> Self {
        VectorField { grid, comps: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect() }
    }

    pub fn from_components(comps: Vec<ScalarField>) -> Result<Self> {
        let grid = comps
            .first()
            .ok_or_else(|| Error::Usage("vector field needs at least one component".into()))?
            .grid();
        if comps.len() != grid.dim() {
            return Err(Error::Usage(format!(
                "vector field on a {}d grid needs {} components, got {}",
                grid.dim(),
                grid.dim(),
                comps.len()
            )));
        }
        if comps.iter().any(|c| c.grid() != grid) {
            return Err(Error::Usage("vector components live on different grids".into()));
        }
        Ok(VectorField { grid, comps })
    }

    /// Samples a vector function; only the first `dim` components are used.
    pub fn from_fn(grid: TorusGrid, mut f: impl FnMut(&[f64; 3]) -> [f64; 3]) -> Self {
        let mut comps: Vec<Vec<f64>> = (0..grid.dim()).map(|_| Vec::with_capacity(grid.len())).collect();
        for idx in 0..grid.len() {
            let v = f(&grid.point(idx));
            for (axis, c) in comps.iter_mut().enumerate() {
                c.push(v[axis]);
            }
        }
        VectorField {
            grid,
            comps: comps.into_iter().map(|data| ScalarField { grid, data }).collect(),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn comp(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut ScalarField {
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }

    pub(crate) fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Data(format!("non-finite value in {what}")))
        }
    }
}

/// Real rank-2 tensor field; entry (i, j) is stored at i*dim + j.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    grid: TorusGrid,
    comps: Vec<ScalarField>,
}

impl TensorField {
    pub fn zeros(grid: TorusGrid) -> Self {
        let dim = grid.dim();
        TensorField { grid, comps: (0..dim * dim).map(|_| ScalarField::zeros(grid)).collect() }
    }

    pub fn from_components(grid: TorusGrid, comps: Vec<ScalarField>) -> Result<Self> {
        if comps.len() != grid.dim() * grid.dim() {
            return Err(Error::Usage(format!(
                "tensor field on a {}d grid needs {} components, got {}",
                grid.dim(),
                grid.dim() * grid.dim(),
                comps.len()
            )));
        }
        if comps.iter().any(|c| c.grid() != grid) {
            return Err(Error::Usage("tensor components live on different grids".into()));
        }
        Ok(TensorField { grid, comps })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.comps[i * self.grid.dim() + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut ScalarField {
        let dim = self.grid.dim();
        &mut self.comps[i * dim + j]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }
}

/// Spectral coefficients of a real scalar field (full complex storage).
#[derive(Debug, Clone)]
pub struct SpectralScalar {
    grid: TorusGrid,
    coef: Vec<Complex64>,
}

impl SpectralScalar {
    pub fn zeros(grid: TorusGrid) -> Self {
        SpectralScalar { grid, coef: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn coef(&self) -> &[Complex64] {
        &self.coef
    }

    pub fn coef_mut(&mut self) -> &mut [Complex64] {
        &mut self.coef
    }
}

/// Forward transform of a real scalar field.
pub fn forward(field: &ScalarField) -> SpectralScalar {
    let grid = field.grid();
    let mut coef: Vec<Complex64> =
        field.data().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_nd(grid, &mut coef, false);
    SpectralScalar { grid, coef }
}

/// Inverse transform back to a real field (imaginary parts are discarded;
/// they are at roundoff level for conjugate-symmetric input).
pub fn inverse(spec: &SpectralScalar) -> ScalarField {
    let mut buf = spec.coef.clone();
    fft_nd(spec.grid, &mut buf, true);
    ScalarField { grid: spec.grid, data: buf.iter().map(|z| z.re).collect() }
}

pub(crate) fn fft_nd(grid: TorusGrid, data: &mut [Complex64], invert: bool) {
    let n = grid.n();
    let fft = Fft::new(n);
    // Axis 0 is contiguous.
    for chunk in data.chunks_exact_mut(n) {
        if invert {
            fft.inverse(chunk);
        } else {
            fft.forward(chunk);
        }
    }
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut stride = n;
    for _axis in 1..grid.dim() {
        transform_axis(&fft, data, n, stride, invert, &mut line);
        stride *= n;
    }
}

fn transform_axis(
    fft: &Fft,
    data: &mut [Complex64],
    n: usize,
    stride: usize,
    invert: bool,
    line: &mut [Complex64],
) {
    let block = stride * n;
    let mut base = 0;
    while base < data.len() {
        for inner in 0..stride {
            let start = base + inner;
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[start + j * stride];
            }
            if invert {
                fft.inverse(line);
            } else {
                fft.forward(line);
            }
            for (j, slot) in line.iter().enumerate() {
                data[start + j * stride] = *slot;
            }
        }
        base += block;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::SplitMix64;

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(TorusGrid::new(1, 16).is_err());
        assert!(TorusGrid::new(4, 16).is_err());
        assert!(TorusGrid::new(2, 12).is_err());
        assert!(TorusGrid::new(2, 4).is_err());
        assert!(TorusGrid::new(3, 8).is_ok());
    }

    #[test]
    fn round_trip_2d_and_3d() {
        for (dim, n) in [(2usize, 32usize), (3, 8)] {
            let grid = TorusGrid::new(dim, n).unwrap();
            let mut rng = SplitMix64::new(17);
            let f = ScalarField::from_fn(grid, |_| rng.next_symmetric());
            let back = inverse(&forward(&f));
            let scale = f.max_abs().max(1e-300);
            for (a, b) in back.data().iter().zip(f.data()) {
                assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn conjugate_symmetry_of_real_fields() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let mut rng = SplitMix64::new(5);
        let f = ScalarField::from_fn(grid, |_| rng.next_symmetric());
        let spec = forward(&f);
        let n = grid.n();
        for iy in 0..n {
            for ix in 0..n {
                let a = spec.coef()[ix + n * iy];
                let b = spec.coef()[((n - ix) % n) + n * ((n - iy) % n)];
                assert!((a - b.conj()).norm() < 1e-9 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn single_mode_lands_on_expected_index() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let f = ScalarField::from_fn(grid, |x| (2.0 * core::f64::consts::PI * x[0]).sin());
        let spec = forward(&f);
        let total = grid.len() as f64;
        // sin(2 pi x) = (e^{i 2 pi x} - e^{-i 2 pi x}) / (2i), so the
        // unnormalised coefficient at k = (1, 0) is -i N / 2.
        let plus = spec.coef()[1];
        assert!((plus.im + total / 2.0).abs() < 1e-9);
        assert!(plus.re.abs() < 1e-9);
        // Energy is confined to |k| = 1 on axis 0.
        for idx in 0..grid.len() {
            let m = grid.modes(idx);
            if !(m[1] == 0 && m[0].abs() == 1) {
                assert!(spec.coef()[idx].norm() < 1e-9);
            }
        }
    }
}
