//! Iterative radix-2 complex FFT for power-of-two lengths.
//!
//! Grid sizes are restricted to powers of two, so a plain decimation-in-time
//! butterfly with precomputed twiddles covers everything the crate needs and
//! keeps transforms bit-reproducible across runs.

#[allow(unused_imports)] // inherent std methods take over when std is linked
use crate::math::FloatMath;
use alloc::vec::Vec;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    /// e^{-2 pi i j / n} for j in [0, n/2).
    twiddles: Vec<Complex64>,
    /// Bit-reversal permutation of [0, n).
    rev: Vec<u32>,
}

#[allow(clippy::len_without_is_empty)]
impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two() && n >= 2, "fft length must be a power of two >= 2");
        let mut twiddles = Vec::with_capacity(n / 2);
        for j in 0..n / 2 {
            let phase = -2.0 * core::f64::consts::PI * j as f64 / n as f64;
            twiddles.push(Complex64::new(phase.cos(), phase.sin()));
        }
        let bits = n.trailing_zeros();
        let mut rev = Vec::with_capacity(n);
        for i in 0..n as u32 {
            rev.push(i.reverse_bits() >> (32 - bits));
        }
        Fft { n, twiddles, rev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// In-place forward transform, unnormalised:
    /// X_k = sum_j x_j e^{-2 pi i j k / n}.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// In-place inverse transform scaled by 1/n, so
    /// inverse(forward(x)) == x.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
        let scale = 1.0 / self.n as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    fn transform(&self, buf: &mut [Complex64], invert: bool) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n);
        for i in 0..n {
            let j = self.rev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            let mut start = 0;
            while start < n {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let w = if invert { w.conj() } else { w };
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
                start += len;
            }
            len <<= 1;
        }
    }
}
