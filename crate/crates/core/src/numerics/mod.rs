//! Periodic k-grid, quadrature and the spectral (finite Fourier) helpers that
//! every grid transform builds on, plus the special functions in [`special`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod special;

pub use special::{bessel_jn, bessel_jn_orders, theta3, theta3_scaled, Theta3};

/// Uniform samples `k_j = -π + 2πj/n_k`, `j = 0..n_k`, open at `+π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGrid {
    n_k: usize,
}

impl KGrid {
    pub fn new(n_k: usize) -> Result<Self> {
        if n_k == 0 {
            return Err(Error::InvalidParameter("n_k must be positive".into()));
        }
        Ok(Self { n_k })
    }

    /// Smallest grid that integrates exactly on a window of `width` sites.
    pub fn exact_for_width(width: usize) -> Self {
        Self { n_k: Self::required_for_width(width) }
    }

    pub fn required_for_width(width: usize) -> usize {
        2 * width + 1
    }

    pub fn len(&self) -> usize {
        self.n_k
    }

    pub fn is_empty(&self) -> bool {
        self.n_k == 0
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n_k as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -PI + self.spacing() * j as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_k).map(|j| self.point(j)).collect()
    }

    /// Errors unless `n_k >= 2W + 1` for a window of `width` sites.
    pub fn check_exact_for(&self, width: usize) -> Result<()> {
        let required = Self::required_for_width(width);
        if self.n_k < required {
            return Err(Error::GridTooCoarse { n_k: self.n_k, width, required });
        }
        Ok(())
    }
}

/// `∫_{-π}^{π} f(k) dk` on the grid: `(2π/n_k) Σ_j f(k_j)`.
///
/// Exact for trigonometric polynomials of degree `< n_k`.
pub fn periodic_trapezoid(grid: &KGrid, samples: &[C64]) -> Result<C64> {
    if samples.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: samples.len() });
    }
    Ok(integrate_unchecked(grid.len(), samples.iter().copied()))
}

pub(crate) fn integrate_unchecked(n_k: usize, samples: impl Iterator<Item = C64>) -> C64 {
    let sum: C64 = samples.sum();
    sum * (2.0 * PI / n_k as f64)
}

/// Signed frequency carried by FFT bin `i` on an `n`-point grid. For even `n`
/// the Nyquist bin `n/2` is reported as `+n/2`.
pub fn bin_frequency(i: usize, n: usize) -> i64 {
    if 2 * i <= n {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT bin holding frequency `d`.
pub fn frequency_bin(d: i64, n: usize) -> usize {
    d.rem_euclid(n as i64) as usize
}

fn parity_sign(d: i64) -> f64 {
    if d.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Finite Fourier representation of periodic samples on a [`KGrid`].
///
/// A row `f_j = f(k_j)` is represented as `f(k) = Σ_d c_d e^{-idk}` with `d`
/// in the symmetric band `|d| <= n_k/2`; the Nyquist term of an even grid is
/// split evenly between `±n_k/2`, which makes interpolation real-preserving.
/// The sign convention matches the Wigner kernel `e^{-i(2n-m)k}`, so `c_d` is
/// directly `ρ(n, m-n)/2π` for `d = 2n - m`.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(grid: &KGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.len();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Fourier coefficients `c_d`, stored at bin `d mod n_k`.
    pub fn coefficients(&self, samples: &[C64]) -> Vec<C64> {
        debug_assert_eq!(samples.len(), self.n);
        let mut buf = samples.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for (i, v) in buf.iter_mut().enumerate() {
            *v *= scale * parity_sign(bin_frequency(i, self.n));
        }
        buf
    }

    /// Grid samples from bin-ordered coefficients (inverse of [`Self::coefficients`]).
    pub fn synthesize(&self, coeffs: &[C64]) -> Vec<C64> {
        debug_assert_eq!(coeffs.len(), self.n);
        let mut buf: Vec<C64> =
            coeffs.iter().enumerate().map(|(i, c)| c * parity_sign(bin_frequency(i, self.n))).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Applies a Fourier multiplier: `c_d → mult(d) c_d`. The Nyquist term of
    /// an even grid is split between `±n/2`, so it receives the average of the
    /// two multipliers.
    pub fn apply_multiplier<F: Fn(i64) -> C64>(&self, samples: &[C64], mult: F) -> Vec<C64> {
        let mut coeffs = self.coefficients(samples);
        self.multiply_coefficients(&mut coeffs, mult);
        self.synthesize(&coeffs)
    }

    /// In-place form of [`Self::apply_multiplier`] on bin-ordered coefficients.
    pub fn multiply_coefficients<F: Fn(i64) -> C64>(&self, coeffs: &mut [C64], mult: F) {
        let n = self.n;
        for (i, c) in coeffs.iter_mut().enumerate() {
            if n.is_multiple_of(2) && 2 * i == n {
                let h = (n / 2) as i64;
                *c *= 0.5 * (mult(h) + mult(-h));
            } else {
                *c *= mult(bin_frequency(i, n));
            }
        }
    }

    /// Samples of `f(k_j + shift)`, exact when `f` is band-limited to the grid.
    pub fn shifted(&self, samples: &[C64], shift: f64) -> Vec<C64> {
        self.apply_multiplier(samples, |d| C64::from_polar(1.0, -(d as f64) * shift))
    }

    /// `∂^order f / ∂k^order` on the grid.
    pub fn derivative(&self, samples: &[C64], order: u32) -> Vec<C64> {
        if order == 0 {
            return samples.to_vec();
        }
        self.apply_multiplier(samples, |d| C64::new(0.0, -(d as f64)).powu(order))
    }
}
