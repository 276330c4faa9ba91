//! Forward and inverse Wigner transforms on the `(m, k)` phase space.
//!
//! For an operator `O` on `window ⊗ spin`,
//!
//! ```text
//! W_{αβ}(m, k) = (1/2π) Σ_n ⟨n, α|O|m-n, β⟩ e^{-i(2n-m)k}
//! ```
//!
//! Each row `m` is a trigonometric polynomial whose Fourier coefficient at
//! frequency `d = 2n - m` is `⟨n, α|O|m-n, β⟩ / 2π`, so forward and inverse
//! transforms are FFTs along `k` (see [`Spectral`]).

use std::f64::consts::PI;
use std::io::Write;

use ndarray::{Array2, ArrayView1, Axis};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{frequency_bin, integrate_unchecked, KGrid, Spectral};
use crate::spin::SpinMatrix;
use crate::state::{DensityOperator, LatticeOperator, LatticeWindow, PureState};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Sampled Wigner matrix: `values[[m - m_min, j]]` is the 2×2 block at
/// `(m, k_j)`, for `m ∈ [2 n_min, 2 n_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerMatrix {
    window: LatticeWindow,
    kgrid: KGrid,
    values: Array2<SpinMatrix>,
}

/// Scalar (spinless or spin-traced) Wigner function on the same grid layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarWigner {
    window: LatticeWindow,
    kgrid: KGrid,
    values: Array2<C64>,
}

fn m_range_for(window: &LatticeWindow, m: i64) -> std::ops::RangeInclusive<i64> {
    window.n_min.max(m - window.n_max)..=window.n_max.min(m - window.n_min)
}

fn check_shape(window: &LatticeWindow, kgrid: &KGrid, shape: (usize, usize)) -> Result<()> {
    if shape != (window.n_m(), kgrid.len()) {
        return Err(Error::GridMismatch(format!(
            "values have shape {shape:?}, grid needs ({}, {})",
            window.n_m(),
            kgrid.len()
        )));
    }
    Ok(())
}

fn same_grid(a: (&LatticeWindow, &KGrid), b: (&LatticeWindow, &KGrid)) -> Result<()> {
    if a.0 != b.0 || a.1 != b.1 {
        return Err(Error::GridMismatch(format!(
            "window [{}, {}] n_k = {} vs window [{}, {}] n_k = {}",
            a.0.n_min,
            a.0.n_max,
            a.1.len(),
            b.0.n_min,
            b.0.n_max,
            b.1.len()
        )));
    }
    Ok(())
}

impl WignerMatrix {
    pub fn new(window: LatticeWindow, kgrid: KGrid, values: Array2<SpinMatrix>) -> Result<Self> {
        check_shape(&window, &kgrid, values.dim())?;
        Ok(Self { window, kgrid, values })
    }

    pub fn zeros(window: LatticeWindow, kgrid: KGrid) -> Self {
        let values = Array2::from_elem((window.n_m(), kgrid.len()), SpinMatrix::zero());
        Self { window, kgrid, values }
    }

    /// Samples `f(m, k)` on the grid.
    pub fn from_fn<F: Fn(i64, f64) -> SpinMatrix>(window: LatticeWindow, kgrid: KGrid, f: F) -> Self {
        let m_min = window.m_min();
        let values = Array2::from_shape_fn((window.n_m(), kgrid.len()), |(i, j)| f(m_min + i as i64, kgrid.point(j)));
        Self { window, kgrid, values }
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn kgrid(&self) -> &KGrid {
        &self.kgrid
    }

    pub fn values(&self) -> &Array2<SpinMatrix> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<SpinMatrix> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<SpinMatrix> {
        self.values
    }

    pub fn m_min(&self) -> i64 {
        self.window.m_min()
    }

    pub fn m_max(&self) -> i64 {
        self.window.m_max()
    }

    pub fn m_values(&self) -> impl Iterator<Item = i64> {
        self.m_min()..=self.m_max()
    }

    /// Block at `(m, k_j)`; zero outside the stored `m` range.
    pub fn get(&self, m: i64, j: usize) -> SpinMatrix {
        if (self.m_min()..=self.m_max()).contains(&m) {
            self.values[[(m - self.m_min()) as usize, j]]
        } else {
            SpinMatrix::zero()
        }
    }

    pub fn row(&self, m: i64) -> ArrayView1<'_, SpinMatrix> {
        self.values.index_axis(Axis(0), (m - self.m_min()) as usize)
    }

    /// Samples of the single entry `(α, β)` as an `n_m × n_k` array.
    pub fn component(&self, alpha: usize, beta: usize) -> Array2<C64> {
        self.values.mapv(|b| b.get(alpha, beta))
    }

    /// `Σ_α Σ_m ∫ W_αα dk`, which is `tr O`.
    pub fn normalization(&self) -> C64 {
        let n_k = self.kgrid.len();
        integrate_unchecked(n_k, self.values.iter().map(|b| b.trace()))
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.values.iter().map(|b| b.hermiticity_error()).fold(0.0, f64::max)
    }

    pub fn diagonal_imag_max(&self) -> f64 {
        self.values.iter().map(|b| b.get(0, 0).im.abs().max(b.get(1, 1).im.abs())).fold(0.0, f64::max)
    }

    /// Largest deviation from `W(m, k + π) = (-1)^m W(m, k)`; `None` when
    /// `n_k` is odd and `k + π` is not a grid point.
    pub fn phase_property_error(&self) -> Option<f64> {
        let n_k = self.kgrid.len();
        if !n_k.is_multiple_of(2) {
            return None;
        }
        let half = n_k / 2;
        let mut err = 0.0_f64;
        for (i, row) in self.values.outer_iter().enumerate() {
            let sign = if (self.m_min() + i as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            for j in 0..n_k {
                err = err.max((row[(j + half) % n_k] - row[j] * sign).max_abs());
            }
        }
        Some(err)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|b| b.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &WignerMatrix) -> Result<f64> {
        same_grid((&self.window, &self.kgrid), (&other.window, &other.kgrid))?;
        Ok(self.values.iter().zip(other.values.iter()).map(|(a, b)| (*a - *b).max_abs()).fold(0.0, f64::max))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|b| b.is_finite())
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &WignerMatrix, c: C64) -> Result<()> {
        same_grid((&self.window, &self.kgrid), (&other.window, &other.kgrid))?;
        self.values.zip_mut_with(&other.values, |a, b| *a += b.scale(c));
        Ok(())
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { window: self.window, kgrid: self.kgrid, values: self.values.mapv(|b| b.scale(c)) }
    }

    /// Applies `f` to each block independently.
    pub fn map_blocks<F: Fn(&SpinMatrix) -> SpinMatrix>(&self, f: F) -> Self {
        Self { window: self.window, kgrid: self.kgrid, values: self.values.map(f) }
    }

    /// Restores exact Hermiticity blockwise, `(W + W†)/2`.
    pub fn symmetrize(&mut self) {
        self.values.mapv_inplace(|b| (b + b.dagger()) * 0.5);
    }

    /// Errors unless the grid integrates this window exactly.
    pub fn check_exact(&self) -> Result<()> {
        self.kgrid.check_exact_for(self.window.width())
    }
}

impl ScalarWigner {
    pub fn new(window: LatticeWindow, kgrid: KGrid, values: Array2<C64>) -> Result<Self> {
        check_shape(&window, &kgrid, values.dim())?;
        Ok(Self { window, kgrid, values })
    }

    pub fn from_fn<F: Fn(i64, f64) -> C64>(window: LatticeWindow, kgrid: KGrid, f: F) -> Self {
        let m_min = window.m_min();
        let values = Array2::from_shape_fn((window.n_m(), kgrid.len()), |(i, j)| f(m_min + i as i64, kgrid.point(j)));
        Self { window, kgrid, values }
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn kgrid(&self) -> &KGrid {
        &self.kgrid
    }

    pub fn values(&self) -> &Array2<C64> {
        &self.values
    }

    pub fn m_min(&self) -> i64 {
        self.window.m_min()
    }

    pub fn get(&self, m: i64, j: usize) -> C64 {
        if (self.window.m_min()..=self.window.m_max()).contains(&m) {
            self.values[[(m - self.m_min()) as usize, j]]
        } else {
            ZERO
        }
    }

    pub fn normalization(&self) -> C64 {
        integrate_unchecked(self.kgrid.len(), self.values.iter().copied())
    }

    pub fn imag_max(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Errors with [`Error::ComplexValued`] when some `|Im W| > tol`.
    pub fn ensure_real(&self, tol: f64) -> Result<()> {
        let im = self.imag_max();
        if im > tol {
            return Err(Error::ComplexValued(im));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &ScalarWigner) -> Result<f64> {
        same_grid((&self.window, &self.kgrid), (&other.window, &other.kgrid))?;
        Ok(self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Embeds as `W · ρ_S` (product-state Wigner matrix).
    pub fn times_spin(&self, rho_s: &SpinMatrix) -> WignerMatrix {
        WignerMatrix { window: self.window, kgrid: self.kgrid, values: self.values.mapv(|w| rho_s.scale(w)) }
    }
}

// --- forward transform -------------------------------------------------------

/// Core kernel. `block(n, n')` must return `⟨n, ·|O|n', ·⟩` for sites inside
/// the window.
fn transform_blocks<F>(window: &LatticeWindow, kgrid: &KGrid, block: F) -> Result<WignerMatrix>
where
    F: Fn(i64, i64) -> SpinMatrix + Sync,
{
    kgrid.check_exact_for(window.width())?;
    let spectral = Spectral::new(kgrid);
    let n_k = kgrid.len();
    let m_min = window.m_min();
    let inv_2pi = 1.0 / (2.0 * PI);

    let rows: Vec<Vec<SpinMatrix>> = (0..window.n_m())
        .into_par_iter()
        .map(|i| {
            let m = m_min + i as i64;
            let mut coeffs = [[vec![ZERO; n_k], vec![ZERO; n_k]], [vec![ZERO; n_k], vec![ZERO; n_k]]];
            for n in m_range_for(window, m) {
                let b = block(n, m - n);
                let bin = frequency_bin(2 * n - m, n_k);
                for (alpha, row) in coeffs.iter_mut().enumerate() {
                    for (beta, c) in row.iter_mut().enumerate() {
                        c[bin] = b.get(alpha, beta) * inv_2pi;
                    }
                }
            }
            let samples = coeffs.map(|row| row.map(|c| spectral.synthesize(&c)));
            (0..n_k)
                .map(|j| SpinMatrix::new(samples[0][0][j], samples[0][1][j], samples[1][0][j], samples[1][1][j]))
                .collect()
        })
        .collect();

    let mut values = Array2::from_elem((window.n_m(), n_k), SpinMatrix::zero());
    for (i, row) in rows.into_iter().enumerate() {
        for (j, b) in row.into_iter().enumerate() {
            values[[i, j]] = b;
        }
    }
    Ok(WignerMatrix { window: *window, kgrid: *kgrid, values })
}

/// Wigner matrix of an arbitrary operator on `window ⊗ spin`.
pub fn wigner_of_operator(window: &LatticeWindow, op: &Array2<C64>, kgrid: &KGrid) -> Result<WignerMatrix> {
    crate::state::check_square(op, window.dim())?;
    transform_blocks(window, kgrid, |n, n2| {
        let (i, j) = (window.index(n, 0), window.index(n2, 0));
        SpinMatrix::new(op[[i, j]], op[[i, j + 1]], op[[i + 1, j]], op[[i + 1, j + 1]])
    })
}

pub fn wigner_of_density(rho: &DensityOperator, kgrid: &KGrid) -> Result<WignerMatrix> {
    wigner_of_operator(rho.window(), rho.matrix(), kgrid)
}

/// Uses `Ψ_α(n) Ψ*_β(m-n)` directly, without building `|Ψ⟩⟨Ψ|`.
pub fn wigner_of_pure(psi: &PureState, kgrid: &KGrid) -> Result<WignerMatrix> {
    let window = psi.window();
    let amps = psi.amplitudes();
    transform_blocks(window, kgrid, |n, n2| {
        let (i, j) = (window.index(n, 0), window.index(n2, 0));
        SpinMatrix::outer(&[amps[i], amps[i + 1]], &[amps[j], amps[j + 1]])
    })
}

/// Scalar Wigner function of an operator on the lattice factor alone.
pub fn scalar_wigner_of_lattice(op: &LatticeOperator, kgrid: &KGrid) -> Result<ScalarWigner> {
    let window = op.window();
    let w = transform_blocks(window, kgrid, |n, n2| {
        let mut b = SpinMatrix::zero();
        b.set(0, 0, op.entry(n, n2));
        b
    })?;
    Ok(ScalarWigner { window: *window, kgrid: *kgrid, values: w.values.mapv(|b| b.get(0, 0)) })
}

/// Scalar Wigner function of a spinless pure state `ψ(n)` (normalized on
/// the window).
pub fn scalar_wigner_of_amplitudes(window: &LatticeWindow, amps: &[C64], kgrid: &KGrid) -> Result<ScalarWigner> {
    scalar_wigner_of_lattice(&LatticeOperator::from_amplitudes(*window, amps)?, kgrid)
}

// --- marginals, pairing, inverse ---------------------------------------------

/// `∫ W(m, k) dk` per site, plus the largest odd-`m` integral, which must
/// vanish for any operator on the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionMarginal {
    pub sites: Vec<(i64, SpinMatrix)>,
    pub odd_residual: f64,
}

impl PositionMarginal {
    /// `Σ_α ⟨n, α|ρ|n, α⟩` per site.
    pub fn populations(&self) -> Vec<(i64, f64)> {
        self.sites.iter().map(|(n, b)| (*n, b.trace().re)).collect()
    }
}

pub fn marginal_position(w: &WignerMatrix) -> PositionMarginal {
    let n_k = w.kgrid.len();
    let mut sites = Vec::with_capacity(w.window.width());
    let mut odd_residual = 0.0_f64;
    for (i, row) in w.values.outer_iter().enumerate() {
        let m = w.m_min() + i as i64;
        let mut acc = SpinMatrix::zero();
        for b in row.iter() {
            acc += *b;
        }
        let integral = acc * (2.0 * PI / n_k as f64);
        if m.rem_euclid(2) == 0 {
            sites.push((m / 2, integral));
        } else {
            odd_residual = odd_residual.max(integral.max_abs());
        }
    }
    PositionMarginal { sites, odd_residual }
}

/// `Σ_m W(m, k_j)` for each grid point. Equals `(1/a) ⟨k/a|ρ|k/a⟩` for the
/// lattice plane waves `|q⟩ = √(a/2π) Σ_n e^{iqna}|n⟩`.
pub fn marginal_momentum(w: &WignerMatrix) -> Vec<SpinMatrix> {
    w.values.axis_iter(Axis(1)).map(|col| col.iter().fold(SpinMatrix::zero(), |acc, b| acc + *b)).collect()
}

/// `2π Σ_m ∫ tr(W^C W^D) dk = tr(CD)`.
pub fn trace_product(wc: &WignerMatrix, wd: &WignerMatrix) -> Result<C64> {
    same_grid((&wc.window, &wc.kgrid), (&wd.window, &wd.kgrid))?;
    let n_k = wc.kgrid.len();
    let integral = integrate_unchecked(n_k, wc.values.iter().zip(wd.values.iter()).map(|(c, d)| (*c * *d).trace()));
    Ok(integral * (2.0 * PI))
}

/// Recovers the operator matrix: `⟨n, α|O|m-n, β⟩ = ∫ W_{αβ}(m, k) e^{i(2n-m)k} dk`.
///
/// Only the `k`-integral against each Fourier mode is needed, so this is one
/// FFT per row and entry, never an explicit operator grid.
pub fn reconstruct_operator(w: &WignerMatrix) -> Result<Array2<C64>> {
    w.check_exact()?;
    let window = w.window;
    let n_k = w.kgrid.len();
    let spectral = Spectral::new(&w.kgrid);
    let mut out = Array2::zeros((window.dim(), window.dim()));
    for (i, row) in w.values.outer_iter().enumerate() {
        let m = w.m_min() + i as i64;
        for alpha in 0..2 {
            for beta in 0..2 {
                let samples: Vec<C64> = row.iter().map(|b| b.get(alpha, beta)).collect();
                let c = spectral.coefficients(&samples);
                for n in m_range_for(&window, m) {
                    let v = c[frequency_bin(2 * n - m, n_k)] * (2.0 * PI);
                    out[[window.index(n, alpha), window.index(m - n, beta)]] = v;
                }
            }
        }
    }
    Ok(out)
}

pub fn reconstruct_density(w: &WignerMatrix) -> Result<DensityOperator> {
    DensityOperator::new(w.window, reconstruct_operator(w)?)
}

/// `Σ_α W_αα`, the Wigner function of the spin-traced operator.
pub fn spin_trace_wigner(w: &WignerMatrix) -> ScalarWigner {
    ScalarWigner { window: w.window, kgrid: w.kgrid, values: w.values.mapv(|b| b.trace()) }
}

// --- export ------------------------------------------------------------------

pub const CSV_HEADER: &str = "m,k,re00,im00,re01,im01,re10,im10,re11,im11";

/// Shortest scientific representation that round-trips (at most 17
/// significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// Writes one row per `(m, k_j)`, `m` outer.
pub fn write_csv<W: Write>(w: &WignerMatrix, out: W) -> Result<()> {
    write_rows(w, None, out)
}

/// As [`write_csv`] with a leading `t` column, for evolution snapshots.
pub fn write_snapshot_csv<W: Write>(w: &WignerMatrix, t: f64, out: W) -> Result<()> {
    write_rows(w, Some(t), out)
}

fn write_rows<W: Write>(w: &WignerMatrix, t: Option<f64>, mut out: W) -> Result<()> {
    let lead = t.map(|t| format!("{},", fmt_f64(t))).unwrap_or_default();
    writeln!(out, "{}{CSV_HEADER}", if t.is_some() { "t," } else { "" })?;
    let points = w.kgrid.points();
    for (i, row) in w.values.outer_iter().enumerate() {
        let m = w.m_min() + i as i64;
        for (j, b) in row.iter().enumerate() {
            write!(out, "{lead}{m},{}", fmt_f64(points[j]))?;
            for alpha in 0..2 {
                for beta in 0..2 {
                    let v = b.get(alpha, beta);
                    write!(out, ",{},{}", fmt_f64(v.re), fmt_f64(v.im))?;
                }
            }
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Grid description written next to a CSV export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSidecar {
    pub n_min: i64,
    pub n_max: i64,
    pub a: f64,
    pub n_k: usize,
    pub m_min: i64,
    pub m_max: i64,
    pub columns: String,
    pub source: String,
}

impl GridSidecar {
    pub fn for_matrix(w: &WignerMatrix, source: impl Into<String>) -> Self {
        Self {
            n_min: w.window.n_min,
            n_max: w.window.n_max,
            a: w.window.a,
            n_k: w.kgrid.len(),
            m_min: w.m_min(),
            m_max: w.m_max(),
            columns: CSV_HEADER.into(),
            source: source.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn delta_state_gives_single_ridge() {
        let window = LatticeWindow::symmetric(3);
        let kgrid = KGrid::exact_for_width(window.width());
        let psi = PureState::basis(window, 1, 0).unwrap();
        let w = wigner_of_pure(&psi, &kgrid).unwrap();
        for m in w.m_values() {
            for j in 0..kgrid.len() {
                let b = w.get(m, j);
                let expect = if m == 2 { 1.0 / (2.0 * PI) } else { 0.0 };
                assert!((b.get(0, 0) - c(expect, 0.0)).norm() < 1e-15);
                assert!(b.get(0, 1).norm() < 1e-15 && b.get(1, 0).norm() < 1e-15 && b.get(1, 1).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let window = LatticeWindow::symmetric(3);
        let psi = PureState::basis(window, 0, 0).unwrap();
        let err = wigner_of_pure(&psi, &KGrid::new(14).unwrap()).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { n_k: 14, width: 7, required: 15 }));
    }

    #[test]
    fn sigma_z_operator() {
        let window = LatticeWindow::symmetric(2);
        let kgrid = KGrid::exact_for_width(window.width());
        let mut op = Array2::zeros((window.dim(), window.dim()));
        op[[window.index(-1, 0), window.index(-1, 0)]] = c(1.0, 0.0);
        op[[window.index(-1, 1), window.index(-1, 1)]] = c(-1.0, 0.0);
        let w = wigner_of_operator(&window, &op, &kgrid).unwrap();
        let b = w.get(-2, 3);
        assert!((b.get(0, 0) - c(1.0 / (2.0 * PI), 0.0)).norm() < 1e-15);
        assert!((b.get(1, 1) + c(1.0 / (2.0 * PI), 0.0)).norm() < 1e-15);
        assert!(wigner_of_operator(&window, &Array2::zeros((3, 3)), &kgrid).is_err());
    }

    #[test]
    fn superposition_roundtrip_and_pairing() {
        let window = LatticeWindow::symmetric(4);
        let kgrid = KGrid::new(20).unwrap();
        let mut amps = Array1::zeros(window.dim());
        amps[window.index(-3, 0)] = c(1.0, 0.2);
        amps[window.index(2, 1)] = c(-0.4, 0.9);
        amps[window.index(0, 0)] = c(0.3, 0.0);
        let psi = PureState::normalized(window, amps).unwrap();
        let rho = DensityOperator::from_pure(&psi);
        let w = wigner_of_pure(&psi, &kgrid).unwrap();
        assert!(w.max_abs_diff(&wigner_of_density(&rho, &kgrid).unwrap()).unwrap() < 1e-15);
        assert!((w.normalization() - c(1.0, 0.0)).norm() < 1e-13);
        assert!(w.hermiticity_error() < 1e-15);
        assert!(w.phase_property_error().unwrap() < 1e-14);
        assert!((trace_product(&w, &w).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let back = reconstruct_density(&w).unwrap();
        assert!(back.max_abs_diff(&rho).unwrap() < 1e-14);
        assert!(marginal_position(&w).odd_residual < 1e-14);
    }

    #[test]
    fn csv_layout() {
        let window = LatticeWindow::symmetric(1);
        let kgrid = KGrid::exact_for_width(3);
        let w = wigner_of_pure(&PureState::basis(window, 0, 1).unwrap(), &kgrid).unwrap();
        let mut buf = Vec::new();
        write_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 5 * 7);
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), 10);
        assert_eq!(first[0], "-2");
        assert_eq!(first[1].parse::<f64>().unwrap(), -PI);
    }
}
