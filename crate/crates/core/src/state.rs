//! Finite windows of the infinite lattice, pure and mixed states on
//! `lattice ⊗ spin`, and their JSON form.
//!
//! The composite basis `|n, α⟩` is ordered site-major, spin-minor: index
//! `2(n - n_min) + α`. Each 2×2 spin block of an operator is therefore
//! contiguous.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{SpinMatrix, SpinVector};

/// Population allowed on the outermost sites before an evolution is declared
/// contaminated by the hard walls.
pub const DEFAULT_EPSILON_BOUNDARY: f64 = 1e-8;

/// Sites `n_min..=n_max` standing in for the infinite lattice, spacing `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeWindow {
    pub n_min: i64,
    pub n_max: i64,
    pub a: f64,
}

impl LatticeWindow {
    pub fn new(n_min: i64, n_max: i64, a: f64) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::InvalidWindow(format!("n_min = {n_min} > n_max = {n_max}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidWindow(format!("lattice spacing must be positive, got {a}")));
        }
        Ok(Self { n_min, n_max, a })
    }

    /// `[-half, half]` with unit spacing.
    pub fn symmetric(half: i64) -> Self {
        Self { n_min: -half, n_max: half, a: 1.0 }
    }

    pub fn width(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    /// Dimension of `lattice ⊗ spin`.
    pub fn dim(&self) -> usize {
        2 * self.width()
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    pub fn ensure_contains(&self, n: i64) -> Result<()> {
        if !self.contains(n) {
            return Err(Error::OutsideWindow { site: n, n_min: self.n_min, n_max: self.n_max });
        }
        Ok(())
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }

    #[inline]
    pub fn site_index(&self, n: i64) -> usize {
        (n - self.n_min) as usize
    }

    #[inline]
    pub fn index(&self, n: i64, alpha: usize) -> usize {
        2 * self.site_index(n) + alpha
    }

    pub fn m_min(&self) -> i64 {
        2 * self.n_min
    }

    pub fn m_max(&self) -> i64 {
        2 * self.n_max
    }

    pub fn n_m(&self) -> usize {
        (self.m_max() - self.m_min() + 1) as usize
    }
}

/// Normalized amplitudes `Ψ_α(n) = ⟨n, α|Ψ⟩` on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    window: LatticeWindow,
    amplitudes: Array1<C64>,
}

impl PureState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(window: LatticeWindow, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != window.dim() {
            return Err(Error::LengthMismatch { expected: window.dim(), got: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { window, amplitudes })
    }

    /// Divides by the norm computed on the window.
    pub fn normalized(window: LatticeWindow, mut amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != window.dim() {
            return Err(Error::LengthMismatch { expected: window.dim(), got: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm * norm));
        }
        amplitudes.mapv_inplace(|c| c / norm);
        Ok(Self { window, amplitudes })
    }

    /// `Σ_n f(n) |n⟩ ⊗ |spin⟩`, normalized.
    pub fn product<F: Fn(i64) -> C64>(window: LatticeWindow, envelope: F, spin: SpinVector) -> Result<Self> {
        let mut amps = Array1::zeros(window.dim());
        for n in window.sites() {
            let f = envelope(n);
            amps[window.index(n, 0)] = f * spin[0];
            amps[window.index(n, 1)] = f * spin[1];
        }
        Self::normalized(window, amps)
    }

    /// `|n, α⟩`.
    pub fn basis(window: LatticeWindow, n: i64, alpha: usize) -> Result<Self> {
        window.ensure_contains(n)?;
        let mut amps = Array1::zeros(window.dim());
        amps[window.index(n, alpha)] = C64::new(1.0, 0.0);
        Ok(Self { window, amplitudes: amps })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: i64, alpha: usize) -> C64 {
        if self.window.contains(n) {
            self.amplitudes[self.window.index(n, alpha)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Dense operator on `window ⊗ spin`, interpreted as a density operator.
///
/// Hermiticity, unit trace and positivity are checked on demand by
/// [`DensityOperator::validate`], never implicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    window: LatticeWindow,
    matrix: Array2<C64>,
}

impl DensityOperator {
    pub fn new(window: LatticeWindow, matrix: Array2<C64>) -> Result<Self> {
        check_square(&matrix, window.dim())?;
        Ok(Self { window, matrix })
    }

    /// `|Ψ⟩⟨Ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        let d = v.len();
        let matrix = Array2::from_shape_fn((d, d), |(i, j)| v[i] * v[j].conj());
        Self { window: psi.window, matrix }
    }

    /// `ρ_L ⊗ ρ_S`.
    pub fn product(lattice: &LatticeOperator, spin: &SpinMatrix) -> Self {
        let window = lattice.window;
        let w = window.width();
        let mut matrix = Array2::zeros((2 * w, 2 * w));
        for i in 0..w {
            for j in 0..w {
                let l = lattice.matrix[[i, j]];
                for alpha in 0..2 {
                    for beta in 0..2 {
                        matrix[[2 * i + alpha, 2 * j + beta]] = l * spin.get(alpha, beta);
                    }
                }
            }
        }
        Self { window, matrix }
    }

    /// `I / (2W)` over the full window.
    pub fn maximally_mixed(window: LatticeWindow) -> Self {
        let d = window.dim();
        let matrix = Array2::from_diag_elem(d, C64::new(1.0 / d as f64, 0.0));
        Self { window, matrix }
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, n: i64, alpha: usize, n2: i64, beta: usize) -> C64 {
        if self.window.contains(n) && self.window.contains(n2) {
            self.matrix[[self.window.index(n, alpha), self.window.index(n2, beta)]]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// The 2×2 spin block `⟨n, ·|ρ|n', ·⟩`.
    pub fn block(&self, n: i64, n2: i64) -> SpinMatrix {
        let mut b = SpinMatrix::zero();
        for alpha in 0..2 {
            for beta in 0..2 {
                b.set(alpha, beta, self.entry(n, alpha, n2, beta));
            }
        }
        b
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().iter().sum()
    }

    /// `tr ρ²`, computed as `Σ ρ_ij ρ_ji`.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.matrix[[i, j]] * self.matrix[[j, i]];
            }
        }
        acc.re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    /// Replaces the matrix by its Hermitian part `(ρ + ρ†)/2`.
    pub fn symmetrize(&mut self) {
        symmetrize(&mut self.matrix);
    }

    /// Eigenvalues of the Hermitian part, ascending. `O(d³)`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Hermitian to `tol`, unit trace to `tol`, and eigenvalues `>= -psd_tol`.
    pub fn validate(&self, tol: f64, psd_tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::NotNormalized(tr.re));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -psd_tol {
            return Err(Error::InvalidParameter(format!("density operator has negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `Σ_α ⟨n, α|ρ|n, α⟩`.
    pub fn site_population(&self, n: i64) -> f64 {
        (0..2).map(|a| self.entry(n, a, n, a).re).sum()
    }

    /// Spin-resolved populations `(p_0(n), p_1(n))` for every site.
    pub fn site_distribution(&self) -> Vec<(i64, f64, f64)> {
        self.window.sites().map(|n| (n, self.entry(n, 0, n, 0).re, self.entry(n, 1, n, 1).re)).collect()
    }

    /// Population on the two outermost sites.
    pub fn boundary_population(&self) -> f64 {
        edge_population(&self.window, &self.matrix)
    }

    /// Partial trace over spin: `Σ_α ⟨n, α|ρ|n', α⟩`.
    pub fn spin_trace(&self) -> LatticeOperator {
        let w = self.window.width();
        let matrix =
            Array2::from_shape_fn((w, w), |(i, j)| self.matrix[[2 * i, 2 * j]] + self.matrix[[2 * i + 1, 2 * j + 1]]);
        LatticeOperator { window: self.window, matrix }
    }

    /// `(I ⊗ u) ρ (I ⊗ u)†`; `u` must be unitary to 1e-12.
    pub fn rotate_spin(&self, u: &SpinMatrix) -> Result<Self> {
        u.ensure_unitary(1e-12)?;
        Ok(self.map_spin_blocks(|b| b.conjugate_by(u)))
    }

    /// Applies `f` to every 2×2 block `⟨n, ·|ρ|n', ·⟩`.
    pub fn map_spin_blocks<F: Fn(&SpinMatrix) -> SpinMatrix>(&self, f: F) -> Self {
        let w = self.window.width();
        let mut matrix = Array2::zeros(self.matrix.raw_dim());
        for i in 0..w {
            for j in 0..w {
                let mut b = SpinMatrix::zero();
                for alpha in 0..2 {
                    for beta in 0..2 {
                        b.set(alpha, beta, self.matrix[[2 * i + alpha, 2 * j + beta]]);
                    }
                }
                let out = f(&b);
                for alpha in 0..2 {
                    for beta in 0..2 {
                        matrix[[2 * i + alpha, 2 * j + beta]] = out.get(alpha, beta);
                    }
                }
            }
        }
        Self { window: self.window, matrix }
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        if self.window != other.window {
            return Err(Error::GridMismatch("density operators live on different windows".into()));
        }
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }
}

/// Operator on the lattice factor only (`W × W`), e.g. a spin-traced state.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeOperator {
    window: LatticeWindow,
    matrix: Array2<C64>,
}

impl LatticeOperator {
    pub fn new(window: LatticeWindow, matrix: Array2<C64>) -> Result<Self> {
        check_square(&matrix, window.width())?;
        Ok(Self { window, matrix })
    }

    /// `|ψ⟩⟨ψ|` for spinless amplitudes `ψ(n)`, normalized on the window.
    pub fn from_amplitudes(window: LatticeWindow, amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != window.width() {
            return Err(Error::LengthMismatch { expected: window.width(), got: amplitudes.len() });
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm));
        }
        let w = amplitudes.len();
        let matrix = Array2::from_shape_fn((w, w), |(i, j)| amplitudes[i] * amplitudes[j].conj() / norm);
        Ok(Self { window, matrix })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn entry(&self, n: i64, n2: i64) -> C64 {
        if self.window.contains(n) && self.window.contains(n2) {
            self.matrix[[self.window.site_index(n), self.window.site_index(n2)]]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().iter().sum()
    }

    pub fn max_abs_diff(&self, other: &LatticeOperator) -> Result<f64> {
        if self.window != other.window {
            return Err(Error::GridMismatch("lattice operators live on different windows".into()));
        }
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }
}

pub(crate) fn check_square(matrix: &Array2<C64>, expected: usize) -> Result<()> {
    let (rows, cols) = matrix.dim();
    if rows != expected || cols != expected {
        return Err(Error::DimensionMismatch { expected, rows, cols });
    }
    Ok(())
}

/// Population on the outermost sites of `window` for a `2W × 2W` matrix.
pub(crate) fn edge_population(window: &LatticeWindow, m: &Array2<C64>) -> f64 {
    let site = |n: i64| (0..2).map(|a| m[[window.index(n, a), window.index(n, a)]].re).sum::<f64>();
    if window.n_min == window.n_max {
        site(window.n_min)
    } else {
        site(window.n_min) + site(window.n_max)
    }
}

pub(crate) fn hermiticity_error(m: &Array2<C64>) -> f64 {
    let d = m.nrows();
    let mut err = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            err = err.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    err
}

pub(crate) fn symmetrize(m: &mut Array2<C64>) {
    let d = m.nrows();
    for i in 0..d {
        m[[i, i]] = C64::new(m[[i, i]].re, 0.0);
        for j in (i + 1)..d {
            let avg = 0.5 * (m[[i, j]] + m[[j, i]].conj());
            m[[i, j]] = avg;
            m[[j, i]] = avg.conj();
        }
    }
}

pub(crate) fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Array2<C64>) -> Vec<f64> {
    let d = m.nrows();
    let h = nalgebra::DMatrix::<C64>::from_fn(d, d, |i, j| 0.5 * (m[[i, j]] + m[[j, i]].conj()));
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

// --- JSON form --------------------------------------------------------------

/// On-disk form of a state: window bounds, spacing, and the flat row-major
/// complex data as `[re, im]` pairs. Pure states carry `2W` amplitudes,
/// density operators `(2W)²` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub kind: StateKind,
    pub n_min: i64,
    pub n_max: i64,
    pub a: f64,
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Pure,
    Density,
}

fn pairs<'a>(it: impl Iterator<Item = &'a C64>) -> Vec<[f64; 2]> {
    it.map(|c| [c.re, c.im]).collect()
}

impl StateDocument {
    fn window(&self) -> Result<LatticeWindow> {
        let w = LatticeWindow::new(self.n_min, self.n_max, self.a)?;
        if self.dim != w.dim() {
            return Err(Error::LengthMismatch { expected: w.dim(), got: self.dim });
        }
        Ok(w)
    }
}

impl PureState {
    pub fn to_document(&self) -> StateDocument {
        let w = self.window;
        StateDocument {
            kind: StateKind::Pure,
            n_min: w.n_min,
            n_max: w.n_max,
            a: w.a,
            dim: w.dim(),
            data: pairs(self.amplitudes.iter()),
        }
    }

    pub fn from_document(doc: &StateDocument) -> Result<Self> {
        if doc.kind != StateKind::Pure {
            return Err(Error::Config("expected a pure-state document".into()));
        }
        let w = doc.window()?;
        let amps: Array1<C64> = doc.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Self::new(w, amps)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

impl DensityOperator {
    pub fn to_document(&self) -> StateDocument {
        let w = self.window;
        StateDocument {
            kind: StateKind::Density,
            n_min: w.n_min,
            n_max: w.n_max,
            a: w.a,
            dim: w.dim(),
            data: pairs(self.matrix.iter()),
        }
    }

    pub fn from_document(doc: &StateDocument) -> Result<Self> {
        if doc.kind != StateKind::Density {
            return Err(Error::Config("expected a density-operator document".into()));
        }
        let w = doc.window()?;
        let d = w.dim();
        if doc.data.len() != d * d {
            return Err(Error::LengthMismatch { expected: d * d, got: doc.data.len() });
        }
        let data: Vec<C64> = doc.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let matrix = Array2::from_shape_vec((d, d), data).expect("length checked above");
        Self::new(w, matrix)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}
