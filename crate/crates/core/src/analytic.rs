//! Closed-form states and their Wigner matrices. These are the golden
//! references the transform is checked against.

use std::f64::consts::PI;

use ndarray::Array1;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{theta3, theta3_scaled, KGrid};
use crate::spin::{SpinMatrix, SpinVector};
use crate::state::{DensityOperator, LatticeOperator, LatticeWindow, PureState};
use crate::wigner::{ScalarWigner, WignerMatrix};

const ZERO: C64 = C64::new(0.0, 0.0);
const UP: SpinVector = [C64::new(1.0, 0.0), ZERO];
const DOWN: SpinVector = [ZERO, C64::new(1.0, 0.0)];

/// Gaussians must fit inside the window out to this many widths.
pub const GAUSSIAN_SLACK_SIGMAS: f64 = 6.0;

fn kron(a: i64, b: i64) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

// --- cat / double delta ------------------------------------------------------

/// `(|a⟩|σ₁⟩ + β|b⟩|σ₂⟩) / √(1+|β|²)` with orthonormal `σ₁, σ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatSpec {
    pub a_site: i64,
    pub b_site: i64,
    pub beta: C64,
    pub spin1: SpinVector,
    pub spin2: SpinVector,
}

impl CatSpec {
    pub fn validate(&self) -> Result<()> {
        if self.a_site == self.b_site {
            return Err(Error::InvalidParameter("cat sites must differ".into()));
        }
        let norm = |v: &SpinVector| v[0].norm_sqr() + v[1].norm_sqr();
        if (norm(&self.spin1) - 1.0).abs() > 1e-12 || (norm(&self.spin2) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("cat spin vectors must be normalized".into()));
        }
        let overlap = self.spin1[0].conj() * self.spin2[0] + self.spin1[1].conj() * self.spin2[1];
        if overlap.norm() >= 1e-12 {
            return Err(Error::InvalidParameter(format!("cat spin vectors overlap by {:e}", overlap.norm())));
        }
        Ok(())
    }
}

pub fn cat_state(spec: &CatSpec, window: &LatticeWindow) -> Result<PureState> {
    spec.validate()?;
    window.ensure_contains(spec.a_site)?;
    window.ensure_contains(spec.b_site)?;
    let mut amps = Array1::zeros(window.dim());
    for alpha in 0..2 {
        amps[window.index(spec.a_site, alpha)] += spec.spin1[alpha];
        amps[window.index(spec.b_site, alpha)] += spec.beta * spec.spin2[alpha];
    }
    PureState::normalized(*window, amps)
}

/// Three ridges: `|σ₁⟩⟨σ₁|` at `m = 2a`, `|β|²|σ₂⟩⟨σ₂|` at `m = 2b` and the
/// coherence `β* e^{-ik(a-b)}|σ₁⟩⟨σ₂| + h.c.` at `m = a + b`.
pub fn cat_wigner_closed(spec: &CatSpec, window: &LatticeWindow, kgrid: &KGrid) -> Result<WignerMatrix> {
    spec.validate()?;
    let (a, b, beta) = (spec.a_site, spec.b_site, spec.beta);
    let pref = 1.0 / (2.0 * PI * (1.0 + beta.norm_sqr()));
    let p1 = SpinMatrix::outer(&spec.spin1, &spec.spin1);
    let p2 = SpinMatrix::outer(&spec.spin2, &spec.spin2);
    let c12 = SpinMatrix::outer(&spec.spin1, &spec.spin2);
    Ok(WignerMatrix::from_fn(*window, *kgrid, |m, k| {
        let mut w = p1 * kron(m, 2 * a) + p2 * (beta.norm_sqr() * kron(m, 2 * b));
        if m == a + b {
            let phase = C64::from_polar(1.0, -k * (a - b) as f64);
            let coh = c12.scale(beta.conj() * phase);
            w += coh + coh.dagger();
        }
        w * pref
    }))
}

/// `(|n₁⟩|0⟩ + α|n₂⟩|1⟩) / √(1+|α|²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleDeltaSpec {
    pub n1: i64,
    pub n2: i64,
    pub alpha: C64,
}

impl DoubleDeltaSpec {
    pub fn as_cat(&self) -> CatSpec {
        CatSpec { a_site: self.n1, b_site: self.n2, beta: self.alpha, spin1: UP, spin2: DOWN }
    }
}

pub fn double_delta_state(spec: &DoubleDeltaSpec, window: &LatticeWindow) -> Result<PureState> {
    cat_state(&spec.as_cat(), window)
}

pub fn double_delta_wigner_closed(
    spec: &DoubleDeltaSpec,
    window: &LatticeWindow,
    kgrid: &KGrid,
) -> Result<WignerMatrix> {
    cat_wigner_closed(&spec.as_cat(), window, kgrid)
}

/// Spinless `(|n₁⟩ + α|n₂⟩) / √(1+|α|²)` as amplitudes on the window.
pub fn spinless_double_delta_amplitudes(n1: i64, n2: i64, alpha: C64, window: &LatticeWindow) -> Result<Vec<C64>> {
    if n1 == n2 {
        return Err(Error::InvalidParameter("double-delta sites must differ".into()));
    }
    window.ensure_contains(n1)?;
    window.ensure_contains(n2)?;
    let norm = (1.0 + alpha.norm_sqr()).sqrt();
    let mut amps = vec![ZERO; window.width()];
    amps[window.site_index(n1)] = C64::new(1.0 / norm, 0.0);
    amps[window.site_index(n2)] = alpha / norm;
    Ok(amps)
}

/// `[δ_{m,2n₁} + |α|² δ_{m,2n₂} + 2|α| δ_{m,n₁+n₂} cos(Δn k - φ)] / 2π(1+|α|²)`
/// with `Δn = n₂ - n₁` and `φ = arg α`.
pub fn spinless_double_delta_wigner(
    n1: i64,
    n2: i64,
    alpha: C64,
    window: &LatticeWindow,
    kgrid: &KGrid,
) -> Result<ScalarWigner> {
    if n1 == n2 {
        return Err(Error::InvalidParameter("double-delta sites must differ".into()));
    }
    let pref = 1.0 / (2.0 * PI * (1.0 + alpha.norm_sqr()));
    let (dn, phi, mag) = ((n2 - n1) as f64, alpha.arg(), alpha.norm());
    Ok(ScalarWigner::from_fn(*window, *kgrid, |m, k| {
        let mut w = kron(m, 2 * n1) + alpha.norm_sqr() * kron(m, 2 * n2);
        if m == n1 + n2 {
            w += 2.0 * mag * (dn * k - phi).cos();
        }
        C64::new(w * pref, 0.0)
    }))
}

// --- Gaussians -----------------------------------------------------------------

/// `e^{-(n-c)²/2σ²}`.
pub fn gaussian_envelope(n: i64, center: f64, sigma: f64) -> f64 {
    let x = n as f64 - center;
    (-x * x / (2.0 * sigma * sigma)).exp()
}

/// `N = √θ₃(0, e^{-1/σ²})`, the infinite-lattice norm of one envelope
/// centered on a site.
pub fn gaussian_norm_constant(sigma: f64) -> Result<f64> {
    Ok(theta3(ZERO, gaussian_nome(sigma)?)?.re.sqrt())
}

/// `√(Σ_n e^{-(n-c)²/σ²})` over the window.
pub fn gaussian_window_norm(center: i64, sigma: f64, window: &LatticeWindow) -> f64 {
    window.sites().map(|n| gaussian_envelope(n, center as f64, sigma).powi(2)).sum::<f64>().sqrt()
}

fn gaussian_nome(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    Ok((-1.0 / (sigma * sigma)).exp())
}

fn check_gaussian_fits(center: i64, sigma: f64, window: &LatticeWindow) -> Result<()> {
    let reach = GAUSSIAN_SLACK_SIGMAS * sigma;
    let (lo, hi) = (center as f64 - reach, center as f64 + reach);
    if lo < window.n_min as f64 || hi > window.n_max as f64 {
        return Err(Error::WindowTooSmall(format!(
            "Gaussian at {center} with sigma {sigma} needs [{lo:.2}, {hi:.2}] inside [{}, {}]",
            window.n_min, window.n_max
        )));
    }
    Ok(())
}

/// Single lattice Gaussian centered on a site.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub center: i64,
    pub sigma: f64,
}

impl GaussianSpec {
    pub fn validate(&self, window: &LatticeWindow) -> Result<()> {
        gaussian_nome(self.sigma)?;
        check_gaussian_fits(self.center, self.sigma, window)
    }
}

/// `|ψ⟩⟨ψ|` for the Gaussian, normalized on the window.
pub fn gaussian_lattice_state(spec: &GaussianSpec, window: &LatticeWindow) -> Result<LatticeOperator> {
    spec.validate(window)?;
    let amps: Vec<C64> =
        window.sites().map(|n| C64::new(gaussian_envelope(n, spec.center as f64, spec.sigma), 0.0)).collect();
    LatticeOperator::from_amplitudes(*window, &amps)
}

/// Gaussian envelope times a fixed spinor.
pub fn product_gaussian_state(spec: &GaussianSpec, spin: SpinVector, window: &LatticeWindow) -> Result<PureState> {
    spec.validate(window)?;
    let center = spec.center as f64;
    PureState::product(*window, |n| C64::new(gaussian_envelope(n, center, spec.sigma), 0.0), spin)
}

/// `Σ_n e^{-(n-l₁)²/2σ²} e^{-(m-n-l₂)²/2σ²} e^{-i(2n-m)k} / 2πN²`, summed
/// in closed form through θ₃. Every term has a non-positive exponent, which
/// `theta3_scaled` preserves, so small σ does not overflow.
fn gaussian_pair_closed(l1: i64, l2: i64, sigma: f64, m: i64, k: f64, n_sq: f64) -> Result<C64> {
    let q = gaussian_nome(sigma)?;
    let s2 = 2.0 * sigma * sigma;
    let (l1f, l2f, mf) = (l1 as f64, l2 as f64, m as f64);
    let ln_scale = -(l1f * l1f + (mf - l2f) * (mf - l2f)) / s2;
    let z = C64::new(k, (mf - l2f + l1f) / s2);
    let th = theta3_scaled(z, q, ln_scale)?;
    Ok(C64::from_polar(1.0, k * mf) * th / (2.0 * PI * n_sq))
}

/// `W_L` of a single Gaussian centered at `c`:
/// `e^{-(c²+(m-c)²)/2σ²} e^{ikm} θ₃(k + im/2σ², e^{-1/σ²}) / 2πN²`.
pub fn gaussian_wigner_closed(spec: &GaussianSpec, window: &LatticeWindow, kgrid: &KGrid) -> Result<ScalarWigner> {
    let n_sq = gaussian_norm_constant(spec.sigma)?.powi(2);
    let m_min = window.m_min();
    let mut values = ndarray::Array2::zeros((window.n_m(), kgrid.len()));
    for ((i, j), v) in values.indexed_iter_mut() {
        *v = gaussian_pair_closed(spec.center, spec.center, spec.sigma, m_min + i as i64, kgrid.point(j), n_sq)?;
    }
    ScalarWigner::new(*window, *kgrid, values)
}

/// Two Gaussians with orthogonal spin components,
/// `Σ_n [e^{-(n-a)²/2σ²}|0⟩ + e^{-(n-b)²/2σ²}|1⟩]|n⟩ / √2 N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoGaussianSpec {
    pub a_center: i64,
    pub b_center: i64,
    pub sigma: f64,
}

impl TwoGaussianSpec {
    pub fn validate(&self, window: &LatticeWindow) -> Result<()> {
        gaussian_nome(self.sigma)?;
        check_gaussian_fits(self.a_center, self.sigma, window)?;
        check_gaussian_fits(self.b_center, self.sigma, window)
    }
}

/// Normalized by the sum over the window, not by the infinite-lattice `N`.
pub fn two_gaussian_state(spec: &TwoGaussianSpec, window: &LatticeWindow) -> Result<PureState> {
    spec.validate(window)?;
    let mut amps = Array1::zeros(window.dim());
    for n in window.sites() {
        amps[window.index(n, 0)] = C64::new(gaussian_envelope(n, spec.a_center as f64, spec.sigma), 0.0);
        amps[window.index(n, 1)] = C64::new(gaussian_envelope(n, spec.b_center as f64, spec.sigma), 0.0);
    }
    PureState::normalized(*window, amps)
}

/// `½ [[W_a, W_ab], [W_ab*, W_b]]` with the θ₃ closed forms.
pub fn two_gaussian_wigner_closed(
    spec: &TwoGaussianSpec,
    window: &LatticeWindow,
    kgrid: &KGrid,
) -> Result<WignerMatrix> {
    let n_sq = gaussian_norm_constant(spec.sigma)?.powi(2);
    let (a, b, s) = (spec.a_center, spec.b_center, spec.sigma);
    let m_min = window.m_min();
    let mut values = ndarray::Array2::from_elem((window.n_m(), kgrid.len()), SpinMatrix::zero());
    for ((i, j), v) in values.indexed_iter_mut() {
        let (m, k) = (m_min + i as i64, kgrid.point(j));
        let wa = gaussian_pair_closed(a, a, s, m, k, n_sq)?;
        let wb = gaussian_pair_closed(b, b, s, m, k, n_sq)?;
        let wab = gaussian_pair_closed(a, b, s, m, k, n_sq)?;
        *v = SpinMatrix::new(wa, wab, wab.conj(), wb) * 0.5;
    }
    WignerMatrix::new(*window, *kgrid, values)
}

// --- product and Werner --------------------------------------------------------

/// `W_αβ = W_L ⟨α|ρ_S|β⟩`.
pub fn product_wigner(w_l: &ScalarWigner, rho_s: &SpinMatrix) -> Result<WignerMatrix> {
    let herm = rho_s.hermiticity_error();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    let tr = rho_s.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::NotNormalized(tr.re));
    }
    Ok(w_l.times_spin(rho_s))
}

/// `ρ = (1-z)/4 · P + z|ψ⟩⟨ψ|` with `|ψ⟩ = (|a⟩|0⟩ + |b⟩|1⟩)/√2` and `P` the
/// identity on the four-dimensional span of `{a, b} ⊗ spin`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerSpec {
    pub a_site: i64,
    pub b_site: i64,
    pub z: f64,
}

impl WernerSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.z) {
            return Err(Error::InvalidParameter(format!("Werner z must lie in [0, 1], got {}", self.z)));
        }
        if self.a_site == self.b_site {
            return Err(Error::InvalidParameter("Werner sites must differ".into()));
        }
        Ok(())
    }
}

pub fn werner_density(spec: &WernerSpec, window: &LatticeWindow) -> Result<DensityOperator> {
    spec.validate()?;
    let dd = DoubleDeltaSpec { n1: spec.a_site, n2: spec.b_site, alpha: C64::new(1.0, 0.0) };
    let psi = double_delta_state(&dd, window)?;
    let mut matrix = DensityOperator::from_pure(&psi).into_matrix();
    matrix.mapv_inplace(|v| v * spec.z);
    let mixed = C64::new((1.0 - spec.z) / 4.0, 0.0);
    for site in [spec.a_site, spec.b_site] {
        for alpha in 0..2 {
            let i = window.index(site, alpha);
            matrix[[i, i]] += mixed;
        }
    }
    DensityOperator::new(*window, matrix)
}

/// Closed form with `W_ln(m, k) = δ_{m,l+n} e^{-ik(l-n)} / 2π`; the lower
/// off-diagonal entry is `(z/2) W_ba`.
pub fn werner_wigner(spec: &WernerSpec, window: &LatticeWindow, kgrid: &KGrid) -> Result<WignerMatrix> {
    spec.validate()?;
    window.ensure_contains(spec.a_site)?;
    window.ensure_contains(spec.b_site)?;
    let (a, b, z) = (spec.a_site, spec.b_site, spec.z);
    let w_ln = |l: i64, n: i64, m: i64, k: f64| C64::from_polar(kron(m, l + n) / (2.0 * PI), -k * (l - n) as f64);
    Ok(WignerMatrix::from_fn(*window, *kgrid, |m, k| {
        let (waa, wbb) = (w_ln(a, a, m, k), w_ln(b, b, m, k));
        SpinMatrix::new(
            waa * ((1.0 + z) / 4.0) + wbb * ((1.0 - z) / 4.0),
            w_ln(a, b, m, k) * (z / 2.0),
            w_ln(b, a, m, k) * (z / 2.0),
            waa * ((1.0 - z) / 4.0) + wbb * ((1.0 + z) / 4.0),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::{scalar_wigner_of_amplitudes, wigner_of_density, wigner_of_pure};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn double_delta_amplitudes() {
        let w = LatticeWindow::symmetric(3);
        let psi = double_delta_state(&DoubleDeltaSpec { n1: 0, n2: 1, alpha: c(1.0, 0.0) }, &w).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((psi.amplitude(0, 0) - c(h, 0.0)).norm() < 1e-15);
        assert!((psi.amplitude(1, 1) - c(h, 0.0)).norm() < 1e-15);
        let psi = double_delta_state(&DoubleDeltaSpec { n1: 0, n2: 1, alpha: c(0.0, 2.0) }, &w).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(double_delta_state(&DoubleDeltaSpec { n1: 0, n2: 9, alpha: c(1.0, 0.0) }, &w).is_err());
    }

    #[test]
    fn double_delta_closed_matches_transform() {
        let w = LatticeWindow::symmetric(5);
        let g = KGrid::new(24).unwrap();
        let spec = DoubleDeltaSpec { n1: -2, n2: 3, alpha: c(0.6, -1.3) };
        let closed = double_delta_wigner_closed(&spec, &w, &g).unwrap();
        let direct = wigner_of_pure(&double_delta_state(&spec, &w).unwrap(), &g).unwrap();
        assert!(closed.max_abs_diff(&direct).unwrap() < 1e-14);
    }

    #[test]
    fn spinless_double_delta_matches_transform() {
        let w = LatticeWindow::symmetric(5);
        let g = KGrid::new(23).unwrap();
        let alpha = c(-0.4, 0.9);
        let closed = spinless_double_delta_wigner(-1, 3, alpha, &w, &g).unwrap();
        let amps = spinless_double_delta_amplitudes(-1, 3, alpha, &w).unwrap();
        let direct = scalar_wigner_of_amplitudes(&w, &amps, &g).unwrap();
        assert!(closed.max_abs_diff(&direct).unwrap() < 1e-14);
    }

    #[test]
    fn gaussian_norm_constant_matches_window_sum() {
        let w = LatticeWindow::symmetric(24);
        let n = gaussian_norm_constant(1.5).unwrap();
        for center in [-6, 0, 6] {
            assert!((gaussian_window_norm(center, 1.5, &w) - n).abs() < 1e-10);
        }
    }

    #[test]
    fn two_gaussian_window_check() {
        let w = LatticeWindow::symmetric(10);
        let spec = TwoGaussianSpec { a_center: 6, b_center: -6, sigma: 1.5 };
        assert!(matches!(two_gaussian_state(&spec, &w), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn two_gaussian_equal_centers_is_product() {
        let w = LatticeWindow::symmetric(12);
        let spec = TwoGaussianSpec { a_center: 1, b_center: 1, sigma: 1.2 };
        let psi = two_gaussian_state(&spec, &w).unwrap();
        for n in w.sites() {
            assert!((psi.amplitude(n, 0) - psi.amplitude(n, 1)).norm() < 1e-16);
        }
    }

    #[test]
    fn werner_closed_matches_density() {
        let w = LatticeWindow::symmetric(4);
        let g = KGrid::new(19).unwrap();
        let spec = WernerSpec { a_site: -2, b_site: 1, z: 0.7 };
        let rho = werner_density(&spec, &w).unwrap();
        rho.validate(1e-14, 1e-14).unwrap();
        let direct = wigner_of_density(&rho, &g).unwrap();
        let closed = werner_wigner(&spec, &w, &g).unwrap();
        assert!(closed.max_abs_diff(&direct).unwrap() < 1e-14);
    }

    #[test]
    fn product_wigner_rejects_bad_spin_state() {
        let w = LatticeWindow::symmetric(2);
        let g = KGrid::exact_for_width(5);
        let wl = gaussian_wigner_closed(&GaussianSpec { center: 0, sigma: 0.3 }, &w, &g).unwrap();
        assert!(product_wigner(&wl, &SpinMatrix::identity()).is_err());
        assert!(product_wigner(&wl, &SpinMatrix::sigma_y()).is_err());
        assert!(product_wigner(&wl, &SpinMatrix::basis_projector(0)).is_ok());
    }
}
