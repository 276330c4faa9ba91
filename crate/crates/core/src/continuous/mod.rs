//! Continuous-time dynamics under `H = J(T₊ + T₋) + V` (or `+ σ_z V`), with
//! optional spin-only Lindblad noise.
//!
//! Three independent routes are provided and cross-checked in the tests:
//! RK4 on the density operator ([`von_neumann_rk4`], [`lindblad_rk4`]),
//! RK4 directly on the Wigner matrix ([`wigner_rk4`]), and the closed-form
//! Bessel propagators ([`BesselPropagator`]) together with the closed-form
//! decoherence maps ([`lindblad_wigner_closed`]).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::SpinMatrix;
use crate::state::{LatticeWindow, DEFAULT_EPSILON_BOUNDARY};

mod lindblad;
mod oracle;
mod propagator;
mod rhs;

pub use lindblad::{lindblad_wigner_closed, Channel};
pub use oracle::{lindblad_rk4, von_neumann_rhs, von_neumann_rk4};
pub use propagator::{
    free_propagate, linear_potential_propagate, spin_linear_propagate, BesselPropagator, PropagatorKind,
};
pub use rhs::{wigner_evolution_rhs, wigner_rk4};

/// Largest polynomial degree accepted for `V(x)`.
pub const D_MAX: usize = 6;

/// Default `dt · ‖generator‖` for the fixed-step integrators.
pub const DEFAULT_STEP_PRODUCT: f64 = 0.05;

/// `dt · ‖generator‖` above which a step is refused outright.
pub const MAX_STEP_PRODUCT: f64 = 1.0;

/// Site potential `V(x)` evaluated at `x = n a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Potential {
    #[default]
    None,
    /// `V(x) = λ x`, so `V_n = λ a n`.
    Linear { lambda: f64 },
    /// `V(x) = Σ_p coeffs[p] x^p`.
    Polynomial { coeffs: Vec<f64> },
}

impl Potential {
    /// Monomial coefficients, lowest degree first.
    pub fn coefficients(&self) -> Vec<f64> {
        match self {
            Potential::None => Vec::new(),
            Potential::Linear { lambda } => vec![0.0, *lambda],
            Potential::Polynomial { coeffs } => coeffs.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        let c = self.coefficients();
        c.iter().rposition(|&v| v != 0.0).unwrap_or(0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coefficients().iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `V^{(p)}(x) / p!`.
    pub fn taylor_coefficient(&self, p: usize, x: f64) -> f64 {
        let c = self.coefficients();
        let mut acc = 0.0;
        let mut binom = 1.0;
        let mut pow = 1.0;
        for (q, cq) in c.iter().enumerate().skip(p) {
            if q > p {
                binom = binom * q as f64 / (q - p) as f64;
                pow *= x;
            }
            acc += cq * binom * pow;
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub j_hop: f64,
    #[serde(default)]
    pub potential: Potential,
    /// Potential enters as `σ_z V` instead of `V ⊗ I`.
    #[serde(default)]
    pub spin_coupled: bool,
}

impl HamiltonianSpec {
    pub fn hopping(j_hop: f64) -> Self {
        Self { j_hop, potential: Potential::None, spin_coupled: false }
    }

    pub fn linear(j_hop: f64, lambda: f64, spin_coupled: bool) -> Self {
        Self { j_hop, potential: Potential::Linear { lambda }, spin_coupled }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.j_hop.is_finite() && self.potential.coefficients().iter().all(|c| c.is_finite());
        if !finite {
            return Err(Error::NonFinite("Hamiltonian parameters".into()));
        }
        if self.potential.degree() > D_MAX {
            return Err(Error::UnsupportedPotential(format!(
                "polynomial degree {} exceeds the maximum of {D_MAX}",
                self.potential.degree()
            )));
        }
        Ok(())
    }

    /// `V_n` seen by spin component `α`.
    pub fn site_potential(&self, n: i64, alpha: usize, a: f64) -> f64 {
        let v = self.potential.value(n as f64 * a);
        if self.spin_coupled && alpha == 1 {
            -v
        } else {
            v
        }
    }

    pub fn max_potential(&self, window: &LatticeWindow) -> f64 {
        window.sites().map(|n| self.potential.value(n as f64 * window.a).abs()).fold(0.0, f64::max)
    }
}

/// Spin-only Lindblad terms `γ_k (A ρ A† - ½{A†A, ρ})`, acting as `I ⊗ A`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NoiseSpec {
    pub terms: Vec<(SpinMatrix, f64)>,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn channel(channel: Channel, gamma: f64) -> Self {
        Self { terms: vec![(channel.operator(), gamma)] }
    }

    pub fn validate(&self) -> Result<()> {
        for (op, gamma) in &self.terms {
            if !(*gamma >= 0.0 && gamma.is_finite()) {
                return Err(Error::InvalidParameter(format!("Lindblad rate must be >= 0, got {gamma}")));
            }
            if !op.is_finite() {
                return Err(Error::NonFinite("Lindblad operator".into()));
            }
        }
        Ok(())
    }

    /// `2 Σ_k γ_k ‖A_k‖²`.
    pub fn norm_estimate(&self) -> f64 {
        self.terms.iter().map(|(op, g)| 2.0 * g * (op.dagger() * *op).hermitian_eigenvalues()[1]).sum()
    }

    /// `Σ_k γ_k (A B A† - ½ A†A B - ½ B A†A)` for a 2×2 block `B`.
    pub(crate) fn dissipator(&self, b: &SpinMatrix) -> SpinMatrix {
        let mut out = SpinMatrix::zero();
        for (op, gamma) in &self.terms {
            let ad = op.dagger();
            let ada = ad * *op;
            out += (*op * *b * ad - (ada * *b + *b * ada) * 0.5) * *gamma;
        }
        out
    }
}

/// Step control shared by the RK4 integrators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rk4Config {
    /// Fixed step; `None` picks `DEFAULT_STEP_PRODUCT / ‖generator‖`.
    pub dt: Option<f64>,
    pub epsilon_boundary: f64,
}

impl Default for Rk4Config {
    fn default() -> Self {
        Self { dt: None, epsilon_boundary: DEFAULT_EPSILON_BOUNDARY }
    }
}

impl Rk4Config {
    pub(crate) fn resolve_dt(&self, norm: f64) -> Result<f64> {
        let dt = match self.dt {
            Some(dt) => dt,
            None if norm > 0.0 => DEFAULT_STEP_PRODUCT / norm,
            None => 0.1,
        };
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        if dt * norm > MAX_STEP_PRODUCT {
            return Err(Error::StepTooLarge { dt, norm, product: dt * norm, limit: MAX_STEP_PRODUCT });
        }
        Ok(dt)
    }
}

/// Snapshots at the requested times plus the largest boundary population
/// seen along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult<S> {
    pub times: Vec<f64>,
    pub snapshots: Vec<S>,
    pub boundary_leak: f64,
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidParameter("snapshot times must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("snapshot times must be sorted ascending".into()));
    }
    Ok(())
}

/// Splits `[t0, t1]` into equal steps no longer than `dt`.
pub(crate) fn substeps(t0: f64, t1: f64, dt: f64) -> (usize, f64) {
    let span = t1 - t0;
    if span <= 0.0 {
        return (0, 0.0);
    }
    let n = (span / dt).ceil().max(1.0) as usize;
    (n, span / n as f64)
}

pub(crate) fn leak_error(leak: f64, limit: f64, t: f64) -> Error {
    Error::BoundaryLeak { leak, limit, context: format!(" at t = {t}") }
}

pub(crate) const I: C64 = C64::new(0.0, 1.0);
