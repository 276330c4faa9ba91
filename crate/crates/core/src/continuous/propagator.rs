//! Closed-form Wigner propagators for a linear potential (and its `λ → 0`
//! limit), written as Bessel-kernel convolutions along `m`.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{HamiltonianSpec, Potential};
use crate::error::{Error, Result};
use crate::numerics::{bessel_jn_orders, Spectral};
use crate::spin::SpinMatrix;
use crate::state::DEFAULT_EPSILON_BOUNDARY;
use crate::wigner::{marginal_position, WignerMatrix};

/// Minimum number of kernel terms kept on each side of `m`.
pub const MIN_KERNEL_WIDTH: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PropagatorKind {
    /// `V_n = λ a n` acting identically on both spin components.
    Spinless { lambda_a: f64 },
    /// `σ_z V` with `V_n = λ a n`.
    SpinCoupled { lambda_a: f64 },
    /// Pure hopping.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselPropagator {
    pub j_hop: f64,
    pub kind: PropagatorKind,
    pub epsilon_boundary: f64,
}

fn nonzero_slope(lambda_a: f64) -> Result<f64> {
    if lambda_a == 0.0 || !lambda_a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "linear-potential propagator needs a finite nonzero λa, got {lambda_a}"
        )));
    }
    Ok(lambda_a)
}

impl BesselPropagator {
    pub fn spinless(j_hop: f64, lambda_a: f64) -> Result<Self> {
        let lambda_a = nonzero_slope(lambda_a)?;
        Ok(Self { j_hop, kind: PropagatorKind::Spinless { lambda_a }, epsilon_boundary: DEFAULT_EPSILON_BOUNDARY })
    }

    pub fn spin_coupled(j_hop: f64, lambda_a: f64) -> Result<Self> {
        let lambda_a = nonzero_slope(lambda_a)?;
        Ok(Self { j_hop, kind: PropagatorKind::SpinCoupled { lambda_a }, epsilon_boundary: DEFAULT_EPSILON_BOUNDARY })
    }

    pub fn free(j_hop: f64) -> Self {
        Self { j_hop, kind: PropagatorKind::Free, epsilon_boundary: DEFAULT_EPSILON_BOUNDARY }
    }

    /// Picks the propagator matching `h` on a lattice of spacing `a`.
    pub fn from_hamiltonian(h: &HamiltonianSpec, a: f64) -> Result<Self> {
        h.validate()?;
        match &h.potential {
            Potential::None => Ok(Self::free(h.j_hop)),
            Potential::Linear { lambda } if *lambda == 0.0 => Ok(Self::free(h.j_hop)),
            Potential::Linear { lambda } if h.spin_coupled => Self::spin_coupled(h.j_hop, lambda * a),
            Potential::Linear { lambda } => Self::spinless(h.j_hop, lambda * a),
            Potential::Polynomial { .. } => Err(Error::UnsupportedPotential(
                "closed-form propagation needs a linear potential; use the RK4 paths for polynomials".into(),
            )),
        }
    }

    pub fn with_epsilon_boundary(mut self, eps: f64) -> Self {
        self.epsilon_boundary = eps;
        self
    }

    /// `2π / |λa|`, or `None` for free evolution.
    pub fn bloch_period(&self) -> Option<f64> {
        match self.kind {
            PropagatorKind::Spinless { lambda_a } | PropagatorKind::SpinCoupled { lambda_a } => {
                Some(2.0 * std::f64::consts::PI / lambda_a.abs())
            }
            PropagatorKind::Free => None,
        }
    }

    /// Upper bound on the Bessel argument over all `k` at time `t`.
    pub fn max_argument(&self, t: f64) -> f64 {
        match self.kind {
            PropagatorKind::Spinless { lambda_a } | PropagatorKind::SpinCoupled { lambda_a } => {
                (8.0 * self.j_hop / lambda_a).abs()
            }
            PropagatorKind::Free => (4.0 * self.j_hop * t).abs(),
        }
    }

    /// Kernel half-width `L_B = max(30, ⌈2 z_max⌉)`.
    pub fn kernel_width(&self, t: f64) -> usize {
        MIN_KERNEL_WIDTH.max((2.0 * self.max_argument(t)).ceil() as usize)
    }

    /// `W(·, ·, t)` from `W(·, ·, 0)`.
    ///
    /// Fails with a boundary-leak error when the evolved function loses
    /// normalization off the stored `m` range or piles up on the edge sites.
    pub fn propagate(&self, w0: &WignerMatrix, t: f64) -> Result<WignerMatrix> {
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("propagation time {t}")));
        }
        let spectral = Spectral::new(w0.kgrid());
        let points = w0.kgrid().points();
        let l_b = self.kernel_width(t);
        let j = self.j_hop;
        let m_min = w0.m_min();

        let mut out = WignerMatrix::zeros(*w0.window(), *w0.kgrid());
        for alpha in 0..2 {
            for beta in 0..2 {
                let comp = w0.component(alpha, beta);
                let evolved = match self.kind {
                    PropagatorKind::Free => {
                        let args: Vec<f64> = points.iter().map(|k| -4.0 * j * t * k.sin()).collect();
                        convolve(&comp, m_min, &args, l_b, |_| C64::new(1.0, 0.0))
                    }
                    PropagatorKind::Spinless { lambda_a } => {
                        diagonal_kernel(&spectral, &comp, &points, j, lambda_a, t, l_b)
                    }
                    PropagatorKind::SpinCoupled { lambda_a } => {
                        let s = if alpha == 0 { 1.0 } else { -1.0 };
                        if alpha == beta {
                            diagonal_kernel(&spectral, &comp, &points, j, s * lambda_a, t, l_b)
                        } else {
                            // e^{-i s λa t (m + l)/2} J_{m-l}[-8(J/λa) sin k sin(λat/2)]
                            let half = (0.5 * lambda_a * t).sin();
                            let args: Vec<f64> = points.iter().map(|k| -8.0 * j / lambda_a * k.sin() * half).collect();
                            let mu = s * lambda_a * t;
                            convolve(&comp, m_min, &args, l_b, |sum| C64::from_polar(1.0, -0.5 * mu * sum as f64))
                        }
                    }
                };
                for ((i, jj), v) in evolved.indexed_iter() {
                    out.values_mut()[[i, jj]].set(alpha, beta, *v);
                }
            }
        }

        let before = w0.normalization().re;
        let after = out.normalization().re;
        let edge = edge_population(&out);
        let leak = (before - after).abs().max(edge);
        if leak > self.epsilon_boundary {
            return Err(Error::BoundaryLeak {
                leak,
                limit: self.epsilon_boundary,
                context: format!(" after closed-form propagation to t = {t}"),
            });
        }
        Ok(out)
    }

    /// Snapshots at each requested time.
    pub fn trajectory(&self, w0: &WignerMatrix, times: &[f64]) -> Result<Vec<WignerMatrix>> {
        times.par_iter().map(|&t| self.propagate(w0, t)).collect()
    }
}

/// Spinless linear-potential kernel with slope `lambda_a`:
/// `Σ_l J_{m-l}[-8(J/λa) sin(k + λat/2) sin(λat/2)] W(l, k + λat)`.
fn diagonal_kernel(
    spectral: &Spectral,
    comp: &Array2<C64>,
    points: &[f64],
    j: f64,
    lambda_a: f64,
    t: f64,
    l_b: usize,
) -> Array2<C64> {
    let shift = lambda_a * t;
    let mut shifted = Array2::zeros(comp.raw_dim());
    for (i, row) in comp.outer_iter().enumerate() {
        let samples: Vec<C64> = row.to_vec();
        for (jj, v) in spectral.shifted(&samples, shift).into_iter().enumerate() {
            shifted[[i, jj]] = v;
        }
    }
    let half = (0.5 * lambda_a * t).sin();
    let args: Vec<f64> = points.iter().map(|k| -8.0 * j / lambda_a * (k + 0.5 * lambda_a * t).sin() * half).collect();
    convolve(&shifted, 0, &args, l_b, |_| C64::new(1.0, 0.0))
}

/// `out[m, j] = Σ_{|m-l| <= l_b} J_{m-l}(args[j]) phase(m + l) w[l, j]`.
/// Rows are offsets from `m_min`; `phase` receives the absolute `m + l`.
fn convolve<P>(w: &Array2<C64>, m_min: i64, args: &[f64], l_b: usize, phase: P) -> Array2<C64>
where
    P: Fn(i64) -> C64 + Sync,
{
    let (n_m, n_k) = w.dim();
    let columns: Vec<Vec<C64>> = (0..n_k)
        .into_par_iter()
        .map(|jj| {
            let orders = bessel_jn_orders(l_b, args[jj]).expect("finite Bessel argument");
            let kernel = |d: i64| {
                let v = orders[d.unsigned_abs() as usize];
                if d < 0 && d % 2 != 0 {
                    -v
                } else {
                    v
                }
            };
            (0..n_m)
                .map(|m| {
                    let lo = m.saturating_sub(l_b);
                    let hi = (m + l_b).min(n_m - 1);
                    (lo..=hi)
                        .map(|l| w[[l, jj]] * kernel(m as i64 - l as i64) * phase((m + l) as i64 + 2 * m_min))
                        .sum()
                })
                .collect()
        })
        .collect();
    Array2::from_shape_fn((n_m, n_k), |(m, jj)| columns[jj][m])
}

fn edge_population(w: &WignerMatrix) -> f64 {
    let marginal = marginal_position(w);
    let (first, last) = (marginal.sites.first(), marginal.sites.last());
    let pop = |b: Option<&(i64, SpinMatrix)>| b.map(|(_, b)| b.trace().re.abs()).unwrap_or(0.0);
    if marginal.sites.len() == 1 {
        pop(first)
    } else {
        pop(first) + pop(last)
    }
}

/// Spinless linear potential, all four entries evolved alike.
pub fn linear_potential_propagate(w0: &WignerMatrix, j_hop: f64, lambda_a: f64, t: f64) -> Result<WignerMatrix> {
    BesselPropagator::spinless(j_hop, lambda_a)?.propagate(w0, t)
}

/// `σ_z`-coupled linear potential.
pub fn spin_linear_propagate(w0: &WignerMatrix, j_hop: f64, lambda_a: f64, t: f64) -> Result<WignerMatrix> {
    BesselPropagator::spin_coupled(j_hop, lambda_a)?.propagate(w0, t)
}

/// Pure hopping: `Σ_l J_{m-l}(-4Jt sin k) W(l, k)`.
pub fn free_propagate(w0: &WignerMatrix, j_hop: f64, t: f64) -> Result<WignerMatrix> {
    BesselPropagator::free(j_hop).propagate(w0, t)
}
