//! `∂W/∂t` evaluated directly on the Wigner matrix, and RK4 on top of it.
//!
//! Hopping gives `2J sin k [W(m+1) - W(m-1)]`. A polynomial potential gives
//! the terminating series
//!
//! ```text
//! -i Σ_p V^{(p)}(ma/2)/p! (a/2)^p c_p i^p ∂_k^p W_αβ
//! c_p = s_α - s_β (-1)^p
//! ```
//!
//! with `s_α = (-1)^α` when the potential is `σ_z`-coupled and `s_α = 1`
//! otherwise. For a scalar potential only odd `p` survive; for the coupled
//! off-diagonal entries only even `p`, including the multiplicative `p = 0`
//! term.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{check_times, leak_error, substeps, EvolutionResult, HamiltonianSpec, NoiseSpec, Rk4Config, I};
use crate::error::Result;
use crate::numerics::Spectral;
use crate::spin::SpinMatrix;
use crate::wigner::{marginal_position, WignerMatrix};

struct WignerGenerator<'a> {
    h: &'a HamiltonianSpec,
    noise: &'a NoiseSpec,
    spectral: Spectral,
    sin_k: Vec<f64>,
    a: f64,
    degree: usize,
}

impl<'a> WignerGenerator<'a> {
    fn new(w: &WignerMatrix, h: &'a HamiltonianSpec, noise: &'a NoiseSpec) -> Self {
        let sin_k = w.kgrid().points().iter().map(|k| k.sin()).collect();
        Self { h, noise, spectral: Spectral::new(w.kgrid()), sin_k, a: w.window().a, degree: h.potential.degree() }
    }

    fn spin_sign(&self, alpha: usize) -> f64 {
        if self.h.spin_coupled && alpha == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Series coefficients `κ_p` so that the potential term is `Σ_p κ_p ∂_k^p W`.
    fn series(&self, m: i64, alpha: usize, beta: usize) -> Vec<C64> {
        let xc = 0.5 * m as f64 * self.a;
        let (sa, sb) = (self.spin_sign(alpha), self.spin_sign(beta));
        (0..=self.degree)
            .map(|p| {
                let parity = if p % 2 == 0 { 1.0 } else { -1.0 };
                let c_p = sa - sb * parity;
                if c_p == 0.0 {
                    return C64::new(0.0, 0.0);
                }
                let v = self.h.potential.taylor_coefficient(p, xc) * (0.5 * self.a).powi(p as i32) * c_p;
                -I * I.powu(p as u32) * v
            })
            .collect()
    }

    fn apply(&self, w: &WignerMatrix) -> WignerMatrix {
        let n_k = w.kgrid().len();
        let m_min = w.m_min();
        let n_m = w.values().nrows();
        let j2 = 2.0 * self.h.j_hop;

        let rows: Vec<Vec<SpinMatrix>> = (0..n_m)
            .into_par_iter()
            .map(|i| {
                let m = m_min + i as i64;
                let mut row: Vec<SpinMatrix> =
                    (0..n_k).map(|jj| (w.get(m + 1, jj) - w.get(m - 1, jj)) * (j2 * self.sin_k[jj])).collect();
                if self.degree > 0 || self.h.spin_coupled {
                    for alpha in 0..2 {
                        for beta in 0..2 {
                            let kappa = self.series(m, alpha, beta);
                            if kappa.iter().all(|c| *c == C64::new(0.0, 0.0)) {
                                continue;
                            }
                            let samples: Vec<C64> = (0..n_k).map(|jj| w.values()[[i, jj]].get(alpha, beta)).collect();
                            let term = self.spectral.apply_multiplier(&samples, |d| {
                                let dk = C64::new(0.0, -(d as f64));
                                kappa.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * dk + c)
                            });
                            for (b, v) in row.iter_mut().zip(term) {
                                b.set(alpha, beta, b.get(alpha, beta) + v);
                            }
                        }
                    }
                }
                if !self.noise.terms.is_empty() {
                    for (jj, b) in row.iter_mut().enumerate() {
                        *b += self.noise.dissipator(&w.values()[[i, jj]]);
                    }
                }
                row
            })
            .collect();

        let values = Array2::from_shape_fn((n_m, n_k), |(i, jj)| rows[i][jj]);
        WignerMatrix::new(*w.window(), *w.kgrid(), values).expect("shape preserved")
    }

    fn rk4_step(&self, w: &mut WignerMatrix, dt: f64) {
        let stage = |base: &WignerMatrix, k: &WignerMatrix, c: f64| {
            let mut s = base.clone();
            s.add_scaled(k, C64::new(c, 0.0)).expect("same grid");
            s
        };
        let k1 = self.apply(w);
        let k2 = self.apply(&stage(w, &k1, 0.5 * dt));
        let k3 = self.apply(&stage(w, &k2, 0.5 * dt));
        let k4 = self.apply(&stage(w, &k3, dt));
        let sixth = C64::new(dt / 6.0, 0.0);
        let third = C64::new(dt / 3.0, 0.0);
        for (k, c) in [(&k1, sixth), (&k2, third), (&k3, third), (&k4, sixth)] {
            w.add_scaled(k, c).expect("same grid");
        }
        w.symmetrize();
    }
}

/// Hamiltonian part of `∂W/∂t`.
pub fn wigner_evolution_rhs(w: &WignerMatrix, h: &HamiltonianSpec) -> Result<WignerMatrix> {
    h.validate()?;
    let noise = NoiseSpec::none();
    Ok(WignerGenerator::new(w, h, &noise).apply(w))
}

/// RK4 in Wigner space with optional spin-only Lindblad terms.
pub fn wigner_rk4(
    w0: &WignerMatrix,
    h: &HamiltonianSpec,
    noise: &NoiseSpec,
    times: &[f64],
    config: &Rk4Config,
) -> Result<EvolutionResult<WignerMatrix>> {
    h.validate()?;
    noise.validate()?;
    check_times(times)?;
    let gen = WignerGenerator::new(w0, h, noise);
    let norm = 2.0 * h.j_hop.abs() + h.max_potential(w0.window()) + noise.norm_estimate();
    let dt = config.resolve_dt(norm)?;

    let mut w = w0.clone();
    let mut t = 0.0;
    let norm0 = w0.normalization().re;
    let mut leak = edge_population(w0);
    let mut snapshots = Vec::with_capacity(times.len());
    for &target in times {
        let (n, step) = substeps(t, target, dt);
        for _ in 0..n {
            gen.rk4_step(&mut w, step);
            t += step;
        }
        t = t.max(target);
        leak = leak.max(edge_population(&w)).max((w.normalization().re - norm0).abs());
        if leak > config.epsilon_boundary {
            return Err(leak_error(leak, config.epsilon_boundary, t));
        }
        snapshots.push(w.clone());
    }
    Ok(EvolutionResult { times: times.to_vec(), snapshots, boundary_leak: leak })
}

fn edge_population(w: &WignerMatrix) -> f64 {
    let sites = marginal_position(w).sites;
    match (sites.first(), sites.last()) {
        (Some(a), Some(b)) if sites.len() > 1 => a.1.trace().re.abs() + b.1.trace().re.abs(),
        (Some(a), _) => a.1.trace().re.abs(),
        _ => 0.0,
    }
}
