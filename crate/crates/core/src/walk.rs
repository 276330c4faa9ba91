//! Discrete-time quantum walk with coin `C(θ) = σ_z e^{-iθσ_y}` and
//! projective-measurement decoherence, in state space and in Wigner space.
//!
//! One step is `U = (T₋ ⊗ |L⟩⟨L| + T₊ ⊗ |R⟩⟨R|)(I ⊗ C)` with `|L⟩ = |0⟩`
//! moving one site left and `|R⟩ = |1⟩` one site right.

use std::f64::consts::FRAC_PI_2;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::analytic::{double_delta_wigner_closed, DoubleDeltaSpec};
use crate::error::{Error, Result};
use crate::numerics::KGrid;
use crate::spin::SpinMatrix;
use crate::state::{DensityOperator, LatticeWindow, DEFAULT_EPSILON_BOUNDARY};
use crate::wigner::{marginal_position, WignerMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinSpec {
    pub theta: f64,
}

impl CoinSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!("coin angle must lie in [0, π/2], got {theta}")));
        }
        Ok(Self { theta })
    }

    /// `σ_z e^{-iθσ_y} = [[cos θ, -sin θ], [-sin θ, -cos θ]]`.
    pub fn operator(&self) -> SpinMatrix {
        SpinMatrix::sigma_z() * SpinMatrix::rotation_y(self.theta)
    }

    /// `M_L = |L⟩⟨L| C` and `M_R = |R⟩⟨R| C`.
    pub fn branch_operators(&self) -> (SpinMatrix, SpinMatrix) {
        let c = self.operator();
        (SpinMatrix::basis_projector(0) * c, SpinMatrix::basis_projector(1) * c)
    }
}

/// Site displacement of spin component `α` per step.
fn step_of(alpha: usize) -> i64 {
    if alpha == 0 {
        -1
    } else {
        1
    }
}

fn check_edges(population: f64, context: &str) -> Result<()> {
    if population > DEFAULT_EPSILON_BOUNDARY {
        return Err(Error::BoundaryLeak {
            leak: population,
            limit: DEFAULT_EPSILON_BOUNDARY,
            context: format!(" ({context})"),
        });
    }
    Ok(())
}

/// `ρ → U ρ U†`.
pub fn qw_step_state(rho: &DensityOperator, coin: &CoinSpec) -> Result<DensityOperator> {
    check_edges(rho.boundary_population(), "walk step would push population off the window")?;
    let c = coin.operator();
    let mixed = rho.map_spin_blocks(|b| b.conjugate_by(&c));
    let window = *rho.window();
    let src = mixed.matrix();
    let mut out = Array2::zeros(src.raw_dim());
    for n in window.sites() {
        for alpha in 0..2 {
            let from_n = n - step_of(alpha);
            if !window.contains(from_n) {
                continue;
            }
            for n2 in window.sites() {
                for beta in 0..2 {
                    let from_n2 = n2 - step_of(beta);
                    if window.contains(from_n2) {
                        out[[window.index(n, alpha), window.index(n2, beta)]] =
                            src[[window.index(from_n, alpha), window.index(from_n2, beta)]];
                    }
                }
            }
        }
    }
    DensityOperator::new(window, out)
}

/// One step directly on the Wigner matrix:
///
/// ```text
/// W'(m,k) = M_R W(m-2) M_R† + e^{-2ik} M_R W(m) M_L† + e^{2ik} M_L W(m) M_R† + M_L W(m+2) M_L†
/// ```
pub fn qw_step_wigner(w: &WignerMatrix, coin: &CoinSpec) -> Result<WignerMatrix> {
    let marginal = marginal_position(w);
    let edge: f64 =
        [marginal.sites.first(), marginal.sites.last()].into_iter().flatten().map(|(_, b)| b.trace().re.abs()).sum();
    check_edges(edge, "walk step would push the Wigner matrix off the stored m range")?;
    let (ml, mr) = coin.branch_operators();
    let (mld, mrd) = (ml.dagger(), mr.dagger());
    let points = w.kgrid().points();
    let phases: Vec<C64> = points.iter().map(|k| C64::from_polar(1.0, -2.0 * k)).collect();
    let m_min = w.m_min();
    let values = Array2::from_shape_fn(w.values().dim(), |(i, j)| {
        let m = m_min + i as i64;
        let here = w.get(m, j);
        mr * w.get(m - 2, j) * mrd
            + (mr * here * mld).scale(phases[j])
            + (ml * here * mrd).scale(phases[j].conj())
            + ml * w.get(m + 2, j) * mld
    });
    WignerMatrix::new(*w.window(), *w.kgrid(), values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionBasis {
    /// `Π_i = I ⊗ |i⟩⟨i|`
    Spin,
    /// `Π_n = |n⟩⟨n| ⊗ I`
    Site,
}

/// With probability `p` the state is projected onto `basis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveNoiseSpec {
    pub p: f64,
    pub basis: ProjectionBasis,
}

impl ProjectiveNoiseSpec {
    pub fn new(p: f64, basis: ProjectionBasis) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("projection probability must lie in [0, 1], got {p}")));
        }
        Ok(Self { p, basis })
    }
}

/// `Σ_i Π_i ρ Π_i`.
pub fn dephase(rho: &DensityOperator, basis: ProjectionBasis) -> DensityOperator {
    match basis {
        ProjectionBasis::Spin => {
            rho.map_spin_blocks(|b| SpinMatrix::new(b.get(0, 0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), b.get(1, 1)))
        }
        ProjectionBasis::Site => {
            let window = *rho.window();
            let mut m = rho.matrix().clone();
            for ((i, j), v) in m.indexed_iter_mut() {
                if i / 2 != j / 2 {
                    *v = C64::new(0.0, 0.0);
                }
            }
            DensityOperator::new(window, m).expect("same shape")
        }
    }
}

/// `(1-p) ρ + p Σ_i Π_i ρ Π_i`.
pub fn projective_map(rho: &DensityOperator, noise: &ProjectiveNoiseSpec) -> DensityOperator {
    blend(rho, &dephase(rho, noise.basis), 1.0 - noise.p)
}

/// Closed form of `t` applications: `(1-p)^t ρ + [1 - (1-p)^t] Σ_i Π_i ρ Π_i`.
pub fn projective_iterate_closed(rho0: &DensityOperator, noise: &ProjectiveNoiseSpec, t: u32) -> DensityOperator {
    blend(rho0, &dephase(rho0, noise.basis), (1.0 - noise.p).powi(t as i32))
}

fn blend(rho: &DensityOperator, dephased: &DensityOperator, keep: f64) -> DensityOperator {
    let m = rho.matrix() * C64::new(keep, 0.0) + dephased.matrix() * C64::new(1.0 - keep, 0.0);
    DensityOperator::new(*rho.window(), m).expect("same shape")
}

/// The projective map acting on a Wigner matrix. Spin projections damp the
/// off-diagonal entries; site projections keep only the `k`-independent part
/// of the even-`m` rows (the `n = n'` coherences).
pub fn projective_map_wigner(w: &WignerMatrix, noise: &ProjectiveNoiseSpec) -> WignerMatrix {
    let keep = 1.0 - noise.p;
    match noise.basis {
        ProjectionBasis::Spin => {
            w.map_blocks(|b| SpinMatrix::new(b.get(0, 0), b.get(0, 1) * keep, b.get(1, 0) * keep, b.get(1, 1)))
        }
        ProjectionBasis::Site => {
            let n_k = w.kgrid().len() as f64;
            let m_min = w.m_min();
            let mut out = w.scaled(C64::new(keep, 0.0));
            for (i, row) in w.values().outer_iter().enumerate() {
                if (m_min + i as i64).rem_euclid(2) != 0 {
                    continue;
                }
                let mean = row.iter().fold(SpinMatrix::zero(), |acc, b| acc + *b) * (1.0 / n_k);
                for b in out.values_mut().row_mut(i).iter_mut() {
                    *b += mean * noise.p;
                }
            }
            out
        }
    }
}

/// Wigner matrix of the `α = 1` double delta after `t` projective steps:
/// the coherence at `m = n₁ + n₂` is damped by `(1-p)^t`, identically for
/// spin and site projections.
pub fn iterated_cat_wigner(
    n1: i64,
    n2: i64,
    p: f64,
    t: u32,
    window: &LatticeWindow,
    kgrid: &KGrid,
) -> Result<WignerMatrix> {
    ProjectiveNoiseSpec::new(p, ProjectionBasis::Spin)?;
    let spec = DoubleDeltaSpec { n1, n2, alpha: C64::new(1.0, 0.0) };
    let keep = (1.0 - p).powi(t as i32);
    let w = double_delta_wigner_closed(&spec, window, kgrid)?;
    Ok(w.map_blocks(|b| SpinMatrix::new(b.get(0, 0), b.get(0, 1) * keep, b.get(1, 0) * keep, b.get(1, 1))))
}
