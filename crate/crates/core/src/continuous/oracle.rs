//! Fixed-step RK4 on the density operator. This is the brute-force reference
//! every Wigner-space result is compared against.

use ndarray::{Array2, Zip};
use num_complex::Complex64 as C64;

use super::{check_times, leak_error, substeps, EvolutionResult, HamiltonianSpec, NoiseSpec, Rk4Config, I};
use crate::error::Result;
use crate::spin::SpinMatrix;
use crate::state::{edge_population, symmetrize, DensityOperator, LatticeWindow};

/// `L(ρ) = -i[H, ρ] + Σ_k γ_k D[A_k](ρ)` on a window with hard walls.
struct Generator<'a> {
    window: LatticeWindow,
    j_hop: f64,
    /// `V_n` (or `(-1)^α V_n`) per composite index.
    diag: Vec<f64>,
    noise: &'a NoiseSpec,
}

impl<'a> Generator<'a> {
    fn new(window: LatticeWindow, h: &HamiltonianSpec, noise: &'a NoiseSpec) -> Self {
        let mut diag = vec![0.0; window.dim()];
        for n in window.sites() {
            for alpha in 0..2 {
                diag[window.index(n, alpha)] = h.site_potential(n, alpha, window.a);
            }
        }
        Self { window, j_hop: h.j_hop, diag, noise }
    }

    fn norm_estimate(&self) -> f64 {
        2.0 * self.j_hop.abs() + self.diag.iter().fold(0.0_f64, |m, v| m.max(v.abs())) + self.noise.norm_estimate()
    }

    /// Writes `L(ρ)` into `out`. Both must be in standard layout.
    ///
    /// With nearest-neighbour hopping `(n, α) ↔ (n ± 1, α)`, i.e. composite
    /// index `i ↔ i ± 2`, the commutator is a five-point stencil:
    /// `[H, ρ]_ij = (V_i - V_j) ρ_ij + J (ρ_{i-2,j} + ρ_{i+2,j} - ρ_{i,j-2} - ρ_{i,j+2})`.
    fn apply_into(&self, rho: &Array2<C64>, out: &mut Array2<C64>) {
        let d = rho.nrows();
        let r = rho.as_slice().expect("standard layout");
        let o = out.as_slice_mut().expect("standard layout");
        let zero = C64::new(0.0, 0.0);
        for i in 0..d {
            let vi = self.diag[i];
            let row = i * d;
            for c in 0..d {
                let mut hop = zero;
                if i >= 2 {
                    hop += r[row - 2 * d + c];
                }
                if i + 2 < d {
                    hop += r[row + 2 * d + c];
                }
                if c >= 2 {
                    hop -= r[row + c - 2];
                }
                if c + 2 < d {
                    hop -= r[row + c + 2];
                }
                let v = r[row + c] * (vi - self.diag[c]) + hop * self.j_hop;
                o[row + c] = -I * v;
            }
        }
        if !self.noise.terms.is_empty() {
            let w = self.window.width();
            for bi in 0..w {
                for bj in 0..w {
                    let (r, c) = (2 * bi, 2 * bj);
                    let block = SpinMatrix::new(rho[[r, c]], rho[[r, c + 1]], rho[[r + 1, c]], rho[[r + 1, c + 1]]);
                    let d = self.noise.dissipator(&block);
                    out[[r, c]] += d.get(0, 0);
                    out[[r, c + 1]] += d.get(0, 1);
                    out[[r + 1, c]] += d.get(1, 0);
                    out[[r + 1, c + 1]] += d.get(1, 1);
                }
            }
        }
    }

    fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let rho = rho.as_standard_layout().into_owned();
        let mut out = Array2::zeros(rho.raw_dim());
        self.apply_into(&rho, &mut out);
        out
    }

    fn rk4_step(&self, rho: &mut Array2<C64>, dt: f64, s: &mut Scratch) {
        let stage = |tmp: &mut Array2<C64>, rho: &Array2<C64>, k: &Array2<C64>, c: f64| {
            Zip::from(tmp).and(rho).and(k).for_each(|t, r, k| *t = r + k * c);
        };
        self.apply_into(rho, &mut s.k1);
        stage(&mut s.tmp, rho, &s.k1, 0.5 * dt);
        self.apply_into(&s.tmp, &mut s.k2);
        stage(&mut s.tmp, rho, &s.k2, 0.5 * dt);
        self.apply_into(&s.tmp, &mut s.k3);
        stage(&mut s.tmp, rho, &s.k3, dt);
        self.apply_into(&s.tmp, &mut s.k4);
        let w = dt / 6.0;
        Zip::from(&mut *rho).and(&s.k1).and(&s.k2).and(&s.k3).and(&s.k4).for_each(|r, a, b, c, d| {
            *r += (a + (b + c) * 2.0 + d) * w;
        });
        symmetrize(rho);
    }
}

/// Stage buffers reused across RK4 steps.
struct Scratch {
    k1: Array2<C64>,
    k2: Array2<C64>,
    k3: Array2<C64>,
    k4: Array2<C64>,
    tmp: Array2<C64>,
}

impl Scratch {
    fn new(d: usize) -> Self {
        let z = || Array2::zeros((d, d));
        Self { k1: z(), k2: z(), k3: z(), k4: z(), tmp: z() }
    }
}

/// `-i[H, ρ]` as a matrix, for finite-difference and RHS checks.
pub fn von_neumann_rhs(rho: &DensityOperator, h: &HamiltonianSpec) -> Result<Array2<C64>> {
    h.validate()?;
    let noise = NoiseSpec::none();
    Ok(Generator::new(*rho.window(), h, &noise).apply(rho.matrix()))
}

/// Closed-system RK4 with snapshots at `times` (sorted, `>= 0`).
pub fn von_neumann_rk4(
    rho0: &DensityOperator,
    h: &HamiltonianSpec,
    times: &[f64],
    config: &Rk4Config,
) -> Result<EvolutionResult<DensityOperator>> {
    lindblad_rk4(rho0, h, &NoiseSpec::none(), times, config)
}

/// RK4 on the full master equation. Fails with a boundary-leak error as soon
/// as the edge-site population exceeds `config.epsilon_boundary`.
pub fn lindblad_rk4(
    rho0: &DensityOperator,
    h: &HamiltonianSpec,
    noise: &NoiseSpec,
    times: &[f64],
    config: &Rk4Config,
) -> Result<EvolutionResult<DensityOperator>> {
    h.validate()?;
    noise.validate()?;
    check_times(times)?;
    let window = *rho0.window();
    let gen = Generator::new(window, h, noise);
    let dt = config.resolve_dt(gen.norm_estimate())?;

    let mut rho = rho0.matrix().as_standard_layout().into_owned();
    let mut scratch = Scratch::new(rho.nrows());
    let mut t = 0.0;
    let mut leak = rho0.boundary_population();
    let mut snapshots = Vec::with_capacity(times.len());
    for &target in times {
        let (n, step) = substeps(t, target, dt);
        for _ in 0..n {
            gen.rk4_step(&mut rho, step, &mut scratch);
            t += step;
            leak = leak.max(edge_population(&window, &rho));
            if leak > config.epsilon_boundary {
                return Err(leak_error(leak, config.epsilon_boundary, t));
            }
        }
        t = target.max(t);
        snapshots.push(DensityOperator::new(window, rho.clone())?);
    }
    Ok(EvolutionResult { times: times.to_vec(), snapshots, boundary_leak: leak })
}
