//! Trace-norm negativity `η = Σ_m ∫ ‖W(m,k)‖₁ dk − 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::integrate_unchecked;
use crate::wigner::{ScalarWigner, WignerMatrix};
use crate::C64;

/// Largest anti-Hermitian part tolerated in a block.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
/// Largest imaginary part tolerated in a scalar Wigner function.
pub const REALITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub eta: f64,
    /// `(m, ∫‖W(m,k)‖₁ dk)`; their sum is `eta + 1`.
    pub per_m: Vec<(i64, f64)>,
    pub n_k: usize,
    pub m_min: i64,
    pub m_max: i64,
}

impl NegativityReport {
    /// `|Σ per_m − 1 − η|`.
    pub fn consistency_error(&self) -> f64 {
        (self.per_m.iter().map(|(_, v)| v).sum::<f64>() - 1.0 - self.eta).abs()
    }
}

pub fn matrix_negativity(w: &WignerMatrix) -> Result<NegativityReport> {
    let n_k = w.kgrid().len();
    let m_min = w.m_min();
    let per_m: Vec<(i64, f64)> = (0..w.values().nrows())
        .into_par_iter()
        .map(|i| {
            let m = m_min + i as i64;
            let mut norms = Vec::with_capacity(n_k);
            for b in w.values().row(i).iter() {
                let err = b.hermiticity_error();
                if err > HERMITICITY_TOLERANCE {
                    return Err(Error::NotHermitian(err));
                }
                norms.push(C64::new(b.hermitian_trace_norm(), 0.0));
            }
            Ok((m, integrate_unchecked(n_k, norms.into_iter()).re))
        })
        .collect::<Result<_>>()?;
    let total: f64 = per_m.iter().map(|(_, v)| v).sum();
    Ok(NegativityReport { eta: total - 1.0, per_m, n_k, m_min, m_max: w.m_max() })
}

/// `Σ_m ∫ (|W| − W) dk`, equal to `Σ_m ∫ |W| dk − 1` for a normalized input.
pub fn scalar_negativity(w: &ScalarWigner) -> Result<f64> {
    let imag = w.imag_max();
    if imag > REALITY_TOLERANCE {
        return Err(Error::ComplexValued(imag));
    }
    let n_k = w.kgrid().len();
    let total: f64 = w
        .values()
        .outer_iter()
        .map(|row| integrate_unchecked(n_k, row.iter().map(|v| C64::new(v.re.abs() - v.re, 0.0))).re)
        .sum();
    Ok(total)
}

/// `(t, η(t))` for each snapshot.
pub fn negativity_timeseries(times: &[f64], trajectory: &[WignerMatrix]) -> Result<Vec<(f64, f64)>> {
    if times.len() != trajectory.len() {
        return Err(Error::LengthMismatch { expected: times.len(), got: trajectory.len() });
    }
    trajectory.par_iter().zip(times.par_iter()).map(|(w, &t)| Ok((t, matrix_negativity(w)?.eta))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{cat_wigner_closed, CatSpec};
    use crate::numerics::KGrid;
    use crate::state::LatticeWindow;

    #[test]
    fn cat_weight_formula() {
        let window = LatticeWindow::symmetric(4);
        let kgrid = KGrid::exact_for_width(window.width());
        for beta in [0.0, 0.5, 1.0, 2.0] {
            let spec = CatSpec {
                a_site: -2,
                b_site: 3,
                beta: C64::new(beta, 0.0),
                spin1: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                spin2: [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            };
            let r = matrix_negativity(&cat_wigner_closed(&spec, &window, &kgrid).unwrap()).unwrap();
            let expect = 2.0 * beta / (1.0 + beta * beta);
            assert!((r.eta - expect).abs() < 1e-12, "β = {beta}: {} vs {expect}", r.eta);
            assert!(r.consistency_error() < 1e-12);
        }
    }
}
