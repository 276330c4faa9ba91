//! Closed-form solutions of the spin-only dephasing and bit-flip channels
//! applied on top of a Hamiltonian trajectory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::SpinMatrix;
use crate::wigner::WignerMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    SigmaX,
    SigmaY,
    SigmaZ,
}

impl Channel {
    pub fn operator(&self) -> SpinMatrix {
        match self {
            Channel::SigmaX => SpinMatrix::sigma_x(),
            Channel::SigmaY => SpinMatrix::sigma_y(),
            Channel::SigmaZ => SpinMatrix::sigma_z(),
        }
    }
}

/// Applies the channel's closed form to `W|_H(t)`:
///
/// - `σ_z`: diagonal untouched, off-diagonal scaled by `e^{-2γt}`.
/// - `σ_x`: `W_00 ← ½(1+e)W_00 + ½(1-e)W_11` and likewise for `W_11`, and the
///   same mixing between `W_01` and `W_10`, with `e = e^{-2γt}`.
///
/// Exact when the Hamiltonian commutes with the channel (spin-independent
/// `H` for both; any `σ_z`-diagonal `H` for `σ_z`).
pub fn lindblad_wigner_closed(w_h: &WignerMatrix, channel: Channel, gamma: f64, t: f64) -> Result<WignerMatrix> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("Lindblad rate must be >= 0, got {gamma}")));
    }
    let e = (-2.0 * gamma * t).exp();
    match channel {
        Channel::SigmaZ => {
            Ok(w_h.map_blocks(|b| SpinMatrix::new(b.get(0, 0), b.get(0, 1) * e, b.get(1, 0) * e, b.get(1, 1))))
        }
        Channel::SigmaX => {
            let (p, q) = (0.5 * (1.0 + e), 0.5 * (1.0 - e));
            Ok(w_h.map_blocks(|b| {
                SpinMatrix::new(
                    b.get(0, 0) * p + b.get(1, 1) * q,
                    b.get(0, 1) * p + b.get(1, 0) * q,
                    b.get(1, 0) * p + b.get(0, 1) * q,
                    b.get(1, 1) * p + b.get(0, 0) * q,
                )
            }))
        }
        Channel::SigmaY => Err(Error::UnsupportedChannel("no closed form is provided for sigma_y".into())),
    }
}
