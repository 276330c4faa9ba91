//! Matrix-valued Wigner functions for a spin-1/2 particle hopping on an
//! infinite one-dimensional lattice.
//!
//! The phase space is indexed by an integer `m` (even `m` sits on lattice
//! site `m/2`, odd `m` on the half-integer points between sites) and a
//! periodic quasi-momentum coordinate `k ∈ [-π, π)`. For every `(m, k)` the
//! Wigner matrix is a 2×2 Hermitian block in the σ_z spin basis.
//!
//! The infinite lattice is represented by a finite [`LatticeWindow`]. Every
//! operator supported on a window of `W` sites has a Wigner matrix that is a
//! trigonometric polynomial of degree `W - 1` in `k`, so a uniform grid with
//! at least `2W + 1` points makes all `k` integrals exact.
//!
//! Module map:
//! - [`numerics`]: k-grid, periodic quadrature, spectral helpers, θ₃ and Jₙ.
//! - [`spin`] and [`state`]: 2×2 spin algebra, windows, pure and mixed states.
//! - [`wigner`]: forward/inverse transforms, marginals, trace pairing.
//! - [`analytic`]: closed-form states and their Wigner matrices.
//! - [`continuous`]: density-operator RK4 oracle, Wigner-space equation of
//!   motion, Bessel propagators and Lindblad closed forms.
//! - [`walk`]: discrete-time quantum walk and projective decoherence.
//! - [`negativity`]: trace-norm negativity.
//! - [`scenario`]: JSON scenario configs, runner and file outputs for the CLI.

pub mod analytic;
pub mod continuous;
pub mod error;
pub mod negativity;
pub mod numerics;
pub mod scenario;
pub mod spin;
pub mod state;
pub mod walk;
pub mod wigner;

pub use error::{Error, Result};
pub use numerics::KGrid;
pub use spin::SpinMatrix;
pub use state::{DensityOperator, LatticeOperator, LatticeWindow, PureState};
pub use wigner::{ScalarWigner, WignerMatrix};

pub use num_complex::Complex64 as C64;
