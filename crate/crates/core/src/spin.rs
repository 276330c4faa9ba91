//! 2×2 complex matrices on the spin (coin) space, basis `|0⟩, |1⟩` = σ_z
//! eigenvectors with `σ_z|α⟩ = (-1)^α |α⟩`.

use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A spin-space vector `(ψ_0, ψ_1)`.
pub type SpinVector = [C64; 2];

/// Dense 2×2 complex matrix, row-major: `self.0[α][β] = ⟨α|A|β⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SpinMatrix(pub [[C64; 2]; 2]);

impl SpinMatrix {
    pub const fn new(a00: C64, a01: C64, a10: C64, a11: C64) -> Self {
        Self([[a00, a01], [a10, a11]])
    }

    pub fn zero() -> Self {
        Self([[ZERO; 2]; 2])
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn sigma_y() -> Self {
        Self::new(ZERO, -I, I, ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0))
    }

    /// `|α⟩⟨α|`
    pub fn basis_projector(alpha: usize) -> Self {
        let mut m = Self::zero();
        m.0[alpha][alpha] = ONE;
        m
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &SpinVector, v: &SpinVector) -> Self {
        Self::new(u[0] * v[0].conj(), u[0] * v[1].conj(), u[1] * v[0].conj(), u[1] * v[1].conj())
    }

    /// Real rotation `e^{-iθσ_y} = cos θ I - i sin θ σ_y`.
    pub fn rotation_y(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
    }

    /// General SU(2) element `e^{-iφ n·σ/2}` about the unit axis `n`.
    pub fn su2(axis: [f64; 3], angle: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let [nx, ny, nz] = axis.map(|c| c / norm);
        let (s, c) = (0.5 * angle).sin_cos();
        Self::new(C64::new(c, -s * nz), C64::new(-s * ny, -s * nx), C64::new(s * ny, -s * nx), C64::new(c, s * nz))
    }

    #[inline]
    pub fn get(&self, alpha: usize, beta: usize) -> C64 {
        self.0[alpha][beta]
    }

    #[inline]
    pub fn set(&mut self, alpha: usize, beta: usize, v: C64) {
        self.0[alpha][beta] = v;
    }

    pub fn dagger(&self) -> Self {
        let a = &self.0;
        Self::new(a[0][0].conj(), a[1][0].conj(), a[0][1].conj(), a[1][1].conj())
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: C64) -> Self {
        let a = &self.0;
        Self::new(a[0][0] * s, a[0][1] * s, a[1][0] * s, a[1][1] * s)
    }

    pub fn apply(&self, v: &SpinVector) -> SpinVector {
        [self.0[0][0] * v[0] + self.0[0][1] * v[1], self.0[1][0] * v[0] + self.0[1][1] * v[1]]
    }

    /// `u · self · u†`
    pub fn conjugate_by(&self, u: &SpinMatrix) -> Self {
        *u * *self * u.dagger()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `max |A - A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        (*self - self.dagger()).max_abs()
    }

    /// `max |U U† - I|`.
    pub fn unitarity_error(&self) -> f64 {
        (*self * self.dagger() - Self::identity()).max_abs()
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let err = self.unitarity_error();
        if err > tol {
            return Err(Error::NotUnitary(err));
        }
        Ok(())
    }

    /// Eigenvalues `h ± √(d² + |o|²)` of the Hermitian part, ascending, where
    /// `h` is the mean and `d` the half-difference of the real diagonal and
    /// `o` the upper off-diagonal entry.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let b = self.0[1][1].re;
        let o = 0.5 * (self.0[0][1] + self.0[1][0].conj());
        let h = 0.5 * (a + b);
        let d = 0.5 * (a - b);
        let r = (d * d + o.norm_sqr()).sqrt();
        [h - r, h + r]
    }

    /// Trace norm of a Hermitian 2×2 block: `|λ₊| + |λ₋|`.
    pub fn hermitian_trace_norm(&self) -> f64 {
        let [lo, hi] = self.hermitian_eigenvalues();
        lo.abs() + hi.abs()
    }
}

impl Add for SpinMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl AddAssign for SpinMatrix {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for SpinMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl SubAssign for SpinMatrix {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for SpinMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for SpinMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<C64> for SpinMatrix {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for SpinMatrix {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl MulAssign<C64> for SpinMatrix {
    fn mul_assign(&mut self, rhs: C64) {
        *self = self.scale(rhs);
    }
}

impl MulAssign<f64> for SpinMatrix {
    fn mul_assign(&mut self, rhs: f64) {
        *self = self.scale(C64::new(rhs, 0.0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (SpinMatrix::sigma_x(), SpinMatrix::sigma_y(), SpinMatrix::sigma_z());
        assert!((x * y - z.scale(I)).max_abs() < 1e-15);
        assert!((x * x - SpinMatrix::identity()).max_abs() < 1e-15);
        for m in [x, y, z] {
            assert!(m.hermiticity_error() < 1e-15);
            assert!(m.unitarity_error() < 1e-15);
        }
    }

    #[test]
    fn rotation_y_is_exponential() {
        let theta: f64 = 0.37;
        let expected = SpinMatrix::identity().scale(C64::new(theta.cos(), 0.0))
            - SpinMatrix::sigma_y().scale(C64::new(0.0, theta.sin()));
        assert!((SpinMatrix::rotation_y(theta) - expected).max_abs() < 1e-15);
    }

    #[test]
    fn su2_is_unitary() {
        let u = SpinMatrix::su2([0.3, -1.2, 0.5], 2.1);
        assert!(u.unitarity_error() < 1e-14);
        let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
        assert!((det - ONE).norm() < 1e-14);
    }

    #[test]
    fn trace_norm_closed_form() {
        // diag(0.3, -0.1) → 0.4
        let d = SpinMatrix::new(C64::new(0.3, 0.0), ZERO, ZERO, C64::new(-0.1, 0.0));
        assert!((d.hermitian_trace_norm() - 0.4).abs() < 1e-15);
        // pure off-diagonal x σ_+ + h.c. → 2|x|
        let x = C64::new(0.3, -0.4);
        let o = SpinMatrix::new(ZERO, x, x.conj(), ZERO);
        assert!((o.hermitian_trace_norm() - 1.0).abs() < 1e-15);
        // PSD block → trace
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let p = SpinMatrix::outer(&v, &v).scale(C64::new(0.25, 0.0));
        assert!((p.hermitian_trace_norm() - 0.25).abs() < 1e-15);
    }
}
