//! Jacobi θ₃ and integer-order Bessel functions of the first kind.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const MAX_THETA_TERMS: usize = 1_000_000;

/// θ₃(z, q) = Σ_n q^{n²} e^{2izn} with a configurable relative truncation
/// tolerance.
///
/// Terms are generated in log space and the summation starts at the dominant
/// index `n* = Im z / ln q`, walking outward in both directions. For real `z`
/// the peak is `n = 0` and the sum is symmetric in `n`. A caller-supplied log
/// prefactor is folded into every term ([`Theta3::eval_scaled`]), so products
/// such as `e^{-x} θ₃(k + i y, q)` with huge `y` stay finite.
#[derive(Clone, Copy, Debug)]
pub struct Theta3 {
    pub tol: f64,
}

impl Default for Theta3 {
    fn default() -> Self {
        Self { tol: 1e-15 }
    }
}

impl Theta3 {
    pub fn eval(&self, z: C64, q: f64) -> Result<C64> {
        self.eval_scaled(z, q, 0.0)
    }

    /// `e^{ln_scale} · θ₃(z, q)`.
    pub fn eval_scaled(&self, z: C64, q: f64, ln_scale: f64) -> Result<C64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::Domain(format!("theta3 nome must satisfy 0 <= q < 1, got {q}")));
        }
        if !z.re.is_finite() || !z.im.is_finite() || !ln_scale.is_finite() {
            return Err(Error::NonFinite(format!("theta3 argument z = {z}, ln_scale = {ln_scale}")));
        }
        if q == 0.0 {
            return Ok(C64::new(ln_scale.exp(), 0.0));
        }
        let ln_q = q.ln();
        let term = |n: i64| {
            let nf = n as f64;
            // q^{n²} e^{2izn} e^{ln_scale}
            C64::new(nf * nf * ln_q - 2.0 * nf * z.im + ln_scale, 2.0 * nf * z.re).exp()
        };
        let peak = (z.im / ln_q).round() as i64;
        let mut sum = term(peak);
        let peak_norm = sum.norm();
        let mut up_done = false;
        let mut down_done = false;
        for step in 1..=MAX_THETA_TERMS as i64 {
            if !up_done {
                let t = term(peak + step);
                sum += t;
                up_done = t.norm() <= self.tol * sum.norm().max(peak_norm);
            }
            if !down_done {
                let t = term(peak - step);
                sum += t;
                down_done = t.norm() <= self.tol * sum.norm().max(peak_norm);
            }
            if up_done && down_done {
                return Ok(sum);
            }
        }
        Err(Error::Domain(format!("theta3 series did not converge for q = {q}")))
    }
}

/// θ₃(z, q) with the default 1e-15 relative tolerance.
pub fn theta3(z: C64, q: f64) -> Result<C64> {
    Theta3::default().eval(z, q)
}

/// `e^{ln_scale} θ₃(z, q)` with the default tolerance.
pub fn theta3_scaled(z: C64, q: f64, ln_scale: f64) -> Result<C64> {
    Theta3::default().eval_scaled(z, q, ln_scale)
}

/// J_n(z) for orders `0..=max_order` at real `z`.
///
/// Miller's algorithm: start the downward recurrence
/// `J_{k-1} = (2k/z) J_k - J_{k+1}` well above both `max_order` and `|z|`, then
/// normalize with `J_0 + 2 Σ_{k≥1} J_{2k} = 1`. The downward direction is the
/// stable one for every order, including `n < |z|`, as long as the start order
/// is far enough past `|z|` for the seed error to die out.
pub fn bessel_jn_orders(max_order: usize, z: f64) -> Result<Vec<f64>> {
    if !z.is_finite() {
        return Err(Error::NonFinite(format!("bessel argument z = {z}")));
    }
    let mut out = vec![0.0; max_order + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    let x = z.abs();
    let top = (max_order as f64).max(x);
    let mut start = (top + 20.0 + (160.0 * top).sqrt()).ceil() as usize;
    start += start % 2;

    let mut j_next = 0.0_f64; // J_{k+1}
    let mut j_cur = 1e-300_f64; // J_k, arbitrary seed
    let mut norm = 0.0_f64;
    for k in (1..=start).rev() {
        let j_prev = (2.0 * k as f64 / x) * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        // j_cur now holds J_{k-1}.
        let order = k - 1;
        if order <= max_order {
            out[order] = j_cur;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            let s = 1e-250;
            j_cur *= s;
            j_next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += j_cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if z < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(out)
}

/// J_n(z) for integer `n` (negative orders via `J_{-n} = (-1)^n J_n`).
pub fn bessel_jn(n: i64, z: f64) -> Result<f64> {
    let order = n.unsigned_abs() as usize;
    let v = bessel_jn_orders(order, z)?[order];
    Ok(if n < 0 && order % 2 == 1 { -v } else { v })
}
