//! The orthogonal polynomial family attached to the three-term relation.
//!
//! Sending `h_n` to a polynomial `P_n(t)` with `P_0 = 1`, `P_1 = t` turns the
//! defining relation into
//!
//! ```text
//! t P_n(t) = r P_{n-1}(t) + (1 - r) P_{n+1}(t)
//! ```
//!
//! so every `P_n` is determined by forward recurrence. Multiplicative
//! functionals of the algebra are exactly the point evaluations `h_n ↦ P_n(c)`,
//! which also admit the closed form `α γ₊ⁿ + β γ₋ⁿ` in terms of the roots of
//! the characteristic equation `(1-r) γ² - c γ + r = 0`; a character is bounded
//! precisely when both roots have modulus at most one, which for real `c` means
//! `c ∈ [-1, 1]`.
//!
//! For `0 <= r <= 1/2` and `t ∈ [-1, 1]` the values satisfy `|P_n(t)| <= 1`
//! (the structure constants are a probability distribution), so the forward
//! recurrence is numerically benign there; outside that range the values grow
//! and no stabilization is attempted.

use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::param::Param;

/// `P_n(t)` by forward recurrence, complex argument.
pub fn eval(r: &Param, n: u32, t: Complex64) -> Complex64 {
    let rf = r.as_f64();
    let omr = 1.0 - rf;
    let mut p0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return p0;
    }
    let mut p1 = t;
    for _ in 1..n {
        let next = (t * p1 - rf * p0) / omr;
        p0 = p1;
        p1 = next;
    }
    p1
}

/// `P_n(t)` by forward recurrence, real argument.
///
/// The divisor is formed as `1.0 - r` in floating point so that the constant
/// solutions survive rounding: `P_n(1) == 1.0` and `P_n(-1) == (-1.0)^n`
/// hold exactly.
pub fn eval_f64(r: &Param, n: u32, t: f64) -> f64 {
    let rf = r.as_f64();
    let omr = 1.0 - rf;
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = t;
    for _ in 1..n {
        let next = (t * p1 - rf * p0) / omr;
        p0 = p1;
        p1 = next;
    }
    p1
}

/// `P_n(t)` in exact rational arithmetic.
pub fn eval_exact(r: &Param, n: u32, t: &BigRational) -> BigRational {
    let rr = r.rational();
    let omr = r.one_minus();
    let mut p0 = BigRational::one();
    if n == 0 {
        return p0;
    }
    let mut p1 = t.clone();
    for _ in 1..n {
        let next = (t * &p1 - rr * &p0) / &omr;
        p0 = p1;
        p1 = next;
    }
    p1
}

/// All of `P_0(t), ..., P_n(t)` in one forward sweep.
pub fn eval_all(r: &Param, n: u32, t: Complex64) -> Vec<Complex64> {
    let rf = r.as_f64();
    let omr = 1.0 - rf;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n == 0 {
        return out;
    }
    out.push(t);
    for k in 1..n as usize {
        let next = (t * out[k] - rf * out[k - 1]) / omr;
        out.push(next);
    }
    out
}

/// Monomial coefficient rows of the `P_n`, cached append-only.
///
/// Row `n` lists the coefficients of `P_n` from the constant term up; it has
/// length `n + 1`, degree exactly `n`, and leading coefficient `(1-r)^{-(n-1)}`
/// for `n >= 1`.
pub struct PolySeq {
    r: Param,
    rows: RwLock<Vec<Arc<Vec<BigRational>>>>,
}

impl PolySeq {
    pub fn new(r: Param) -> Self {
        let rows = vec![
            Arc::new(vec![BigRational::one()]),
            Arc::new(vec![BigRational::zero(), BigRational::one()]),
        ];
        PolySeq {
            r,
            rows: RwLock::new(rows),
        }
    }

    pub fn param(&self) -> &Param {
        &self.r
    }

    /// Exact monomial coefficients of `P_n`, constant term first.
    pub fn coefficients(&self, n: u32) -> Arc<Vec<BigRational>> {
        let n = n as usize;
        {
            let rows = self.rows.read().unwrap();
            if n < rows.len() {
                return Arc::clone(&rows[n]);
            }
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() <= n {
            let k = rows.len();
            let prev = &rows[k - 2];
            let curr = &rows[k - 1];
            let rr = self.r.rational();
            let omr = self.r.one_minus();
            // (t * curr - r * prev) / (1 - r)
            let mut next = vec![BigRational::zero(); k + 1];
            for (i, c) in curr.iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= rr * c;
            }
            for c in next.iter_mut() {
                *c /= &omr;
            }
            rows.push(Arc::new(next));
        }
        Arc::clone(&rows[n])
    }

    /// Evaluate row `n` at a rational point (cross-check for `eval_exact`).
    pub fn eval_row(&self, n: u32, t: &BigRational) -> BigRational {
        let row = self.coefficients(n);
        let mut acc = BigRational::zero();
        for c in row.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// The two roots of `(1-r) γ² - c γ + r = 0`, with `γ₊` carrying the `+` sign
/// of the principal square root of the discriminant `c² - 4r(1-r)`.
#[derive(Debug, Clone, Copy)]
pub struct GammaPair {
    pub plus: Complex64,
    pub minus: Complex64,
    /// True when the discriminant vanishes to within `1e-14·max(1, |c|²)`.
    pub degenerate: bool,
}

pub fn gamma_pair(r: &Param, c: Complex64) -> GammaPair {
    let rf = r.as_f64();
    let omr = 1.0 - rf;
    let disc = c * c - 4.0 * rf * omr;
    let degenerate = disc.norm() <= 1e-14 * c.norm_sqr().max(1.0);
    let root = disc.sqrt();
    GammaPair {
        plus: (c + root) / (2.0 * omr),
        minus: (c - root) / (2.0 * omr),
        degenerate,
    }
}

/// `φ(h_n)` for the multiplicative functional with `φ(h_1) = c`, via the
/// closed form. Agrees with [`eval`]`(r, n, c)`.
pub fn point_functional(r: &Param, c: Complex64, n: u32) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let g = gamma_pair(r, c);
    if g.degenerate {
        // Double root γ = c / (2(1-r)): solutions are (a + b n) γⁿ with
        // a = 1 and a + b = c/γ = 2(1-r), i.e. b = 1 - 2r.
        let rf = r.as_f64();
        let gamma = c / (2.0 * (1.0 - rf));
        let b = 1.0 - 2.0 * rf;
        return (1.0 + b * n as f64) * gamma.powi(n as i32);
    }
    let alpha = (c - g.minus) / (g.plus - g.minus);
    let beta = Complex64::new(1.0, 0.0) - alpha;
    alpha * g.plus.powi(n as i32) + beta * g.minus.powi(n as i32)
}

/// Whether the character at `c` is bounded on the whole algebra: both roots
/// must satisfy `|γ| <= 1` (tolerance `1e-12`). For real `c` this is
/// equivalent to `c ∈ [-1, 1]`.
pub fn is_bounded_char(r: &Param, c: Complex64) -> bool {
    let g = gamma_pair(r, c);
    g.plus.norm() <= 1.0 + 1e-12 && g.minus.norm() <= 1.0 + 1e-12
}

/// The generating function `Σ_{n>=0} P_n(t) zⁿ` in closed form:
///
/// ```text
/// (1 - r - r z t) / (1 - r - z t + r z²)
/// ```
///
/// Errors when `(z, t)` sits on the pole variety of the denominator.
pub fn gen_fun(r: &Param, z: Complex64, t: Complex64) -> Result<Complex64> {
    let rf = r.as_f64();
    let omr = 1.0 - rf;
    let zt = z * t;
    let denom = omr - zt + rf * z * z;
    let scale = omr.abs() + zt.norm() + (rf * z * z).norm();
    if denom.norm() <= 1e-14 * scale.max(1.0) {
        return Err(Error::GeneratingFunctionPole { z, t });
    }
    Ok((omr - rf * zt) / denom)
}
