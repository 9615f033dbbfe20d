//! Reduced words in the free group and the radial convolution oracle.
//!
//! In the free group `F_l` the sphere `G_n` of reduced words of length `n`
//! has `2l·(2l-1)^{n-1}` elements. Averaging the convolution of normalized
//! sphere indicators over spheres gives exactly the hypergroup product at
//! `r = 1/(2l)`: writing `χ_n` for the normalized indicator of `G_n`,
//!
//! `χ_m ⋆ χ_n = Σ_k c_k χ_k`,
//! `c_k = (|G_k| / (|G_m|·|G_n|)) · #{ g ∈ G_m : |g⁻¹w| = n }`
//!
//! for any fixed representative `w ∈ G_k` — the count does not depend on the
//! choice of `w`. [`radial_convolve`] computes these coefficients in exact
//! rational arithmetic, giving an independent combinatorial check of the
//! algebraic recursion.
//!
//! [`haagerup_gram`] builds the Gram matrix `[λ^{-|g_i⁻¹g_j|}]` over the ball
//! of radius `n_max` and reports its extreme eigenvalues: positive
//! semidefiniteness of these matrices for `λ >= 1` is the positive-definite
//! function statement behind the geometric functionals. Flipping `λ ↦ -λ`
//! conjugates the matrix by the parity sign `diag((-1)^{|g_i|})`, so the
//! spectrum is unchanged; [`sign_twist_check`] verifies this numerically.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Largest sphere enumeration allowed, in words.
pub const MAX_ENUMERATION: u128 = 2_000_000;
/// Largest Gram matrix dimension allowed.
pub const MAX_GRAM_DIM: usize = 2_000;

/// A reduced word; letters are `1..=l` for generators and `-1..=-l` for their
/// inverses, and no letter is ever adjacent to its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<i8>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from arbitrary letters, freely reducing adjacent
    /// inverse pairs.
    pub fn from_letters(letters: &[i8]) -> Self {
        let mut stack: Vec<i8> = Vec::with_capacity(letters.len());
        for &x in letters {
            if stack.last() == Some(&-x) {
                stack.pop();
            } else {
                stack.push(x);
            }
        }
        Word(stack)
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| -x).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut stack = self.0.clone();
        for &x in &other.0 {
            if stack.last() == Some(&-x) {
                stack.pop();
            } else {
                stack.push(x);
            }
        }
        Word(stack)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, &x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn check_rank(l: u32) -> Result<()> {
    if l == 0 || l > 63 {
        return Err(Error::domain(format!("free group rank l = {l} out of range 1..=63")));
    }
    Ok(())
}

/// `|G_n| = 2l·(2l-1)^{n-1}` for `n >= 1`, and `|G_0| = 1`.
pub fn sphere_size(l: u32, n: u32) -> Result<u128> {
    check_rank(l)?;
    if n == 0 {
        return Ok(1);
    }
    let base = (2 * l - 1) as u128;
    let mut size = (2 * l) as u128;
    for _ in 1..n {
        size = size.checked_mul(base).ok_or(Error::ResourceBound {
            what: "sphere size",
            requested: n as u64,
            max: 127,
        })?;
    }
    Ok(size)
}

/// All reduced words of length exactly `n`, in lexicographic generation
/// order. Errors with [`Error::ResourceBound`] beyond [`MAX_ENUMERATION`]
/// words.
pub fn enumerate_sphere(l: u32, n: u32) -> Result<Vec<Word>> {
    check_rank(l)?;
    let size = sphere_size(l, n)?;
    if size > MAX_ENUMERATION {
        return Err(Error::ResourceBound {
            what: "sphere enumeration",
            requested: size.min(u64::MAX as u128) as u64,
            max: MAX_ENUMERATION as u64,
        });
    }
    let alphabet: Vec<i8> = (1..=l as i8).flat_map(|g| [g, -g]).collect();
    let mut words = Vec::with_capacity(size as usize);
    let mut current: Vec<i8> = Vec::with_capacity(n as usize);
    fn extend(alphabet: &[i8], n: usize, current: &mut Vec<i8>, out: &mut Vec<Word>) {
        if current.len() == n {
            out.push(Word(current.clone()));
            return;
        }
        for &x in alphabet {
            if current.last() == Some(&-x) {
                continue;
            }
            current.push(x);
            extend(alphabet, n, current, out);
            current.pop();
        }
    }
    extend(&alphabet, n as usize, &mut current, &mut words);
    debug_assert_eq!(words.len() as u128, size);
    Ok(words)
}

/// The ball of radius `n_max`: spheres `G_0, …, G_{n_max}` concatenated.
pub fn enumerate_ball(l: u32, n_max: u32) -> Result<Vec<Word>> {
    let mut ball = Vec::new();
    for n in 0..=n_max {
        ball.extend(enumerate_sphere(l, n)?);
    }
    Ok(ball)
}

/// Convolution coefficients of normalized sphere indicators,
/// `χ_m ⋆ χ_n = Σ_k c_k χ_k`, as exact rationals keyed by `k`.
///
/// Uses `w = [1, 1, …, 1] ∈ G_k` as the representative (the count is
/// representative-independent) and enumerates the smaller of the two spheres.
pub fn radial_convolve(l: u32, m: u32, n: u32) -> Result<BTreeMap<u32, BigRational>> {
    check_rank(l)?;
    let (m, n) = (m.min(n), m.max(n));
    let sphere_m = enumerate_sphere(l, m)?;
    let size_m = BigRational::from_integer(sphere_size(l, m)?.into());
    let size_n = BigRational::from_integer(sphere_size(l, n)?.into());
    let mut coeffs = BTreeMap::new();
    let mut k = n - m;
    while k <= n + m {
        let w = Word(vec![1i8; k as usize]);
        let count = sphere_m
            .iter()
            .filter(|g| g.inverse().mul(&w).len() == n as usize)
            .count();
        if count > 0 {
            let c = BigRational::from_integer(sphere_size(l, k)?.into())
                * BigRational::from_integer(count.into())
                / (&size_m * &size_n);
            coeffs.insert(k, c);
        }
        k += 2;
    }
    Ok(coeffs)
}

/// Extreme eigenvalues of a Haagerup-type Gram matrix.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub lambda: f64,
    pub dim: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    /// `min_eig >= -1e-10·dim`.
    pub psd: bool,
    /// `‖Mv - μv‖ / ‖v‖` for the eigenpair at the smallest eigenvalue.
    pub eigen_residual: f64,
}

/// Builds the Gram matrix `[λ^{-|g_i⁻¹g_j|}]` over the ball of radius
/// `n_max` in `F_l` and diagonalizes it.
///
/// Any nonzero real `λ` is accepted: for `|λ| < 1` the functional
/// `λ^{-|g|}` is unbounded and the report comes back non-PSD, which is
/// itself the interesting observation.
pub fn haagerup_gram(l: u32, n_max: u32, lambda: f64) -> Result<GramReport> {
    check_rank(l)?;
    if !lambda.is_finite() || lambda == 0.0 {
        return Err(Error::domain(format!(
            "Haagerup Gram matrix needs a nonzero real λ, got {lambda}"
        )));
    }
    let ball = enumerate_ball(l, n_max)?;
    let dim = ball.len();
    if dim > MAX_GRAM_DIM {
        return Err(Error::ResourceBound {
            what: "Gram matrix dimension",
            requested: dim as u64,
            max: MAX_GRAM_DIM as u64,
        });
    }
    let inverses: Vec<Word> = ball.iter().map(Word::inverse).collect();
    let mut matrix = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let d = inverses[i].mul(&ball[j]).len() as i32;
            let entry = lambda.powi(-d);
            matrix[(i, j)] = entry;
            matrix[(j, i)] = entry;
        }
    }
    let eigen = matrix.clone().symmetric_eigen();
    let mut min_idx = 0;
    let mut max_idx = 0;
    for (idx, &mu) in eigen.eigenvalues.iter().enumerate() {
        if mu < eigen.eigenvalues[min_idx] {
            min_idx = idx;
        }
        if mu > eigen.eigenvalues[max_idx] {
            max_idx = idx;
        }
    }
    let min_eig = eigen.eigenvalues[min_idx];
    let max_eig = eigen.eigenvalues[max_idx];
    let v = eigen.eigenvectors.column(min_idx);
    let residual = (&matrix * v - min_eig * v).norm() / v.norm();
    Ok(GramReport {
        lambda,
        dim,
        min_eig,
        max_eig,
        psd: min_eig >= -1e-10 * dim as f64,
        eigen_residual: residual,
    })
}

/// Outcome of comparing the Gram spectra at `λ` and `-λ`.
#[derive(Debug, Clone)]
pub struct SignTwistReport {
    pub plus: GramReport,
    pub minus: GramReport,
    pub min_eig_diff: f64,
    pub pass: bool,
}

/// The parity conjugation `g ↦ (-1)^{|g|}` turns the Gram matrix at `λ` into
/// the one at `-λ`, so their spectra agree; checks the smallest eigenvalues
/// match within `1e-9·dim`.
pub fn sign_twist_check(l: u32, n_max: u32, lambda: f64) -> Result<SignTwistReport> {
    let plus = haagerup_gram(l, n_max, lambda)?;
    let minus = haagerup_gram(l, n_max, -lambda)?;
    let diff = (plus.min_eig - minus.min_eig).abs();
    let pass = diff <= 1e-9 * plus.dim as f64;
    Ok(SignTwistReport {
        plus,
        minus,
        min_eig_diff: diff,
        pass,
    })
}
