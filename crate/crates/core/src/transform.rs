//! Branch-cut complex analysis for the spectral transform.
//!
//! Everything here revolves around the square root `S(w) = √(w² - 4r(1-r))`
//! normalized so that `S(w) ≈ w` at infinity, which makes it holomorphic off
//! the cut `I_r = [-a, a]`, `a = 2√(r(1-r))`. It is realized as the product
//! `√(w-a)·√(w+a)` of principal square roots: the two half-line cuts cancel
//! left of `-a`, leaving exactly `I_r`.
//!
//! The variable change `w = rz + (1-r)/z` identifies `|z| = √((1-r)/r)` with
//! the cut; its inverse has an inner branch (computed stably as
//! `z = 2(1-r)/(w + S(w))`) landing inside that circle and an outer branch
//! `z = (w + S(w))/(2r)` landing outside.
//!
//! The Cauchy transform of a functional `φ` with generating series `φ(z)` is
//!
//! ```text
//! C(w) = ((2r-1)w + S(w)) / (2r(1-r)(1-w²)) · (φ(z_inner(w)) - r φ₀)
//! ```
//!
//! (for `r = 0` instead `C(w) = -(1/w)·φ(1/w)`), and boundary values of `C`
//! recover the spectral measure: densities by the Stieltjes jump
//! `(C(t+iε) - C(t-iε))/(2πi)`, atoms by the residue limit `-iε·C(t₀+iε)`.
//! Both limits are taken by polynomial extrapolation in `ε` with an explicit
//! residual, so non-convergence is observable data rather than an error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::param::Param;
use crate::spectra::FunctionalSpec;

/// Side from which a point on the cut is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    Above,
    Below,
}

/// Which root of `r z² - w z + (1-r) = 0` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `|z| < √((1-r)/r)`; behaves like `(1-r)/w` at infinity.
    Inner,
    /// `|z| > √((1-r)/r)`; behaves like `w/r` at infinity.
    Outer,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn sqrt_halves(a: f64, w: Complex64) -> Complex64 {
    (w - a).sqrt() * (w + a).sqrt()
}

/// `√(w² - 4r(1-r))` with cut `I_r` and `S(w) ≈ w` at infinity.
///
/// Errors with a branch ambiguity when `w` lies strictly inside the open cut,
/// where the two one-sided limits differ; use [`sqrt_branch_boundary`] there.
pub fn sqrt_branch(r: &Param, w: Complex64) -> Result<Complex64> {
    let a = r.cut_halfwidth();
    if w.im == 0.0 && w.re.abs() < a {
        return Err(Error::BranchAmbiguous { w, halfwidth: a });
    }
    Ok(sqrt_halves(a, w))
}

/// One-sided boundary value of [`sqrt_branch`] at a real point:
/// `±i√(4r(1-r) - t²)` inside the cut, `±√(t² - 4r(1-r))` beyond its ends.
pub fn sqrt_branch_boundary(r: &Param, t: f64, side: CutSide) -> Complex64 {
    let a = r.cut_halfwidth();
    if t.abs() <= a {
        let v = (a * a - t * t).max(0.0).sqrt();
        match side {
            CutSide::Above => Complex64::new(0.0, v),
            CutSide::Below => Complex64::new(0.0, -v),
        }
    } else {
        let v = (t * t - a * a).sqrt();
        Complex64::new(v.copysign(t), 0.0)
    }
}

/// The variable change `w = rz + (1-r)/z`.
pub fn w_of_z(r: &Param, z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain("w(z) has a pole at z = 0"));
    }
    Ok(r.as_f64() * z + (1.0 - r.as_f64()) / z)
}

/// Inverse of the variable change. Requires `r > 0` and `w` off the closed
/// cut; the inner branch is computed as `2(1-r)/(w + S(w))`, which is free of
/// the subtractive cancellation the textbook form `(w - S(w))/(2r)` suffers
/// for large `w`.
pub fn z_of_w(r: &Param, w: Complex64, branch: Branch) -> Result<Complex64> {
    if r.is_zero() {
        return Err(Error::domain(
            "the inverse variable change needs r > 0; the r = 0 transform uses z = 1/w directly",
        ));
    }
    let a = r.cut_halfwidth();
    if w.im == 0.0 && w.re.abs() <= a {
        return Err(Error::OnCut { w, halfwidth: a });
    }
    let s = sqrt_halves(a, w);
    match branch {
        Branch::Inner => Ok(2.0 * (1.0 - r.as_f64()) / (w + s)),
        Branch::Outer => Ok((w + s) / (2.0 * r.as_f64())),
    }
}

/// Membership in `D_r`: the open disc of radius `√((1-r)/r)` minus the two
/// radial slits `[1, √((1-r)/r))` and `(-√((1-r)/r), -1]`. The inner branch
/// maps `ℂ ∖ [-1, 1]` biholomorphically onto this region.
pub fn in_region_dr(r: &Param, z: Complex64) -> bool {
    let radius = r.critical_radius();
    if z.norm() >= radius {
        return false;
    }
    if z.im == 0.0 && z.re.abs() >= 1.0 {
        return false;
    }
    true
}

/// The Cauchy transform `C(w)` of the functional `phi`.
///
/// Within `1e-6` of `w = ±1` (for `r < 1/2`) the vanishing numerator factor
/// `(2r-1)w + S(w)` is replaced by its first-order expansion
/// `N'(±1)·(w ∓ 1)` with `N'(±1) = 4r(1-r)/(1-2r)`, so the removable
/// singularity at `±1` never produces 0/0.
pub fn cauchy_c(r: &Param, phi: &FunctionalSpec, w: Complex64) -> Result<Complex64> {
    let phi0 = phi.phi_n(r, 0);
    if r.is_zero() {
        if w.re == 0.0 && w.im == 0.0 {
            return Err(Error::domain("C(w) at r = 0 has its series pole at w = 0"));
        }
        let value = phi.phi(r, w.inv())?;
        return Ok(-value / w);
    }
    let rf = r.as_f64();
    let omr = 1.0 - rf;
    let a = r.cut_halfwidth();
    if w.im == 0.0 && w.re.abs() < a {
        return Err(Error::BranchAmbiguous { w, halfwidth: a });
    }
    let s = sqrt_halves(a, w);
    let z = 2.0 * omr / (w + s);
    let series = phi.phi(r, z)? - rf * phi0;
    let ratio = if rf < 0.5 && (w - 1.0).norm() < 1e-6 {
        let n_prime = 4.0 * rf * omr / (1.0 - 2.0 * rf);
        -n_prime / (1.0 + w)
    } else if rf < 0.5 && (w + 1.0).norm() < 1e-6 {
        let n_prime = 4.0 * rf * omr / (1.0 - 2.0 * rf);
        n_prime / (1.0 - w)
    } else {
        ((2.0 * rf - 1.0) * w + s) / (1.0 - w * w)
    };
    Ok(ratio / (2.0 * rf * omr) * series)
}

/// Decreasing sequence of offsets `ε` used for boundary-value limits.
#[derive(Debug, Clone)]
pub struct EpsSchedule(pub Vec<f64>);

impl Default for EpsSchedule {
    /// `ε_k = 10⁻² · 2⁻ᵏ` for `k = 0..=8`.
    fn default() -> Self {
        EpsSchedule((0..=8).map(|k| 1e-2 * 0.5f64.powi(k)).collect())
    }
}

impl EpsSchedule {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(0.0, f64::max)
    }
}

/// Polynomial extrapolation of `(ε, f(ε))` samples to `ε = 0`.
///
/// A degree-`degree` polynomial is fitted through each window of consecutive
/// samples (Neville's scheme evaluated at zero); the returned value comes from
/// the window at the smallest offsets and the residual is the change from the
/// previous window — the observable size of the last extrapolation correction.
pub fn extrapolate_to_zero(
    eps: &[f64],
    samples: &[Complex64],
    degree: usize,
) -> (Complex64, f64) {
    assert_eq!(eps.len(), samples.len());
    assert!(!samples.is_empty());
    let d = degree.min(samples.len() - 1);
    let window_value = |start: usize| -> Complex64 {
        let mut tab: Vec<Complex64> = samples[start..=start + d].to_vec();
        for j in 1..=d {
            for i in 0..=(d - j) {
                let xi = eps[start + i];
                let xj = eps[start + i + j];
                tab[i] = (xi * tab[i + 1] - xj * tab[i]) / (xi - xj);
            }
        }
        tab[0]
    };
    let last_start = samples.len() - 1 - d;
    let value = window_value(last_start);
    let residual = if last_start > 0 {
        (value - window_value(last_start - 1)).norm()
    } else {
        f64::INFINITY
    };
    (value, residual)
}

const EXTRAPOLATION_DEGREE: usize = 2;
// Atom candidates sit off the cut but can be within 1e-2 of its endpoints,
// where the square-root branch point steepens the ε-expansion; one extra
// extrapolation order keeps the estimator floor below the weight cutoff.
const ATOM_EXTRAPOLATION_DEGREE: usize = 3;

/// One boundary-density estimate with its convergence diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DensitySample {
    pub t: f64,
    pub value: Complex64,
    /// Magnitude of the last extrapolation correction; `INFINITY` when the
    /// transform could not be evaluated.
    pub residual: f64,
    pub converged: bool,
}

/// Default convergence threshold for density extrapolation residuals.
pub const DENSITY_RESIDUAL_THRESHOLD: f64 = 1e-5;
/// Weights smaller than this are reported as "no atom".
pub const ATOM_WEIGHT_THRESHOLD: f64 = 1e-8;
/// Default convergence threshold for atom-weight extrapolation residuals.
pub const ATOM_RESIDUAL_THRESHOLD: f64 = 1e-6;

/// Density of the measure of `phi` at `t` via the Stieltjes jump
/// `(C(t+iε) - C(t-iε))/(2πi)`, extrapolated over the schedule.
///
/// A residual above `residual_threshold` (or a failed transform evaluation)
/// marks the sample as non-converged; this is the numerical signature of a
/// functional whose boundary values do not form a measure near `t`.
pub fn stieltjes_density(
    r: &Param,
    phi: &FunctionalSpec,
    t: f64,
    schedule: &EpsSchedule,
    residual_threshold: f64,
) -> DensitySample {
    let mut eps = Vec::with_capacity(schedule.0.len());
    let mut samples = Vec::with_capacity(schedule.0.len());
    for &e in schedule.values() {
        let above = cauchy_c(r, phi, Complex64::new(t, e));
        let below = cauchy_c(r, phi, Complex64::new(t, -e));
        match (above, below) {
            (Ok(cp), Ok(cm)) if cp.is_finite() && cm.is_finite() => {
                eps.push(e);
                samples.push((cp - cm) / (2.0 * std::f64::consts::PI * I));
            }
            _ => {
                return DensitySample {
                    t,
                    value: Complex64::new(f64::NAN, f64::NAN),
                    residual: f64::INFINITY,
                    converged: false,
                }
            }
        }
    }
    let (value, residual) = extrapolate_to_zero(&eps, &samples, EXTRAPOLATION_DEGREE);
    let converged = residual.is_finite() && residual <= residual_threshold && value.is_finite();
    DensitySample {
        t,
        value,
        residual,
        converged,
    }
}

/// Atom-weight estimate at a candidate location.
#[derive(Debug, Clone, Copy)]
pub struct AtomEstimate {
    pub location: f64,
    /// Extrapolated limit of `-iε·C(t₀+iε)`; exactly zero when the limit falls
    /// below [`ATOM_WEIGHT_THRESHOLD`].
    pub weight: Complex64,
    pub residual: f64,
    pub converged: bool,
}

/// Weight of a possible atom of the measure of `phi` at `t0`, via the residue
/// limit `-iε·C(t₀+iε)`.
pub fn detect_atom(
    r: &Param,
    phi: &FunctionalSpec,
    t0: f64,
    schedule: &EpsSchedule,
    weight_threshold: f64,
    residual_threshold: f64,
) -> AtomEstimate {
    let mut eps = Vec::with_capacity(schedule.0.len());
    let mut samples = Vec::with_capacity(schedule.0.len());
    for &e in schedule.values() {
        match cauchy_c(r, phi, Complex64::new(t0, e)) {
            Ok(c) if c.is_finite() => {
                eps.push(e);
                samples.push(-I * e * c);
            }
            _ => {
                return AtomEstimate {
                    location: t0,
                    weight: Complex64::new(f64::NAN, f64::NAN),
                    residual: f64::INFINITY,
                    converged: false,
                }
            }
        }
    }
    let (raw, residual) = extrapolate_to_zero(&eps, &samples, ATOM_EXTRAPOLATION_DEGREE);
    let converged = residual.is_finite() && residual <= residual_threshold && raw.is_finite();
    let weight = if raw.norm() < weight_threshold {
        Complex64::new(0.0, 0.0)
    } else {
        raw
    };
    AtomEstimate {
        location: t0,
        weight,
        residual,
        converged,
    }
}

/// Configuration for a full numeric inversion sweep.
#[derive(Debug, Clone)]
pub struct InversionConfig {
    pub schedule: EpsSchedule,
    /// Number of density samples across the cut interior.
    pub grid_points: usize,
    /// Fraction of the cut halfwidth excluded at each end of the grid.
    pub edge_margin: f64,
    pub density_residual_threshold: f64,
    pub atom_weight_threshold: f64,
    pub atom_residual_threshold: f64,
    /// Locations probed for atoms before the density sweep.
    pub atom_candidates: Vec<f64>,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            schedule: EpsSchedule::default(),
            grid_points: 200,
            edge_margin: 0.05,
            density_residual_threshold: DENSITY_RESIDUAL_THRESHOLD,
            atom_weight_threshold: ATOM_WEIGHT_THRESHOLD,
            atom_residual_threshold: ATOM_RESIDUAL_THRESHOLD,
            atom_candidates: Vec::new(),
        }
    }
}

/// Output of [`invert`]: atom probes that found weight, and the density grid
/// over the cut interior, excluding a neighborhood of radius
/// `10·max(ε)` around every detected atom (the atom's Cauchy kernel pollutes
/// density estimates at that scale).
#[derive(Debug, Clone)]
pub struct InversionResult {
    pub grid: Vec<DensitySample>,
    pub atoms: Vec<AtomEstimate>,
    pub schedule: Vec<f64>,
}

pub fn invert(r: &Param, phi: &FunctionalSpec, config: &InversionConfig) -> InversionResult {
    let mut atoms = Vec::new();
    for &t0 in &config.atom_candidates {
        let est = detect_atom(
            r,
            phi,
            t0,
            &config.schedule,
            config.atom_weight_threshold,
            config.atom_residual_threshold,
        );
        if est.weight.norm() > 0.0 || !est.converged {
            atoms.push(est);
        }
    }
    let exclusion = 10.0 * config.schedule.max();
    let a = r.cut_halfwidth();
    let lo = -a * (1.0 - config.edge_margin);
    let hi = a * (1.0 - config.edge_margin);
    let n = config.grid_points.max(2);
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        if atoms
            .iter()
            .any(|atom| (t - atom.location).abs() < exclusion)
        {
            continue;
        }
        grid.push(stieltjes_density(
            r,
            phi,
            t,
            &config.schedule,
            config.density_residual_threshold,
        ));
    }
    InversionResult {
        grid,
        atoms,
        schedule: config.schedule.values().to_vec(),
    }
}
