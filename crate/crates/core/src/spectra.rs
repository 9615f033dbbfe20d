//! Closed-form spectral measures and regime classification.
//!
//! A linear functional `φ` on the algebra is described by its value sequence
//! `φ_n = φ(h_n)` through a [`FunctionalSpec`]. The geometric family
//! `φ_n = λ^{-n}` is the centerpiece: whether it extends to a bounded
//! functional — and what measure represents it — depends on where `λ` sits
//! relative to the unit circle and the critical circle `|λ| = √((1-r)/r)`:
//!
//! * `λ = ±1`: the Dirac measure at `±1` ([`RegimeCase::DiracAtEdge`]);
//! * real `λ` with `1 < |λ| < √((1-r)/r)`: continuous part plus one atom at
//!   `c_r(λ) = rλ + (1-r)/λ` of weight `(1 - c_r(λ²))/(1 - c_r(λ)²)`
//!   ([`RegimeCase::ContinuousPlusAtom`]);
//! * `|λ| > √((1-r)/r)` (and real `λ = ±√((1-r)/r)`): purely continuous
//!   ([`RegimeCase::ContinuousOnly`]);
//! * everything else, including non-real `λ` on the critical circle, where
//!   the pole of the series lands on the cut: [`RegimeCase::NotInAstar`].
//!
//! The continuous part is always the density
//! `((λ-λ⁻¹)/(2π))·√(4r(1-r)-t²) / ((1-t²)(c_r(λ)-t))` on the cut
//! `[-a, a]`, `a = 2√(r(1-r))`; the constant functional `φ ≡ δ_{n,0}` has the
//! Plancherel density `(1/(2πr))·√(4r(1-r)-t²)/(1-t²)`. Moments are verified
//! by quadrature under the substitution `t = a·cosθ`, which removes the edge
//! square roots and leaves a smooth integrand in `θ`.
//!
//! Classification against the critical circle is exact when `λ` is rational
//! (comparing `|λ|²·r` with `1-r` in rational arithmetic); float inputs use a
//! relative tolerance of `1e-12` and the distances are reported in
//! [`BoundaryProximity`] either way.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::orthopoly;
use crate::param::Param;
use crate::quad;

/// A spectral parameter `λ`, kept in exact rational form when it was given as
/// a real rational so that regime boundaries can be decided exactly.
#[derive(Debug, Clone)]
pub struct Lambda {
    value: Complex64,
    exact: Option<BigRational>,
}

impl Lambda {
    /// A general complex `λ`; comparisons will use float tolerances.
    pub fn new(value: Complex64) -> Self {
        Lambda { value, exact: None }
    }

    /// A real float `λ`; comparisons will use float tolerances.
    pub fn real(value: f64) -> Self {
        Lambda {
            value: Complex64::new(value, 0.0),
            exact: None,
        }
    }

    /// An exact rational `λ`.
    pub fn from_rational(q: BigRational) -> Self {
        Lambda {
            value: Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            exact: Some(q),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Lambda::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// Accepts `p/q` (exact), a decimal literal (exact, e.g. `1.5` ↦ 3/2), or
    /// a complex literal `a+bi` / `a-bi` / `bi` (float).
    pub fn parse(s: &str) -> Result<Lambda> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::domain("empty λ"));
        }
        if let Some(stripped) = s.strip_suffix('i') {
            let body = stripped.trim();
            // Split a+b / a-b at the sign separating real and imaginary parts
            // (skipping a leading sign and exponent signs).
            let mut split = None;
            for (idx, ch) in body.char_indices().skip(1) {
                if (ch == '+' || ch == '-')
                    && !matches!(body.as_bytes()[idx - 1], b'e' | b'E')
                {
                    split = Some(idx);
                }
            }
            let (re_str, im_str) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("0", body),
            };
            let re: f64 = re_str
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("cannot parse λ from {s:?}")))?;
            let im_str = im_str.trim();
            let im: f64 = match im_str {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => other
                    .parse()
                    .map_err(|_| Error::domain(format!("cannot parse λ from {s:?}")))?,
            };
            let value = Complex64::new(re, im);
            if value.im == 0.0 {
                return Ok(Lambda::real(re));
            }
            return Ok(Lambda::new(value));
        }
        if let Some((num, den)) = s.split_once('/') {
            let p: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("cannot parse λ from {s:?}")))?;
            let q: i64 = den
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("cannot parse λ from {s:?}")))?;
            if q == 0 {
                return Err(Error::domain("λ denominator is zero"));
            }
            return Ok(Lambda::from_ratio(p, q));
        }
        if let Some(q) = parse_decimal_rational(s) {
            return Ok(Lambda::from_rational(q));
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::domain(format!("cannot parse λ from {s:?}")))?;
        Ok(Lambda::real(v))
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_real(&self) -> bool {
        self.exact.is_some() || self.value.im == 0.0
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(q) => q.is_zero(),
            None => self.value.re == 0.0 && self.value.im == 0.0,
        }
    }
}

impl std::fmt::Display for Lambda {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{q}"),
            None if self.value.im == 0.0 => write!(f, "{}", self.value.re),
            None => write!(f, "{}+{}i", self.value.re, self.value.im),
        }
    }
}

fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    let (mantissa, frac_digits) = match s.split_once('.') {
        Some((int, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            (format!("{int}{frac}"), frac.len() as u32)
        }
        None => (s.to_string(), 0),
    };
    let n: num_bigint::BigInt = mantissa.parse().ok()?;
    let den = num_bigint::BigInt::from(10u32).pow(frac_digits);
    Some(BigRational::new(n, den))
}

/// `c_r(λ) = rλ + (1-r)/λ`, the possible singularity location of the
/// geometric functional's transform.
pub fn c_r(r: &Param, lambda: Complex64) -> Result<Complex64> {
    if lambda.re == 0.0 && lambda.im == 0.0 {
        return Err(Error::domain("c_r(λ) requires λ != 0"));
    }
    Ok(r.as_f64() * lambda + (1.0 - r.as_f64()) / lambda)
}

/// Exact-rational `c_r` for rational `λ`.
pub fn c_r_exact(r: &Param, lambda: &BigRational) -> Result<BigRational> {
    if lambda.is_zero() {
        return Err(Error::domain("c_r(λ) requires λ != 0"));
    }
    Ok(r.rational() * lambda + r.one_minus() / lambda)
}

/// Value sequences `φ_n = φ(h_n)` with a closed-form generating series.
#[derive(Debug, Clone)]
pub enum FunctionalSpec {
    /// `φ_n = λ^{-n}`, series `φ(z) = 1/(1 - z/λ)`.
    Geometric(Lambda),
    /// The character `φ_n = P_n(c)`, series `φ(z) = (1-r-rzc)/(1-r-zc+rz²)`.
    PointEval(Complex64),
    /// `φ_n = δ_{n,0}`, series `φ(z) ≡ 1`; represented by the Plancherel
    /// measure.
    DeltaAt0,
    /// Finitely many prescribed values, zero beyond; series is a polynomial.
    FiniteSeq(Vec<Complex64>),
}

impl FunctionalSpec {
    pub fn phi_n(&self, r: &Param, n: u32) -> Complex64 {
        match self {
            FunctionalSpec::Geometric(lambda) => lambda.value().powi(-(n as i32)),
            FunctionalSpec::PointEval(c) => orthopoly::eval(r, n, *c),
            FunctionalSpec::DeltaAt0 => {
                if n == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            FunctionalSpec::FiniteSeq(v) => v
                .get(n as usize)
                .copied()
                .unwrap_or_else(|| Complex64::new(0.0, 0.0)),
        }
    }

    /// The generating series `φ(z) = Σ φ_n zⁿ` in closed form (analytically
    /// continued past the radius of convergence where the closed form allows).
    pub fn phi(&self, r: &Param, z: Complex64) -> Result<Complex64> {
        match self {
            FunctionalSpec::Geometric(lambda) => {
                let lam = lambda.value();
                let denom = lam - z;
                if denom.norm() <= 1e-13 * lam.norm().max(1.0) {
                    return Err(Error::FunctionalDomain {
                        z_abs: z.norm(),
                        radius: lam.norm(),
                    });
                }
                Ok(lam / denom)
            }
            FunctionalSpec::PointEval(c) => orthopoly::gen_fun(r, z, *c),
            FunctionalSpec::DeltaAt0 => Ok(Complex64::new(1.0, 0.0)),
            FunctionalSpec::FiniteSeq(v) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for coeff in v.iter().rev() {
                    acc = acc * z + coeff;
                }
                Ok(acc)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FunctionalSpec::Geometric(lambda) => format!("geometric(λ = {lambda})"),
            FunctionalSpec::PointEval(c) => format!("point-evaluation(c = {c})"),
            FunctionalSpec::DeltaAt0 => "delta-at-0".to_string(),
            FunctionalSpec::FiniteSeq(v) => format!("finite-sequence({} terms)", v.len()),
        }
    }
}

/// Which spectral regime a geometric functional falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeCase {
    /// Not a bounded functional; no measure exists.
    NotInAstar,
    /// Purely continuous measure on the cut.
    ContinuousOnly,
    /// Continuous part plus a single atom at `c_r(λ)`.
    ContinuousPlusAtom,
    /// `λ = ±1`: the measure is the Dirac mass at `±1`.
    DiracAtEdge,
}

/// Distances to the decision boundaries, for diagnosing near-degenerate
/// inputs.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryProximity {
    /// Signed relative distance of `|λ|²·r` from `1-r`; zero on the critical
    /// circle.
    pub critical_rel: f64,
    /// Signed relative distance of `|λ|` from 1.
    pub unit_rel: f64,
    /// Imaginary part of `λ` (zero for real inputs).
    pub imag_part: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Regime {
    pub case: RegimeCase,
    /// `|λ| >= √((1-r)/r)`: the associated state factors through the reduced
    /// C*-algebra and the spectral data is purely continuous there.
    pub reduced_continuous: bool,
    pub boundary_proximity: BoundaryProximity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    On,
    Above,
}

/// `|λ|` against the critical circle `|λ|² r = 1-r`, exactly for rational `λ`.
fn critical_side(r: &Param, lambda: &Lambda) -> Side {
    if let Some(q) = lambda.exact() {
        let lhs = q * q * r.rational();
        let rhs = r.one_minus();
        return match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => Side::Below,
            std::cmp::Ordering::Equal => Side::On,
            std::cmp::Ordering::Greater => Side::Above,
        };
    }
    let lhs = lambda.value().norm_sqr() * r.as_f64();
    let rhs = 1.0 - r.as_f64();
    if (lhs - rhs).abs() <= 1e-12 * rhs.max(lhs) {
        Side::On
    } else if lhs < rhs {
        Side::Below
    } else {
        Side::Above
    }
}

/// `|λ|` against 1, exactly for rational `λ`.
fn unit_side(lambda: &Lambda) -> Side {
    if let Some(q) = lambda.exact() {
        let one = BigRational::one();
        return match q.abs().cmp(&one) {
            std::cmp::Ordering::Less => Side::Below,
            std::cmp::Ordering::Equal => Side::On,
            std::cmp::Ordering::Greater => Side::Above,
        };
    }
    let m = lambda.value().norm();
    if (m - 1.0).abs() <= 1e-12 {
        Side::On
    } else if m < 1.0 {
        Side::Below
    } else {
        Side::Above
    }
}

/// Decide the regime of the geometric functional `φ_n = λ^{-n}`.
///
/// Requires `0 < r <= 1/2` and `λ != 0`.
pub fn classify(r: &Param, lambda: &Lambda) -> Result<Regime> {
    r.require_spectral()?;
    if lambda.is_zero() {
        return Err(Error::domain("λ = 0 does not define a geometric functional"));
    }
    let real = lambda.is_real();
    let critical = critical_side(r, lambda);
    let unit = unit_side(lambda);
    let case = if real && unit == Side::On {
        RegimeCase::DiracAtEdge
    } else {
        match critical {
            Side::Above => RegimeCase::ContinuousOnly,
            Side::On => {
                if real {
                    RegimeCase::ContinuousOnly
                } else {
                    RegimeCase::NotInAstar
                }
            }
            Side::Below => {
                if real && unit == Side::Above {
                    RegimeCase::ContinuousPlusAtom
                } else {
                    RegimeCase::NotInAstar
                }
            }
        }
    };
    let m2r = lambda.value().norm_sqr() * r.as_f64();
    let rhs = 1.0 - r.as_f64();
    Ok(Regime {
        case,
        reduced_continuous: critical != Side::Below,
        boundary_proximity: BoundaryProximity {
            critical_rel: (m2r - rhs) / rhs,
            unit_rel: lambda.value().norm() - 1.0,
            imag_part: lambda.value().im,
        },
    })
}

/// Continuous-part families a [`SpectralMeasure`] can carry.
#[derive(Debug, Clone)]
pub enum DensityKind {
    /// No continuous part.
    Zero,
    /// `(1/(2πr))·√(a²-t²)/(1-t²)`.
    Plancherel,
    /// `((λ-λ⁻¹)/(2π))·√(a²-t²)/((1-t²)·(pole-t))` with `pole = c_r(λ)`.
    /// `edge = Some(±1)` marks the critical case `pole = ±a`, evaluated in the
    /// cancelled form `±√((a±t)/(a∓t))` to stay finite-size near the edge.
    Geometric {
        lambda: Complex64,
        pole: Complex64,
        edge: Option<i8>,
    },
}

/// A measure on `[-1, 1]`: a closed-form density on the cut `[-a, a]` plus
/// finitely many atoms in `[-1, -a] ∪ [a, 1]`.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    r: Param,
    kind: DensityKind,
    atoms: Vec<(f64, Complex64)>,
    /// Exact (location, weight) pairs, available when `λ` was rational.
    atoms_exact: Vec<(BigRational, BigRational)>,
}

/// Target absolute accuracy for moment quadrature.
pub const QUAD_TARGET: f64 = 1e-10;
const QUAD_MAX_PANELS: usize = 40_000;

impl SpectralMeasure {
    pub fn param(&self) -> &Param {
        &self.r
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    /// Support interval of the continuous part, `[-a, a]`.
    pub fn support(&self) -> (f64, f64) {
        let a = self.r.cut_halfwidth();
        (-a, a)
    }

    pub fn atoms(&self) -> &[(f64, Complex64)] {
        &self.atoms
    }

    pub fn atoms_exact(&self) -> &[(BigRational, BigRational)] {
        &self.atoms_exact
    }

    /// Density of the continuous part at `t` (zero outside the open cut).
    pub fn density_at(&self, t: f64) -> Complex64 {
        let a = self.r.cut_halfwidth();
        if t.abs() >= a {
            return Complex64::new(0.0, 0.0);
        }
        let rf = self.r.as_f64();
        let root = (a * a - t * t).sqrt();
        let two_pi = 2.0 * std::f64::consts::PI;
        match &self.kind {
            DensityKind::Zero => Complex64::new(0.0, 0.0),
            DensityKind::Plancherel => {
                Complex64::new(root / (two_pi * rf * (1.0 - t * t)), 0.0)
            }
            DensityKind::Geometric { lambda, pole, edge } => {
                let k = (lambda - lambda.inv()) / two_pi;
                match edge {
                    Some(1) => k * ((a + t) / (a - t)).sqrt() / (1.0 - t * t),
                    Some(_) => -k * ((a - t) / (a + t)).sqrt() / (1.0 - t * t),
                    None => k * root / ((1.0 - t * t) * (pole - t)),
                }
            }
        }
    }

    /// The θ-substituted integrand `density(a cosθ)·a sinθ`, in the cancelled
    /// form that is smooth on `[0, π]`. `1 - t²` is computed as
    /// `sin²θ + (1-2r)²cos²θ`, which is free of cancellation for every `r`.
    fn theta_weight(&self, theta: f64) -> Complex64 {
        let a = self.r.cut_halfwidth();
        let rf = self.r.as_f64();
        let eta = 1.0 - 2.0 * rf;
        let (sin, cos) = theta.sin_cos();
        let one_minus_t2 = sin * sin + eta * eta * cos * cos;
        let two_pi = 2.0 * std::f64::consts::PI;
        match &self.kind {
            DensityKind::Zero => Complex64::new(0.0, 0.0),
            DensityKind::Plancherel => {
                Complex64::new(a * a * sin * sin / (two_pi * rf * one_minus_t2), 0.0)
            }
            DensityKind::Geometric { lambda, pole, edge } => {
                let k = (lambda - lambda.inv()) / two_pi;
                match edge {
                    Some(1) => k * a * (1.0 + cos) / one_minus_t2,
                    Some(_) => -k * a * (1.0 - cos) / one_minus_t2,
                    None => k * a * a * sin * sin / (one_minus_t2 * (pole - a * cos)),
                }
            }
        }
    }

    /// Mass of the continuous part by adaptive quadrature.
    pub fn continuous_mass(&self) -> Result<Complex64> {
        if matches!(self.kind, DensityKind::Zero) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let q = quad::integrate(
            |th| self.theta_weight(th),
            0.0,
            std::f64::consts::PI,
            QUAD_TARGET,
            QUAD_MAX_PANELS,
        )?;
        Ok(q.value)
    }

    /// `∫ P_n dμ`: the continuous part by quadrature plus the atom sum. For a
    /// measure representing `φ` this recovers `φ_n`.
    pub fn moment(&self, n: u32) -> Result<Complex64> {
        let r = &self.r;
        let a = r.cut_halfwidth();
        let mut total = Complex64::new(0.0, 0.0);
        if !matches!(self.kind, DensityKind::Zero) {
            let q = quad::integrate(
                |th| {
                    let t = a * th.cos();
                    orthopoly::eval_f64(r, n, t) * self.theta_weight(th)
                },
                0.0,
                std::f64::consts::PI,
                QUAD_TARGET,
                QUAD_MAX_PANELS,
            )?;
            total += q.value;
        }
        for &(loc, w) in &self.atoms {
            total += w * orthopoly::eval_f64(r, n, loc);
        }
        Ok(total)
    }

    /// Total mass (continuous plus atoms); equals `φ₀ = 1` for every measure
    /// this module constructs.
    pub fn mass(&self) -> Result<Complex64> {
        let mut total = self.continuous_mass()?;
        for &(_, w) in &self.atoms {
            total += w;
        }
        Ok(total)
    }
}

/// The Plancherel measure: represents `φ_n = δ_{n,0}`.
pub fn plancherel_measure(r: &Param) -> Result<SpectralMeasure> {
    r.require_spectral()?;
    Ok(SpectralMeasure {
        r: r.clone(),
        kind: DensityKind::Plancherel,
        atoms: Vec::new(),
        atoms_exact: Vec::new(),
    })
}

/// The measure representing the geometric functional `φ_n = λ^{-n}`.
///
/// Errors with [`Error::Regime`] when the classification is
/// [`RegimeCase::NotInAstar`].
pub fn geometric_measure(r: &Param, lambda: &Lambda) -> Result<SpectralMeasure> {
    let regime = classify(r, lambda)?;
    let lam = lambda.value();
    match regime.case {
        RegimeCase::NotInAstar => Err(Error::Regime {
            detail: format!(
                "λ = {lambda} is not represented by a measure (critical distance {:.3e}, Im λ = {:.3e})",
                regime.boundary_proximity.critical_rel, regime.boundary_proximity.imag_part
            ),
        }),
        RegimeCase::DiracAtEdge => {
            let sign = if lam.re > 0.0 { 1.0 } else { -1.0 };
            let loc_exact = BigRational::from_integer((sign as i64).into());
            Ok(SpectralMeasure {
                r: r.clone(),
                kind: DensityKind::Zero,
                atoms: vec![(sign, Complex64::new(1.0, 0.0))],
                atoms_exact: vec![(loc_exact, BigRational::one())],
            })
        }
        RegimeCase::ContinuousPlusAtom => {
            let pole = c_r(r, lam)?;
            let (loc, weight, atoms_exact) = match lambda.exact() {
                Some(q) => {
                    let loc = c_r_exact(r, q)?;
                    let c2 = c_r_exact(r, &(q * q))?;
                    let w = (BigRational::one() - c2)
                        / (BigRational::one() - &loc * &loc);
                    (
                        loc.to_f64().unwrap(),
                        w.to_f64().unwrap(),
                        vec![(loc, w)],
                    )
                }
                None => {
                    let c = pole.re;
                    let c2 = c_r(r, lam * lam)?.re;
                    (c, (1.0 - c2) / (1.0 - c * c), Vec::new())
                }
            };
            Ok(SpectralMeasure {
                r: r.clone(),
                kind: DensityKind::Geometric {
                    lambda: lam,
                    pole,
                    edge: None,
                },
                atoms: vec![(loc, Complex64::new(weight, 0.0))],
                atoms_exact,
            })
        }
        RegimeCase::ContinuousOnly => {
            let on_boundary = critical_side(r, lambda) == Side::On && lambda.is_real();
            let edge = if on_boundary {
                Some(if lam.re > 0.0 { 1i8 } else { -1i8 })
            } else {
                None
            };
            let pole = if on_boundary {
                let a = r.cut_halfwidth();
                Complex64::new(if lam.re > 0.0 { a } else { -a }, 0.0)
            } else {
                c_r(r, lam)?
            };
            Ok(SpectralMeasure {
                r: r.clone(),
                kind: DensityKind::Geometric {
                    lambda: lam,
                    pole,
                    edge,
                },
                atoms: Vec::new(),
                atoms_exact: Vec::new(),
            })
        }
    }
}

/// The measure of a bounded point-evaluation character: the Dirac mass at `c`
/// for real `c ∈ [-1, 1]`.
pub fn point_measure(r: &Param, c: f64) -> Result<SpectralMeasure> {
    r.require_spectral()?;
    if !(-1.0..=1.0).contains(&c) {
        return Err(Error::Regime {
            detail: format!("point evaluation at c = {c} is not a bounded character"),
        });
    }
    Ok(SpectralMeasure {
        r: r.clone(),
        kind: DensityKind::Zero,
        atoms: vec![(c, Complex64::new(1.0, 0.0))],
        atoms_exact: Vec::new(),
    })
}

/// The representing measure of a [`FunctionalSpec`], where one exists in
/// closed form.
pub fn measure_of(r: &Param, spec: &FunctionalSpec) -> Result<SpectralMeasure> {
    match spec {
        FunctionalSpec::Geometric(lambda) => geometric_measure(r, lambda),
        FunctionalSpec::DeltaAt0 => plancherel_measure(r),
        FunctionalSpec::PointEval(c) => {
            if c.im != 0.0 {
                return Err(Error::Regime {
                    detail: format!("point evaluation at non-real c = {c} is not a state"),
                });
            }
            point_measure(r, c.re)
        }
        FunctionalSpec::FiniteSeq(_) => Err(Error::domain(
            "finite sequences have no closed-form representing measure here",
        )),
    }
}

/// One row of a moment-verification report.
#[derive(Debug, Clone, Copy)]
pub struct MomentRow {
    pub n: u32,
    pub expected: Complex64,
    pub computed: Complex64,
    pub abs_error: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub rows: Vec<MomentRow>,
    pub max_error: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Recompute `φ_n` as moments of the representing measure for `n <= n_max`
/// and compare with the prescribed values.
pub fn verify_functional(
    r: &Param,
    spec: &FunctionalSpec,
    n_max: u32,
    tol: f64,
) -> Result<VerifyReport> {
    let measure = measure_of(r, spec)?;
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    let mut max_error = 0.0f64;
    for n in 0..=n_max {
        let expected = spec.phi_n(r, n);
        let computed = measure.moment(n)?;
        let abs_error = (computed - expected).norm();
        max_error = max_error.max(abs_error);
        rows.push(MomentRow {
            n,
            expected,
            computed,
            abs_error,
        });
    }
    Ok(VerifyReport {
        rows,
        max_error,
        tol,
        pass: max_error <= tol,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct PositivityReport {
    /// The measure is real (λ real).
    pub real: bool,
    /// The measure is positive (real λ with |λ| >= 1).
    pub positive: bool,
}

/// Whether the geometric functional's measure is real / positive. Errors on
/// `NotInAstar` input.
pub fn positivity_report(r: &Param, lambda: &Lambda) -> Result<PositivityReport> {
    let regime = classify(r, lambda)?;
    if regime.case == RegimeCase::NotInAstar {
        return Err(Error::Regime {
            detail: format!("λ = {lambda} is not in the dual"),
        });
    }
    let real = lambda.is_real();
    // Real λ inside the dual automatically has |λ| >= 1.
    Ok(PositivityReport {
        real,
        positive: real,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn param(num: i64, den: i64) -> Param {
        Param::from_ratio(num, den).unwrap()
    }

    fn quarter() -> Param {
        param(1, 4)
    }

    #[test]
    fn c_r_landmarks() {
        let r = quarter();
        let crit = r.critical_radius();
        let v = c_r(&r, Complex64::new(crit, 0.0)).unwrap();
        assert_relative_eq!(v.re, r.cut_halfwidth(), max_relative = 1e-14);
        assert_relative_eq!(
            c_r(&r, Complex64::new(1.0, 0.0)).unwrap().re,
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            c_r(&r, Complex64::new(3.0, 0.0)).unwrap().re,
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            c_r(&r, Complex64::new(1.5, 0.0)).unwrap().re,
            0.875,
            max_relative = 1e-15
        );
        assert!(c_r(&r, Complex64::new(0.0, 0.0)).is_err());
        let exact = c_r_exact(&r, &BigRational::new(3.into(), 2.into())).unwrap();
        assert_eq!(exact, BigRational::new(7.into(), 8.into()));
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(
            Lambda::parse("3/2").unwrap().exact().unwrap(),
            &BigRational::new(3.into(), 2.into())
        );
        assert_eq!(
            Lambda::parse("1.5").unwrap().exact().unwrap(),
            &BigRational::new(3.into(), 2.into())
        );
        let z = Lambda::parse("1.0+1.0i").unwrap();
        assert_eq!(z.value(), Complex64::new(1.0, 1.0));
        assert!(!z.is_real());
        let neg = Lambda::parse("-2").unwrap();
        assert_eq!(neg.value().re, -2.0);
        assert!(neg.is_real());
        let imag = Lambda::parse("2.5i").unwrap();
        assert_eq!(imag.value(), Complex64::new(0.0, 2.5));
        let mixed = Lambda::parse("1.2e1+0.5i").unwrap();
        assert_eq!(mixed.value(), Complex64::new(12.0, 0.5));
        assert!(Lambda::parse("").is_err());
        assert!(Lambda::parse("3/0").is_err());
        assert!(Lambda::parse("abc").is_err());
    }

    #[test]
    fn classify_examples() {
        let r = quarter();
        let two = classify(&r, &Lambda::from_ratio(2, 1)).unwrap();
        assert_eq!(two.case, RegimeCase::ContinuousOnly);
        assert!(two.reduced_continuous);

        let three_halves = classify(&r, &Lambda::from_ratio(3, 2)).unwrap();
        assert_eq!(three_halves.case, RegimeCase::ContinuousPlusAtom);
        assert!(!three_halves.reduced_continuous);

        let crit_angle = Lambda::new(Complex64::from_polar(
            3.0f64.sqrt(),
            std::f64::consts::FRAC_PI_3,
        ));
        assert_eq!(
            classify(&r, &crit_angle).unwrap().case,
            RegimeCase::NotInAstar
        );

        let small = classify(&r, &Lambda::real(0.9)).unwrap();
        assert_eq!(small.case, RegimeCase::NotInAstar);

        assert_eq!(
            classify(&r, &Lambda::from_ratio(1, 1)).unwrap().case,
            RegimeCase::DiracAtEdge
        );
        assert_eq!(
            classify(&r, &Lambda::from_ratio(-1, 1)).unwrap().case,
            RegimeCase::DiracAtEdge
        );

        // Real λ on the critical circle is the continuous borderline case.
        let boundary = classify(&r, &Lambda::real(3.0f64.sqrt())).unwrap();
        assert_eq!(boundary.case, RegimeCase::ContinuousOnly);
        assert!(boundary.reduced_continuous);
        assert!(boundary.boundary_proximity.critical_rel.abs() < 1e-12);

        // Non-real λ with |λ| = √2 < √3 is below the circle: no measure.
        let inside_complex = classify(&r, &Lambda::new(Complex64::new(1.0, 1.0))).unwrap();
        assert_eq!(inside_complex.case, RegimeCase::NotInAstar);

        // Non-real above the circle is fine (complex measure).
        let above_complex =
            classify(&r, &Lambda::new(Complex64::from_polar(2.0, 0.5))).unwrap();
        assert_eq!(above_complex.case, RegimeCase::ContinuousOnly);

        assert!(classify(&param(0, 1), &Lambda::real(2.0)).is_err());
        assert!(classify(&r, &Lambda::real(0.0)).is_err());
    }

    #[test]
    fn exact_boundary_detection() {
        // r = 1/5 puts the critical circle at |λ| = 2, a rational point, so
        // the boundary must be decided exactly.
        let r = param(1, 5);
        assert_eq!(
            classify(&r, &Lambda::from_ratio(2, 1)).unwrap().case,
            RegimeCase::ContinuousOnly
        );
        let below = classify(&r, &Lambda::from_rational(
            BigRational::new(199999999999i64.into(), 100000000000i64.into()),
        ))
        .unwrap();
        assert_eq!(below.case, RegimeCase::ContinuousPlusAtom);
    }

    #[test]
    fn dirac_measure_at_one() {
        let r = quarter();
        let m = geometric_measure(&r, &Lambda::from_ratio(1, 1)).unwrap();
        assert!(matches!(m.kind(), DensityKind::Zero));
        assert_eq!(m.atoms(), &[(1.0, Complex64::new(1.0, 0.0))]);
        assert_eq!(m.density_at(0.3), Complex64::new(0.0, 0.0));
        for n in 0..=10 {
            assert_eq!(m.moment(n).unwrap(), Complex64::new(1.0, 0.0));
        }
        let neg = geometric_measure(&r, &Lambda::from_ratio(-1, 1)).unwrap();
        assert_eq!(neg.atoms()[0].0, -1.0);
        assert_eq!(neg.moment(5).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn atom_of_three_halves() {
        let r = quarter();
        let m = geometric_measure(&r, &Lambda::from_ratio(3, 2)).unwrap();
        let exact = m.atoms_exact();
        assert_eq!(exact.len(), 1);
        assert_eq!(exact[0].0, BigRational::new(7.into(), 8.into()));
        assert_eq!(exact[0].1, BigRational::new(4.into(), 9.into()));
        assert_eq!(m.atoms()[0].0, 0.875);
        assert_relative_eq!(m.atoms()[0].1.re, 4.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn plancherel_values() {
        let r = quarter();
        let m = plancherel_measure(&r).unwrap();
        assert_relative_eq!(
            m.density_at(0.0).re,
            3.0f64.sqrt() / std::f64::consts::PI,
            max_relative = 1e-14
        );
        let half = plancherel_measure(&param(1, 2)).unwrap();
        for &t in &[-0.95f64, -0.5, 0.0, 0.3, 0.95] {
            let expected = 1.0 / (std::f64::consts::PI * (1.0 - t * t).sqrt());
            assert_relative_eq!(half.density_at(t).re, expected, max_relative = 1e-12);
        }
        let mass = plancherel_measure(&param(3, 10)).unwrap().mass().unwrap();
        assert!((mass - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn plancherel_moments_vanish() {
        let r = quarter();
        let m = plancherel_measure(&r).unwrap();
        assert!((m.moment(0).unwrap().re - 1.0).abs() < 1e-10);
        for n in 1..=8 {
            assert!(m.moment(n).unwrap().norm() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn geometric_moment_assembly() {
        // moment(1) = λ⁻¹ = 2/3 must assemble from continuous part + (4/9)(7/8).
        let r = quarter();
        let m = geometric_measure(&r, &Lambda::from_ratio(3, 2)).unwrap();
        let total = m.moment(1).unwrap();
        assert!((total.re - 2.0 / 3.0).abs() < 1e-8);
        let atom_part = 4.0 / 9.0 * 0.875;
        let continuous = quad::integrate(
            |th| {
                let t = r.cut_halfwidth() * th.cos();
                t * m.theta_weight(th)
            },
            0.0,
            std::f64::consts::PI,
            1e-12,
            40_000,
        )
        .unwrap()
        .value;
        assert!((continuous.re + atom_part - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn critical_case_density_form() {
        // λ = √((1-r)/r): pole at the cut edge; the edge-stable form must agree
        // with the generic formula slightly inside and stay positive.
        let r = quarter();
        let m = geometric_measure(&r, &Lambda::real(3.0f64.sqrt())).unwrap();
        assert!(m.atoms().is_empty());
        let a = r.cut_halfwidth();
        let lam = 3.0f64.sqrt();
        for &t in &[-0.8 * a, -0.2 * a, 0.5 * a] {
            let d = m.density_at(t);
            assert!(d.re > 0.0);
            let generic = (lam - 1.0 / lam) / (2.0 * std::f64::consts::PI)
                * (a * a - t * t).sqrt()
                / ((1.0 - t * t) * (a - t));
            assert_relative_eq!(d.re, generic, max_relative = 1e-10);
        }
        let mass = m.mass().unwrap();
        assert!((mass.re - 1.0).abs() < 1e-8, "mass {mass}");
    }

    #[test]
    fn verify_geometric_functionals() {
        let r = quarter();
        let report =
            verify_functional(&r, &FunctionalSpec::Geometric(Lambda::from_ratio(2, 1)), 15, 1e-7)
                .unwrap();
        assert!(report.pass, "max error {}", report.max_error);

        let negative = verify_functional(
            &r,
            &FunctionalSpec::Geometric(Lambda::from_ratio(-3, 2)),
            15,
            1e-7,
        )
        .unwrap();
        assert!(negative.pass, "max error {}", negative.max_error);

        let arcsine =
            verify_functional(&param(1, 2), &FunctionalSpec::DeltaAt0, 20, 1e-9).unwrap();
        assert!(arcsine.pass, "max error {}", arcsine.max_error);
    }

    #[test]
    fn complex_lambda_measure_recovers_moments() {
        let r = quarter();
        let lam = Complex64::from_polar(2.0, std::f64::consts::FRAC_PI_6);
        let m = geometric_measure(&r, &Lambda::new(lam)).unwrap();
        for n in 0..=6u32 {
            let expected = lam.powi(-(n as i32));
            let got = m.moment(n).unwrap();
            assert!(
                (got - expected).norm() < 1e-7,
                "n = {n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn reflection_symmetry() {
        let r = quarter();
        let plus = geometric_measure(&r, &Lambda::from_ratio(3, 2)).unwrap();
        let minus = geometric_measure(&r, &Lambda::from_ratio(-3, 2)).unwrap();
        for &t in &[-0.6, -0.1, 0.2, 0.7] {
            let d1 = plus.density_at(t);
            let d2 = minus.density_at(-t);
            assert!((d1 - d2).norm() < 1e-10, "t = {t}");
        }
        assert_eq!(minus.atoms()[0].0, -plus.atoms()[0].0);
        assert!((minus.atoms()[0].1 - plus.atoms()[0].1).norm() < 1e-15);
    }

    #[test]
    fn not_in_dual_is_an_error() {
        let r = quarter();
        let lam = Lambda::new(Complex64::from_polar(
            3.0f64.sqrt(),
            std::f64::consts::FRAC_PI_4,
        ));
        assert!(matches!(
            geometric_measure(&r, &lam),
            Err(Error::Regime { .. })
        ));
        assert!(positivity_report(&r, &lam).is_err());
    }

    #[test]
    fn positivity() {
        let r = quarter();
        let p = positivity_report(&r, &Lambda::from_ratio(2, 1)).unwrap();
        assert!(p.real && p.positive);
        let c = positivity_report(
            &r,
            &Lambda::new(Complex64::from_polar(2.0, std::f64::consts::FRAC_PI_6)),
        )
        .unwrap();
        assert!(!c.real && !c.positive);
    }

    #[test]
    fn density_sign_matches_positivity() {
        let r = quarter();
        for lambda in [Lambda::from_ratio(2, 1), Lambda::from_ratio(-2, 1)] {
            let m = geometric_measure(&r, &lambda).unwrap();
            let a = r.cut_halfwidth();
            for k in 1..20 {
                let t = -a + 2.0 * a * k as f64 / 20.0;
                let d = m.density_at(t);
                assert!(d.re > 0.0, "λ = {lambda}, t = {t}");
                assert!(d.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mass_balance_through_atom_birth() {
        let r = quarter();
        let boundary = 3.0f64.sqrt();
        for k in 0..=12 {
            let lam = 1.9 - 0.0375 * k as f64;
            let m = geometric_measure(&r, &Lambda::real(lam)).unwrap();
            let atom_weight: f64 = m.atoms().iter().map(|(_, w)| w.re).sum();
            let cont = m.continuous_mass().unwrap().re;
            assert!(
                (cont + atom_weight - 1.0).abs() < 1e-7,
                "λ = {lam}: {cont} + {atom_weight}"
            );
            if lam > boundary {
                assert_eq!(atom_weight, 0.0, "λ = {lam}");
            } else {
                assert!(atom_weight > 0.0, "λ = {lam}");
            }
        }
    }

    #[test]
    fn point_measure_moments_are_polynomial_values() {
        let r = quarter();
        let m = point_measure(&r, 0.3).unwrap();
        for n in [0u32, 1, 4, 9] {
            let expected = orthopoly::eval_f64(&r, n, 0.3);
            assert_eq!(m.moment(n).unwrap().re, expected);
        }
        assert!(point_measure(&r, 1.2).is_err());
    }

    #[test]
    fn functional_series_consistency() {
        let r = quarter();
        let specs = [
            FunctionalSpec::Geometric(Lambda::from_ratio(3, 2)),
            FunctionalSpec::PointEval(Complex64::new(0.4, 0.1)),
            FunctionalSpec::DeltaAt0,
            FunctionalSpec::FiniteSeq(vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(-0.25, 0.0),
            ]),
        ];
        let z = Complex64::new(0.15, 0.1);
        for spec in &specs {
            let closed = spec.phi(&r, z).unwrap();
            let mut series = Complex64::new(0.0, 0.0);
            let mut zn = Complex64::new(1.0, 0.0);
            for n in 0..80 {
                series += spec.phi_n(&r, n) * zn;
                zn *= z;
            }
            assert!(
                (closed - series).norm() < 1e-12,
                "{}: {closed} vs {series}",
                spec.describe()
            );
        }
    }

    #[test]
    fn geometric_series_pole_is_reported() {
        let r = quarter();
        let spec = FunctionalSpec::Geometric(Lambda::from_ratio(3, 2));
        assert!(matches!(
            spec.phi(&r, Complex64::new(1.5, 0.0)),
            Err(Error::FunctionalDomain { .. })
        ));
    }
}
