use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by all modules.
///
/// The CLI maps these onto exit codes: domain-style errors (everything up to
/// and including `Regime`) exit 2, `ResourceBound` exits 3, and verification
/// failures detected by the command layer exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain of the requested operation
    /// (`r = 1`, `r = 0` for the closed-form product, `λ = 0`, `z = 0`, ...).
    #[error("parameter domain: {0}")]
    Domain(String),

    /// Basis products in closed form require `1 <= m <= n`; callers must order
    /// the arguments by commutativity.
    #[error("argument order: closed-form product requires m <= n, got m = {m}, n = {n}")]
    ArgumentOrder { m: u32, n: u32 },

    /// `w` lies strictly inside the open cut and no side was specified.
    #[error("branch ambiguity: w = {w} lies inside the cut (-{halfwidth}, {halfwidth}); pick a side")]
    BranchAmbiguous { w: Complex64, halfwidth: f64 },

    /// `w` lies on the cut, where the inverse variable change is not defined.
    #[error("on cut: w = {w} lies on the segment [-{halfwidth}, {halfwidth}]")]
    OnCut { w: Complex64, halfwidth: f64 },

    /// The generating function denominator vanishes at this `(z, t)`.
    #[error("generating function pole at z = {z}, t = {t}")]
    GeneratingFunctionPole { z: Complex64, t: Complex64 },

    /// The functional's power series cannot be evaluated at `z`: the point sits
    /// on (or numerically at) the singularity bounding its disc of convergence.
    #[error("functional series domain: |z| = {z_abs} against radius {radius}")]
    FunctionalDomain { z_abs: f64, radius: f64 },

    /// A measure-producing operation was called for a functional outside the
    /// dual of the C*-algebra.
    #[error("regime: functional is not in A* ({detail})")]
    Regime { detail: String },

    /// A configured resource bound would be exceeded.
    #[error("resource bound: {what} = {requested} exceeds configured maximum {max}")]
    ResourceBound {
        what: &'static str,
        requested: u64,
        max: u64,
    },

    /// Adaptive quadrature could not meet the requested accuracy.
    #[error("quadrature accuracy: achieved error estimate {achieved:e} above requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
