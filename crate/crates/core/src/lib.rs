//! Harmonic analysis on a one-parameter family of polynomial hypergroups.
//!
//! The algebra is generated by a hermitian basis `h_0, h_1, h_2, ...` subject to
//! `h_0 h_n = h_n` and the three-term relation
//!
//! ```text
//! h_1 h_n = r h_{n-1} + (1 - r) h_{n+1}        (n >= 1)
//! ```
//!
//! for a real parameter `r != 1`. For `0 <= r <= 1/2` the structure constants are
//! non-negative and sum to one, so the basis products are probability vectors and
//! the algebra is a discrete hypergroup. At `r = 1/(2l)` the same relations are
//! realized by radial functions on the free group with `l` generators, which gives
//! an independent combinatorial route to every structure constant.
//!
//! The crate is organized around that double bookkeeping:
//!
//! * [`algebra`] — exact rational arithmetic in the hypergroup algebra: recursive
//!   and closed-form basis products, bilinear products, involution, the l¹ norm.
//! * [`orthopoly`] — the associated orthogonal polynomials `P_n(t)`, their
//!   generating function, point-evaluation functionals and the boundedness test
//!   for characters.
//! * [`transform`] — branch-cut-aware complex analysis: the square root with cut
//!   `I_r = [-2√(r(1-r)), 2√(r(1-r))]`, the Joukowski-type variable change
//!   `w = rz + (1-r)/z` and its inverse branches, Cauchy transforms, and numeric
//!   Stieltjes inversion with atom detection.
//! * [`spectra`] — closed-form spectral measures (Plancherel and geometric-series
//!   functionals), regime classification, quadrature-based moment verification.
//! * [`freegroup`] — reduced-word enumeration in the free group, radial
//!   convolution by counting, and Haagerup Gram-matrix positivity checks.
//! * [`serialize`] / [`plot`] — JSON/CSV emitters and a self-contained SVG
//!   density plotter shared by the CLI and the browser demo.

pub mod algebra;
pub mod error;
pub mod freegroup;
pub mod orthopoly;
pub mod param;
pub mod plot;
pub mod quad;
pub mod serialize;
pub mod spectra;
pub mod transform;

pub use error::{Error, Result};
pub use param::Param;

/// Version tag stamped into every JSON document the tools emit.
pub const SCHEMA_TAG: &str = "hypergroup-spectra/1";
