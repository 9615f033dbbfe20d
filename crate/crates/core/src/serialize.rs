//! JSON and CSV shapes for the command-line front end.
//!
//! Every JSON document carries the [`crate::SCHEMA_TAG`] so consumers can
//! detect format drift. Rational quantities are rendered as `p/q` strings and
//! survive a round trip exactly; floats use the shortest representation that
//! reparses to the same value, so repeated runs produce byte-identical
//! output. Non-finite residuals (from diverging inversions) become `null` in
//! JSON and `inf` in CSV.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::algebra::RatElement;
use crate::error::Error;
use crate::freegroup::{GramReport, SignTwistReport};
use crate::param::Param;
use crate::spectra::{DensityKind, Lambda, MomentRow, Regime, RegimeCase, SpectralMeasure, VerifyReport};
use crate::transform::{DensitySample, InversionResult};
use crate::SCHEMA_TAG;

/// `p/q`, shortened to `p` when the denominator is one.
pub fn rational_str(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn regime_name(case: RegimeCase) -> &'static str {
    match case {
        RegimeCase::NotInAstar => "not-in-dual",
        RegimeCase::ContinuousOnly => "continuous-only",
        RegimeCase::ContinuousPlusAtom => "continuous-plus-atom",
        RegimeCase::DiracAtEdge => "dirac-at-edge",
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Serialize)]
pub struct TermDto {
    pub degree: u32,
    pub coefficient: String,
}

#[derive(Debug, Serialize)]
pub struct ProductDto {
    pub schema: &'static str,
    pub r: String,
    pub m: u32,
    pub n: u32,
    pub terms: Vec<TermDto>,
}

pub fn product_dto(r: &Param, m: u32, n: u32, product: &RatElement) -> ProductDto {
    ProductDto {
        schema: SCHEMA_TAG,
        r: rational_str(r.rational()),
        m,
        n,
        terms: product
            .iter()
            .map(|(degree, c)| TermDto {
                degree,
                coefficient: rational_str(c),
            })
            .collect(),
    }
}

/// CSV with header `degree,coefficient`, one row per nonzero term.
pub fn product_csv(product: &RatElement) -> String {
    let mut out = String::from("degree,coefficient\n");
    for (degree, c) in product.iter() {
        out.push_str(&format!("{degree},{}\n", rational_str(c)));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct PolyRowDto {
    pub n: u32,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PolyDto {
    pub schema: &'static str,
    pub r: String,
    pub rows: Vec<PolyRowDto>,
}

pub fn poly_dto(r: &Param, rows: &[(u32, Vec<BigRational>)]) -> PolyDto {
    PolyDto {
        schema: SCHEMA_TAG,
        r: rational_str(r.rational()),
        rows: rows
            .iter()
            .map(|(n, coeffs)| PolyRowDto {
                n: *n,
                coefficients: coeffs.iter().map(rational_str).collect(),
            })
            .collect(),
    }
}

/// Rectangular CSV `n,c0,…,cN`; coefficients above a row's degree are `0`.
pub fn poly_csv(rows: &[(u32, Vec<BigRational>)]) -> String {
    let width = rows.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let mut out = String::from("n");
    for j in 0..width {
        out.push_str(&format!(",c{j}"));
    }
    out.push('\n');
    for (n, coeffs) in rows {
        out.push_str(&n.to_string());
        for j in 0..width {
            out.push(',');
            match coeffs.get(j) {
                Some(c) => out.push_str(&rational_str(c)),
                None => out.push('0'),
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct BoundaryDto {
    pub critical_rel: f64,
    pub unit_rel: f64,
    pub imag_part: f64,
}

#[derive(Debug, Serialize)]
pub struct ClassifyDto {
    pub schema: &'static str,
    pub r: String,
    pub lambda: String,
    pub case: &'static str,
    pub reduced_continuous: bool,
    pub boundary: BoundaryDto,
}

pub fn classify_dto(r: &Param, lambda: &Lambda, regime: &Regime) -> ClassifyDto {
    ClassifyDto {
        schema: SCHEMA_TAG,
        r: rational_str(r.rational()),
        lambda: lambda.to_string(),
        case: regime_name(regime.case),
        reduced_continuous: regime.reduced_continuous,
        boundary: BoundaryDto {
            critical_rel: regime.boundary_proximity.critical_rel,
            unit_rel: regime.boundary_proximity.unit_rel,
            imag_part: regime.boundary_proximity.imag_part,
        },
    }
}

#[derive(Debug, Serialize)]
pub struct AtomDto {
    pub location: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location_exact: Option<String>,
    pub weight_re: f64,
    pub weight_im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_exact: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct MeasureDto {
    pub schema: &'static str,
    pub r: String,
    pub functional: String,
    pub case: &'static str,
    pub reduced_continuous: bool,
    pub support: [f64; 2],
    pub density: &'static str,
    pub atoms: Vec<AtomDto>,
    pub mass_re: f64,
    pub mass_im: f64,
}

pub fn measure_dto(
    r: &Param,
    functional: String,
    regime: &Regime,
    measure: &SpectralMeasure,
    mass: Complex64,
) -> MeasureDto {
    let exact = measure.atoms_exact();
    let atoms = measure
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, (loc, w))| {
            let pair = exact.get(i).filter(|_| exact.len() == measure.atoms().len());
            AtomDto {
                location: *loc,
                location_exact: pair.map(|(l, _)| rational_str(l)),
                weight_re: w.re,
                weight_im: w.im,
                weight_exact: pair.map(|(_, w)| rational_str(w)),
            }
        })
        .collect();
    let (lo, hi) = measure.support();
    MeasureDto {
        schema: SCHEMA_TAG,
        r: rational_str(r.rational()),
        functional,
        case: regime_name(regime.case),
        reduced_continuous: regime.reduced_continuous,
        support: [lo, hi],
        density: match measure.kind() {
            DensityKind::Zero => "zero",
            DensityKind::Plancherel => "plancherel",
            DensityKind::Geometric { edge: None, .. } => "geometric",
            DensityKind::Geometric { edge: Some(_), .. } => "geometric-edge",
        },
        atoms,
        mass_re: mass.re,
        mass_im: mass.im,
    }
}

#[derive(Debug, Serialize)]
pub struct MomentRowDto {
    pub n: u32,
    pub expected_re: f64,
    pub expected_im: f64,
    pub computed_re: f64,
    pub computed_im: f64,
    pub abs_error: f64,
}

#[derive(Debug, Serialize)]
pub struct MomentsDto {
    pub schema: &'static str,
    pub r: String,
    pub functional: String,
    pub tol: f64,
    pub max_error: f64,
    pub pass: bool,
    pub rows: Vec<MomentRowDto>,
}

pub fn moments_dto(r: &Param, functional: String, report: &VerifyReport) -> MomentsDto {
    MomentsDto {
        schema: SCHEMA_TAG,
        r: rational_str(r.rational()),
        functional,
        tol: report.tol,
        max_error: report.max_error,
        pass: report.pass,
        rows: report.rows.iter().map(moment_row_dto).collect(),
    }
}

fn moment_row_dto(row: &MomentRow) -> MomentRowDto {
    MomentRowDto {
        n: row.n,
        expected_re: row.expected.re,
        expected_im: row.expected.im,
        computed_re: row.computed.re,
        computed_im: row.computed.im,
        abs_error: row.abs_error,
    }
}

/// CSV with header `n,expected_re,expected_im,computed_re,computed_im,abs_error`.
pub fn moments_csv(rows: &[MomentRow]) -> String {
    let mut out = String::from("n,expected_re,expected_im,computed_re,computed_im,abs_error\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.n, row.expected.re, row.expected.im, row.computed.re, row.computed.im, row.abs_error
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct GridRowDto {
    pub t: f64,
    pub re_density: f64,
    pub im_density: f64,
    pub residual: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct InvertAtomDto {
    pub location: f64,
    pub weight_re: f64,
    pub weight_im: f64,
    pub residual: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct InvertDto {
    pub schema: &'static str,
    pub r: String,
    pub functional: String,
    pub epsilons: Vec<f64>,
    pub grid: Vec<GridRowDto>,
    pub atoms: Vec<InvertAtomDto>,
    pub all_converged: bool,
}

pub fn invert_dto(r: &Param, functional: String, result: &InversionResult) -> InvertDto {
    let all_converged = result.grid.iter().all(|s| s.converged)
        && result.atoms.iter().all(|a| a.converged);
    InvertDto {
        schema: SCHEMA_TAG,
        r: rational_str(r.rational()),
        functional,
        epsilons: result.schedule.clone(),
        grid: result
            .grid
            .iter()
            .map(|s| GridRowDto {
                t: s.t,
                re_density: s.value.re,
                im_density: s.value.im,
                residual: finite(s.residual),
                converged: s.converged,
            })
            .collect(),
        atoms: result
            .atoms
            .iter()
            .map(|a| InvertAtomDto {
                location: a.location,
                weight_re: a.weight.re,
                weight_im: a.weight.im,
                residual: finite(a.residual),
                converged: a.converged,
            })
            .collect(),
        all_converged,
    }
}

/// CSV with header `t,re_density,im_density,residual`.
pub fn density_csv(samples: &[DensitySample]) -> String {
    let mut out = String::from("t,re_density,im_density,residual\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.t, s.value.re, s.value.im, s.residual
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct GramDto {
    pub schema: &'static str,
    pub l: u32,
    pub n_max: u32,
    pub lambda: f64,
    pub dim: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub psd: bool,
    pub eigen_residual: f64,
}

pub fn gram_dto(l: u32, n_max: u32, report: &GramReport) -> GramDto {
    GramDto {
        schema: SCHEMA_TAG,
        l,
        n_max,
        lambda: report.lambda,
        dim: report.dim,
        min_eig: report.min_eig,
        max_eig: report.max_eig,
        psd: report.psd,
        eigen_residual: report.eigen_residual,
    }
}

#[derive(Debug, Serialize)]
pub struct SignTwistDto {
    pub schema: &'static str,
    pub l: u32,
    pub n_max: u32,
    pub lambda: f64,
    pub dim: usize,
    pub min_eig_plus: f64,
    pub min_eig_minus: f64,
    pub min_eig_diff: f64,
    pub pass: bool,
}

pub fn sign_twist_dto(l: u32, n_max: u32, report: &SignTwistReport) -> SignTwistDto {
    SignTwistDto {
        schema: SCHEMA_TAG,
        l,
        n_max,
        lambda: report.plus.lambda,
        dim: report.plus.dim,
        min_eig_plus: report.plus.min_eig,
        min_eig_minus: report.minus.min_eig,
        min_eig_diff: report.min_eig_diff,
        pass: report.pass,
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorDto {
    pub schema: &'static str,
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Domain(_) => "domain",
        Error::ArgumentOrder { .. } => "argument-order",
        Error::BranchAmbiguous { .. } => "branch-ambiguous",
        Error::OnCut { .. } => "on-cut",
        Error::GeneratingFunctionPole { .. } => "generating-function-pole",
        Error::FunctionalDomain { .. } => "functional-domain",
        Error::Regime { .. } => "regime",
        Error::ResourceBound { .. } => "resource-bound",
        Error::Quadrature { .. } => "quadrature",
    }
}

/// Process exit code for an error: 2 for domain and regime violations,
/// 3 for resource bounds, 4 for failed numerical verification.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceBound { .. } => 3,
        Error::Quadrature { .. } => 4,
        _ => 2,
    }
}

pub fn error_dto(err: &Error) -> ErrorDto {
    ErrorDto {
        schema: SCHEMA_TAG,
        kind: error_kind(err),
        message: err.to_string(),
        exit_code: exit_code(err),
    }
}
