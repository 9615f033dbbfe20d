//! Command-line front end for the hypergroup spectral toolkit.
//!
//! Every subcommand wraps one library operation and prints a deterministic
//! report: JSON documents tagged `"schema": "hypergroup-spectra/1"`, CSV
//! tables with fixed column contracts, or a self-contained SVG density plot.
//! Rational inputs are written `p/q` and stay exact end-to-end wherever the
//! wrapped operation is exact; floats enter only where the numerics begin.
//!
//! Exit codes: `0` success, `2` domain or regime violation, `3` resource
//! bound exceeded, `4` verification failure. Failures print a
//! machine-readable JSON object to stderr.
//!
//! Tolerances and resource bounds can also be set through environment
//! variables (`HYPERGROUP_TOL`, `HYPERGROUP_MAX_DEGREE`, `HYPERGROUP_GRID`,
//! `HYPERGROUP_EPS_COUNT`, `HYPERGROUP_MAX_LEN`, `HYPERGROUP_BALL_RADIUS`);
//! explicit flags take precedence.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use hypergroup_spectra::algebra::HyperAlgebra;
use hypergroup_spectra::spectra::{self, FunctionalSpec, Lambda, RegimeCase, SpectralMeasure};
use hypergroup_spectra::transform::{self, DensitySample, EpsSchedule, InversionConfig};
use hypergroup_spectra::{freegroup, plot, serialize};
use hypergroup_spectra::{Error, Param, SCHEMA_TAG};

/// Largest `m + n` accepted by `product`.
const MAX_PRODUCT_DEGREE: u64 = 4096;
/// Largest degree accepted by `poly` and `moments`.
const MAX_TABLE_DEGREE: u64 = 2048;
/// Largest density grid accepted by `measure`, `invert`, `plot`.
const MAX_GRID: u64 = 20_000;

#[derive(Parser)]
#[command(
    name = "hypergroup",
    version,
    about = "Exact products, spectral measures, and free-group oracles for a \
             one-parameter family of polynomial hypergroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact structure constants of the basis product h_m · h_n
    Product(ProductArgs),
    /// Coefficient table of the orthogonal polynomials P_n
    Poly(PolyArgs),
    /// Regime classification of the geometric functional φ_n = λ^{-n}
    Classify(ClassifyArgs),
    /// Closed-form spectral measure of a geometric functional
    Measure(MeasureArgs),
    /// Numeric Stieltjes inversion, compared against the closed form
    Invert(InvertArgs),
    /// Moment-recovery verification for a functional
    Moments(MomentsArgs),
    /// Free-group word-count convolution versus the algebra product
    Oracle(OracleArgs),
    /// Positivity of the Gram matrix of λ^{-|g|} on a free-group ball
    Gram(GramArgs),
    /// SVG density plot of a spectral measure
    Plot(PlotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// Exactly one way of picking the linear functional under study.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct FunctionalArgs {
    /// Geometric functional φ_n = λ^{-n}; λ as `p/q`, decimal, or `a+bi`
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// The state φ_n = δ_{n,0} (Plancherel measure)
    #[arg(long)]
    plancherel: bool,
    /// Point-evaluation character φ_n = P_n(c) at real c
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
}

impl FunctionalArgs {
    fn to_spec(&self) -> Result<FunctionalSpec, Error> {
        if let Some(text) = &self.lambda {
            return Ok(FunctionalSpec::Geometric(Lambda::parse(text)?));
        }
        if let Some(text) = &self.point {
            return Ok(FunctionalSpec::PointEval(Complex64::new(
                parse_real(text)?,
                0.0,
            )));
        }
        Ok(FunctionalSpec::DeltaAt0)
    }
}

#[derive(Args)]
struct ProductArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    /// First basis degree
    #[arg(short)]
    m: u32,
    /// Second basis degree
    #[arg(short)]
    n: u32,
    /// Cross-verify the recursive product against the closed form and, at
    /// r = 1/(2l), against free-group word counts; mismatches exit nonzero
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PolyArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    /// Highest polynomial degree in the table
    #[arg(short = 'N', long, env = "HYPERGROUP_MAX_DEGREE", default_value_t = 10)]
    max_degree: u32,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    /// Geometric parameter λ: `p/q`, decimal, or `a+bi`
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MeasureArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    /// Geometric parameter λ: `p/q`, decimal, or `a+bi`
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Number of density samples in the CSV/SVG outputs
    #[arg(long, env = "HYPERGROUP_GRID", default_value_t = 200)]
    grid: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct InvertArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    #[command(flatten)]
    functional: FunctionalArgs,
    /// Number of density samples across the cut
    #[arg(long, env = "HYPERGROUP_GRID", default_value_t = 200)]
    grid: u64,
    /// Number of boundary offsets ε_k = 10⁻²·2⁻ᵏ in the schedule
    #[arg(long, env = "HYPERGROUP_EPS_COUNT", default_value_t = 9)]
    eps_count: u32,
    /// Fail (exit 4) if the numeric result differs from the closed form by
    /// more than this
    #[arg(long, env = "HYPERGROUP_TOL")]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MomentsArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    #[command(flatten)]
    functional: FunctionalArgs,
    /// Highest moment degree verified
    #[arg(short = 'N', long, env = "HYPERGROUP_MAX_DEGREE", default_value_t = 15)]
    max_degree: u32,
    /// Largest tolerated |moment − φ_n|
    #[arg(long, env = "HYPERGROUP_TOL", default_value_t = 1e-7)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Free-group rank l; the product side runs at r = 1/(2l)
    #[arg(short = 'l', long = "rank")]
    rank: u32,
    /// Compare all products h_m · h_n with 1 ≤ m ≤ n ≤ this
    #[arg(long, env = "HYPERGROUP_MAX_LEN", default_value_t = 6)]
    max_len: u32,
    /// Print the word-count convolution table for this single h_m · h_n
    /// instead of sweeping (requires -n)
    #[arg(short, requires = "n")]
    m: Option<u32>,
    /// Second degree for the single-pair table
    #[arg(short, requires = "m")]
    n: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct GramArgs {
    /// Free-group rank l
    #[arg(short = 'l', long = "rank")]
    rank: u32,
    /// Ball radius N; the Gram matrix lives on words of length ≤ N
    #[arg(short = 'N', long = "ball-radius", env = "HYPERGROUP_BALL_RADIUS", default_value_t = 3)]
    ball_radius: u32,
    /// Real λ defining the functional λ^{-|g|}
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Check that λ and −λ give the same minimal eigenvalue instead
    #[arg(long)]
    twist: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PlotArgs {
    /// Recurrence parameter r, as `p/q` or a float
    #[arg(short = 'r', long = "param", allow_hyphen_values = true)]
    r: String,
    #[command(flatten)]
    functional: FunctionalArgs,
    /// Number of density samples along the curve
    #[arg(long, env = "HYPERGROUP_GRID", default_value_t = 400)]
    grid: u64,
    /// Plot title; defaults to a description of the measure
    #[arg(long)]
    title: Option<String>,
    /// Write the SVG to a file instead of stdout
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let dto = serialize::error_dto(&err);
            eprintln!("{}", to_json(&dto));
            std::process::exit(serialize::exit_code(&err));
        }
    }
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::Product(args) => cmd_product(args),
        Command::Poly(args) => cmd_poly(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Measure(args) => cmd_measure(args),
        Command::Invert(args) => cmd_invert(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gram(args) => cmd_gram(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::domain(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn unsupported(command: &str, format: Format) -> Error {
    Error::domain(format!(
        "`{command}` does not support --format {}",
        format.name()
    ))
}

fn parse_real(text: &str) -> Result<f64, Error> {
    let value = Lambda::parse(text)?;
    if !value.is_real() {
        return Err(Error::domain(format!("expected a real value, got {text:?}")));
    }
    Ok(value.value().re)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// The rank `l` with `r = 1/(2l)`, when there is one.
fn free_group_rank(r: &Param) -> Option<u32> {
    let q = r.rational();
    if !q.numer().is_one() {
        return None;
    }
    let den = q.denom().to_u32()?;
    if den % 2 != 0 {
        return None;
    }
    let l = den / 2;
    (1..=63).contains(&l).then_some(l)
}

fn degree_map(product: &hypergroup_spectra::algebra::RatElement) -> BTreeMap<u32, BigRational> {
    product.iter().map(|(k, c)| (k, c.clone())).collect()
}

#[derive(Serialize)]
struct CheckDto {
    closed_form: &'static str,
    free_group: &'static str,
    all_agree: bool,
}

#[derive(Serialize)]
struct ProductReport {
    schema: &'static str,
    r: String,
    m: u32,
    n: u32,
    terms: Vec<serialize::TermDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<CheckDto>,
}

fn cmd_product(args: ProductArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    let (m, n) = (args.m.min(args.n), args.m.max(args.n));
    if u64::from(m) + u64::from(n) > MAX_PRODUCT_DEGREE {
        return Err(Error::ResourceBound {
            what: "product degree m + n",
            requested: u64::from(m) + u64::from(n),
            max: MAX_PRODUCT_DEGREE,
        });
    }
    let algebra = HyperAlgebra::new(r.clone());
    let product = algebra.mul_basis(m, n);

    let mut failed = false;
    let check = if args.check {
        let closed_form = if r.is_zero() || m == 0 {
            "not-applicable"
        } else if algebra.mul_basis_closed(m, n)? == *product {
            "agree"
        } else {
            failed = true;
            "mismatch"
        };
        let free_group = match free_group_rank(&r) {
            None => "not-applicable",
            Some(l) => match freegroup::radial_convolve(l, m, n) {
                Ok(words) => {
                    if words == degree_map(&product) {
                        "agree"
                    } else {
                        failed = true;
                        "mismatch"
                    }
                }
                Err(Error::ResourceBound { .. }) => "too-large",
                Err(other) => return Err(other),
            },
        };
        Some(CheckDto {
            closed_form,
            free_group,
            all_agree: !failed,
        })
    } else {
        None
    };

    match args.out.format {
        Format::Json => {
            let dto = serialize::product_dto(&r, m, n, &product);
            let report = ProductReport {
                schema: dto.schema,
                r: dto.r,
                m: dto.m,
                n: dto.n,
                terms: dto.terms,
                check,
            };
            write_out(&args.out.output, &to_json(&report))?;
        }
        Format::Csv => write_out(&args.out.output, &serialize::product_csv(&product))?,
        Format::Svg => return Err(unsupported("product", Format::Svg)),
    }
    Ok(if failed { 4 } else { 0 })
}

fn cmd_poly(args: PolyArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    if u64::from(args.max_degree) > MAX_TABLE_DEGREE {
        return Err(Error::ResourceBound {
            what: "polynomial table degree",
            requested: u64::from(args.max_degree),
            max: MAX_TABLE_DEGREE,
        });
    }
    let seq = hypergroup_spectra::orthopoly::PolySeq::new(r.clone());
    let rows: Vec<(u32, Vec<BigRational>)> = (0..=args.max_degree)
        .map(|n| (n, seq.coefficients(n).as_ref().clone()))
        .collect();
    match args.out.format {
        Format::Json => write_out(&args.out.output, &to_json(&serialize::poly_dto(&r, &rows)))?,
        Format::Csv => write_out(&args.out.output, &serialize::poly_csv(&rows))?,
        Format::Svg => return Err(unsupported("poly", Format::Svg)),
    }
    Ok(0)
}

fn cmd_classify(args: ClassifyArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    let lambda = Lambda::parse(&args.lambda)?;
    let regime = spectra::classify(&r, &lambda)?;
    let dto = serialize::classify_dto(&r, &lambda, &regime);
    match args.out.format {
        Format::Json => write_out(&args.out.output, &to_json(&dto))?,
        Format::Csv => {
            let csv = format!(
                "r,lambda,case,reduced_continuous,critical_rel,unit_rel,imag_part\n{},{},{},{},{},{},{}\n",
                dto.r,
                dto.lambda,
                dto.case,
                dto.reduced_continuous,
                dto.boundary.critical_rel,
                dto.boundary.unit_rel,
                dto.boundary.imag_part,
            );
            write_out(&args.out.output, &csv)?;
        }
        Format::Svg => return Err(unsupported("classify", Format::Svg)),
    }
    Ok(0)
}

/// Evenly spaced density samples over the interior of the support, leaving a
/// 2.5% margin at each edge (where the case-(ii) densities blow up).
fn sample_grid(measure: &SpectralMeasure, points: u64) -> Vec<DensitySample> {
    let (lo, hi) = measure.support();
    let margin = 0.025 * (hi - lo);
    let (lo, hi) = (lo + margin, hi - margin);
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            DensitySample {
                t,
                value: measure.density_at(t),
                residual: 0.0,
                converged: true,
            }
        })
        .collect()
}

fn measure_svg(title: &str, measure: &SpectralMeasure, points: u64) -> String {
    let curve: Vec<(f64, f64)> = sample_grid(measure, points)
        .iter()
        .map(|s| (s.t, s.value.re))
        .collect();
    let atoms: Vec<(f64, f64)> = measure.atoms().iter().map(|(t, w)| (*t, w.re)).collect();
    plot::density_svg(title, &curve, &atoms)
}

fn check_grid(points: u64) -> Result<(), Error> {
    if points > MAX_GRID {
        return Err(Error::ResourceBound {
            what: "density grid points",
            requested: points,
            max: MAX_GRID,
        });
    }
    Ok(())
}

fn cmd_measure(args: MeasureArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    check_grid(args.grid)?;
    let lambda = Lambda::parse(&args.lambda)?;
    let regime = spectra::classify(&r, &lambda)?;
    if regime.case == RegimeCase::NotInAstar {
        write_out(
            &args.out.output,
            &to_json(&serialize::classify_dto(&r, &lambda, &regime)),
        )?;
        return Err(Error::Regime {
            detail: format!("λ = {lambda} is not a bounded functional; no spectral measure exists"),
        });
    }
    let spec = FunctionalSpec::Geometric(lambda.clone());
    let measure = spectra::geometric_measure(&r, &lambda)?;
    let mass = measure.mass()?;
    match args.out.format {
        Format::Json => {
            let dto = serialize::measure_dto(&r, spec.describe(), &regime, &measure, mass);
            write_out(&args.out.output, &to_json(&dto))?;
        }
        Format::Csv => write_out(
            &args.out.output,
            &serialize::density_csv(&sample_grid(&measure, args.grid)),
        )?,
        Format::Svg => {
            let title = format!(
                "spectral density: r = {}, {}",
                serialize::rational_str(r.rational()),
                spec.describe()
            );
            write_out(&args.out.output, &measure_svg(&title, &measure, args.grid))?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct InvertRow {
    t: f64,
    re_density: f64,
    im_density: f64,
    residual: Option<f64>,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
}

#[derive(Serialize)]
struct InvertAtomRow {
    location: f64,
    weight_re: f64,
    weight_im: f64,
    residual: Option<f64>,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_weight_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_weight_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
}

#[derive(Serialize)]
struct InvertReport {
    schema: &'static str,
    r: String,
    functional: String,
    epsilons: Vec<f64>,
    grid: Vec<InvertRow>,
    atoms: Vec<InvertAtomRow>,
    all_converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_density_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_atom_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
}

fn eps_schedule(count: u32) -> Result<EpsSchedule, Error> {
    if !(5..=64).contains(&count) {
        return Err(Error::domain(format!(
            "eps-count must be between 5 and 64, got {count}"
        )));
    }
    Ok(EpsSchedule(
        (0..count).map(|k| 1e-2 * 2f64.powi(-(k as i32))).collect(),
    ))
}

fn cmd_invert(args: InvertArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    check_grid(args.grid)?;
    let spec = args.functional.to_spec()?;
    let closed = spectra::measure_of(&r, &spec).ok();
    let config = InversionConfig {
        schedule: eps_schedule(args.eps_count)?,
        grid_points: args.grid as usize,
        atom_candidates: closed
            .as_ref()
            .map(|m| m.atoms().iter().map(|(t, _)| *t).collect())
            .unwrap_or_default(),
        ..InversionConfig::default()
    };
    let result = transform::invert(&r, &spec, &config);
    let all_converged =
        result.grid.iter().all(|s| s.converged) && result.atoms.iter().all(|a| a.converged);

    let mut max_density_diff = closed.as_ref().map(|_| 0.0f64);
    let grid_rows: Vec<InvertRow> = result
        .grid
        .iter()
        .map(|s| {
            let closed_value = closed.as_ref().map(|m| m.density_at(s.t));
            let diff = closed_value.map(|cv| (s.value - cv).norm());
            if let (Some(d), true) = (diff, s.converged) {
                let slot = max_density_diff.as_mut().expect("closed form present");
                *slot = slot.max(d);
            }
            InvertRow {
                t: s.t,
                re_density: s.value.re,
                im_density: s.value.im,
                residual: finite(s.residual),
                converged: s.converged,
                closed_re: closed_value.map(|c| c.re),
                closed_im: closed_value.map(|c| c.im),
                abs_diff: diff,
            }
        })
        .collect();

    let mut max_atom_diff = closed.as_ref().map(|_| 0.0f64);
    let atom_rows: Vec<InvertAtomRow> = result
        .atoms
        .iter()
        .map(|a| {
            let closed_weight = closed.as_ref().map(|m| {
                m.atoms()
                    .iter()
                    .find(|(t, _)| (t - a.location).abs() <= 1e-9)
                    .map(|(_, w)| *w)
                    .unwrap_or_default()
            });
            let diff = closed_weight.map(|cw| (a.weight - cw).norm());
            if let (Some(d), true) = (diff, a.converged) {
                let slot = max_atom_diff.as_mut().expect("closed form present");
                *slot = slot.max(d);
            }
            InvertAtomRow {
                location: a.location,
                weight_re: a.weight.re,
                weight_im: a.weight.im,
                residual: finite(a.residual),
                converged: a.converged,
                closed_weight_re: closed_weight.map(|w| w.re),
                closed_weight_im: closed_weight.map(|w| w.im),
                abs_diff: diff,
            }
        })
        .collect();

    let pass = match (args.tol, max_density_diff, max_atom_diff) {
        (Some(tol), Some(dd), Some(ad)) => Some(all_converged && dd <= tol && ad <= tol),
        _ => None,
    };

    match args.out.format {
        Format::Json => {
            let report = InvertReport {
                schema: SCHEMA_TAG,
                r: serialize::rational_str(r.rational()),
                functional: spec.describe(),
                epsilons: result.schedule.clone(),
                grid: grid_rows,
                atoms: atom_rows,
                all_converged,
                max_density_diff,
                max_atom_diff,
                tol: args.tol,
                pass,
            };
            write_out(&args.out.output, &to_json(&report))?;
        }
        Format::Csv => {
            let csv = if closed.is_some() {
                let mut out =
                    String::from("t,re_density,im_density,residual,closed_re,closed_im,abs_diff\n");
                for row in &grid_rows {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        row.t,
                        row.re_density,
                        row.im_density,
                        row.residual.unwrap_or(f64::INFINITY),
                        row.closed_re.expect("closed form present"),
                        row.closed_im.expect("closed form present"),
                        row.abs_diff.expect("closed form present"),
                    ));
                }
                out
            } else {
                serialize::density_csv(&result.grid)
            };
            write_out(&args.out.output, &csv)?;
        }
        Format::Svg => return Err(unsupported("invert", Format::Svg)),
    }
    Ok(if pass == Some(false) { 4 } else { 0 })
}

fn cmd_moments(args: MomentsArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    if u64::from(args.max_degree) > MAX_TABLE_DEGREE {
        return Err(Error::ResourceBound {
            what: "moment verification degree",
            requested: u64::from(args.max_degree),
            max: MAX_TABLE_DEGREE,
        });
    }
    let spec = args.functional.to_spec()?;
    let report = spectra::verify_functional(&r, &spec, args.max_degree, args.tol)?;
    match args.out.format {
        Format::Json => write_out(
            &args.out.output,
            &to_json(&serialize::moments_dto(&r, spec.describe(), &report)),
        )?,
        Format::Csv => write_out(&args.out.output, &serialize::moments_csv(&report.rows))?,
        Format::Svg => return Err(unsupported("moments", Format::Svg)),
    }
    Ok(if report.pass { 0 } else { 4 })
}

#[derive(Serialize)]
struct OraclePair {
    m: u32,
    n: u32,
    agree: bool,
}

#[derive(Serialize)]
struct OracleReport {
    schema: &'static str,
    l: u32,
    r: String,
    max_len: u32,
    pairs: Vec<OraclePair>,
    all_agree: bool,
}

#[derive(Serialize)]
struct ConvolutionReport {
    schema: &'static str,
    l: u32,
    r: String,
    m: u32,
    n: u32,
    terms: Vec<serialize::TermDto>,
    agree: bool,
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, Error> {
    if args.rank == 0 {
        return Err(Error::domain("free-group rank l must be at least 1"));
    }
    let r = Param::from_ratio(1, 2 * i64::from(args.rank))?;
    let algebra = HyperAlgebra::new(r.clone());

    if let (Some(m), Some(n)) = (args.m, args.n) {
        let (m, n) = (m.min(n), m.max(n));
        let words = freegroup::radial_convolve(args.rank, m, n)?;
        let agree = words == degree_map(&algebra.mul_basis(m, n));
        match args.out.format {
            Format::Json => {
                let report = ConvolutionReport {
                    schema: SCHEMA_TAG,
                    l: args.rank,
                    r: serialize::rational_str(r.rational()),
                    m,
                    n,
                    terms: words
                        .iter()
                        .map(|(degree, c)| serialize::TermDto {
                            degree: *degree,
                            coefficient: serialize::rational_str(c),
                        })
                        .collect(),
                    agree,
                };
                write_out(&args.out.output, &to_json(&report))?;
            }
            Format::Csv => {
                let mut out = String::from("degree,coefficient\n");
                for (degree, c) in &words {
                    out.push_str(&format!("{degree},{}\n", serialize::rational_str(c)));
                }
                write_out(&args.out.output, &out)?;
            }
            Format::Svg => return Err(unsupported("oracle", Format::Svg)),
        }
        return Ok(if agree { 0 } else { 4 });
    }

    let mut pairs = Vec::new();
    let mut all_agree = true;
    for m in 1..=args.max_len {
        for n in m..=args.max_len {
            let words = freegroup::radial_convolve(args.rank, m, n)?;
            let agree = words == degree_map(&algebra.mul_basis(m, n));
            all_agree &= agree;
            pairs.push(OraclePair { m, n, agree });
        }
    }
    match args.out.format {
        Format::Json => {
            let report = OracleReport {
                schema: SCHEMA_TAG,
                l: args.rank,
                r: serialize::rational_str(r.rational()),
                max_len: args.max_len,
                pairs,
                all_agree,
            };
            write_out(&args.out.output, &to_json(&report))?;
        }
        Format::Csv => {
            let mut out = String::from("m,n,agree\n");
            for pair in &pairs {
                out.push_str(&format!("{},{},{}\n", pair.m, pair.n, pair.agree));
            }
            write_out(&args.out.output, &out)?;
        }
        Format::Svg => return Err(unsupported("oracle", Format::Svg)),
    }
    Ok(if all_agree { 0 } else { 4 })
}

fn cmd_gram(args: GramArgs) -> Result<i32, Error> {
    let lambda = parse_real(&args.lambda)?;
    if args.twist {
        let report = freegroup::sign_twist_check(args.rank, args.ball_radius, lambda)?;
        let dto = serialize::sign_twist_dto(args.rank, args.ball_radius, &report);
        match args.out.format {
            Format::Json => write_out(&args.out.output, &to_json(&dto))?,
            Format::Csv => {
                let csv = format!(
                    "l,n_max,lambda,dim,min_eig_plus,min_eig_minus,min_eig_diff,pass\n{},{},{},{},{},{},{},{}\n",
                    dto.l,
                    dto.n_max,
                    dto.lambda,
                    dto.dim,
                    dto.min_eig_plus,
                    dto.min_eig_minus,
                    dto.min_eig_diff,
                    dto.pass,
                );
                write_out(&args.out.output, &csv)?;
            }
            Format::Svg => return Err(unsupported("gram", Format::Svg)),
        }
        Ok(if report.pass { 0 } else { 4 })
    } else {
        let report = freegroup::haagerup_gram(args.rank, args.ball_radius, lambda)?;
        let dto = serialize::gram_dto(args.rank, args.ball_radius, &report);
        match args.out.format {
            Format::Json => write_out(&args.out.output, &to_json(&dto))?,
            Format::Csv => {
                let csv = format!(
                    "l,n_max,lambda,dim,min_eig,max_eig,psd,eigen_residual\n{},{},{},{},{},{},{},{}\n",
                    dto.l,
                    dto.n_max,
                    dto.lambda,
                    dto.dim,
                    dto.min_eig,
                    dto.max_eig,
                    dto.psd,
                    dto.eigen_residual,
                );
                write_out(&args.out.output, &csv)?;
            }
            Format::Svg => return Err(unsupported("gram", Format::Svg)),
        }
        Ok(0)
    }
}

fn cmd_plot(args: PlotArgs) -> Result<i32, Error> {
    let r = Param::parse(&args.r)?;
    check_grid(args.grid)?;
    let spec = args.functional.to_spec()?;
    let measure = spectra::measure_of(&r, &spec)?;
    let title = args.title.unwrap_or_else(|| {
        format!(
            "spectral density: r = {}, {}",
            serialize::rational_str(r.rational()),
            spec.describe()
        )
    });
    write_out(&args.output, &measure_svg(&title, &measure, args.grid))?;
    Ok(0)
}
