//! Browser bindings for the hypergroup spectral toolkit.
//!
//! Three operations are exported through `wasm-bindgen`, all with plain
//! string/number signatures so the page needs no glue beyond the generated
//! module:
//!
//! * [`product_json`] — exact structure constants of `h_m · h_n`.
//! * [`measure_json`] — regime classification and the closed-form spectral
//!   measure of the geometric functional `φ_n = λ^{-n}`.
//! * [`density_svg`] — a self-contained SVG plot of the density with atom
//!   markers.
//!
//! Every function returns a `String`: an SVG document for the plot, JSON for
//! everything else. Failures return the same machine-readable error JSON the
//! command-line tool prints (`"kind"`, `"message"`, `"exit_code"`), so a
//! caller can check for the `<svg` prefix or the `"kind"` key instead of
//! handling exceptions.

use wasm_bindgen::prelude::*;

use hypergroup_spectra::algebra::HyperAlgebra;
use hypergroup_spectra::spectra::{self, FunctionalSpec, Lambda, RegimeCase, SpectralMeasure};
use hypergroup_spectra::{plot, serialize, Error, Param};

/// Largest `m + n` the demo will multiply.
const MAX_PRODUCT_DEGREE: u64 = 512;
/// Largest sample count for the density curve.
const MAX_GRID: u32 = 4000;

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn or_error_json(result: Result<String, Error>) -> String {
    result.unwrap_or_else(|err| to_json(&serialize::error_dto(&err)))
}

/// Exact rational coefficients of the basis product `h_m · h_n` at
/// parameter `r` (given as `p/q` or a decimal), as a JSON document.
#[wasm_bindgen]
pub fn product_json(r: &str, m: u32, n: u32) -> String {
    or_error_json((|| {
        let r = Param::parse(r)?;
        let (m, n) = (m.min(n), m.max(n));
        if u64::from(m) + u64::from(n) > MAX_PRODUCT_DEGREE {
            return Err(Error::ResourceBound {
                what: "product degree m + n",
                requested: u64::from(m) + u64::from(n),
                max: MAX_PRODUCT_DEGREE,
            });
        }
        let algebra = HyperAlgebra::new(r.clone());
        let product = algebra.mul_basis(m, n);
        Ok(to_json(&serialize::product_dto(&r, m, n, &product)))
    })())
}

/// Regime classification and closed-form spectral measure of the geometric
/// functional at `λ`, as a JSON document. When `λ` falls outside the dual
/// the regime report itself is returned (with `"case": "not-in-dual"`)
/// rather than an error, so the page can display the classification.
#[wasm_bindgen]
pub fn measure_json(r: &str, lambda: &str) -> String {
    or_error_json((|| {
        let r = Param::parse(r)?;
        let lambda = Lambda::parse(lambda)?;
        let regime = spectra::classify(&r, &lambda)?;
        if regime.case == RegimeCase::NotInAstar {
            return Ok(to_json(&serialize::classify_dto(&r, &lambda, &regime)));
        }
        let spec = FunctionalSpec::Geometric(lambda.clone());
        let measure = spectra::geometric_measure(&r, &lambda)?;
        let mass = measure.mass()?;
        Ok(to_json(&serialize::measure_dto(
            &r,
            spec.describe(),
            &regime,
            &measure,
            mass,
        )))
    })())
}

fn sampled_curve(measure: &SpectralMeasure, points: u32) -> Vec<(f64, f64)> {
    let (lo, hi) = measure.support();
    let margin = 0.025 * (hi - lo);
    let (lo, hi) = (lo + margin, hi - margin);
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let t = lo + (hi - lo) * f64::from(i) / f64::from(n - 1);
            (t, measure.density_at(t).re)
        })
        .collect()
}

/// SVG density plot of the spectral measure at `λ`, with atoms drawn as
/// labeled stems. An empty `lambda` plots the Plancherel measure. On bad
/// input the error JSON is returned instead of an SVG document.
#[wasm_bindgen]
pub fn density_svg(r: &str, lambda: &str, grid: u32) -> String {
    or_error_json((|| {
        let r = Param::parse(r)?;
        if grid > MAX_GRID {
            return Err(Error::ResourceBound {
                what: "density grid points",
                requested: u64::from(grid),
                max: u64::from(MAX_GRID),
            });
        }
        let (spec, measure) = if lambda.trim().is_empty() {
            (FunctionalSpec::DeltaAt0, spectra::plancherel_measure(&r)?)
        } else {
            let lambda = Lambda::parse(lambda)?;
            let measure = spectra::geometric_measure(&r, &lambda)?;
            (FunctionalSpec::Geometric(lambda), measure)
        };
        let title = format!(
            "spectral density: r = {}, {}",
            serialize::rational_str(r.rational()),
            spec.describe()
        );
        let curve = sampled_curve(&measure, grid);
        let atoms: Vec<(f64, f64)> = measure.atoms().iter().map(|(t, w)| (*t, w.re)).collect();
        Ok(plot::density_svg(&title, &curve, &atoms))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(text: &str) -> Value {
        serde_json::from_str(text).expect("valid JSON")
    }

    #[test]
    fn product_terms_are_exact() {
        let doc = parse(&product_json("1/4", 2, 3));
        assert_eq!(doc["schema"], "hypergroup-spectra/1");
        assert_eq!(doc["terms"][0]["coefficient"], "1/12");
        assert_eq!(doc["terms"][1]["coefficient"], "1/6");
        assert_eq!(doc["terms"][2]["coefficient"], "3/4");
    }

    #[test]
    fn product_rejects_bad_parameters() {
        let doc = parse(&product_json("1", 1, 1));
        assert_eq!(doc["kind"], "domain");
        assert_eq!(doc["exit_code"], 2);
        let doc = parse(&product_json("1/4", 400, 400));
        assert_eq!(doc["kind"], "resource-bound");
    }

    #[test]
    fn measure_reports_the_atom() {
        let doc = parse(&measure_json("1/4", "3/2"));
        assert_eq!(doc["case"], "continuous-plus-atom");
        assert_eq!(doc["atoms"][0]["location_exact"], "7/8");
        assert_eq!(doc["atoms"][0]["weight_exact"], "4/9");
    }

    #[test]
    fn measure_outside_the_dual_returns_the_classification() {
        let doc = parse(&measure_json("1/4", "1+1i"));
        assert_eq!(doc["case"], "not-in-dual");
        assert!(doc.get("atoms").is_none());
    }

    #[test]
    fn svg_plots_and_error_fallbacks() {
        let svg = density_svg("1/2", "", 64);
        assert!(svg.starts_with("<svg "));
        assert!(svg.contains("<polyline"));

        let svg = density_svg("1/4", "3/2", 64);
        assert!(svg.contains("stroke-dasharray"), "atom stem missing");

        let doc = parse(&density_svg("1/4", "not-a-number", 64));
        assert_eq!(doc["kind"], "domain");
    }

    #[test]
    fn outputs_are_deterministic() {
        assert_eq!(measure_json("1/4", "3/2"), measure_json("1/4", "3/2"));
        assert_eq!(density_svg("1/4", "2", 64), density_svg("1/4", "2", 64));
    }
}
