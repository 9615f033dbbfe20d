//! End-to-end tests of the `hypergroup` binary: every subcommand is spawned
//! as a real process and judged on exit code, stdout/stderr contents, and
//! byte-level determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hypergroup"));
    for (key, _) in std::env::vars() {
        if key.starts_with("HYPERGROUP_") {
            cmd.env_remove(&key);
        }
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is JSON")
}

#[test]
fn product_csv_is_exact() {
    let out = run(&["product", "-m", "2", "-n", "3", "-r", "1/4", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "degree,coefficient\n1,1/12\n3,1/6\n5,3/4\n");
}

#[test]
fn product_with_identity_factor() {
    let out = run(&["product", "-m", "0", "-n", "9", "-r", "1/3"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema"], "hypergroup-spectra/1");
    assert_eq!(doc["terms"], serde_json::json!([{"degree": 9, "coefficient": "1"}]));
}

#[test]
fn product_check_cross_verifies_all_oracles() {
    let out = run(&["product", "-m", "1", "-n", "1", "-r", "1/2", "--check"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["terms"][0]["coefficient"], "1/2");
    assert_eq!(doc["terms"][1]["degree"], 2);
    assert_eq!(doc["check"]["closed_form"], "agree");
    assert_eq!(doc["check"]["free_group"], "agree");
    assert_eq!(doc["check"]["all_agree"], true);
}

#[test]
fn product_check_skips_free_group_off_the_even_reciprocals() {
    let out = run(&["product", "-m", "2", "-n", "2", "-r", "1/3", "--check"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["check"]["closed_form"], "agree");
    assert_eq!(doc["check"]["free_group"], "not-applicable");
}

#[test]
fn poly_csv_table() {
    let out = run(&["poly", "-r", "1/3", "-N", "2", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "n,c0,c1,c2\n0,1,0,0\n1,0,1,0\n2,-1/2,0,3/2\n");
}

#[test]
fn poly_env_override_and_flag_precedence() {
    let out = bin()
        .args(["poly", "-r", "1/4", "--format", "csv"])
        .env("HYPERGROUP_MAX_DEGREE", "3")
        .output()
        .expect("binary runs");
    assert_eq!(stdout_str(&out).lines().count(), 5);

    let out = bin()
        .args(["poly", "-r", "1/4", "-N", "2", "--format", "csv"])
        .env("HYPERGROUP_MAX_DEGREE", "3")
        .output()
        .expect("binary runs");
    assert_eq!(stdout_str(&out).lines().count(), 4);
}

#[test]
fn classify_reports_the_regime() {
    let out = run(&["classify", "--lambda", "3/2", "-r", "1/4"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema"], "hypergroup-spectra/1");
    assert_eq!(doc["case"], "continuous-plus-atom");
    assert_eq!(doc["reduced_continuous"], false);
}

#[test]
fn measure_reports_the_atom_exactly() {
    let out = run(&["measure", "--lambda", "3/2", "-r", "1/4"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["atoms"][0]["location"], 0.875);
    assert_eq!(doc["atoms"][0]["location_exact"], "7/8");
    assert_eq!(doc["atoms"][0]["weight_exact"], "4/9");
    assert!((doc["mass_re"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn measure_at_lambda_one_is_a_dirac_mass() {
    let out = run(&["measure", "--lambda", "1", "-r", "1/4"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["case"], "dirac-at-edge");
    assert_eq!(doc["atoms"][0]["location_exact"], "1");
    assert_eq!(doc["atoms"][0]["weight_exact"], "1");
    assert_eq!(doc["density"], "zero");
}

#[test]
fn measure_outside_the_dual_exits_with_regime_report() {
    let out = run(&["measure", "--lambda", "1.0+1.0i", "-r", "1/4"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["case"], "not-in-dual");
    let err: Value = serde_json::from_str(&stderr_str(&out)).expect("stderr is JSON");
    assert_eq!(err["kind"], "regime");
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn measure_csv_has_the_density_contract_columns() {
    let out = run(&[
        "measure", "--lambda", "2", "-r", "1/4", "--grid", "4", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("t,re_density,im_density,residual\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn invert_matches_the_closed_form() {
    let out = run(&[
        "invert", "--plancherel", "-r", "1/4", "--grid", "5", "--tol", "1e-4",
    ]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["all_converged"], true);
    assert!(doc["max_density_diff"].as_f64().unwrap() < 1e-4);
}

#[test]
fn invert_recovers_the_atom_weight() {
    let out = run(&[
        "invert", "--lambda", "3/2", "-r", "1/4", "--grid", "4", "--tol", "1e-4",
    ]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    let atom = &doc["atoms"][0];
    assert_eq!(atom["location"], 0.875);
    assert!((atom["weight_re"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-6);
    assert_eq!(atom["closed_weight_re"], 4.0 / 9.0);
}

#[test]
fn invert_reports_divergence_on_the_critical_circle() {
    let out = run(&[
        "invert",
        "--lambda",
        "1.2247448713915890+1.2247448713915890i",
        "-r",
        "1/4",
        "--grid",
        "41",
    ]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["all_converged"], false);
    assert!(doc.get("max_density_diff").is_none());
    let grid = doc["grid"].as_array().unwrap();
    let bad: Vec<f64> = grid
        .iter()
        .filter(|row| row["converged"] == false)
        .map(|row| row["t"].as_f64().unwrap())
        .collect();
    assert!(!bad.is_empty());
    let singular = (6.0f64).sqrt() / 4.0;
    for t in bad {
        assert!(
            (t - singular).abs() < 0.05,
            "unexpected divergence at t = {t}"
        );
    }
}

#[test]
fn invert_csv_carries_the_comparison_columns() {
    let out = run(&[
        "invert", "--plancherel", "-r", "1/4", "--grid", "4", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("t,re_density,im_density,residual,closed_re,closed_im,abs_diff\n"));
}

#[test]
fn moments_verification_passes_for_geometric_two() {
    let out = run(&["moments", "--lambda", "2", "-r", "1/4", "-N", "10"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    assert!(doc["max_error"].as_f64().unwrap() < 1e-7);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 11);
}

#[test]
fn moments_csv_has_the_report_contract_columns() {
    let out = run(&[
        "moments", "--plancherel", "-r", "1/2", "-N", "3", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert!(stdout_str(&out)
        .starts_with("n,expected_re,expected_im,computed_re,computed_im,abs_error\n"));
}

#[test]
fn oracle_agrees_with_the_algebra() {
    let out = run(&["oracle", "-l", "2", "--max-len", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("m,n,agree\n"));
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",true"), "disagreeing pair: {line}");
    }
}

#[test]
fn oracle_single_pair_prints_the_word_count_table() {
    let out = run(&["oracle", "-l", "2", "-m", "2", "-n", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "degree,coefficient\n1,1/12\n3,1/6\n5,3/4\n");

    let out = run(&["oracle", "-l", "2", "-m", "1", "-n", "1"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["r"], "1/4");
    assert_eq!(doc["agree"], true);
    assert_eq!(
        doc["terms"],
        serde_json::json!([
            {"degree": 0, "coefficient": "1/4"},
            {"degree": 2, "coefficient": "3/4"}
        ])
    );
}

#[test]
fn gram_reports_psd_and_non_psd() {
    let out = run(&["gram", "-l", "2", "-N", "2", "--lambda", "2"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["psd"], true);
    assert_eq!(doc["dim"], 17);

    let out = run(&["gram", "-l", "2", "-N", "2", "--lambda", "0.5"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["psd"], false);
    assert!(doc["min_eig"].as_f64().unwrap() < 0.0);
}

#[test]
fn gram_twist_spectra_agree() {
    let out = run(&["gram", "-l", "2", "-N", "2", "--lambda", "1.5", "--twist"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    assert!(doc["min_eig_diff"].as_f64().unwrap() <= 1e-9 * 17.0);
}

#[test]
fn plot_renders_an_svg_density_curve() {
    let out = run(&["plot", "--plancherel", "-r", "1/2", "--grid", "50"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("<svg "));
    assert!(text.contains("<polyline"));
    assert!(text.trim_end().ends_with("</svg>"));
}

#[test]
fn domain_errors_exit_2_with_json_on_stderr() {
    let out = run(&["measure", "--lambda", "2", "-r", "3/4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_str(&stderr_str(&out)).expect("stderr is JSON");
    assert_eq!(err["schema"], "hypergroup-spectra/1");
    assert_eq!(err["kind"], "domain");
}

#[test]
fn resource_bounds_exit_3() {
    let out = run(&["gram", "-l", "2", "-N", "8", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_str(&stderr_str(&out)).expect("stderr is JSON");
    assert_eq!(err["kind"], "resource-bound");

    let out = run(&["poly", "-r", "1/4", "-N", "99999"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["measure", "--lambda", "3/2", "-r", "1/4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);

    let args = [
        "invert", "--plancherel", "-r", "1/4", "--grid", "4", "--format", "csv",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);

    let args = ["plot", "--lambda", "3/2", "-r", "1/4", "--grid", "32"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn output_flag_writes_the_file() {
    let dir = std::env::temp_dir().join("hypergroup-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("product.csv");
    let out = run(&[
        "product", "-m", "2", "-n", "3", "-r", "1/4", "--format", "csv",
        "-o", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_str(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, "degree,coefficient\n1,1/12\n3,1/6\n5,3/4\n");
    std::fs::remove_file(&path).ok();
}
