use std::path::Path;
use std::process::Command;

use bounce_cli::commands::{self, Report, ReportValue};
use bounce_cli::grid::Cell;
use bounce_cli::params_from_pairs;
use bounce_cli::recipes::RECIPES;
use bounce_cli::verify::{run_with, VerifyConfig};
use bounce_core::closed_form::{amplitudes, site_coefficients};
use bounce_core::{AmplitudeSet, Complex64, DimensionlessPoint, ModelKind};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["bounce"];
    argv.extend_from_slice(args);
    let code = bounce_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// `name = value` lines from a text report.
fn parse_report(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn report_value(text: &str, key: &str) -> String {
    parse_report(text)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("missing {key} in\n{text}"))
        .1
}

fn num(rep: &Report, key: &str) -> Option<f64> {
    match rep.get(key) {
        Some(ReportValue::Num(c)) => c.value(),
        other => panic!("{key}: {other:?}"),
    }
}

/// Data rows of a CSV table as strings.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# meta: "));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn point_at_third_node_has_unit_concurrence() {
    let (code, out, _) = run(&["point", "--model", "xy", "--gA", "3", "--gB", "3", "--k", "3"]);
    assert_eq!(code, 0);
    for side in ["t", "r"] {
        let c: f64 = report_value(&out, &format!("C_{side}")).parse().unwrap();
        let p: f64 = report_value(&out, &format!("P_{side}")).parse().unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert!((p - 2.0 / 9.0).abs() < 1e-12);
    }
    for name in AmplitudeSet::FIELD_NAMES {
        report_value(&out, &format!("{name}.re"));
        report_value(&out, &format!("{name}.im"));
    }
}

#[test]
fn point_without_coupling_is_undefined() {
    let (code, out, _) = run(&["point", "--omegaA", "0", "--omegaB", "0", "--phase", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report_value(&out, "C_t"), "undefined");
    assert_eq!(report_value(&out, "P_t"), "0");
    assert_eq!(report_value(&out, "a_r"), "undefined");
}

#[test]
fn point_reports_both_sides_for_contact_model() {
    let (code, out, _) = run(&["point", "--model", "heis", "--gA", "1.5", "--gB", "1.5", "--k", "2"]);
    assert_eq!(code, 0);
    for key in ["C_t", "P_t", "a_t", "C_r", "P_r", "a_r"] {
        report_value(&out, key);
    }
    let (_, out, _) = run(&["point", "--model", "heis", "--omegaA", "0.75", "--omegaB", "0.75", "--phase", "0.9"]);
    let ct: f64 = report_value(&out, "C_t").parse().unwrap();
    let cr: f64 = report_value(&out, "C_r").parse().unwrap();
    assert!((ct - cr).abs() > 1e-3, "{ct} vs {cr}");
}

#[test]
fn side_flag_limits_output() {
    let (_, out, _) = run(&["point", "--omegaA", "1", "--omegaB", "2", "--sin2kd", "0.5", "--side", "r"]);
    assert!(parse_report(&out).iter().all(|(k, _)| !k.ends_with("_t")));
    report_value(&out, "C_r");
}

#[test]
fn json_point_uses_null_for_undefined() {
    let (_, out, _) = run(&["point", "--omegaA", "0", "--omegaB", "0", "--phase", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["C_t"].is_null());
    assert_eq!(v["P_t"], 0.0);
}

#[test]
fn one_point_scan_equals_point() {
    for (model, fixed) in [
        ("xy", ["--gA", "3", "--gB", "2"]),
        ("heis", ["--gA", "1.5", "--gB", "0.7"]),
    ] {
        let mut scan_args = vec!["scan", "--model", model, "--axis", "k:2.3:2.3:1"];
        scan_args.extend_from_slice(&fixed);
        let (code, table, _) = run(&scan_args);
        assert_eq!(code, 0);
        let mut point_args = vec!["point", "--model", model, "--k", "2.3"];
        point_args.extend_from_slice(&fixed);
        let (_, point, _) = run(&point_args);
        let (header, rows) = csv_rows(&table);
        assert_eq!(rows.len(), 1);
        for (name, cell) in header.iter().zip(&rows[0]).skip(1) {
            let expected = report_value(&point, name);
            let expected = if expected == "undefined" { String::new() } else { expected };
            assert_eq!(cell, &expected, "{model} {name}");
        }
    }
}

#[test]
fn scan_rows_are_row_major() {
    let (code, out, _) = run(&[
        "scan", "--axis", "omegaA:0:1:3", "--axis", "omegaB:1:2:2", "--sin2kd", "1", "--observables", "P_t",
    ]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["omegaA", "omegaB", "P_t"]);
    let coords: Vec<(&str, &str)> = rows.iter().map(|r| (r[0].as_str(), r[1].as_str())).collect();
    assert_eq!(
        coords,
        [("0", "1"), ("0", "2"), ("0.5", "1"), ("0.5", "2"), ("1", "1"), ("1", "2")]
    );
}

#[test]
fn physical_k_axis_moves_couplings() {
    let fixed = params_from_pairs(&[("gA", 3.0), ("gB", 3.0)]).unwrap();
    let axis = "k:1:3:3".parse().unwrap();
    let grid = commands::scan(ModelKind::SpinExchange, &[axis], &["C_t".into()], &fixed).unwrap();
    // C = 1 at every node with equal couplings, whatever Ω is.
    for c in grid.column("C_t").unwrap() {
        assert!((c.value().unwrap() - 1.0).abs() < 1e-12);
    }
    let at = |k: f64| {
        let p = params_from_pairs(&[("gA", 3.0), ("gB", 1.0), ("k", k)]).unwrap();
        num(&commands::point(ModelKind::SpinExchange, &p, bounce_cli::cli::SideArg::T).unwrap(), "omegaA").unwrap()
    };
    assert_eq!(at(1.0), 3.0);
    assert_eq!(at(3.0), 1.0);
}

#[test]
fn optimum_columns_need_no_phase() {
    let (code, out, _) = run(&[
        "scan", "--axis", "omegaA:0:2:5", "--omegaB", "1", "--observables", "C_opt,P_opt,sin2_opt",
    ]);
    assert_eq!(code, 0, "{out}");
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows[0][1], "", "C_opt undefined without A coupling");
    assert_eq!(rows[2][1], "1", "omegaA = omegaB gives C = 1");
    let (code, _, _) = run(&["scan", "--axis", "omegaA:0:2:5", "--omegaB", "1", "--observables", "C_t"]);
    assert_eq!(code, 2, "phase observables need a phase");
}

#[test]
fn json_table_matches_csv() {
    let args = ["scan", "--axis", "k:0.5:2:4", "--gA", "1", "--gB", "2"];
    let (_, csv, _) = run(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let (_, json, _) = run(&json_args);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let (header, rows) = csv_rows(&csv);
    assert_eq!(v["columns"].as_array().unwrap().len(), header.len());
    assert_eq!(v["rows"].as_array().unwrap().len(), rows.len());
    assert_eq!(v["axes"][0]["spacing"], "linear");
    for (jr, cr) in v["rows"].as_array().unwrap().iter().zip(&rows) {
        for (j, c) in jr.as_array().unwrap().iter().zip(cr) {
            assert_eq!(j.as_f64().unwrap(), c.parse::<f64>().unwrap());
        }
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["point", "--gA", "1", "--omegaB", "1", "--k", "1"],
        &["point", "--omegaA", "1", "--omegaB", "1", "--phase", "1", "--sin2kd", "0.5"],
        &["point", "--omegaA", "-1", "--omegaB", "1", "--phase", "1"],
        &["point", "--gA", "1", "--gB", "1"],
        &["scan", "--axis", "k:0:1", "--gA", "1", "--gB", "1"],
        &["scan", "--axis", "k:1:2:1", "--gA", "1", "--gB", "1"],
        &["scan", "--axis", "k:1:2:3", "--gA", "1", "--gB", "1", "--observables", "X"],
        &["scan", "--axis", "k:1:2:3", "--k", "1", "--gA", "1", "--gB", "1"],
        &["scan", "--axis", "omegaA:0:1:3", "--axis", "omegaB:0:1:3", "--axis", "phase:0:1:3"],
        &["truncate", "--model", "heis", "--axis", "k:1:2:3", "--gA", "1", "--gB", "1", "--n", "0"],
        &["scan", "--model", "heis", "--axis", "omegaA:0:1:3", "--omegaB", "1", "--observables", "C_opt"],
        &["optimize", "report", "--model", "heis", "--omegaA", "1", "--omegaB", "1"],
        &["recipe", "nope"],
        &["frobnicate"],
        &["point", "--model", "ising"],
    ];
    for args in cases {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let (code, _, err) = run(&[
        "scan", "--axis", "k:1:2:3", "--gA", "1", "--gB", "1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let args = ["scan", "--axis", "k:1:2:3", "--gA", "1", "--gB", "1"];
    let (_, stdout, _) = run(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let (code, empty, _) = run(&with_out);
    assert_eq!(code, 0);
    assert!(empty.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn truncation_columns_converge() {
    let fixed = params_from_pairs(&[("gA", 3.0), ("gB", 3.0)]).unwrap();
    // Below k ~ 0.6 the loop gain |r_A r_B| exceeds 0.9 and 200 bounces are
    // not enough for 1e-9.
    let axis = "k:0.65:10:400".parse().unwrap();
    let grid = commands::truncate(ModelKind::SpinExchange, &[0, 200], &axis, &fixed).unwrap();
    assert_eq!(grid.columns, ["k", "C_exact", "P_exact", "C_n0", "P_n0", "C_n200", "P_n200"]);
    let exact = grid.column("C_exact").unwrap();
    let deep = grid.column("C_n200").unwrap();
    let worst = exact
        .iter()
        .zip(&deep)
        .map(|(a, b)| (a.value().unwrap() - b.value().unwrap()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn no_bounce_column_is_direct_path_ratio() {
    let fixed = params_from_pairs(&[("omegaA", 0.4), ("omegaB", 1.3)]).unwrap();
    let axis = "phase:0.1:3:7".parse().unwrap();
    let grid = commands::truncate(ModelKind::SpinExchange, &[0], &axis, &fixed).unwrap();
    // Direct paths: |f_A| against |t_A f_B|.
    let (a, b) = (0.4f64, 1.3f64);
    let ratio = a * (1.0 + b * b) / b;
    let expected = 2.0 * ratio / (1.0 + ratio * ratio);
    for c in grid.column("C_n0").unwrap() {
        assert!((c.value().unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn optimize_popt_reports_closed_form_delta() {
    let (code, out, _) = run(&["optimize", "popt"]);
    assert_eq!(code, 0);
    let b: f64 = report_value(&out, "omegaB").parse().unwrap();
    let a: f64 = report_value(&out, "omegaA").parse().unwrap();
    let p: f64 = report_value(&out, "P").parse().unwrap();
    assert!((b - 1.065253688).abs() < 1e-8);
    assert!((a - 0.325812399).abs() < 1e-8);
    assert!((p - 0.368458967).abs() < 1e-8);
    assert!(report_value(&out, "delta_omegaB").parse::<f64>().unwrap().abs() < 1e-8);
    // At least eight significant digits.
    assert!(report_value(&out, "P").trim_start_matches("0.").len() >= 8);
}

#[test]
fn optimize_report_regimes() {
    let (_, out, _) = run(&["optimize", "report", "--omegaA", "1", "--omegaB", "1"]);
    assert_eq!(report_value(&out, "regime"), "UnitConcurrenceRegion");
    assert_eq!(report_value(&out, "sin2kd"), "0");
    assert_eq!(report_value(&out, "C"), "1");
    let (_, out, _) = run(&["optimize", "report", "--omegaA", "2", "--omegaB", "1"]);
    assert_eq!(report_value(&out, "regime"), "RightRegion");
    assert_eq!(report_value(&out, "sin2kd"), "0");
    let (_, out, _) = run(&["optimize", "report", "--omegaA", "0.1", "--omegaB", "1"]);
    assert_eq!(report_value(&out, "regime"), "LeftRegion");
    assert_eq!(report_value(&out, "sin2kd"), "1");
}

#[test]
fn verify_passes_and_is_seeded() {
    let (code, first, _) = run(&["verify", "--samples", "200", "--seed", "7"]);
    assert_eq!(code, 0, "{first}");
    assert!(first.contains("result = PASS"));
    assert!(first.contains("heis dressed_series_deviation"));
    let (_, second, _) = run(&["verify", "--samples", "200", "--seed", "7"]);
    assert_eq!(first, second);
    let (_, heis_only, _) = run(&["verify", "--samples", "5", "--model", "heis"]);
    assert!(!heis_only.contains("xy "));
    let (code, _, _) = run(&["verify", "--samples", "0"]);
    assert_eq!(code, 2);
}

/// Spin-exchange amplitudes assembled with the sign of `r` flipped.
fn mutated_spin_exchange(pt: &DimensionlessPoint) -> AmplitudeSet {
    if pt.model() != ModelKind::SpinExchange {
        return amplitudes(pt);
    }
    let a = site_coefficients(pt.omega_a(), pt.model()).unwrap();
    let b = site_coefficients(pt.omega_b(), pt.model()).unwrap();
    let (ra, rb) = (-a.r, -b.r);
    let e1 = Complex64::from_polar(1.0, pt.phase());
    let e2 = e1 * e1;
    let loops = 1.0 / (1.0 - ra * rb * e2);
    let t_flipb = a.t * e1 * b.f * loops;
    let t_flipa = a.f * e1 * (1.0 + a.t * rb * e2 * loops);
    AmplitudeSet {
        t_noflip: a.t * b.t * e1 * loops,
        r_noflip: ra + a.t * a.t * rb * e2 * loops,
        t_flipb,
        r_flipb: t_flipb * e1,
        t_flipa,
        r_flipa: t_flipa * e1.conj(),
    }
}

#[test]
fn verify_catches_mutated_reflection_sign() {
    let config = VerifyConfig {
        models: vec![ModelKind::SpinExchange],
        samples: 1,
        seed: 42,
        tolerance: 1e-10,
    };
    let summary = run_with(&config, mutated_spin_exchange);
    assert!(!summary.passed());
    let text = summary.render();
    assert!(text.contains("result = FAIL"));
    assert!(text.contains("worst: model=xy"), "{text}");
    // The unmutated assembly passes the same check.
    let unmutated = run_with(&config, |pt: &DimensionlessPoint| amplitudes(pt));
    assert!(unmutated.passed(), "{}", unmutated.render());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bounce");
    let ok = Command::new(bin).args(["point", "--gA", "3", "--gB", "3", "--k", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let usage = Command::new(bin).args(["point", "--gA", "3", "--omegaB", "3", "--k", "3"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn recipes_are_documented_and_undefined_cells_are_empty() {
    let readme = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    for r in RECIPES {
        assert!(readme.contains(&r.command_line()), "README lacks {}", r.name);
    }
    let grid = commands::scan(
        ModelKind::SpinExchange,
        &["omegaA:0:1:2".parse().unwrap()],
        &["C_t".into()],
        &params_from_pairs(&[("omegaB", 0.0), ("phase", 1.0)]).unwrap(),
    )
    .unwrap();
    assert_eq!(grid.column("C_t").unwrap()[0], Cell::Undefined);
    assert!(grid.to_csv().lines().nth(2).unwrap().ends_with(','));
}
