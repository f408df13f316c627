use std::path::PathBuf;

use finsler_lie::algebra::io::parse_algebra;
use finsler_lie::cli::{run, Run};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Run {
    run(std::iter::once("finsler-lie").chain(args.iter().copied()))
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}\nstdout: {}\nstderr: {}", r.stdout, r.stderr))
}

fn sectional(r: &Run) -> f64 {
    json(r)["payload"]["holomorphic_sectional"]["value"].as_f64().unwrap()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(cli(&["validate", "builtin:ch2"]).code, 0);
    assert_eq!(cli(&["validate", "builtin:abelian?n=4"]).code, 0);
    assert_eq!(cli(&["validate", &data("ch2.json")]).code, 0);
    assert_eq!(cli(&["validate", &data("ch2_real.json")]).code, 0);

    let bad = cli(&["validate", &data("symmetric_bracket.json")]);
    assert_eq!(bad.code, 3);
    assert!(bad.stderr.contains("antisymmetry"), "{}", bad.stderr);
}

#[test]
fn broken_complex_structure_names_a_pair() {
    let r = cli(&["complexify", &data("ch2_broken_I.json")]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("basis pair (X"), "{}", r.stderr);
    assert_eq!(cli(&["complexify", "builtin:ch2_twisted"]).code, 4);
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"n\": 2,\n \"lambda_hol\": [1,}").unwrap();
    let r = cli(&["validate", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(r.stderr.matches("line").count(), 1, "{}", r.stderr);

    assert_eq!(cli(&["curvature", "builtin:ch2"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn zero_direction_and_bad_vectors() {
    let r = cli(&["curvature", "builtin:ch2", "builtin:identity", "--v", "0,0"]);
    assert_eq!(r.code, 5);
    let r = cli(&["curvature", "builtin:ch2", "builtin:identity", "--v", "1,x"]);
    assert_eq!(r.code, 3);
    let r = cli(&["curvature", "builtin:ch2", "builtin:identity", "--v", "1,0,0"]);
    assert_eq!(r.code, 3);
}

#[test]
fn theorems_need_complex_group_type() {
    let r = cli(&["verify-theorems", "builtin:ch2", "builtin:identity"]);
    assert_eq!(r.code, 6);
    assert!(r.stderr.contains("mixed brackets"), "{}", r.stderr);

    let ok = cli(&[
        "verify-theorems",
        "builtin:complex_heisenberg",
        "builtin:hermitian?diag=1,2,0.5",
    ]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert_eq!(json(&ok)["status"], "pass");
    let ok = cli(&["verify-theorems", "builtin:abelian?n=2", &data("norms/perturbed2.json")]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
}

#[test]
fn curvature_values() {
    let r = cli(&[
        "curvature",
        "builtin:ch2",
        "builtin:identity",
        "--v",
        "1,0",
        "--w",
        "0,1",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert!((sectional(&r) - 2.0).abs() < 1e-8);
    assert!((v["payload"]["bisectional"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!(v["residuals"].as_array().unwrap().iter().all(|x| x["pass"] != false));

    let heis = cli(&[
        "curvature",
        "builtin:complex_heisenberg",
        "builtin:perturbed",
        "--v",
        "1:0.5,-0.3,2:1",
    ]);
    assert_eq!(heis.code, 0, "{}", heis.stderr);
    assert!(sectional(&heis).abs() < 1e-6);

    let flat = cli(&[
        "curvature",
        "builtin:abelian?n=3",
        &data("norms/perturbed3.json"),
        "--v",
        "0.2,1,-1",
    ]);
    assert!(sectional(&flat).abs() < 1e-12);

    let fd = cli(&[
        "--diff",
        "fd",
        "curvature",
        &data("ch2.json"),
        &data("norms/identity2.json"),
        "--v",
        "1,0",
    ]);
    assert_eq!(fd.code, 0, "{}", fd.stderr);
    assert!((sectional(&fd) - 2.0).abs() < 1e-5);
}

#[test]
fn classify_verdicts() {
    let r = cli(&["classify", "builtin:abelian?n=3", "builtin:perturbed"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["payload"]["verdict"], "kahler-berwald");
    let r = cli(&["classify", "builtin:complex_heisenberg", "builtin:identity"]);
    let v = json(&r);
    assert_eq!(v["payload"]["report"]["is_berwald"], true);
    assert_eq!(v["payload"]["report"]["kahler"], false);
    // a negative verdict is not a failed run
    assert_eq!(v["status"], "pass");
}

#[test]
fn reports_are_deterministic() {
    let args = ["--samples", "4", "classify", "builtin:ch2", "builtin:perturbed"];
    let strip = |r: Run| {
        let mut v = json(&r);
        v.as_object_mut().unwrap().remove("duration_ms");
        v
    };
    assert_eq!(strip(cli(&args)), strip(cli(&args)));
}

#[test]
fn complexify_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ch2.json");
    let r = cli(&["complexify", &data("ch2_real.json"), "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let written = parse_algebra(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let shipped = parse_algebra(&std::fs::read_to_string(data("ch2.json")).unwrap()).unwrap();
    assert!(written.full_table().max_abs_diff(shipped.full_table()) < 1e-14);

    let check = cli(&["validate", out.to_str().unwrap()]);
    assert_eq!(check.code, 0);
    let v = json(&check);
    assert!(v["payload"]["antisymmetry_residual"].as_f64().unwrap() < 1e-14);
    assert!(v["payload"]["jacobi_residual"].as_f64().unwrap() < 1e-14);
}

#[test]
fn sweep_rows_and_in_row_errors() {
    let r = cli(&[
        "--samples",
        "3",
        "sweep",
        "builtin:ch2?beta={beta}&gamma={gamma}",
        "builtin:identity",
        "--grid",
        "beta=0.5,1,2",
        "--grid",
        "gamma=-1,1,2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    let rows = v["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let gamma = row["params"]["gamma"].as_f64().unwrap();
        assert_eq!(row["error"].is_string(), gamma < 0.0, "{row}");
    }

    let missing = cli(&["sweep", "builtin:ch2", "builtin:identity", "--grid", "beta=1,2"]);
    assert_eq!(missing.code, 3);
}

#[test]
fn markdown_and_csv() {
    let md = cli(&[
        "--format",
        "md",
        "curvature",
        "builtin:ch2",
        "builtin:identity",
        "--v",
        "1,0",
    ]);
    assert_eq!(md.code, 0);
    assert!(md.stdout.starts_with("# curvature"));
    assert!(md.stdout.contains("| holomorphic_sectional.value |"));

    let csv = cli(&[
        "--format",
        "csv",
        "--samples",
        "2",
        "sweep",
        "builtin:abelian?n={n}",
        "builtin:identity",
        "--grid",
        "n=2",
    ]);
    assert_eq!(csv.code, 0, "{}", csv.stderr);
    let mut lines = csv.stdout.lines();
    assert!(lines.next().unwrap().starts_with("params.n,"));
    assert_eq!(lines.count(), 1);
}
