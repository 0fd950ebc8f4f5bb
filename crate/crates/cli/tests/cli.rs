//! End-to-end tests of the `grasswig` binary: file formats, exit codes,
//! and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grasswig::json::{ClassificationJson, OracleFileJson, ProjectionJson, ReportJson, to_json_string};
use grasswig_core::aset::random_adjacent_pair;
use grasswig_core::matrix::max_modulus;
use grasswig_core::projections::random_projection;
use grasswig_core::{CMat, Projection};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grasswig"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn gen_map(dir: &Path, name: &str, d: usize, n: usize, kind: &str, seed: u64, trials: usize) -> PathBuf {
    let path = dir.join(name);
    let out = run(&[
        "gen-map",
        "--d",
        &d.to_string(),
        "--n",
        &n.to_string(),
        "--kind",
        kind,
        "--seed",
        &seed.to_string(),
        "--trials",
        &trials.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "gen-map failed: {}", String::from_utf8_lossy(&out.stderr));
    path
}

fn write_projection(dir: &Path, name: &str, p: &Projection<f64>) -> PathBuf {
    let path = dir.join(name);
    let json = to_json_string(&ProjectionJson::from_projection(p)).unwrap();
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn gen_map_counts_and_byte_identical_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_map(dir.path(), "unitary.json", 4, 2, "unitary", 7, 5);
    let raw = std::fs::read_to_string(&path).unwrap();
    let parsed: OracleFileJson = serde_json::from_str(&raw).unwrap();
    assert_eq!(parsed.basis.len(), 16);
    assert_eq!(parsed.probe.len(), 7);
    assert_eq!(parsed.random.len(), 5);
    assert_eq!((parsed.d, parsed.n), (4, 2));
    // Re-serializing the parsed value reproduces the file bytes.
    assert_eq!(to_json_string(&parsed).unwrap(), raw);
}

#[test]
fn gen_map_is_deterministic_and_honors_the_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen_map(dir.path(), "a.json", 4, 2, "antiunitary", 11, 4);
    let b = gen_map(dir.path(), "b.json", 4, 2, "antiunitary", 11, 4);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = dir.path().join("c.json");
    let out = bin()
        .args(["gen-map", "--d", "4", "--n", "2", "--kind", "antiunitary", "--trials", "4"])
        .args(["--out", c.to_str().unwrap()])
        .env("GRASSWIG_SEED", "11")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn check_passes_preserving_files_and_flags_distortion() {
    let dir = tempfile::tempdir().unwrap();
    let unitary = gen_map(dir.path(), "unitary.json", 4, 2, "unitary", 3, 6);
    let out = run(&["check", unitary.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report: ReportJson = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report.max_residual <= 1e-10);
    assert!(report.violating_pair.is_none());

    let complement = gen_map(dir.path(), "comp.json", 6, 3, "complement-unitary", 4, 6);
    let out = run(&["check", complement.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));

    let distortion = gen_map(dir.path(), "dist.json", 4, 2, "non-preserving-distortion", 5, 10);
    let out = run(&["check", distortion.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let report: ReportJson = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report.max_residual > 1e-3);
    assert!(report.violating_pair.is_some());
}

#[test]
fn reconstruct_recovers_the_embedded_truth() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_map(dir.path(), "unitary.json", 5, 2, "unitary", 13, 8);
    let out = run(&["reconstruct", path.to_str().unwrap(), "--seed", "17"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let c: ClassificationJson = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(c.form, "plain");
    assert_eq!(c.linearity, "linear");
    assert!(c.residual <= 1e-8);

    // The recovered operator acts like the stored ground truth.
    let file: OracleFileJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let truth: CMat<f64> = file.truth.u.to_matrix().unwrap();
    let v: CMat<f64> = c.v.to_matrix().unwrap();
    for seed in 0..5u64 {
        let p = random_projection::<f64>(5, 1, 800 + seed).unwrap();
        let lhs = &v * p.matrix() * v.adjoint();
        let rhs = &truth * p.matrix() * truth.adjoint();
        assert!(max_modulus(&(lhs - rhs)) <= 1e-8);
    }
}

#[test]
fn reconstruct_classifies_complement_antiunitary() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_map(dir.path(), "comp.json", 4, 2, "complement-antiunitary", 19, 8);
    let out = run(&["reconstruct", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c: ClassificationJson = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(c.form, "complement");
    assert_eq!(c.linearity, "antilinear");
}

#[test]
fn reconstruct_rejects_distortion_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_map(dir.path(), "dist.json", 4, 2, "non-preserving-distortion", 23, 10);
    let out = run(&["reconstruct", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn angles_reports_the_tilted_pair() {
    let dir = tempfile::tempdir().unwrap();
    let (p, q) = random_adjacent_pair::<f64>(4, 2, std::f64::consts::FRAC_PI_4, 29).unwrap();
    let p_path = write_projection(dir.path(), "p.json", &p);
    let q_path = write_projection(dir.path(), "q.json", &q);
    let out = run(&["angles", p_path.to_str().unwrap(), q_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let angles = parsed["angles"].as_array().unwrap();
    assert!((angles[0].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() <= 1e-9);
    assert!((parsed["trace_product"].as_f64().unwrap() - 1.5).abs() <= 1e-10);
    assert_eq!(parsed["adjacency_class"], "non_orthogonal_adjacent");
}

#[test]
fn aset_probe_sees_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let (p, q) = random_adjacent_pair::<f64>(4, 2, 0.9, 31).unwrap();
    let p_path = write_projection(dir.path(), "p.json", &p);
    let q_path = write_projection(dir.path(), "q.json", &q);
    let out = run(&[
        "aset-probe",
        p_path.to_str().unwrap(),
        q_path.to_str().unwrap(),
        "--samples",
        "8100",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(parsed["class"], "non_orthogonal_adjacent");
    assert_eq!(parsed["dimension_estimate"], "one");
    assert!(parsed["n_members_found"].as_u64().unwrap() >= 10);
}

#[test]
fn out_flag_redirects_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = gen_map(dir.path(), "unitary.json", 4, 2, "unitary", 37, 4);
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "check",
        oracle.to_str().unwrap(),
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).is_empty());
    let report: ReportJson =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report.max_residual <= 1e-10);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();

    // Complement generators need d = 2n.
    let out = run(&[
        "gen-map", "--d", "5", "--n", "2", "--kind", "complement-unitary", "--out",
        dir.path().join("x.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Missing input file.
    let out = run(&["check", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed JSON.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["reconstruct", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // A matrix that is not a projection.
    let worse = dir.path().join("worse.json");
    std::fs::write(
        &worse,
        r#"{"rows":2,"cols":2,"entries":[[1.0,0.0],[0.5,0.0],[0.5,0.0],[1.0,0.0]],"rank":1}"#,
    )
    .unwrap();
    let out = run(&["angles", worse.to_str().unwrap(), worse.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
