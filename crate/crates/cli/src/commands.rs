//! Implementations of the subcommands. Each returns the output JSON and
//! the process exit code (0 success/preserving, 1 violation detected;
//! input and usage problems surface as errors mapped to exit 2).

use std::fs;
use std::path::Path;

use grasswig_core::angles::{classify_adjacency, principal_angles, transition_probability};
use grasswig_core::aset::aset_dimension_probe;
use grasswig_core::extend::check_transition_preserving;
use grasswig_core::reconstruct::classify_map;
use grasswig_core::Projection;

use crate::config::{ExperimentConfig, GeneratorSpec};
use crate::error::Result;
use crate::generate::build_oracle_file;
use crate::json::{
    to_json_string, AnglesJson, AsetProbeJson, ClassificationJson, OracleFileJson, ProjectionJson,
    ReportJson,
};

/// Output JSON plus the exit code to finish with.
pub struct CmdOutput {
    pub json: String,
    pub exit: i32,
}

fn ok(json: String) -> CmdOutput {
    CmdOutput { json, exit: 0 }
}

fn read_oracle_file(path: &Path) -> Result<OracleFileJson> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

// `tol` falls back to the dimension-scaled default read from the file.
fn read_projection(path: &Path, tol: Option<f64>) -> Result<Projection<f64>> {
    let parsed: ProjectionJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    let tol = tol.unwrap_or_else(|| grasswig_core::projections::default_tol::<f64>(parsed.rows));
    parsed.to_projection(tol)
}

/// Draws a generator, tabulates it, and writes the oracle file.
pub fn cmd_gen_map(
    config: &ExperimentConfig,
    spec: &GeneratorSpec,
    out_path: &Path,
) -> Result<CmdOutput> {
    let file = build_oracle_file(config, spec)?;
    let serialized = to_json_string(&file)?;
    fs::write(out_path, &serialized)?;
    let summary = serde_json::json!({
        "path": out_path.display().to_string(),
        "entries": file.basis.len() + file.probe.len() + file.random.len(),
    });
    Ok(ok(to_json_string(&summary)?))
}

/// Probes a tabulated oracle for transition-probability preservation.
/// Exit 0 iff no violation was found.
pub fn cmd_check(
    oracle_path: &Path,
    trials: usize,
    seed: u64,
    tol_validate: Option<f64>,
) -> Result<CmdOutput> {
    let file = read_oracle_file(oracle_path)?;
    let tol = tol_validate.unwrap_or_else(|| grasswig_core::projections::default_tol::<f64>(file.d));
    let oracle = file.to_oracle::<f64>(tol)?;
    let report = check_transition_preserving(&oracle, trials, seed)?;
    let json = to_json_string(&ReportJson::from_report(&report))?;
    let exit = i32::from(report.violating_pair.is_some());
    Ok(CmdOutput { json, exit })
}

/// Runs the full classification pipeline on a tabulated oracle.
pub fn cmd_reconstruct(
    oracle_path: &Path,
    seed: u64,
    tol_validate: Option<f64>,
    tol_verify: Option<f64>,
) -> Result<CmdOutput> {
    let file = read_oracle_file(oracle_path)?;
    let tol = tol_validate.unwrap_or_else(|| grasswig_core::projections::default_tol::<f64>(file.d));
    let oracle = file.to_oracle::<f64>(tol)?;
    let classification = classify_map(&oracle, file.d, file.n, seed)?;
    let json = to_json_string(&ClassificationJson::from_classification(&classification))?;
    let exit = i32::from(classification.residual > tol_verify.unwrap_or(1e-6));
    Ok(CmdOutput { json, exit })
}

/// Principal angles, tr PQ, and the adjacency class of two projections.
pub fn cmd_angles(
    p_path: &Path,
    q_path: &Path,
    tol_validate: Option<f64>,
    tol_angle: Option<f64>,
) -> Result<CmdOutput> {
    let p = read_projection(p_path, tol_validate)?;
    let q = read_projection(q_path, tol_validate)?;
    let angle_tol = tol_angle.unwrap_or_else(grasswig_core::angles::default_angle_tol::<f64>);
    let angles = principal_angles(&p, &q)?;
    let trace_product = transition_probability(&p, &q)?;
    let class = classify_adjacency(&p, &q, angle_tol)?;
    Ok(ok(to_json_string(&AnglesJson::new(angles.angles(), trace_product, class))?))
}

/// Classifies the pair and estimates the dimension of its A-set by
/// grid probing.
pub fn cmd_aset_probe(
    p_path: &Path,
    q_path: &Path,
    samples: usize,
    seed: u64,
    tol_validate: Option<f64>,
    tol_angle: Option<f64>,
) -> Result<CmdOutput> {
    let p = read_projection(p_path, tol_validate)?;
    let q = read_projection(q_path, tol_validate)?;
    let angle_tol = tol_angle.unwrap_or_else(grasswig_core::angles::default_angle_tol::<f64>);
    let class = classify_adjacency(&p, &q, angle_tol)?;
    let report = aset_dimension_probe(&p, &q, samples, seed)?;
    Ok(ok(to_json_string(&AsetProbeJson::new(class, report.estimate, report.members_found))?))
}
