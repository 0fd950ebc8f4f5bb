//! JSON wire formats for matrices, projections, oracle tables, and command
//! outputs.
//!
//! Complex matrices serialize as {"rows", "cols", "entries": [[re, im], …]}
//! in row-major order; projections add a "rank" field. All numbers are f64
//! on the wire regardless of the in-memory scalar.

use grasswig_core::angles::AdjacencyClass;
use grasswig_core::aset::DimensionEstimate;
use grasswig_core::extend::{ExtendedMap, PreservationReport, TabulatedOracle};
use grasswig_core::matrix::CMat;
use grasswig_core::projections::validate_projection;
use grasswig_core::reconstruct::{Form, Linearity, WignerClassification};
use grasswig_core::scalar::{ci, cr, Real};
use grasswig_core::Projection;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Complex matrix, row-major [re, im] entry pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &CMat<T>) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|i| {
                (0..m.ncols()).map(move |j| {
                    let z = m[(i, j)];
                    [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)]
                })
            })
            .collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<CMat<T>> {
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::Usage("matrix dimensions must be positive".into()));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(CliError::Usage(format!(
                "matrix declares {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let mut m = CMat::<T>::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let [re, im] = self.entries[i * self.cols + j];
                let (re, im) = (
                    T::from_f64(re).ok_or_else(|| CliError::Usage("entry out of range".into()))?,
                    T::from_f64(im).ok_or_else(|| CliError::Usage("entry out of range".into()))?,
                );
                m[(i, j)] = cr(re) + ci(im);
            }
        }
        Ok(m)
    }
}

/// Projection: a complex matrix plus its rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
    pub rank: usize,
}

impl ProjectionJson {
    pub fn from_projection<T: Real>(p: &Projection<T>) -> Self {
        let m = MatrixJson::from_matrix(p.matrix());
        ProjectionJson { rows: m.rows, cols: m.cols, entries: m.entries, rank: p.rank() }
    }

    /// Re-validates on read; the stored rank must match the spectrum.
    pub fn to_projection<T: Real>(&self, tol: T) -> Result<Projection<T>> {
        let m = MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .to_matrix::<T>()?;
        let p = validate_projection(m, tol)?;
        if p.rank() != self.rank {
            return Err(CliError::Usage(format!(
                "file declares rank {} but the matrix has rank {}",
                self.rank,
                p.rank()
            )));
        }
        Ok(p)
    }
}

/// Real matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
}

impl RealMatrixJson {
    pub fn from_matrix<T: Real>(m: &DMatrix<T>) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)].to_f64().unwrap_or(f64::NAN)))
            .collect();
        RealMatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<DMatrix<T>> {
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::Usage("matrix dimensions must be positive".into()));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(CliError::Usage(format!(
                "matrix declares {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let mut m = DMatrix::<T>::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = T::from_f64(self.entries[i * self.cols + j])
                    .ok_or_else(|| CliError::Usage("entry out of range".into()))?;
            }
        }
        Ok(m)
    }
}

/// The real-linear extension with its dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedMapJson {
    pub d: usize,
    pub n: usize,
    pub matrix: RealMatrixJson,
}

impl ExtendedMapJson {
    pub fn from_map<T: Real>(map: &ExtendedMap<T>) -> Self {
        ExtendedMapJson {
            d: map.dim(),
            n: map.rank(),
            matrix: RealMatrixJson::from_matrix(map.matrix()),
        }
    }

    pub fn to_map<T: Real>(&self) -> Result<ExtendedMap<T>> {
        Ok(ExtendedMap::new(self.matrix.to_matrix()?, self.d, self.n)?)
    }
}

/// One tabulated evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEntryJson {
    pub input: ProjectionJson,
    pub output: ProjectionJson,
}

impl OracleEntryJson {
    pub fn new<T: Real>(input: &Projection<T>, output: &Projection<T>) -> Self {
        OracleEntryJson {
            input: ProjectionJson::from_projection(input),
            output: ProjectionJson::from_projection(output),
        }
    }
}

/// The embedded ground-truth generator. Never consulted by reconstruction;
/// it exists so tests can compare the recovered operator against it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthJson {
    pub kind: String,
    pub u: MatrixJson,
}

/// A tabulated oracle file.
///
/// `basis` holds the d² spanning projections the extension is built from,
/// `probe` the 2d − 1 rank-one probe family mapped through the generator
/// formula, and `random` the freely sampled rank-n evaluations used for
/// preservation checks and verification. The `rng` string documents the
/// seed-splitting scheme all sections were drawn with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFileJson {
    pub format_version: u32,
    pub rng: String,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub kind: String,
    pub basis: Vec<OracleEntryJson>,
    pub probe: Vec<OracleEntryJson>,
    pub random: Vec<OracleEntryJson>,
    pub truth: TruthJson,
}

pub const FORMAT_VERSION: u32 = 1;
pub const RNG_SCHEME: &str =
    "chacha8(seed=splitmix64(master_seed, counter)); counters: 0 generator, 1+i i-th random input";

impl OracleFileJson {
    /// Builds the in-memory oracle from the rank-n sections (basis and
    /// random); the rank-one probe section is data for other consumers.
    /// The probe pool for random sampling is exactly the random section.
    pub fn to_oracle<T: Real>(&self, tol: T) -> Result<TabulatedOracle<T>> {
        let mut entries = Vec::with_capacity(self.basis.len() + self.random.len());
        for entry in self.basis.iter().chain(&self.random) {
            entries.push((entry.input.to_projection(tol)?, entry.output.to_projection(tol)?));
        }
        let pool = (self.basis.len()..entries.len()).collect();
        Ok(TabulatedOracle::new(self.d, self.n, entries, pool)?)
    }
}

fn adjacency_label(class: AdjacencyClass) -> &'static str {
    match class {
        AdjacencyClass::Equal => "equal",
        AdjacencyClass::OrthogonalAdjacent => "orthogonal_adjacent",
        AdjacencyClass::NonOrthogonalAdjacent => "non_orthogonal_adjacent",
        AdjacencyClass::NonAdjacent => "non_adjacent",
    }
}

fn estimate_label(estimate: DimensionEstimate) -> &'static str {
    match estimate {
        DimensionEstimate::Zero => "zero",
        DimensionEstimate::One => "one",
        DimensionEstimate::Two => "two",
        DimensionEstimate::AtLeastTwo => "at_least_two",
    }
}

/// Output of the `angles` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnglesJson {
    pub angles: Vec<f64>,
    pub trace_product: f64,
    pub adjacency_class: String,
}

impl AnglesJson {
    pub fn new<T: Real>(angles: &[T], trace_product: T, class: AdjacencyClass) -> Self {
        AnglesJson {
            angles: angles.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect(),
            trace_product: trace_product.to_f64().unwrap_or(f64::NAN),
            adjacency_class: adjacency_label(class).to_string(),
        }
    }
}

/// Output of the `aset-probe` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsetProbeJson {
    pub class: String,
    pub dimension_estimate: String,
    pub n_members_found: usize,
}

impl AsetProbeJson {
    pub fn new(class: AdjacencyClass, estimate: DimensionEstimate, members: usize) -> Self {
        AsetProbeJson {
            class: adjacency_label(class).to_string(),
            dimension_estimate: estimate_label(estimate).to_string(),
            n_members_found: members,
        }
    }
}

/// Output of the `check` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_pair: Option<[ProjectionJson; 2]>,
}

impl ReportJson {
    pub fn from_report<T: Real>(report: &PreservationReport<T>) -> Self {
        ReportJson {
            max_residual: report.max_residual.to_f64().unwrap_or(f64::NAN),
            violating_pair: report.violating_pair.as_ref().map(|(p, q)| {
                [ProjectionJson::from_projection(p), ProjectionJson::from_projection(q)]
            }),
        }
    }
}

/// Output of the `reconstruct` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub form: String,
    pub linearity: String,
    #[serde(rename = "V")]
    pub v: MatrixJson,
    pub residual: f64,
    pub verified_pairs: usize,
}

impl ClassificationJson {
    pub fn from_classification<T: Real>(c: &WignerClassification<T>) -> Self {
        ClassificationJson {
            form: match c.form {
                Form::Plain => "plain",
                Form::Complement => "complement",
            }
            .to_string(),
            linearity: match c.linearity {
                Linearity::Linear => "linear",
                Linearity::Antilinear => "antilinear",
            }
            .to_string(),
            v: MatrixJson::from_matrix(&c.v),
            residual: c.residual.to_f64().unwrap_or(f64::NAN),
            verified_pairs: c.verified_pairs,
        }
    }
}

/// Canonical serialization used for all outputs and files: pretty-printed,
/// newline-terminated. Re-serializing a parsed value reproduces the bytes.
pub fn to_json_string<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
