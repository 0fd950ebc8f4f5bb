//! Experiment configuration and generator selection.

use grasswig_core::angles::default_angle_tol;
use grasswig_core::projections::default_tol;

use crate::error::{CliError, Result};

/// Validation, angle, and verification tolerances. All positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub validate: f64,
    pub angle: f64,
    pub verify: f64,
}

impl Tolerances {
    /// Fills unset tolerances with the defaults for dimension d.
    pub fn resolve(d: usize, validate: Option<f64>, angle: Option<f64>, verify: Option<f64>) -> Self {
        Tolerances {
            validate: validate.unwrap_or_else(|| default_tol::<f64>(d)),
            angle: angle.unwrap_or_else(default_angle_tol::<f64>),
            verify: verify.unwrap_or(1e-6),
        }
    }
}

/// Dimensions, seed, sample count, and tolerances of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn new(d: usize, n: usize, seed: u64, trials: usize, tolerances: Tolerances) -> Result<Self> {
        if !(d > n && n >= 1) {
            return Err(CliError::Usage(format!("need d > n >= 1, got d={d}, n={n}")));
        }
        if trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        if !(tolerances.validate > 0.0 && tolerances.angle > 0.0 && tolerances.verify > 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        Ok(ExperimentConfig { d, n, seed, trials, tolerances })
    }
}

/// The map generators a tabulated oracle file can be drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GeneratorKind {
    /// φ(P) = UPU*
    Unitary,
    /// φ(P) = U·conj(P)·U*
    Antiunitary,
    /// φ(P) = I − UPU*, requires d = 2n
    ComplementUnitary,
    /// φ(P) = I − U·conj(P)·U*, requires d = 2n
    ComplementAntiunitary,
    /// Conjugation by an invertible non-unitary operator with spectral
    /// re-projection; violates preservation. Negative control.
    NonPreservingDistortion,
}

impl GeneratorKind {
    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::Unitary => "unitary",
            GeneratorKind::Antiunitary => "antiunitary",
            GeneratorKind::ComplementUnitary => "complement_unitary",
            GeneratorKind::ComplementAntiunitary => "complement_antiunitary",
            GeneratorKind::NonPreservingDistortion => "non_preserving_distortion",
        }
    }

    pub fn is_complement(self) -> bool {
        matches!(self, GeneratorKind::ComplementUnitary | GeneratorKind::ComplementAntiunitary)
    }
}

/// Which generator to draw, and the seed to draw it from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Complement kinds exist only at d = 2n.
    pub fn check_against(&self, config: &ExperimentConfig) -> Result<()> {
        if self.kind.is_complement() && config.d != 2 * config.n {
            return Err(CliError::Usage(format!(
                "{} requires d = 2n, got d={}, n={}",
                self.kind.label(),
                config.d,
                config.n
            )));
        }
        Ok(())
    }
}
