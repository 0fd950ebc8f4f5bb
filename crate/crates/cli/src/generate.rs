//! Drawing generators and assembling tabulated oracle files.

use grasswig_core::extend::projection_spanning_basis;
use grasswig_core::matrix::{identity, singular_values_desc, CMat};
use grasswig_core::projections::{
    complement, conjugate_entrywise, conjugated, nearest_projection, random_projection,
    random_unitary,
};
use grasswig_core::reconstruct::probe_family;
use grasswig_core::rng::{complex_gaussian, rng_from_seed, split_seed};
use grasswig_core::scalar::cr;
use grasswig_core::Projection;

use crate::config::{ExperimentConfig, GeneratorKind, GeneratorSpec};
use crate::error::Result;
use crate::json::{OracleEntryJson, OracleFileJson, TruthJson, FORMAT_VERSION, RNG_SCHEME};
use crate::json::MatrixJson;

/// A drawn generator: the kind plus its operator (a Haar unitary, or the
/// distortion operator for the negative control).
pub struct Generator {
    kind: GeneratorKind,
    op: CMat<f64>,
}

/// Invertible, deliberately non-unitary: I plus a scaled complex Gaussian,
/// redrawn until the smallest singular value clears 0.05.
fn distortion_operator(d: usize, seed: u64) -> CMat<f64> {
    for attempt in 0..64 {
        let mut rng = rng_from_seed(split_seed(seed, attempt));
        let mut t = identity::<f64>(d);
        for i in 0..d {
            for j in 0..d {
                t[(i, j)] += complex_gaussian::<f64, _>(&mut rng) * cr(0.3);
            }
        }
        let sv = singular_values_desc(&t);
        if sv[d - 1] > 0.05 {
            return t;
        }
    }
    unreachable!("distortion draw failed 64 times in a row");
}

impl Generator {
    pub fn draw(d: usize, spec: &GeneratorSpec) -> Self {
        let op = match spec.kind {
            GeneratorKind::NonPreservingDistortion => distortion_operator(d, split_seed(spec.seed, 0)),
            _ => random_unitary::<f64>(d, split_seed(spec.seed, 0)),
        };
        Generator { kind: spec.kind, op }
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn op(&self) -> &CMat<f64> {
        &self.op
    }

    /// The generator formula applied to a projection of any rank.
    pub fn apply(&self, p: &Projection<f64>) -> Projection<f64> {
        match self.kind {
            GeneratorKind::Unitary => conjugated(&self.op, p),
            GeneratorKind::Antiunitary => conjugated(&self.op, &conjugate_entrywise(p)),
            GeneratorKind::ComplementUnitary => complement(&conjugated(&self.op, p)),
            GeneratorKind::ComplementAntiunitary => {
                complement(&conjugated(&self.op, &conjugate_entrywise(p)))
            }
            GeneratorKind::NonPreservingDistortion => {
                let image = &self.op * p.matrix() * self.op.adjoint();
                nearest_projection(&image, p.rank()).expect("re-projection cannot fail here")
            }
        }
    }
}

/// Tabulates a drawn generator on the spanning basis, the probe family,
/// and `trials` random projections.
///
/// Seed discipline: counter 0 of the master seed draws the generator,
/// counter 1+i the i-th random input; the basis and probe sections are
/// deterministic in (d, n) and consume no randomness.
pub fn build_oracle_file(config: &ExperimentConfig, spec: &GeneratorSpec) -> Result<OracleFileJson> {
    spec.check_against(config)?;
    let (d, n) = (config.d, config.n);
    let generator = Generator::draw(d, spec);

    let basis = projection_spanning_basis::<f64>(d, n)?
        .projections()
        .iter()
        .map(|p| OracleEntryJson::new(p, &generator.apply(p)))
        .collect();
    let probe = probe_family::<f64>(d)
        .iter()
        .map(|p| OracleEntryJson::new(p, &generator.apply(p)))
        .collect();
    let random = (0..config.trials)
        .map(|i| {
            let p = random_projection::<f64>(d, n, split_seed(config.seed, 1 + i as u64))?;
            Ok(OracleEntryJson::new(&p, &generator.apply(&p)))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(OracleFileJson {
        format_version: FORMAT_VERSION,
        rng: RNG_SCHEME.to_string(),
        d,
        n,
        seed: config.seed,
        kind: generator.kind().label().to_string(),
        basis,
        probe,
        random,
        truth: TruthJson {
            kind: generator.kind().label().to_string(),
            u: MatrixJson::from_matrix(generator.op()),
        },
    })
}
