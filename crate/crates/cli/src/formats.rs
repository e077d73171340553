//! On-disk data formats. JSON with explicit schema tags; complex entries
//! are always [re, im] pairs in row-major order; floats print through the
//! standard shortest-round-trip formatter, so files are byte-identical
//! across runs and platforms.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::{matrix_from_pairs, pairs_from_matrix, NoiseSpec, ShotsSpec};
use dcqd_core::channel::ChiMatrix1Q;
use dcqd_core::design::SurfacePoint;
use dcqd_core::protocol::{ProbabilityVector, Reconstruction};

pub const PROBS_SCHEMA: &str = "dcqd-probs/1";
pub const CHI_SCHEMA: &str = "dcqd-chi/1";
pub const DESIGN_SCHEMA: &str = "dcqd-design/1";
pub const VERIFY_SCHEMA: &str = "dcqd-verify/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleParams {
    pub theta: f64,
    pub phi: f64,
}

/// Measurement-statistics document written by gen-data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbFile {
    pub schema: String,
    pub params: AngleParams,
    pub noise: NoiseSpec,
    pub shots: ShotsSpec,
    pub p: Vec<f64>,
}

impl ProbFile {
    pub fn new(theta: f64, phi: f64, noise: NoiseSpec, shots: ShotsSpec, pv: &ProbabilityVector) -> Self {
        Self {
            schema: PROBS_SCHEMA.into(),
            params: AngleParams { theta, phi },
            noise,
            shots,
            p: pv.as_slice().to_vec(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let file: ProbFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if file.schema != PROBS_SCHEMA {
            bail!("expected schema {PROBS_SCHEMA}, got {}", file.schema);
        }
        if file.p.len() != 16 {
            bail!("expected 16 probabilities, got {}", file.p.len());
        }
        Ok(file)
    }

    pub fn probabilities(&self) -> Result<ProbabilityVector> {
        let mut values = [0.0; 16];
        values.copy_from_slice(&self.p);
        Ok(ProbabilityVector::from_values(values)?)
    }
}

/// Reconstruction document written by the reconstruct command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiFile {
    pub schema: String,
    pub chi: Vec<[f64; 2]>,
    /// Absent in partial documents written after a refused inversion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermiticity_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd_min_eig: Option<f64>,
    /// Absent when non-finite (JSON has no infinity).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absdet: Option<f64>,
    pub method: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl ChiFile {
    pub fn new(rec: &Reconstruction, method: &str) -> Self {
        Self {
            schema: CHI_SCHEMA.into(),
            chi: pairs_from_matrix(rec.chi.matrix()),
            hermiticity_residual: finite(rec.hermiticity_residual),
            psd_min_eig: finite(rec.psd_min_eig),
            cond: finite(rec.cond),
            absdet: finite(rec.absdet),
            method: method.into(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let file: ChiFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if file.schema != CHI_SCHEMA {
            bail!("expected schema {CHI_SCHEMA}, got {}", file.schema);
        }
        Ok(file)
    }

    pub fn chi_matrix(&self) -> Result<ChiMatrix1Q> {
        Ok(ChiMatrix1Q::new(matrix_from_pairs(&self.chi, 4)?)?)
    }
}

/// Design report printed by the optimize command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignFile {
    pub schema: String,
    pub theta: f64,
    pub phi: f64,
    pub absdet: f64,
    pub cond: f64,
    pub concurrence: f64,
}

/// Machine-readable verification summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyFile {
    pub schema: String,
    pub all_passed: bool,
    pub checks: Vec<VerifyCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// The plot-friendly export of the determinant surface.
pub fn surface_to_csv(points: &[SurfacePoint]) -> String {
    let mut out = String::from("theta,phi,absdet,cond\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.theta, p.phi, p.absdet, p.cond));
    }
    out
}

/// Serialize a document and either write it to `path` or print it.
pub fn emit<T: Serialize>(doc: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
