//! Run configuration: channel and noise specifications, angles, shots and
//! seeds. Everything a run needs is reproducible from (config, seed).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use dcqd_core::channel::{ChiMatrix1Q, ChiMatrix2Q};
use dcqd_core::linalg::ComplexMatrix;
use dcqd_core::qobj::InputParams;
use dcqd_core::shortcuts::BellDiagonalNoise;
use dcqd_core::{Complex64, FaultySetting};

/// Channel under test: a named preset, an explicit chi block, or a Kraus
/// list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    /// "identity", "depolarizing:EPS" or "unitary:AXIS,ANGLE".
    Preset(String),
    /// 4x4 chi matrix, sixteen [re, im] pairs row-major.
    Chi { chi: Vec<[f64; 2]> },
    /// Kraus operators, each a 2x2 row-major list of [re, im] pairs.
    Kraus { kraus: Vec<Vec<[f64; 2]>> },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<ChiMatrix1Q> {
        match self {
            ChannelSpec::Preset(name) => build_preset(name),
            ChannelSpec::Chi { chi } => {
                let mat = matrix_from_pairs(chi, 4).context("channel chi block")?;
                Ok(ChiMatrix1Q::new(mat)?)
            }
            ChannelSpec::Kraus { kraus } => {
                let ops: Result<Vec<ComplexMatrix>> = kraus
                    .iter()
                    .map(|k| matrix_from_pairs(k, 2).context("kraus operator"))
                    .collect();
                Ok(ChiMatrix1Q::from_kraus(&ops?)?)
            }
        }
    }
}

fn build_preset(name: &str) -> Result<ChiMatrix1Q> {
    if name == "identity" {
        return Ok(ChiMatrix1Q::identity());
    }
    if let Some(rest) = name.strip_prefix("depolarizing:") {
        let eps: f64 = rest.parse().context("depolarizing strength")?;
        return Ok(ChiMatrix1Q::depolarizing(eps)?);
    }
    if let Some(rest) = name.strip_prefix("unitary:") {
        let (axis, angle) = rest
            .split_once(',')
            .ok_or_else(|| anyhow!("expected unitary:AXIS,ANGLE"))?;
        let angle: f64 = angle.parse().context("rotation angle")?;
        let sigma = match axis {
            "x" => dcqd_core::PauliIndex::X,
            "y" => dcqd_core::PauliIndex::Y,
            "z" => dcqd_core::PauliIndex::Z,
            other => bail!("unknown rotation axis {other:?}"),
        };
        let u = ComplexMatrix::identity(2)
            .scale(Complex64::new((angle / 2.0).cos(), 0.0))
            .add(
                &dcqd_core::qobj::pauli(sigma)
                    .scale(Complex64::new(0.0, -(angle / 2.0).sin())),
            );
        return Ok(ChiMatrix1Q::from_unitary(&u)?);
    }
    bail!("unknown channel preset {name:?}")
}

/// A known two-qubit unitary, by name or as a 4x4 matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitarySpec {
    Named(String),
    Matrix(Vec<[f64; 2]>),
}

impl UnitarySpec {
    pub fn build(&self) -> Result<ComplexMatrix> {
        match self {
            UnitarySpec::Named(name) => match name.as_str() {
                "identity" => Ok(ComplexMatrix::identity(4)),
                "cnot" => Ok(ComplexMatrix::from_real_rows(&[
                    vec![1.0, 0.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0, 0.0],
                    vec![0.0, 0.0, 0.0, 1.0],
                    vec![0.0, 0.0, 1.0, 0.0],
                ])),
                "swap" => Ok(ComplexMatrix::from_real_rows(&[
                    vec![1.0, 0.0, 0.0, 0.0],
                    vec![0.0, 0.0, 1.0, 0.0],
                    vec![0.0, 1.0, 0.0, 0.0],
                    vec![0.0, 0.0, 0.0, 1.0],
                ])),
                other => bail!("unknown unitary preset {other:?}"),
            },
            UnitarySpec::Matrix(pairs) => matrix_from_pairs(pairs, 4).context("unitary matrix"),
        }
    }
}

/// Preparation/measurement noise model of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)] // configs are parsed once, not stored in bulk
pub enum NoiseSpec {
    Ideal,
    CorrelatedDepolarizing {
        eps: f64,
        eps_meas: f64,
    },
    GeneralizedDepolarizing {
        eps: f64,
        eps_meas: f64,
        u: UnitarySpec,
    },
    UncorrelatedDepolarizing {
        eps: f64,
        eps_meas: f64,
    },
    BellDiagonal {
        eps_prep: [[f64; 4]; 4],
        eps_meas: [[f64; 4]; 4],
    },
    Explicit {
        chi_prep: Vec<[f64; 2]>,
        chi_meas: Vec<[f64; 2]>,
    },
}

impl NoiseSpec {
    /// The two-qubit noise channels of this spec, when it describes
    /// channels (Bell-diagonal mixing acts on settings, not states).
    pub fn to_setting(&self, params: InputParams) -> Result<FaultySetting> {
        let (prep, meas) = match self {
            NoiseSpec::Ideal => (ChiMatrix2Q::identity(), ChiMatrix2Q::identity()),
            NoiseSpec::CorrelatedDepolarizing { eps, eps_meas } => (
                ChiMatrix2Q::depolarizing(*eps)?,
                ChiMatrix2Q::depolarizing(*eps_meas)?,
            ),
            NoiseSpec::GeneralizedDepolarizing { eps, eps_meas, u } => (
                ChiMatrix2Q::generalized_depolarizing(*eps, &u.build()?)?,
                ChiMatrix2Q::depolarizing(*eps_meas)?,
            ),
            NoiseSpec::UncorrelatedDepolarizing { eps, eps_meas } => {
                let lp = ChiMatrix1Q::depolarizing(*eps)?;
                let lm = ChiMatrix1Q::depolarizing(*eps_meas)?;
                (
                    ChiMatrix2Q::from_local_pair(&lp, &lp),
                    ChiMatrix2Q::from_local_pair(&lm, &lm),
                )
            }
            NoiseSpec::BellDiagonal { .. } => {
                bail!("bell-diagonal noise mixes settings and has no channel form; use method shortcut-belldiag")
            }
            NoiseSpec::Explicit { chi_prep, chi_meas } => (
                ChiMatrix2Q::new(matrix_from_pairs(chi_prep, 16).context("chi_prep")?)?,
                ChiMatrix2Q::new(matrix_from_pairs(chi_meas, 16).context("chi_meas")?)?,
            ),
        };
        Ok(FaultySetting::new(prep, meas, params)?)
    }

    pub fn bell_diagonal(&self) -> Result<BellDiagonalNoise> {
        match self {
            NoiseSpec::BellDiagonal { eps_prep, eps_meas } => {
                Ok(BellDiagonalNoise::new(*eps_prep, *eps_meas)?)
            }
            _ => bail!("noise kind is not bell-diagonal"),
        }
    }
}

/// Shot count: a number or the string "exact" for noiseless probabilities.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ShotsSpec {
    Word(String),
    Count(u64),
}

impl ShotsSpec {
    pub fn exact() -> Self {
        ShotsSpec::Word("exact".into())
    }

    pub fn count(&self) -> Result<Option<u64>> {
        match self {
            ShotsSpec::Word(w) if w == "exact" => Ok(None),
            ShotsSpec::Word(w) => bail!("shots must be a count or \"exact\", got {w:?}"),
            ShotsSpec::Count(0) => bail!("shots must be at least 1"),
            ShotsSpec::Count(n) => Ok(Some(*n)),
        }
    }
}

/// Reconstruction method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Ideal,
    Faulty,
    ShortcutCorrelated,
    ShortcutGeneralizedU,
    ShortcutBelldiag,
}

impl Method {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ideal" => Ok(Method::Ideal),
            "faulty" => Ok(Method::Faulty),
            "shortcut-correlated" => Ok(Method::ShortcutCorrelated),
            "shortcut-generalized-u" => Ok(Method::ShortcutGeneralizedU),
            "shortcut-belldiag" => Ok(Method::ShortcutBelldiag),
            other => bail!("unknown method {other:?}"),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Ideal => "ideal",
            Method::Faulty => "faulty",
            Method::ShortcutCorrelated => "shortcut-correlated",
            Method::ShortcutGeneralizedU => "shortcut-generalized-u",
            Method::ShortcutBelldiag => "shortcut-belldiag",
        }
    }
}

/// The on-disk run configuration. Angles default to the optimal design
/// point; noise defaults to ideal; shots default to exact.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: Option<ChannelSpec>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub noise: Option<NoiseSpec>,
    pub shots: Option<ShotsSpec>,
    pub seed: Option<u64>,
    pub method: Option<String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn params(&self) -> InputParams {
        InputParams::new(
            self.theta.unwrap_or(FRAC_PI_8),
            self.phi.unwrap_or(FRAC_PI_2),
        )
    }

    pub fn noise(&self) -> NoiseSpec {
        self.noise.clone().unwrap_or(NoiseSpec::Ideal)
    }

    pub fn shots(&self) -> ShotsSpec {
        self.shots.clone().unwrap_or_else(ShotsSpec::exact)
    }
}

pub fn matrix_from_pairs(pairs: &[[f64; 2]], n: usize) -> Result<ComplexMatrix> {
    if pairs.len() != n * n {
        bail!("expected {} [re, im] pairs, got {}", n * n, pairs.len());
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let [re, im] = pairs[r * n + c];
        Complex64::new(re, im)
    }))
}

pub fn pairs_from_matrix(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}
