//! The ideal four-setting protocol: outcome probabilities, the constant
//! arrangement matrix C, the 16x16 coefficient matrix Lambda built either
//! by linear probing (ground truth) or from its published closed form,
//! linear-inversion reconstruction with conditioning diagnostics, and a
//! finite-shot sampling layer.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{apply_1q_on_a_raw, ChiMatrix1Q};
use crate::error::{DcqdError, Result};
use crate::linalg::{c, cr, ComplexMatrix, ONE, ZERO};
use crate::qobj::{bell_vector, dcqd_input, dcqd_input_raw, BellIndex, DensityMatrix2Q, InputParams};

/// Reconstructions with a condition number above this fail as
/// `IllConditioned`: the inversion would amplify data errors by more than
/// eight orders of magnitude.
pub const ILL_CONDITIONED_THRESHOLD: f64 = 1e8;
/// `|det Lambda|` at or below this counts as singular.
pub const SINGULAR_DET_THRESHOLD: f64 = 1e-10;
const PROBABILITY_TOL: f64 = 1e-10;

/// The sixteen outcome probabilities `p_ij = Tr[P^jj E(rho_i)]`, stored
/// row-major with the setting index i outer.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    p: [f64; 16],
}

impl ProbabilityVector {
    /// Wrap raw values, requiring each to lie in `[-1e-10, 1 + 1e-10]`.
    pub fn from_values(p: [f64; 16]) -> Result<Self> {
        for (idx, &v) in p.iter().enumerate() {
            if !v.is_finite() || !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(&v) {
                return Err(DcqdError::InvalidProbability(format!(
                    "entry {idx} = {v} outside [0, 1]"
                )));
            }
        }
        Ok(Self { p })
    }

    pub fn get(&self, setting: usize, outcome: usize) -> f64 {
        self.p[4 * setting + outcome]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn to_array(&self) -> [f64; 16] {
        self.p
    }

    /// Per-setting outcome sums; 1 for trace-preserving channels.
    pub fn setting_sums(&self) -> [f64; 4] {
        let mut sums = [0.0; 4];
        for (i, sum) in sums.iter_mut().enumerate() {
            *sum = (0..4).map(|j| self.get(i, j)).sum();
        }
        sums
    }
}

/// The probabilities recombined into the readout row order: per setting,
/// the two sums followed by the two differences of paired outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrangedVector {
    q: [f64; 16],
}

impl ArrangedVector {
    pub fn from_probabilities(pv: &ProbabilityVector) -> Self {
        let c_mat = coefficient_matrix_c();
        let mut q = [0.0; 16];
        for (row, entry) in q.iter_mut().enumerate() {
            let mut acc = 0.0;
            for col in 0..16 {
                let coeff = c_mat[(row, col)].re;
                if coeff != 0.0 {
                    acc += coeff * pv.as_slice()[col];
                }
            }
            *entry = acc;
        }
        Self { q }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }
}

/// The constant 16x16 arrangement matrix: identity on the first setting,
/// then sum/difference pair combinations for the other three. Entries are
/// -1, 0 or 1; the matrix is invertible.
pub fn coefficient_matrix_c() -> ComplexMatrix {
    const ROWS: [[(usize, f64); 2]; 16] = [
        [(0, 1.0), (0, 0.0)],
        [(1, 1.0), (1, 0.0)],
        [(2, 1.0), (2, 0.0)],
        [(3, 1.0), (3, 0.0)],
        [(4, 1.0), (7, 1.0)],
        [(5, 1.0), (6, 1.0)],
        [(4, 1.0), (7, -1.0)],
        [(5, 1.0), (6, -1.0)],
        [(8, 1.0), (9, 1.0)],
        [(10, 1.0), (11, 1.0)],
        [(8, 1.0), (9, -1.0)],
        [(10, -1.0), (11, 1.0)],
        [(12, 1.0), (14, 1.0)],
        [(13, 1.0), (15, 1.0)],
        [(12, 1.0), (14, -1.0)],
        [(13, -1.0), (15, 1.0)],
    ];
    let mut m = ComplexMatrix::zeros(16, 16);
    for (row, pairs) in ROWS.iter().enumerate() {
        for &(col, sign) in pairs {
            if sign != 0.0 {
                m[(row, col)] = cr(sign);
            }
        }
    }
    m
}

/// The 16x16 system matrix with its determinant and condition number.
/// The condition number is computed on first use: determinant sweeps over
/// angle grids never pay for it.
#[derive(Debug, Clone)]
pub struct LambdaSystem {
    lambda: ComplexMatrix,
    det: Complex64,
    cond: std::sync::OnceLock<f64>,
}

impl LambdaSystem {
    pub fn new(lambda: ComplexMatrix) -> Self {
        assert_eq!((lambda.rows(), lambda.cols()), (16, 16));
        let det = lambda.det();
        Self {
            lambda,
            det,
            cond: std::sync::OnceLock::new(),
        }
    }

    pub fn lambda(&self) -> &ComplexMatrix {
        &self.lambda
    }

    pub fn det(&self) -> Complex64 {
        self.det
    }

    pub fn absdet(&self) -> f64 {
        self.det.norm()
    }

    pub fn cond(&self) -> f64 {
        *self.cond.get_or_init(|| self.lambda.condition_number())
    }
}

/// Outcome probabilities of one setting: `<B^j| out |B^j>` for j = 0..3.
pub(crate) fn bell_outcomes(out: &ComplexMatrix) -> [Complex64; 4] {
    let mut res = [ZERO; 4];
    for (j, slot) in res.iter_mut().enumerate() {
        let b = bell_vector(BellIndex::from_index(j).unwrap());
        let mut acc = ZERO;
        for r in 0..4 {
            for col in 0..4 {
                acc += b[r].conj() * out[(r, col)] * b[col];
            }
        }
        *slot = acc;
    }
    res
}

/// `p_ij = Tr[P^jj E(rho_i)]` for the four standard inputs at `p`.
pub fn simulate_probabilities(chi: &ChiMatrix1Q, p: &InputParams) -> Result<ProbabilityVector> {
    let mut values = [0.0; 16];
    for i in 0..4 {
        let rho = dcqd_input(i, p)?;
        let out = apply_1q_on_a_raw(chi.matrix(), rho.matrix());
        let outcomes = bell_outcomes(&out);
        for (j, outcome) in outcomes.iter().enumerate() {
            values[4 * i + j] = outcome.re;
        }
    }
    ProbabilityVector::from_values(values)
}

/// The standard four input states without the informativeness guard, so
/// the system builders stay total in the angles.
pub(crate) fn standard_inputs(p: &InputParams) -> [DensityMatrix2Q; 4] {
    [
        dcqd_input_raw(0, p),
        dcqd_input_raw(1, p),
        dcqd_input_raw(2, p),
        dcqd_input_raw(3, p),
    ]
}

/// Ground-truth Lambda built by probing: column (m, n) is the arranged
/// outcome vector of the matrix-unit chi probe, so that
/// `C p(chi) = Lambda vec(chi)` holds for every chi by linearity.
pub fn numeric_lambda(p: &InputParams) -> LambdaSystem {
    numeric_lambda_for_inputs(&standard_inputs(p))
}

/// Probing builder with an explicit input set; used for the U-conjugated
/// reconstruction path and anywhere the inputs are transformed.
pub fn numeric_lambda_for_inputs(inputs: &[DensityMatrix2Q; 4]) -> LambdaSystem {
    let c_mat = coefficient_matrix_c();
    let i2 = ComplexMatrix::identity(2);
    let lifted: Vec<ComplexMatrix> = crate::qobj::PauliIndex::ALL
        .iter()
        .map(|&m| crate::qobj::pauli(m).kron(&i2))
        .collect();
    let mut lambda = ComplexMatrix::zeros(16, 16);
    for m in 0..4 {
        for n in 0..4 {
            let mut probe_outcomes = [ZERO; 16];
            for (i, rho) in inputs.iter().enumerate() {
                let out = lifted[m].mul(rho.matrix()).mul(&lifted[n]);
                let outcomes = bell_outcomes(&out);
                probe_outcomes[4 * i..4 * i + 4].copy_from_slice(&outcomes);
            }
            for row in 0..16 {
                let mut acc = ZERO;
                for col in 0..16 {
                    let coeff = c_mat[(row, col)];
                    if coeff != ZERO {
                        acc += coeff * probe_outcomes[col];
                    }
                }
                lambda[(row, 4 * m + n)] = acc;
            }
        }
    }
    LambdaSystem::new(lambda)
}

/// The analytic closed form of Lambda(theta, phi) with `x = cos(2 theta)`,
/// `y = sin(2 theta) sin(phi)`, `z = sin(2 theta) cos(phi)`. It differs
/// from the probed ground truth in a fixed set of twelve sign entries tied
/// to phase conventions; see `analytic_lambda_discrepancy`.
pub fn analytic_lambda(p: &InputParams) -> LambdaSystem {
    let x = (2.0 * p.theta).cos();
    let y = (2.0 * p.theta).sin() * p.phi.sin();
    let z = (2.0 * p.theta).sin() * p.phi.cos();
    let o = ZERO;
    let l = ONE;
    let xr = cr(x);
    let ix = c(0.0, x);
    let yr = cr(y);
    let iy = c(0.0, y);
    let zr = cr(z);
    let rows = vec![
        vec![l, o, o, o, o, o, o, o, o, o, o, o, o, o, o, o],
        vec![o, o, o, o, o, l, o, o, o, o, o, o, o, o, o, o],
        vec![o, o, o, o, o, o, o, o, o, o, l, o, o, o, o, o],
        vec![o, o, o, o, o, o, o, o, o, o, o, o, o, o, o, l],
        vec![l, o, o, xr, o, o, o, o, o, o, o, o, xr, o, o, l],
        vec![o, o, o, o, o, l, -ix, o, o, ix, l, o, o, o, o, o],
        vec![zr, o, o, iy, o, o, o, o, o, o, o, o, -iy, o, o, -zr],
        vec![o, o, o, o, o, zr, yr, o, o, yr, -zr, o, o, o, o, o],
        vec![l, xr, o, o, xr, l, o, o, o, o, o, o, o, o, o, o],
        vec![o, o, o, o, o, o, o, o, o, o, l, -ix, o, o, ix, l],
        vec![zr, iy, o, o, -iy, -zr, o, o, o, o, o, o, o, o, o, o],
        vec![o, o, o, o, o, o, o, o, o, o, zr, yr, o, o, yr, -zr],
        vec![o, o, o, o, o, l, o, -ix, o, o, o, o, o, ix, o, l],
        vec![l, o, -xr, o, o, o, o, o, -xr, o, l, o, o, o, o, o],
        vec![o, o, o, o, o, -zr, o, -yr, o, o, o, o, o, -yr, o, zr],
        vec![-zr, o, iy, o, o, o, o, o, -iy, o, zr, o, o, o, o, o],
    ];
    LambdaSystem::new(ComplexMatrix::from_rows(&rows))
}

/// Entrywise comparison of the probed Lambda against the analytic form.
///
/// Under the conventions fixed in `qobj` the two differ by a sign in
/// exactly twelve entries of the last five rows; the mismatch is reported
/// here rather than patched into either matrix. Determinant magnitude and
/// condition number are unaffected.
pub fn analytic_lambda_discrepancy(p: &InputParams) -> Vec<(usize, usize, Complex64, Complex64)> {
    let numeric = numeric_lambda(p);
    let analytic = analytic_lambda(p);
    let mut out = Vec::new();
    for row in 0..16 {
        for col in 0..16 {
            let a = numeric.lambda()[(row, col)];
            let b = analytic.lambda()[(row, col)];
            if (a - b).norm() > 1e-9 {
                out.push((row, col, a, b));
            }
        }
    }
    out
}

/// Result of a linear-inversion reconstruction plus its diagnostics.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub chi: ChiMatrix1Q,
    pub hermiticity_residual: f64,
    pub psd_min_eig: f64,
    pub cond: f64,
    pub absdet: f64,
    pub symmetrized: bool,
}

impl Reconstruction {
    /// Replace chi with its nearest Hermitian matrix and flag the output.
    pub fn into_symmetrized(self) -> Self {
        let sym = self.chi.matrix().hermitize();
        let (eigs, _) = sym.eig_hermitian().expect("hermitized");
        Self {
            hermiticity_residual: 0.0,
            psd_min_eig: eigs[eigs.len() - 1],
            chi: ChiMatrix1Q::new(sym).expect("4x4"),
            symmetrized: true,
            ..self
        }
    }
}

/// Invert an arranged-data system: `chi = Lambda^-1 C p`.
///
/// A non-finite condition number (the singularity sentinel) fails as
/// `SingularMatrix`; a finite condition number above the gate fails as
/// `IllConditioned`. The absolute determinant is not gated here: the
/// noise-aware system's determinant shrinks like a high power of the noise
/// contrast while staying perfectly invertible, so only the normalized
/// ideal path (`reconstruct_ideal`) also applies a determinant threshold.
pub fn reconstruct_against(pv: &ProbabilityVector, system: &LambdaSystem) -> Result<Reconstruction> {
    if !system.cond().is_finite() {
        return Err(DcqdError::SingularMatrix { pivot: 0 });
    }
    if system.cond() > ILL_CONDITIONED_THRESHOLD {
        return Err(DcqdError::IllConditioned {
            cond: system.cond(),
        });
    }
    let arranged = ArrangedVector::from_probabilities(pv);
    let rhs: Vec<Complex64> = arranged.as_slice().iter().map(|&v| cr(v)).collect();
    let x = system.lambda().lu_solve(&rhs)?;
    let chi_mat = ComplexMatrix::from_fn(4, 4, |m, n| x[4 * m + n]);
    let hermiticity_residual = chi_mat.hermiticity_residual();
    let (eigs, _) = chi_mat.hermitize().eig_hermitian()?;
    Ok(Reconstruction {
        chi: ChiMatrix1Q::new(chi_mat)?,
        hermiticity_residual,
        psd_min_eig: eigs[eigs.len() - 1],
        cond: system.cond(),
        absdet: system.absdet(),
        symmetrized: false,
    })
}

/// Recover chi from ideal-protocol data at the given angles. The ideal
/// system has `|det| = sin^6(4 theta) sin^6(phi) <= 1`, so a determinant
/// at or below `SINGULAR_DET_THRESHOLD` marks degenerate angles.
pub fn reconstruct_ideal(pv: &ProbabilityVector, p: &InputParams) -> Result<Reconstruction> {
    let system = numeric_lambda(p);
    if system.absdet() <= SINGULAR_DET_THRESHOLD {
        return Err(DcqdError::SingularMatrix { pivot: 0 });
    }
    reconstruct_against(pv, &system)
}

/// Empirical frequencies from one multinomial sample of `shots` draws per
/// setting; deterministic for a fixed seed.
pub fn sample_shots(pv: &ProbabilityVector, shots: u64, seed: u64) -> ProbabilityVector {
    assert!(shots >= 1, "at least one shot per setting");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = [0.0; 16];
    for i in 0..4 {
        // clip rounding-level negatives and renormalize for the draw
        let mut w = [0.0; 4];
        for (j, slot) in w.iter_mut().enumerate() {
            *slot = pv.get(i, j).max(0.0);
        }
        let total: f64 = w.iter().sum();
        let mut counts = [0u64; 4];
        for _ in 0..shots {
            let u = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut outcome = 3;
            for (j, &wj) in w.iter().enumerate() {
                acc += wj;
                if u < acc {
                    outcome = j;
                    break;
                }
            }
            counts[outcome] += 1;
        }
        for j in 0..4 {
            values[4 * i + j] = counts[j] as f64 / shots as f64;
        }
    }
    ProbabilityVector::from_values(values).expect("frequencies lie in [0, 1]")
}
