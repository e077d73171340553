//! Closed-form data-processing corrections for the depolarizing noise
//! families, and the Bell-diagonal mixing transform. Each shortcut is an
//! algebraic identity against the full faulty-pipeline simulation; the
//! equivalences are exercised by the verification suite.
//!
//! Shortcut outputs live in probability space, so reconstruction after a
//! correction reuses the ideal system matrix (with U-conjugated inputs for
//! the generalized family). Off-diagonal recovery under uncorrelated
//! per-qubit noise has no closed form here; that case goes through the
//! faulty-framework builder.

use num_complex::Complex64;

use crate::channel::{apply_1q_on_a_raw, ChiMatrix1Q};
use crate::error::{DcqdError, Result};
use crate::linalg::{cr, ComplexMatrix};
use crate::protocol::{bell_outcomes, ProbabilityVector};
use crate::qobj::{bell_projector, dcqd_input, BellIndex, DensityMatrix2Q, InputParams};

/// Below this contrast the inversion multiplies noise by more than 1e9.
pub const ZERO_CONTRAST_TOL: f64 = 1e-9;

fn contrast(eps: f64, eps2: f64) -> Result<f64> {
    let k = eps * eps2;
    if k.abs() < ZERO_CONTRAST_TOL {
        return Err(DcqdError::ZeroContrast(k));
    }
    Ok(k)
}

/// Invert the correlated-depolarizing rule for unital trace-preserving
/// channels: `p_ideal = (p_noisy - (1 - eps eps')/4) / (eps eps')`.
pub fn corrected_probability_correlated(p_noisy: f64, eps: f64, eps2: f64) -> Result<f64> {
    let k = contrast(eps, eps2)?;
    Ok((p_noisy - (1.0 - k) / 4.0) / k)
}

/// Vector form of `corrected_probability_correlated`.
pub fn correct_correlated(
    pv: &ProbabilityVector,
    eps: f64,
    eps2: f64,
) -> Result<ProbabilityVector> {
    let mut values = [0.0; 16];
    for (v, &p) in values.iter_mut().zip(pv.as_slice()) {
        *v = corrected_probability_correlated(p, eps, eps2)?;
    }
    ProbabilityVector::from_values(values)
}

/// The four-term forward rule for correlated depolarizing noise, valid for
/// any CP channel (no unitality assumed), evaluated term by term:
/// a constant floor from the doubly-erased part, a readout floor from the
/// erased preparation, a trace term from the erased measurement, and the
/// contrast-scaled ideal probability.
pub fn forward_correlated_general(
    chi: &ChiMatrix1Q,
    eps: f64,
    eps2: f64,
    p: &InputParams,
) -> Result<ProbabilityVector> {
    let chi_of_identity = apply_1q_on_a_raw(chi.matrix(), &ComplexMatrix::identity(4));
    let floor_trace = chi_of_identity.trace().re;
    let floor_outcomes = bell_outcomes(&chi_of_identity);
    let mut values = [0.0; 16];
    for i in 0..4 {
        let rho = dcqd_input(i, p)?;
        let image = apply_1q_on_a_raw(chi.matrix(), rho.matrix());
        let image_trace = image.trace().re;
        let outcomes = bell_outcomes(&image);
        for j in 0..4 {
            values[4 * i + j] = (1.0 - eps) * (1.0 - eps2) / 16.0 * floor_trace
                + eps2 * (1.0 - eps) / 4.0 * floor_outcomes[j].re
                + eps * (1.0 - eps2) / 4.0 * image_trace
                + eps * eps2 * outcomes[j].re;
        }
    }
    ProbabilityVector::from_values(values)
}

/// Inversion step for the generalized (U-conjugated) depolarizing family.
/// Arithmetic is the same contrast inversion; the recovered value is
/// `Tr[E(U rho_i U^dagger) P^jj]`, so downstream reconstruction must use
/// the system matrix built from U-conjugated inputs.
pub fn corrected_probability_generalized_u(p_noisy: f64, eps: f64, eps2: f64) -> Result<f64> {
    corrected_probability_correlated(p_noisy, eps, eps2)
}

/// The U-conjugated standard inputs, for building the matching system
/// matrix after a generalized-depolarizing correction.
pub fn conjugated_inputs(u: &ComplexMatrix, p: &InputParams) -> Result<[DensityMatrix2Q; 4]> {
    let mut out = Vec::with_capacity(4);
    for i in 0..4 {
        let rho = dcqd_input(i, p)?;
        let conj = u.mul(rho.matrix()).mul(&u.dagger()).hermitize();
        out.push(DensityMatrix2Q::new(conj)?);
    }
    Ok(out.try_into().expect("four inputs"))
}

/// Image of a Bell projector under per-qubit depolarizing noise on both
/// qubits: `(1 - eps^2)/4 (1 x 1) + eps^2 P^kk`.
pub fn uncorrelated_bell_image(k: BellIndex, eps: f64) -> Result<DensityMatrix2Q> {
    if !(-1.0 / 3.0..=1.0).contains(&eps) {
        return Err(DcqdError::OutOfRange(format!(
            "per-qubit depolarizing strength {eps} outside [-1/3, 1]"
        )));
    }
    let mat = ComplexMatrix::identity(4)
        .scale(cr((1.0 - eps * eps) / 4.0))
        .add(&bell_projector(k, k).scale(cr(eps * eps)));
    DensityMatrix2Q::new(mat)
}

/// Inversion for diagonal chi data under uncorrelated per-qubit noise:
/// the correlated rule with the contrast squared, `eps eps' -> (eps eps')^2`.
pub fn corrected_probability_uncorrelated(p_noisy: f64, eps: f64, eps2: f64) -> Result<f64> {
    let k = contrast(eps, eps2)?;
    let k2 = k * k;
    if k2.abs() < ZERO_CONTRAST_TOL {
        return Err(DcqdError::ZeroContrast(k2));
    }
    Ok((p_noisy - (1.0 - k2) / 4.0) / k2)
}

/// Stochastic mixing of the four settings on the preparation side and the
/// four Bell outcomes on the measurement side.
#[derive(Debug, Clone, PartialEq)]
pub struct BellDiagonalNoise {
    eps_prep: [[f64; 4]; 4],
    eps_meas: [[f64; 4]; 4],
}

impl BellDiagonalNoise {
    /// Rows of both matrices must sum to 1 (each noisy setting is a
    /// probability mix of ideal settings) with no negative weights.
    pub fn new(eps_prep: [[f64; 4]; 4], eps_meas: [[f64; 4]; 4]) -> Result<Self> {
        for (name, m) in [("prep", &eps_prep), ("meas", &eps_meas)] {
            for (i, row) in m.iter().enumerate() {
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-10 {
                    return Err(DcqdError::OutOfRange(format!(
                        "{name} row {i} sums to {sum}, not 1"
                    )));
                }
                if row.iter().any(|&v| v < -1e-12) {
                    return Err(DcqdError::OutOfRange(format!(
                        "{name} row {i} has a negative weight"
                    )));
                }
            }
        }
        Ok(Self { eps_prep, eps_meas })
    }

    /// Skip the stochasticity validation, for exploratory mixing matrices.
    pub fn new_unchecked(eps_prep: [[f64; 4]; 4], eps_meas: [[f64; 4]; 4]) -> Self {
        Self { eps_prep, eps_meas }
    }

    pub fn eps_prep(&self) -> &[[f64; 4]; 4] {
        &self.eps_prep
    }

    pub fn eps_meas(&self) -> &[[f64; 4]; 4] {
        &self.eps_meas
    }

    /// The 16x16 probability transform, the Kronecker product
    /// `eps_prep (x) eps_meas` in the (i, j) row-major layout.
    pub fn transform_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(16, 16, |row, col| {
            let (i, j) = (row / 4, row % 4);
            let (i2, j2) = (col / 4, col % 4);
            cr(self.eps_prep[i][i2] * self.eps_meas[j][j2])
        })
    }
}

/// Forward mixing of a probability vector: `p -> (eps_prep (x) eps_meas) p`.
pub fn bell_diagonal_transform(pv: &ProbabilityVector, n: &BellDiagonalNoise) -> ProbabilityVector {
    let a = n.transform_matrix();
    let input: Vec<Complex64> = pv.as_slice().iter().map(|&v| cr(v)).collect();
    let mixed = a.mul_vec(&input);
    let mut values = [0.0; 16];
    for (v, m) in values.iter_mut().zip(mixed.iter()) {
        *v = m.re;
    }
    ProbabilityVector::from_values(values).expect("stochastic mixing preserves range")
}

/// Undo the mixing: `p_ideal = A^-1 p_noisy`. `SingularNoise` when the
/// mixing matrix cannot be inverted.
pub fn bell_diagonal_invert(
    pv_noisy: &ProbabilityVector,
    n: &BellDiagonalNoise,
) -> Result<ProbabilityVector> {
    let a = n.transform_matrix();
    if a.det().norm() <= 1e-10 {
        return Err(DcqdError::SingularNoise);
    }
    let rhs: Vec<Complex64> = pv_noisy.as_slice().iter().map(|&v| cr(v)).collect();
    let x = a.lu_solve(&rhs).map_err(|e| match e {
        DcqdError::SingularMatrix { .. } => DcqdError::SingularNoise,
        other => other,
    })?;
    let mut values = [0.0; 16];
    for (v, m) in values.iter_mut().zip(x.iter()) {
        *v = m.re;
    }
    ProbabilityVector::from_values(values)
}
