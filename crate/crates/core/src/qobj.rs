//! Quantum objects: Pauli operators, Bell states and projectors, the four
//! standard two-qubit input states parameterized by (theta, phi), and the
//! Wootters concurrence.
//!
//! Conventions fixed here and relied on everywhere else:
//! qubit A is the left (most significant) tensor factor; the Bell ordering
//! is k = 0..3 -> Phi+, Psi+, Psi-, Phi-; the sigma_y eigenstates are
//! `|+->_y = (|0> +- i|1>)/sqrt(2)`.

use num_complex::Complex64;

use crate::error::{DcqdError, Result};
use crate::linalg::{c, cr, ComplexMatrix, ONE, ZERO};

/// Tolerance on the informativeness conditions for the angle-built inputs.
pub const DEGENERATE_INPUT_TOL: f64 = 1e-6;
/// Density-matrix invariant tolerances.
pub const STATE_HERMITIAN_TOL: f64 = 1e-10;
pub const STATE_TRACE_TOL: f64 = 1e-10;
pub const STATE_PSD_TOL: f64 = -1e-9;

/// Index into the single-qubit operator basis {1, sigma_x, sigma_y, sigma_z}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliIndex {
    I,
    X,
    Y,
    Z,
}

impl PauliIndex {
    pub const ALL: [PauliIndex; 4] = [PauliIndex::I, PauliIndex::X, PauliIndex::Y, PauliIndex::Z];

    pub fn index(self) -> usize {
        match self {
            PauliIndex::I => 0,
            PauliIndex::X => 1,
            PauliIndex::Y => 2,
            PauliIndex::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// Index into the Bell basis, ordered Phi+, Psi+, Psi-, Phi-.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellIndex {
    PhiPlus,
    PsiPlus,
    PsiMinus,
    PhiMinus,
}

impl BellIndex {
    pub const ALL: [BellIndex; 4] = [
        BellIndex::PhiPlus,
        BellIndex::PsiPlus,
        BellIndex::PsiMinus,
        BellIndex::PhiMinus,
    ];

    pub fn index(self) -> usize {
        match self {
            BellIndex::PhiPlus => 0,
            BellIndex::PsiPlus => 1,
            BellIndex::PsiMinus => 2,
            BellIndex::PhiMinus => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// The 2x2 operator for a Pauli index; unitary and Hermitian.
pub fn pauli(i: PauliIndex) -> ComplexMatrix {
    match i {
        PauliIndex::I => ComplexMatrix::identity(2),
        PauliIndex::X => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        PauliIndex::Y => ComplexMatrix::from_rows(&[
            vec![ZERO, c(0.0, -1.0)],
            vec![c(0.0, 1.0), ZERO],
        ]),
        PauliIndex::Z => ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
    }
}

/// Bell state vector in the computational basis (|00>, |01>, |10>, |11>).
pub fn bell_vector(k: BellIndex) -> [Complex64; 4] {
    let s = cr(1.0 / 2f64.sqrt());
    match k {
        BellIndex::PhiPlus => [s, ZERO, ZERO, s],
        BellIndex::PsiPlus => [ZERO, s, s, ZERO],
        BellIndex::PsiMinus => [ZERO, s, -s, ZERO],
        BellIndex::PhiMinus => [s, ZERO, ZERO, -s],
    }
}

/// The rank-1 operator `|B^k><B^k'|`; a projector iff `k == k2`.
pub fn bell_projector(k: BellIndex, k2: BellIndex) -> ComplexMatrix {
    let u = bell_vector(k);
    let v = bell_vector(k2);
    ComplexMatrix::from_fn(4, 4, |r, col| u[r] * v[col].conj())
}

/// Input-state angles: `alpha = cos(theta)`, `beta = exp(i phi) sin(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputParams {
    pub theta: f64,
    pub phi: f64,
}

impl InputParams {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn alpha(&self) -> Complex64 {
        cr(self.theta.cos())
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(self.theta.sin(), self.phi)
    }

    /// Check the informativeness conditions for the angle-built inputs:
    /// `|alpha| != |beta| != 0` and `Im(conj(alpha) beta) != 0`.
    pub fn check_informative(&self) -> Result<()> {
        let a = self.alpha().norm();
        let b = self.beta().norm();
        if b <= DEGENERATE_INPUT_TOL {
            return Err(DcqdError::DegenerateInput("beta vanishes".into()));
        }
        if a <= DEGENERATE_INPUT_TOL {
            return Err(DcqdError::DegenerateInput("alpha vanishes".into()));
        }
        if (a - b).abs() <= DEGENERATE_INPUT_TOL {
            return Err(DcqdError::DegenerateInput(
                "|alpha| = |beta| (balanced superposition)".into(),
            ));
        }
        let im = (self.alpha().conj() * self.beta()).im;
        if im.abs() <= DEGENERATE_INPUT_TOL {
            return Err(DcqdError::DegenerateInput(
                "Im(conj(alpha) beta) vanishes (phi is a multiple of pi)".into(),
            ));
        }
        Ok(())
    }
}

/// Two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix2Q {
    mat: ComplexMatrix,
}

impl DensityMatrix2Q {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(DcqdError::InvalidState(format!(
                "expected 4x4, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let herm = mat.hermiticity_residual();
        if herm > STATE_HERMITIAN_TOL {
            return Err(DcqdError::InvalidState(format!(
                "not Hermitian (asymmetry {herm:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > STATE_TRACE_TOL {
            return Err(DcqdError::InvalidState(format!("trace {tr} is not 1")));
        }
        let (eigs, _) = mat.hermitize().eig_hermitian()?;
        let min_eig = eigs[eigs.len() - 1];
        if min_eig < STATE_PSD_TOL {
            return Err(DcqdError::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Outer product of a (not necessarily normalized) 4-vector.
    pub fn from_pure(v: &[Complex64; 4]) -> Self {
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm_sq > 1e-12, "state vector is numerically zero");
        let mat = ComplexMatrix::from_fn(4, 4, |r, c_| v[r] * v[c_].conj() / cr(norm_sq));
        Self { mat }
    }

    pub(crate) fn from_matrix_unchecked(mat: ComplexMatrix) -> Self {
        debug_assert_eq!((mat.rows(), mat.cols()), (4, 4));
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.mul(&self.mat).trace().re
    }

    /// Partial transpose on the ancilla (right) factor.
    pub fn partial_transpose_b(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |r, c_| {
            let (ra, rb) = (r / 2, r % 2);
            let (ca, cb) = (c_ / 2, c_ % 2);
            self.mat[(ra * 2 + cb, ca * 2 + rb)]
        })
    }

    /// Peres-Horodecki criterion; for two qubits PPT is exact for
    /// separability.
    pub fn is_separable_ppt(&self) -> bool {
        let pt = self.partial_transpose_b().hermitize();
        let (eigs, _) = pt.eig_hermitian().expect("partial transpose is Hermitian");
        eigs[eigs.len() - 1] >= -1e-10
    }
}

/// The i-th standard input state. `i = 0` is the Bell state Phi+ and
/// ignores the angles; `i = 1, 2, 3` are the z-, x- and y-basis
/// superpositions `alpha|ee> + beta|ff>` over the respective eigenbasis.
pub fn dcqd_input(i: usize, p: &InputParams) -> Result<DensityMatrix2Q> {
    if i >= 4 {
        return Err(DcqdError::OutOfRange(format!("input index {i} > 3")));
    }
    if i >= 1 {
        p.check_informative()?;
    }
    Ok(dcqd_input_raw(i, p))
}

/// Same construction without the informativeness check; degenerate angles
/// yield valid (but non-informative) states. Used by the system builders,
/// which must stay total in the angles.
pub(crate) fn dcqd_input_raw(i: usize, p: &InputParams) -> DensityMatrix2Q {
    let a = p.alpha();
    let b = p.beta();
    let s = cr(1.0 / 2f64.sqrt());
    let v: [Complex64; 4] = match i {
        0 => {
            let bv = bell_vector(BellIndex::PhiPlus);
            [bv[0], bv[1], bv[2], bv[3]]
        }
        1 => [a, ZERO, ZERO, b],
        2 => {
            // alpha|++> + beta|-->
            let plus = [s, s];
            let minus = [s, -s];
            two_qubit_superposition(a, plus, b, minus)
        }
        3 => {
            // alpha|+y +y> + beta|-y -y> with |+-y> = (|0> +- i|1>)/sqrt(2)
            let plus = [s, s * c(0.0, 1.0)];
            let minus = [s, s * c(0.0, -1.0)];
            two_qubit_superposition(a, plus, b, minus)
        }
        _ => unreachable!("index checked by caller"),
    };
    DensityMatrix2Q::from_pure(&v)
}

fn two_qubit_superposition(
    a: Complex64,
    u: [Complex64; 2],
    b: Complex64,
    w: [Complex64; 2],
) -> [Complex64; 4] {
    let mut v = [ZERO; 4];
    for r in 0..2 {
        for s in 0..2 {
            v[2 * r + s] = a * u[r] * u[s] + b * w[r] * w[s];
        }
    }
    v
}

/// Wootters concurrence, `max(0, l1 - l2 - l3 - l4)` with the `l_i` the
/// descending square roots of the eigenvalues of
/// `rho (sy x sy) conj(rho) (sy x sy)`.
pub fn concurrence(rho: &DensityMatrix2Q) -> f64 {
    let yy = pauli(PauliIndex::Y).kron(&pauli(PauliIndex::Y));
    let rho_m = rho.matrix().hermitize();
    let (eigs, v) = rho_m.eig_hermitian().expect("state is Hermitian");
    // sqrt(rho) through the spectral form; eigenvalues below the cutoff are
    // rounding noise and must be zeroed, not square-rooted, or the noise
    // gets amplified from ~1e-16 to ~1e-8
    let cutoff = 1e-12 * eigs[0].max(0.0);
    let sqrt_eigs: Vec<Complex64> = eigs
        .iter()
        .map(|&e| if e > cutoff { cr(e.sqrt()) } else { ZERO })
        .collect();
    let sqrt_rho = v
        .mul(&ComplexMatrix::diag(&sqrt_eigs))
        .mul(&v.dagger());
    let spun = yy.mul(&rho_m.conj()).mul(&yy);
    let inner = sqrt_rho.mul(&spun).mul(&sqrt_rho).hermitize();
    let (mu, _) = inner.eig_hermitian().expect("Hermitian by construction");
    let mu_cutoff = 1e-12 * mu[0].max(0.0);
    let lam: Vec<f64> = mu
        .iter()
        .map(|&e| if e > mu_cutoff { e.sqrt() } else { 0.0 })
        .collect();
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}
