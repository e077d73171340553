//! Quantum channels in the Pauli-basis chi form, single- and two-qubit:
//! application to states, CPTP/unitality validation, composition by linear
//! probing, and the depolarizing noise families.
//!
//! Chi indexing is row-major with the left (A) factor outer, fixed once
//! here and reused identically by the protocol and faulty-framework
//! builders. Matrix-unit chi "probes" carry a single unit entry; they are
//! not physical channels (validation flags them) but are valid inputs to
//! the apply functions when extracting columns of a linear system.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DcqdError, Result};
use crate::linalg::{cr, ComplexMatrix, ONE, ZERO};
use crate::qobj::{pauli, DensityMatrix2Q, PauliIndex};

pub const CHI_HERMITIAN_TOL: f64 = 1e-10;
pub const CHI_PSD_TOL: f64 = -1e-9;
pub const CHI_TP_TOL: f64 = 1e-9;
pub const CHI_UNITAL_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-10;

/// Flags from the numerical channel checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    pub hermitian: bool,
    pub cp: bool,
    pub tp: bool,
    pub unital: bool,
}

/// Process matrix of a single-qubit map in the Pauli basis, 4x4.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix1Q {
    mat: ComplexMatrix,
}

/// Process matrix of a two-qubit map in the Pauli product basis, 16x16,
/// indexed by (m, n) row-major with m (the A factor) outer.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix2Q {
    mat: ComplexMatrix,
}

/// The sixteen sigma_m (x) sigma_n products in the fixed row-major order.
pub(crate) fn pauli_products() -> Vec<ComplexMatrix> {
    let singles: Vec<ComplexMatrix> = PauliIndex::ALL.iter().map(|&i| pauli(i)).collect();
    let mut out = Vec::with_capacity(16);
    for m in 0..4 {
        for n in 0..4 {
            out.push(singles[m].kron(&singles[n]));
        }
    }
    out
}

fn pauli_coefficients(op: &ComplexMatrix) -> Vec<Complex64> {
    let d = op.rows();
    let basis: Vec<ComplexMatrix> = if d == 2 {
        PauliIndex::ALL.iter().map(|&i| pauli(i)).collect()
    } else {
        pauli_products()
    };
    basis
        .iter()
        .map(|sigma| sigma.mul(op).trace() / cr(d as f64))
        .collect()
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let gram = u.dagger().mul(u);
    let residual = gram.sub(&ComplexMatrix::identity(u.rows())).max_abs();
    if residual > UNITARY_TOL {
        return Err(DcqdError::NotUnitary { residual });
    }
    Ok(())
}

/// Recover the chi matrix of a linear map on d x d operators by probing it
/// on the d^2 matrix units and projecting onto the Pauli (product) basis.
pub(crate) fn chi_from_action(
    d: usize,
    mut action: impl FnMut(&ComplexMatrix) -> ComplexMatrix,
) -> ComplexMatrix {
    debug_assert!(d == 2 || d == 4);
    let n = d * d;
    // superoperator in the matrix-unit basis, row-major vec
    let mut superop = ComplexMatrix::zeros(n, n);
    for a in 0..d {
        for b in 0..d {
            let mut unit = ComplexMatrix::zeros(d, d);
            unit[(a, b)] = ONE;
            let image = action(&unit);
            for r in 0..d {
                for c_ in 0..d {
                    superop[(r * d + c_, a * d + b)] = image[(r, c_)];
                }
            }
        }
    }
    let basis: Vec<ComplexMatrix> = if d == 2 {
        PauliIndex::ALL.iter().map(|&i| pauli(i)).collect()
    } else {
        pauli_products()
    };
    let mut chi = ComplexMatrix::zeros(n, n);
    for (ai, sa) in basis.iter().enumerate() {
        for (bi, sb) in basis.iter().enumerate() {
            let k = sa.kron(&sb.transpose());
            let mut acc = ZERO;
            for r in 0..n {
                for c_ in 0..n {
                    acc += k[(r, c_)].conj() * superop[(r, c_)];
                }
            }
            chi[(ai, bi)] = acc / cr((n) as f64);
        }
    }
    chi
}

fn validate_chi(mat: &ComplexMatrix, d: usize) -> ValidationReport {
    let basis: Vec<ComplexMatrix> = if d == 2 {
        PauliIndex::ALL.iter().map(|&i| pauli(i)).collect()
    } else {
        pauli_products()
    };
    let hermitian = mat.hermiticity_residual() <= CHI_HERMITIAN_TOL;
    let cp = hermitian && {
        let (eigs, _) = mat
            .hermitize()
            .eig_hermitian()
            .expect("hermitized matrix is Hermitian");
        eigs[eigs.len() - 1] >= CHI_PSD_TOL
    };
    // trace preservation: sum_mn chi_mn sigma_n sigma_m == identity
    let mut tp_op = ComplexMatrix::zeros(d, d);
    for m in 0..basis.len() {
        for n in 0..basis.len() {
            let coeff = mat[(m, n)];
            if coeff == ZERO {
                continue;
            }
            tp_op = tp_op.add(&basis[n].mul(&basis[m]).scale(coeff));
        }
    }
    let tp = tp_op.sub(&ComplexMatrix::identity(d)).max_abs() <= CHI_TP_TOL;
    // unitality: the image of the maximally mixed state is itself
    let mixed = ComplexMatrix::identity(d).scale(cr(1.0 / d as f64));
    let image = apply_chi_raw(mat, &mixed, &basis);
    let unital = image.sub(&mixed).max_abs() <= CHI_UNITAL_TOL;
    ValidationReport {
        hermitian,
        cp,
        tp,
        unital,
    }
}

fn apply_chi_raw(
    chi: &ComplexMatrix,
    rho: &ComplexMatrix,
    basis: &[ComplexMatrix],
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for m in 0..basis.len() {
        for n in 0..basis.len() {
            let coeff = chi[(m, n)];
            if coeff == ZERO {
                continue;
            }
            out = out.add(&basis[m].mul(rho).mul(&basis[n]).scale(coeff));
        }
    }
    out
}

impl ChiMatrix1Q {
    /// Wrap a 4x4 matrix as a chi matrix. Only the shape is enforced;
    /// physicality is a separate `validate` call so that non-CP probes can
    /// flow through the system builders.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(DcqdError::DimensionMismatch {
                expected: 4,
                actual: mat.rows().max(mat.cols()),
            });
        }
        Ok(Self { mat })
    }

    /// The identity channel: chi_00 = 1.
    pub fn identity() -> Self {
        let mut mat = ComplexMatrix::zeros(4, 4);
        mat[(0, 0)] = ONE;
        Self { mat }
    }

    /// Non-physical matrix-unit probe with a single unit entry at (m, n).
    pub fn matrix_unit(m: PauliIndex, n: PauliIndex) -> Self {
        let mut mat = ComplexMatrix::zeros(4, 4);
        mat[(m.index(), n.index())] = ONE;
        Self { mat }
    }

    /// Chi of the map `X -> sum_i K_i X K_i^dagger`.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let mut mat = ComplexMatrix::zeros(4, 4);
        for k in kraus {
            if k.rows() != 2 || k.cols() != 2 {
                return Err(DcqdError::DimensionMismatch {
                    expected: 2,
                    actual: k.rows().max(k.cols()),
                });
            }
            let a = pauli_coefficients(k);
            for m in 0..4 {
                for n in 0..4 {
                    mat[(m, n)] += a[m] * a[n].conj();
                }
            }
        }
        Ok(Self { mat })
    }

    /// Rank-1 chi of a unitary conjugation.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        check_unitary(u)?;
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// Single-qubit depolarizing channel `rho -> (1-eps)/2 + eps rho`,
    /// diagonal chi ((1+3 eps)/4, (1-eps)/4 x 3). `NotCp` outside the PSD
    /// range (which works out to -1/3 <= eps <= 1).
    pub fn depolarizing(eps: f64) -> Result<Self> {
        let p0 = (1.0 + 3.0 * eps) / 4.0;
        let p = (1.0 - eps) / 4.0;
        let min_eig = p0.min(p);
        if min_eig < CHI_PSD_TOL {
            return Err(DcqdError::NotCp { min_eig });
        }
        Ok(Self {
            mat: ComplexMatrix::diag(&[cr(p0), cr(p), cr(p), cr(p)]),
        })
    }

    /// Reproducible pseudo-random CP channel. `tp` normalizes a random
    /// Kraus set; `unital` (which implies `tp` here) mixes random unitary
    /// conjugations instead. With both flags false the chi is a random
    /// unit-trace positive matrix.
    pub fn random(seed: u64, tp: bool, unital: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if unital {
            let weights: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() + 0.05).collect();
            let total: f64 = weights.iter().sum();
            let mut mat = ComplexMatrix::zeros(4, 4);
            for w in weights {
                let u = random_unitary_2x2(&mut rng);
                let a = pauli_coefficients(&u);
                for m in 0..4 {
                    for n in 0..4 {
                        mat[(m, n)] += a[m] * a[n].conj() * cr(w / total);
                    }
                }
            }
            return Self { mat };
        }
        let kraus: Vec<ComplexMatrix> = (0..3)
            .map(|_| {
                ComplexMatrix::from_fn(2, 2, |_, _| {
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                })
            })
            .collect();
        if !tp {
            let mut chi = ChiMatrix1Q::from_kraus(&kraus).expect("2x2 kraus");
            let trace = chi.mat.trace();
            chi.mat = chi.mat.scale(ONE / trace);
            return chi;
        }
        // normalize: K_i <- K_i S^{-1/2} with S = sum K^dagger K
        let mut s = ComplexMatrix::zeros(2, 2);
        for k in &kraus {
            s = s.add(&k.dagger().mul(k));
        }
        let (eigs, v) = s.hermitize().eig_hermitian().expect("gram is Hermitian");
        let inv_sqrt = v
            .mul(&ComplexMatrix::diag(&[
                cr(1.0 / eigs[0].sqrt()),
                cr(1.0 / eigs[1].sqrt()),
            ]))
            .mul(&v.dagger());
        let normalized: Vec<ComplexMatrix> = kraus.iter().map(|k| k.mul(&inv_sqrt)).collect();
        ChiMatrix1Q::from_kraus(&normalized).expect("2x2 kraus")
    }

    /// Reproducible random single-qubit unitary conjugation.
    pub fn random_unitary(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary_2x2(&mut rng);
        Self::from_unitary(&u).expect("sampled operator is unitary")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn validate(&self) -> ValidationReport {
        validate_chi(&self.mat, 2)
    }

    /// Hermiticity / positivity / trace checks wrapped as a CP-validity
    /// guard for constructors that promise physical channels.
    pub fn require_cp(&self) -> Result<()> {
        let report = self.validate();
        if !report.hermitian {
            return Err(DcqdError::NotHermitian {
                residual: self.mat.hermiticity_residual(),
            });
        }
        if !report.cp {
            let (eigs, _) = self.mat.hermitize().eig_hermitian()?;
            return Err(DcqdError::NotCp {
                min_eig: eigs[eigs.len() - 1],
            });
        }
        Ok(())
    }
}

fn random_unitary_2x2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    use std::f64::consts::TAU;
    let gamma = (rng.gen::<f64>().sqrt()).asin();
    let (cg, sg) = (gamma.cos(), gamma.sin());
    let alpha = TAU * rng.gen::<f64>();
    let beta = TAU * rng.gen::<f64>();
    let delta = TAU * rng.gen::<f64>();
    let e = |t: f64| Complex64::from_polar(1.0, t);
    ComplexMatrix::from_rows(&[
        vec![e(delta + alpha) * cr(cg), e(delta + beta) * cr(sg)],
        vec![-e(delta - beta) * cr(sg), e(delta - alpha) * cr(cg)],
    ])
}

/// Apply a single-qubit chi to the A factor of a two-qubit state:
/// `sum_mn chi_mn (sigma_m x 1) rho (sigma_n x 1)`.
pub fn apply_1q_on_a(chi: &ChiMatrix1Q, rho: &DensityMatrix2Q) -> DensityMatrix2Q {
    DensityMatrix2Q::from_matrix_unchecked(apply_1q_on_a_raw(chi.matrix(), rho.matrix()))
}

pub(crate) fn apply_1q_on_a_raw(chi: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    let lifted: Vec<ComplexMatrix> = PauliIndex::ALL
        .iter()
        .map(|&m| pauli(m).kron(&i2))
        .collect();
    let mut out = ComplexMatrix::zeros(4, 4);
    for m in 0..4 {
        for n in 0..4 {
            let coeff = chi[(m, n)];
            if coeff == ZERO {
                continue;
            }
            out = out.add(&lifted[m].mul(rho).mul(&lifted[n]).scale(coeff));
        }
    }
    out
}

impl ChiMatrix2Q {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != 16 || mat.cols() != 16 {
            return Err(DcqdError::DimensionMismatch {
                expected: 16,
                actual: mat.rows().max(mat.cols()),
            });
        }
        Ok(Self { mat })
    }

    pub fn identity() -> Self {
        let mut mat = ComplexMatrix::zeros(16, 16);
        mat[(0, 0)] = ONE;
        Self { mat }
    }

    /// Correlated two-qubit depolarizing channel
    /// `rho -> (1-eps)/4 (1 x 1) + eps rho`; diagonal in the Pauli product
    /// basis with entries (1-eps)/16 + eps at (0,0) and (1-eps)/16
    /// elsewhere. `NotCp` when the PSD check fails (the admissible range
    /// works out to -1/15 <= eps <= 1).
    pub fn depolarizing(eps: f64) -> Result<Self> {
        let base = (1.0 - eps) / 16.0;
        let head = base + eps;
        let min_eig = base.min(head);
        if min_eig < CHI_PSD_TOL {
            return Err(DcqdError::NotCp { min_eig });
        }
        let mut entries = vec![cr(base); 16];
        entries[0] = cr(head);
        Ok(Self {
            mat: ComplexMatrix::diag(&entries),
        })
    }

    /// Generalized two-qubit depolarizing channel
    /// `rho -> (1-eps)/4 (1 x 1) + eps U rho U^dagger` for a known
    /// two-qubit unitary U: chi is (1-eps)/16 on the diagonal plus the
    /// rank-1 term eps a a^dagger with a the Pauli-product coefficients
    /// of U.
    pub fn generalized_depolarizing(eps: f64, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != 4 || u.cols() != 4 {
            return Err(DcqdError::DimensionMismatch {
                expected: 4,
                actual: u.rows().max(u.cols()),
            });
        }
        check_unitary(u)?;
        let a = pauli_coefficients(u);
        let mut mat = ComplexMatrix::zeros(16, 16);
        for m in 0..16 {
            mat[(m, m)] = cr((1.0 - eps) / 16.0);
            for n in 0..16 {
                mat[(m, n)] += a[m] * a[n].conj() * cr(eps);
            }
        }
        Ok(Self { mat })
    }

    /// Rank-1 chi of a two-qubit unitary conjugation.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        check_unitary(u)?;
        let a = pauli_coefficients(u);
        let mat = ComplexMatrix::from_fn(16, 16, |m, n| a[m] * a[n].conj());
        Ok(Self { mat })
    }

    /// Product channel E_A (x) E_B from single-qubit factors:
    /// chi2[(m,p),(n,q)] = chiA[m,n] chiB[p,q].
    pub fn from_local_pair(chi_a: &ChiMatrix1Q, chi_b: &ChiMatrix1Q) -> Self {
        let mat = ComplexMatrix::from_fn(16, 16, |row, col| {
            let (m, p) = (row / 4, row % 4);
            let (n, q) = (col / 4, col % 4);
            chi_a.matrix()[(m, n)] * chi_b.matrix()[(p, q)]
        });
        Self { mat }
    }

    /// A-side-only embedding `E_A (x) 1`.
    pub fn from_a_side(chi_a: &ChiMatrix1Q) -> Self {
        Self::from_local_pair(chi_a, &ChiMatrix1Q::identity())
    }

    /// B-side-only embedding `1 (x) E_B`.
    pub fn from_b_side(chi_b: &ChiMatrix1Q) -> Self {
        Self::from_local_pair(&ChiMatrix1Q::identity(), chi_b)
    }

    /// Chi of the composition `outer after inner`, obtained by probing the
    /// composed action on the sixteen matrix units and re-expanding in the
    /// Pauli product basis. Probing is exact up to rounding because both
    /// maps are linear.
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        let basis = pauli_products();
        let mat = chi_from_action(4, |unit| {
            let mid = apply_chi_raw(inner.matrix(), unit, &basis);
            apply_chi_raw(outer.matrix(), &mid, &basis)
        });
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn validate(&self) -> ValidationReport {
        validate_chi(&self.mat, 4)
    }

    pub fn require_cp(&self) -> Result<()> {
        let report = self.validate();
        if !report.hermitian {
            return Err(DcqdError::NotHermitian {
                residual: self.mat.hermiticity_residual(),
            });
        }
        if !report.cp {
            let (eigs, _) = self.mat.hermitize().eig_hermitian()?;
            return Err(DcqdError::NotCp {
                min_eig: eigs[eigs.len() - 1],
            });
        }
        Ok(())
    }
}

/// Apply a two-qubit chi: `sum_ab chi_ab S_a rho S_b` over Pauli products.
pub fn apply_2q(chi: &ChiMatrix2Q, rho: &DensityMatrix2Q) -> DensityMatrix2Q {
    let basis = pauli_products();
    DensityMatrix2Q::from_matrix_unchecked(apply_chi_raw(chi.matrix(), rho.matrix(), &basis))
}

pub(crate) fn apply_2q_raw(chi: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let basis = pauli_products();
    apply_chi_raw(chi, rho, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::qobj::{bell_projector, bell_vector, BellIndex, InputParams};
    use std::f64::consts::FRAC_PI_8;

    fn random_density(seed: u64) -> DensityMatrix2Q {
        let g = crate::testutil::test_random_matrix(4, seed);
        let mut rho = g.mul(&g.dagger());
        let tr = rho.trace().re;
        rho = rho.scale(cr(1.0 / tr));
        DensityMatrix2Q::new(rho.hermitize()).unwrap()
    }

    fn phi_plus() -> DensityMatrix2Q {
        DensityMatrix2Q::from_pure(&bell_vector(BellIndex::PhiPlus))
    }

    fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
    }

    #[test]
    fn identity_channel_fixes_states() {
        let chi = ChiMatrix1Q::identity();
        let rho = random_density(3);
        let out = apply_1q_on_a(&chi, &rho);
        assert!(out.matrix().sub(rho.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn bit_flip_channel_splits_phi_plus() {
        let p = 0.3;
        let mut mat = ComplexMatrix::zeros(4, 4);
        mat[(0, 0)] = cr(1.0 - p);
        mat[(1, 1)] = cr(p);
        let chi = ChiMatrix1Q::new(mat).unwrap();
        let out = apply_1q_on_a(&chi, &phi_plus());
        let expected = bell_projector(BellIndex::PhiPlus, BellIndex::PhiPlus)
            .scale(cr(1.0 - p))
            .add(&bell_projector(BellIndex::PsiPlus, BellIndex::PsiPlus).scale(cr(p)));
        assert!(out.matrix().sub(&expected).max_abs() < 1e-14);
    }

    #[test]
    fn unitary_rotation_chi_is_rank_one_with_expected_coefficients() {
        // U = exp(-i pi/8 sigma_x) = cos(pi/8) 1 - i sin(pi/8) sigma_x
        let (cos8, sin8) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
        let u = ComplexMatrix::identity(2)
            .scale(cr(cos8))
            .add(&pauli(PauliIndex::X).scale(c(0.0, -sin8)));
        let chi = ChiMatrix1Q::from_unitary(&u).unwrap();
        assert!((chi.matrix()[(0, 0)] - cr(cos8 * cos8)).norm() < 1e-14);
        assert!((chi.matrix()[(1, 1)] - cr(sin8 * sin8)).norm() < 1e-14);
        assert!((chi.matrix()[(0, 1)] - c(0.0, cos8 * sin8)).norm() < 1e-14);
    }

    #[test]
    fn identity_2q_chi_fixes_states() {
        let chi = ChiMatrix2Q::identity();
        let rho = random_density(11);
        let out = apply_2q(&chi, &rho);
        assert!(out.matrix().sub(rho.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn correlated_depolarizing_action_on_phi_plus() {
        let eps = 0.4;
        let chi = ChiMatrix2Q::depolarizing(eps).unwrap();
        let out = apply_2q(&chi, &phi_plus());
        let expected = ComplexMatrix::identity(4)
            .scale(cr((1.0 - eps) / 4.0))
            .add(&phi_plus().matrix().scale(cr(eps)));
        assert!(out.matrix().sub(&expected).max_abs() < 1e-13);
    }

    #[test]
    fn uncorrelated_depolarizing_on_bell_projectors() {
        let eps = 0.5;
        let local = ChiMatrix1Q::depolarizing(eps).unwrap();
        let chi = ChiMatrix2Q::from_local_pair(&local, &local);
        for k in BellIndex::ALL {
            let rho = DensityMatrix2Q::from_pure(&bell_vector(k));
            let out = apply_2q(&chi, &rho);
            let expected = ComplexMatrix::identity(4)
                .scale(cr((1.0 - eps * eps) / 4.0))
                .add(&rho.matrix().scale(cr(eps * eps)));
            assert!(out.matrix().sub(&expected).max_abs() < 1e-13, "{k:?}");
        }
    }

    #[test]
    fn validate_identity_channel() {
        let report = ChiMatrix1Q::identity().validate();
        assert!(report.hermitian && report.cp && report.tp && report.unital);
    }

    #[test]
    fn validate_flags_matrix_unit_probe() {
        let probe = ChiMatrix1Q::matrix_unit(PauliIndex::I, PauliIndex::X);
        let report = probe.validate();
        assert!(!report.hermitian);
        assert!(!report.cp);
    }

    #[test]
    fn validate_amplitude_damping_is_tp_not_unital() {
        let gamma: f64 = 0.3;
        let k0 = ComplexMatrix::from_rows(&[
            vec![ONE, ZERO],
            vec![ZERO, cr((1.0 - gamma).sqrt())],
        ]);
        let k1 = ComplexMatrix::from_rows(&[vec![ZERO, cr(gamma.sqrt())], vec![ZERO, ZERO]]);
        let chi = ChiMatrix1Q::from_kraus(&[k0, k1]).unwrap();
        let report = chi.validate();
        assert!(report.hermitian && report.cp && report.tp);
        assert!(!report.unital);
    }

    #[test]
    fn depolarizing_2q_limits() {
        let id = ChiMatrix2Q::depolarizing(1.0).unwrap();
        assert!(id.matrix().sub(ChiMatrix2Q::identity().matrix()).max_abs() < 1e-15);
        let erase = ChiMatrix2Q::depolarizing(0.0).unwrap();
        for i in 0..16 {
            assert!((erase.matrix()[(i, i)] - cr(1.0 / 16.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn depolarizing_2q_on_p00_at_half() {
        let chi = ChiMatrix2Q::depolarizing(0.5).unwrap();
        let out = apply_2q(&chi, &phi_plus());
        let expected = ComplexMatrix::identity(4)
            .scale(cr(0.125))
            .add(&bell_projector(BellIndex::PhiPlus, BellIndex::PhiPlus).scale(cr(0.5)));
        assert!(out.matrix().sub(&expected).max_abs() < 1e-14);
    }

    #[test]
    fn depolarizing_2q_cp_range() {
        assert!(ChiMatrix2Q::depolarizing(-1.0 / 15.0).is_ok());
        assert!(matches!(
            ChiMatrix2Q::depolarizing(-0.1),
            Err(DcqdError::NotCp { .. })
        ));
        assert!(matches!(
            ChiMatrix2Q::depolarizing(1.001),
            Err(DcqdError::NotCp { .. })
        ));
        assert!(matches!(
            ChiMatrix1Q::depolarizing(-0.4),
            Err(DcqdError::NotCp { .. })
        ));
    }

    #[test]
    fn generalized_depolarizing_with_identity_u_matches_plain() {
        for eps in [0.0, 0.3, 0.9] {
            let gen = ChiMatrix2Q::generalized_depolarizing(eps, &ComplexMatrix::identity(4))
                .unwrap();
            let plain = ChiMatrix2Q::depolarizing(eps).unwrap();
            assert!(gen.matrix().sub(plain.matrix()).max_abs() < 1e-14, "eps={eps}");
        }
    }

    #[test]
    fn generalized_depolarizing_full_strength_is_rank_one_unitary() {
        let u = cnot();
        let gen = ChiMatrix2Q::generalized_depolarizing(1.0, &u).unwrap();
        let unitary = ChiMatrix2Q::from_unitary(&u).unwrap();
        assert!(gen.matrix().sub(unitary.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn generalized_depolarizing_matches_probed_defining_action() {
        let eps = 0.8;
        let u = cnot();
        let chi = ChiMatrix2Q::generalized_depolarizing(eps, &u).unwrap();
        let probed = chi_from_action(4, |unit| {
            ComplexMatrix::identity(4)
                .scale(unit.trace() * cr((1.0 - eps) / 4.0))
                .add(&u.mul(unit).mul(&u.dagger()).scale(cr(eps)))
        });
        assert!(chi.matrix().sub(&probed).max_abs() < 1e-12);
    }

    #[test]
    fn generalized_depolarizing_rejects_non_unitary() {
        let mut u = ComplexMatrix::identity(4);
        u[(0, 0)] = cr(1.5);
        assert!(matches!(
            ChiMatrix2Q::generalized_depolarizing(0.5, &u),
            Err(DcqdError::NotUnitary { .. })
        ));
    }

    #[test]
    fn generalized_depolarizing_action_identity_on_random_states() {
        let eps = 0.65;
        let u = cnot();
        let chi = ChiMatrix2Q::generalized_depolarizing(eps, &u).unwrap();
        for seed in 0..100 {
            let rho = random_density(seed + 100);
            let out = apply_2q(&chi, &rho);
            let expected = ComplexMatrix::identity(4)
                .scale(cr((1.0 - eps) / 4.0))
                .add(&u.mul(rho.matrix()).mul(&u.dagger()).scale(cr(eps)));
            assert!(out.matrix().sub(&expected).max_abs() < 1e-10);
        }
    }

    #[test]
    fn compose_with_identity_is_identity_operation() {
        let chi = ChiMatrix2Q::depolarizing(0.7).unwrap();
        let composed = ChiMatrix2Q::compose(&ChiMatrix2Q::identity(), &chi);
        assert!(composed.matrix().sub(chi.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn compose_depolarizing_multiplies_strengths() {
        let (e1, e2) = (0.6, 0.8);
        let composed = ChiMatrix2Q::compose(
            &ChiMatrix2Q::depolarizing(e2).unwrap(),
            &ChiMatrix2Q::depolarizing(e1).unwrap(),
        );
        let expected = ChiMatrix2Q::depolarizing(e1 * e2).unwrap();
        assert!(composed.matrix().sub(expected.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn compose_unitaries_multiplies_operators() {
        let u1 = cnot();
        // u2 = swap
        let u2 = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ]);
        let composed = ChiMatrix2Q::compose(
            &ChiMatrix2Q::from_unitary(&u2).unwrap(),
            &ChiMatrix2Q::from_unitary(&u1).unwrap(),
        );
        let product = ChiMatrix2Q::from_unitary(&u2.mul(&u1)).unwrap();
        assert!(composed.matrix().sub(product.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn random_channel_is_deterministic_per_seed() {
        let a = ChiMatrix1Q::random(42, true, false);
        let b = ChiMatrix1Q::random(42, true, false);
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
        let c_ = ChiMatrix1Q::random(43, true, false);
        assert!(a.matrix().sub(c_.matrix()).max_abs() > 1e-6);
    }

    #[test]
    fn random_channel_flags_hold_over_seeds() {
        for seed in 0..100 {
            let tp = ChiMatrix1Q::random(seed, true, false).validate();
            assert!(tp.hermitian && tp.cp && tp.tp, "seed {seed}");
            let unital = ChiMatrix1Q::random(seed, true, true).validate();
            assert!(
                unital.hermitian && unital.cp && unital.tp && unital.unital,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn apply_2q_is_linear_in_chi() {
        let chi1 = ChiMatrix2Q::depolarizing(0.5).unwrap();
        let chi2 = ChiMatrix2Q::from_unitary(&cnot()).unwrap();
        let (a, b) = (cr(0.3), cr(0.7));
        let rho = random_density(55);
        let mixed = ChiMatrix2Q::new(chi1.matrix().scale(a).add(&chi2.matrix().scale(b))).unwrap();
        let lhs = apply_2q(&mixed, &rho);
        let rhs = apply_2q(&chi1, &rho)
            .matrix()
            .scale(a)
            .add(&apply_2q(&chi2, &rho).matrix().scale(b));
        assert!(lhs.matrix().sub(&rhs).max_abs() < 1e-12);
    }

    #[test]
    fn tp_channels_preserve_trace_on_random_states() {
        let chi = ChiMatrix1Q::random(7, true, false);
        for seed in 0..100 {
            let rho = random_density(seed + 500);
            let out = apply_1q_on_a(&chi, &rho);
            assert!((out.matrix().trace() - ONE).norm() < 1e-10);
        }
    }

    #[test]
    fn depolarizing_preserves_bell_diagonal_form() {
        let eps = 0.35;
        let chi = ChiMatrix2Q::depolarizing(eps).unwrap();
        for k in BellIndex::ALL {
            let rho = DensityMatrix2Q::from_pure(&bell_vector(k));
            let out = apply_2q(&chi, &rho);
            let expected = ComplexMatrix::identity(4)
                .scale(cr((1.0 - eps) / 4.0))
                .add(&rho.matrix().scale(cr(eps)));
            assert!(out.matrix().sub(&expected).max_abs() < 1e-13);
        }
    }

    #[test]
    fn b_side_noise_commutes_with_a_side_application() {
        let noise_b = ChiMatrix2Q::from_b_side(&ChiMatrix1Q::depolarizing(0.6).unwrap());
        let chi_a = ChiMatrix1Q::random(21, true, false);
        let p = InputParams::new(0.4, 1.3);
        let rho = crate::qobj::dcqd_input(1, &p).unwrap();
        let path1 = apply_1q_on_a(&chi_a, &apply_2q(&noise_b, &rho));
        let path2 = apply_2q(&noise_b, &apply_1q_on_a(&chi_a, &rho));
        assert!(path1.matrix().sub(path2.matrix()).max_abs() < 1e-12);
    }
}
