//! Independent single-qubit process tomography used as a cross-check.
//!
//! This module deliberately shares nothing with the Bell-measurement
//! pipeline: it applies the channel to the four textbook inputs
//! {|0><0|, |1><1|, |+><+|, |+i><+i|}, reads exact Pauli expectation
//! values of each output, rebuilds the images of the matrix units by a
//! direct basis change, and projects the superoperator onto the Pauli
//! basis. A bug in the arrangement matrix or the system builder cannot
//! cancel against a bug here.

use num_complex::Complex64;

use crate::channel::ChiMatrix1Q;
use crate::linalg::{c, cr, ComplexMatrix, ONE, ZERO};
use crate::qobj::{pauli, PauliIndex};

fn apply_direct(chi: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let sigmas: Vec<ComplexMatrix> = PauliIndex::ALL.iter().map(|&m| pauli(m)).collect();
    let mut out = ComplexMatrix::zeros(2, 2);
    for m in 0..4 {
        for n in 0..4 {
            let coeff = chi[(m, n)];
            if coeff == ZERO {
                continue;
            }
            out = out.add(&sigmas[m].mul(rho).mul(&sigmas[n]).scale(coeff));
        }
    }
    out
}

/// Measure exact expectation values of 1, X, Y, Z and rebuild the state;
/// this is the tomographic readout step, kept explicit.
fn measure_and_rebuild(out: &ComplexMatrix) -> ComplexMatrix {
    let mut rebuilt = ComplexMatrix::zeros(2, 2);
    for &mi in &PauliIndex::ALL {
        let sigma = pauli(mi);
        let expectation = sigma.mul(out).trace();
        rebuilt = rebuilt.add(&sigma.scale(expectation / cr(2.0)));
    }
    rebuilt
}

/// Textbook single-qubit process tomography of the channel described by
/// `chi_true`, with exact expectation values. Returns the chi matrix
/// recovered through the independent basis-change route.
pub fn standard_qpt(chi_true: &ChiMatrix1Q) -> ChiMatrix1Q {
    let ket0 = [ONE, ZERO];
    let ket1 = [ZERO, ONE];
    let s = cr(1.0 / 2f64.sqrt());
    let plus = [s, s];
    let plus_i = [s, s * c(0.0, 1.0)];
    let as_state = |v: &[Complex64; 2]| ComplexMatrix::from_fn(2, 2, |r, c_| v[r] * v[c_].conj());

    let images: Vec<ComplexMatrix> = [ket0, ket1, plus, plus_i]
        .iter()
        .map(|v| measure_and_rebuild(&apply_direct(chi_true.matrix(), &as_state(v))))
        .collect();

    // images of the matrix units E_ab from the four prepared states:
    // E(E01) = E(|+>) + i E(|+i>) - (1+i)/2 (E(E00) + E(E11)), and the
    // (1-i)/2 analogue for E(E10)
    let e00 = images[0].clone();
    let e11 = images[1].clone();
    let diag_sum = e00.add(&e11);
    let e01 = images[2]
        .add(&images[3].scale(c(0.0, 1.0)))
        .sub(&diag_sum.scale(c(0.5, 0.5)));
    let e10 = images[2]
        .add(&images[3].scale(c(0.0, -1.0)))
        .sub(&diag_sum.scale(c(0.5, -0.5)));

    // superoperator in row-major vec convention: column (a,b) = vec E(E_ab)
    let unit_images = [[e00, e01], [e10, e11]];
    let mut superop = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            let img = &unit_images[a][b];
            for r in 0..2 {
                for c_ in 0..2 {
                    superop[(2 * r + c_, 2 * a + b)] = img[(r, c_)];
                }
            }
        }
    }

    // project onto the Pauli basis: S = sum chi_mn sigma_m (x) sigma_n^T
    let mut chi = ComplexMatrix::zeros(4, 4);
    for (mi, &m) in PauliIndex::ALL.iter().enumerate() {
        for (ni, &n) in PauliIndex::ALL.iter().enumerate() {
            let k = pauli(m).kron(&pauli(n).transpose());
            let mut acc = ZERO;
            for r in 0..4 {
                for c_ in 0..4 {
                    acc += k[(r, c_)].conj() * superop[(r, c_)];
                }
            }
            chi[(mi, ni)] = acc / cr(4.0);
        }
    }
    ChiMatrix1Q::new(chi).expect("4x4 by construction")
}
