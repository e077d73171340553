//! On-demand identity checks tying the closed-form shortcuts, the general
//! framework, the independent tomography oracle, and the design optimum
//! together. Each check has a stable name, a tolerance, and a measured
//! deviation; the CLI turns the summary into an exit code.

use num_complex::Complex64;

use crate::channel::{apply_1q_on_a_raw, ChiMatrix1Q, ChiMatrix2Q};
use crate::design;
use crate::faulty::{build_faulty_lambda, reconstruct_faulty, total_map_probabilities, FaultySetting};
use crate::linalg::{cr, ComplexMatrix};
use crate::oracle::standard_qpt;
use crate::protocol::{
    bell_outcomes, coefficient_matrix_c, numeric_lambda, numeric_lambda_for_inputs,
    reconstruct_against, reconstruct_ideal, simulate_probabilities,
};
use crate::qobj::{concurrence, dcqd_input, InputParams};
use crate::shortcuts::{
    bell_diagonal_invert, bell_diagonal_transform, conjugated_inputs, correct_correlated,
    corrected_probability_uncorrelated, forward_correlated_general, BellDiagonalNoise,
};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

/// Knobs for the suite; defaults keep a full run under a second or two.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Resolution of the determinant-formula grid check.
    pub grid: usize,
    /// Base seed for the random channels.
    pub seed: u64,
    /// Random channels per identity check.
    pub channels: u64,
    /// Negative control: corrupt one arrangement entry so the
    /// appendix-A-consistency check must fail.
    pub corrupt_c: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: 16,
            seed: 2024,
            channels: 20,
            corrupt_c: false,
        }
    }
}

/// Result of one identity check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// Results of the whole suite, in execution order.
#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub checks: Vec<CheckOutcome>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn optimal_params() -> InputParams {
    InputParams::new(FRAC_PI_8, FRAC_PI_2)
}

fn outcome(name: &'static str, max_deviation: f64, tolerance: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: max_deviation <= tolerance,
        max_deviation,
        tolerance,
        detail,
    }
}

/// Run every identity check and collect the outcomes.
pub fn run_suite(opts: &VerifyOptions) -> VerifySummary {
    let checks = vec![
        check_appendix_a(opts),
        check_determinant_formula(opts),
        check_noiseless_reduction(),
        check_correlated_shortcut(opts),
        check_general_four_term(opts),
        check_generalized_u_shortcut(opts),
        check_uncorrelated_squared_contrast(opts),
        check_bell_diagonal(opts),
        check_framework_round_trip(opts),
        check_oracle_agreement(opts),
        check_optimal_inputs(),
    ];
    VerifySummary { checks }
}

/// The arrangement matrix against an independently coded pairing table,
/// plus its determinant magnitude.
fn check_appendix_a(opts: &VerifyOptions) -> CheckOutcome {
    let mut c_mat = coefficient_matrix_c();
    if opts.corrupt_c {
        c_mat[(4, 7)] = cr(-1.0);
    }
    // independent statement of the row pairing: (sum col, signed col)
    let pairs: [(usize, usize, f64); 16] = [
        (0, 0, 0.0),
        (1, 1, 0.0),
        (2, 2, 0.0),
        (3, 3, 0.0),
        (4, 7, 1.0),
        (5, 6, 1.0),
        (4, 7, -1.0),
        (5, 6, -1.0),
        (8, 9, 1.0),
        (10, 11, 1.0),
        (8, 9, -1.0),
        (11, 10, -1.0),
        (12, 14, 1.0),
        (13, 15, 1.0),
        (12, 14, -1.0),
        (15, 13, -1.0),
    ];
    let mut dev = 0.0_f64;
    let probe: Vec<f64> = (0..16).map(|k| 0.031 * (k as f64 + 1.0)).collect();
    for (row, &(first, second, sign)) in pairs.iter().enumerate() {
        let expected = if sign == 0.0 {
            probe[first]
        } else {
            probe[first] + sign * probe[second]
        };
        let mut got = 0.0;
        for col in 0..16 {
            got += c_mat[(row, col)].re * probe[col];
        }
        dev = dev.max((got - expected).abs());
    }
    let det_dev = (c_mat.det().norm() - 64.0).abs();
    outcome(
        "appendix-A-consistency",
        dev,
        1e-12,
        format!("|det C| = {:.6}", c_mat.det().norm()),
    )
    .and_gate(det_dev, 1e-9)
}

/// `|det Lambda(theta, phi)| = sin^6(4 theta) sin^6(phi)` on an interior
/// grid.
fn check_determinant_formula(opts: &VerifyOptions) -> CheckOutcome {
    let g = opts.grid.max(2);
    let mut dev = 0.0_f64;
    for ti in 0..g {
        let theta = FRAC_PI_2 * (ti as f64 + 0.5) / g as f64;
        for pi_ in 0..g {
            let phi = PI * (pi_ as f64 + 0.5) / g as f64;
            let sys = numeric_lambda(&InputParams::new(theta, phi));
            let expected = (4.0 * theta).sin().powi(6) * phi.sin().powi(6);
            dev = dev.max((sys.absdet() - expected).abs());
        }
    }
    outcome(
        "determinant-formula",
        dev,
        1e-8,
        format!("{g}x{g} grid, max |absdet - closed form| = {dev:.3e}"),
    )
}

fn check_noiseless_reduction() -> CheckOutcome {
    let params = optimal_params();
    let s = FaultySetting::identity(params);
    let dev = build_faulty_lambda(&s)
        .lambda()
        .sub(numeric_lambda(&params).lambda())
        .max_abs();
    outcome(
        "noiseless-reduction",
        dev,
        1e-10,
        "identity-noise system equals the ideal system".into(),
    )
}

fn check_correlated_shortcut(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    let mut dev_p = 0.0_f64;
    let mut dev_chi = 0.0_f64;
    for &eps in &[0.3, 0.7, 1.0] {
        for &eps2 in &[0.3, 0.7, 1.0] {
            let s = FaultySetting::new(
                ChiMatrix2Q::depolarizing(eps).unwrap(),
                ChiMatrix2Q::depolarizing(eps2).unwrap(),
                params,
            )
            .unwrap();
            for k in 0..opts.channels {
                let chi = ChiMatrix1Q::random(opts.seed.wrapping_add(k), true, true);
                let noisy = total_map_probabilities(&chi, &s).unwrap();
                let corrected = correct_correlated(&noisy, eps, eps2).unwrap();
                let ideal = simulate_probabilities(&chi, &params).unwrap();
                for idx in 0..16 {
                    dev_p =
                        dev_p.max((corrected.as_slice()[idx] - ideal.as_slice()[idx]).abs());
                }
                let rec = reconstruct_ideal(&corrected, &params).unwrap();
                dev_chi = dev_chi.max(rec.chi.matrix().sub(chi.matrix()).max_abs());
            }
        }
    }
    outcome(
        "correlated-shortcut",
        dev_p,
        1e-12,
        format!("probability dev {dev_p:.3e}, reconstruction dev {dev_chi:.3e} (gate 1e-9)"),
    )
    .and_gate(dev_chi, 1e-9)
}

fn check_general_four_term(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    let (eps, eps2) = (0.55, 0.85);
    let s = FaultySetting::new(
        ChiMatrix2Q::depolarizing(eps).unwrap(),
        ChiMatrix2Q::depolarizing(eps2).unwrap(),
        params,
    )
    .unwrap();
    let mut dev = 0.0_f64;
    for k in 0..opts.channels {
        let chi = ChiMatrix1Q::random(opts.seed.wrapping_add(100 + k), true, false);
        let full = total_map_probabilities(&chi, &s).unwrap();
        let four_term = forward_correlated_general(&chi, eps, eps2, &params).unwrap();
        for idx in 0..16 {
            dev = dev.max((full.as_slice()[idx] - four_term.as_slice()[idx]).abs());
        }
    }
    outcome(
        "general-four-term",
        dev,
        1e-12,
        "term-by-term forward rule equals the full pipeline".into(),
    )
}

fn check_generalized_u_shortcut(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    let cnot = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ]);
    // an entangling but generic unitary whose conjugated system stays
    // invertible (CNOT alone sends the inputs to product states, which
    // makes the conjugated system singular at every angle)
    let generic_u = cnot.mul(&rotation(0.73, 1).kron(&rotation(1.21, 2)));
    let (eps, eps2) = (0.8, 0.7);
    let mut dev_p = 0.0_f64;
    let mut dev_chi = 0.0_f64;
    let mut cnot_singular_detected = false;
    for u in [ComplexMatrix::identity(4), cnot, generic_u] {
        let s = FaultySetting::new(
            ChiMatrix2Q::generalized_depolarizing(eps, &u).unwrap(),
            ChiMatrix2Q::depolarizing(eps2).unwrap(),
            params,
        )
        .unwrap();
        let inputs = conjugated_inputs(&u, &params).unwrap();
        let conjugated_system = numeric_lambda_for_inputs(&inputs);
        for k in 0..opts.channels.min(8) {
            let chi = ChiMatrix1Q::random(opts.seed.wrapping_add(200 + k), true, true);
            let noisy = total_map_probabilities(&chi, &s).unwrap();
            let corrected = correct_correlated(&noisy, eps, eps2).unwrap();
            for (i, rho_u) in inputs.iter().enumerate() {
                let image = apply_1q_on_a_raw(chi.matrix(), rho_u.matrix());
                let outcomes = bell_outcomes(&image);
                for (j, o) in outcomes.iter().enumerate() {
                    dev_p = dev_p.max((corrected.get(i, j) - o.re).abs());
                }
            }
            match reconstruct_against(&corrected, &conjugated_system) {
                Ok(rec) => {
                    dev_chi = dev_chi.max(rec.chi.matrix().sub(chi.matrix()).max_abs());
                }
                Err(_) if conjugated_system.absdet() < 1e-12 => {
                    // the CNOT member: singularity must be reported,
                    // recovery does not exist there
                    cnot_singular_detected = true;
                }
                Err(e) => panic!("unexpected reconstruction failure: {e}"),
            }
        }
    }
    let mut check = outcome(
        "generalized-u-shortcut",
        dev_p,
        1e-12,
        format!(
            "probability dev {dev_p:.3e}, reconstruction dev {dev_chi:.3e} (gate 1e-8), \
             singular conjugated system detected: {cnot_singular_detected}"
        ),
    )
    .and_gate(dev_chi, 1e-8);
    if !cnot_singular_detected {
        check.passed = false;
    }
    check
}

fn check_uncorrelated_squared_contrast(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    let mut dev = 0.0_f64;
    for &eps in &[0.5, 0.8, 1.0] {
        for &eps2 in &[0.5, 0.8, 1.0] {
            let lp = ChiMatrix1Q::depolarizing(eps).unwrap();
            let lm = ChiMatrix1Q::depolarizing(eps2).unwrap();
            let s = FaultySetting::new(
                ChiMatrix2Q::from_local_pair(&lp, &lp),
                ChiMatrix2Q::from_local_pair(&lm, &lm),
                params,
            )
            .unwrap();
            for k in 0..opts.channels {
                let chi = ChiMatrix1Q::random_unitary(opts.seed.wrapping_add(300 + k));
                let noisy = total_map_probabilities(&chi, &s).unwrap();
                for d in 0..4 {
                    let corrected =
                        corrected_probability_uncorrelated(noisy.get(0, d), eps, eps2).unwrap();
                    dev = dev.max((corrected - chi.matrix()[(d, d)].re).abs());
                }
            }
        }
    }
    outcome(
        "uncorrelated-squared-contrast",
        dev,
        1e-9,
        "diagonal chi entries recovered with the squared contrast".into(),
    )
}

fn check_bell_diagonal(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    // a diagonally dominant stochastic pair, deterministic in the seed
    let stoch = |offset: u64| {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            let mut sum = 0.0;
            for (j, v) in row.iter_mut().enumerate() {
                let x = ((opts.seed.wrapping_add(offset) as f64)
                    + (7 * i + 3 * j) as f64 * 0.61803)
                    .sin()
                    .abs()
                    + 0.05;
                *v = x;
                sum += x;
            }
            for v in row.iter_mut() {
                *v *= 0.4 / sum;
            }
            row[i] += 0.6;
        }
        m
    };
    let n = BellDiagonalNoise::new(stoch(0), stoch(17)).unwrap();
    // Kronecker structure
    let a = n.transform_matrix();
    let ep = ComplexMatrix::from_fn(4, 4, |r, c_| cr(n.eps_prep()[r][c_]));
    let em = ComplexMatrix::from_fn(4, 4, |r, c_| cr(n.eps_meas()[r][c_]));
    let mut dev = a.sub(&ep.kron(&em)).max_abs();
    // forward-invert round trip
    let chi = ChiMatrix1Q::random(opts.seed.wrapping_add(400), true, false);
    let pv = simulate_probabilities(&chi, &params).unwrap();
    let mixed = bell_diagonal_transform(&pv, &n);
    let recovered = bell_diagonal_invert(&mixed, &n).unwrap();
    for idx in 0..16 {
        dev = dev.max((recovered.as_slice()[idx] - pv.as_slice()[idx]).abs());
    }
    // singular mixing must be reported
    let mut ep_bad = *n.eps_prep();
    ep_bad[1] = ep_bad[0];
    let bad = BellDiagonalNoise::new(ep_bad, *n.eps_meas()).unwrap();
    let singular_detected = bell_diagonal_invert(&mixed, &bad).is_err();
    if !singular_detected {
        dev = f64::INFINITY;
    }
    outcome(
        "bell-diagonal-kronecker",
        dev,
        1e-10,
        "transform is eps_prep (x) eps_meas; round trip and singularity gate hold".into(),
    )
}

fn check_framework_round_trip(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    let s = FaultySetting::new(
        ChiMatrix2Q::depolarizing(0.8).unwrap(),
        ChiMatrix2Q::depolarizing(0.8).unwrap(),
        params,
    )
    .unwrap();
    let mut dev = 0.0_f64;
    for k in 0..opts.channels {
        let chi = ChiMatrix1Q::random(opts.seed.wrapping_add(500 + k), true, false);
        let pv = total_map_probabilities(&chi, &s).unwrap();
        let rec = reconstruct_faulty(&pv, &s).unwrap();
        dev = dev.max(rec.chi.matrix().sub(chi.matrix()).max_abs());
    }
    outcome(
        "framework-round-trip",
        dev,
        1e-8,
        "noise-aware inversion recovers chi under depolarizing 0.8".into(),
    )
}

fn check_oracle_agreement(opts: &VerifyOptions) -> CheckOutcome {
    let params = optimal_params();
    let mut dev_truth = 0.0_f64;
    let mut dev_cross = 0.0_f64;
    for k in 0..opts.channels {
        let chi = ChiMatrix1Q::random(opts.seed.wrapping_add(600 + k), true, false);
        let qpt = standard_qpt(&chi);
        dev_truth = dev_truth.max(qpt.matrix().sub(chi.matrix()).max_abs());
        let pv = simulate_probabilities(&chi, &params).unwrap();
        let rec = reconstruct_ideal(&pv, &params).unwrap();
        dev_cross = dev_cross.max(qpt.matrix().sub(rec.chi.matrix()).max_abs());
    }
    outcome(
        "oracle-agreement",
        dev_truth,
        1e-10,
        format!("qpt vs truth {dev_truth:.3e}; qpt vs inversion {dev_cross:.3e} (gate 1e-9)"),
    )
    .and_gate(dev_cross, 1e-9)
}

fn check_optimal_inputs() -> CheckOutcome {
    let opt = design::optimize(None);
    let mut dev = (opt.theta - FRAC_PI_8).abs().max((opt.phi - FRAC_PI_2).abs()) / 1e-5;
    dev = dev.max((opt.absdet - 1.0).abs() / 1e-8);
    let rho = dcqd_input(1, &InputParams::new(opt.theta, opt.phi)).unwrap();
    dev = dev.max((concurrence(&rho) - 1.0 / 2f64.sqrt()).abs() / 1e-9);
    outcome(
        "optimal-inputs",
        dev,
        1.0,
        format!(
            "theta* = {:.6}, phi* = {:.6}, |det|* = {:.9}",
            opt.theta, opt.phi, opt.absdet
        ),
    )
}

fn rotation(angle: f64, axis: usize) -> ComplexMatrix {
    use crate::qobj::pauli;
    let sigma = pauli(crate::qobj::PauliIndex::from_index(axis).unwrap());
    ComplexMatrix::identity(2)
        .scale(cr((angle / 2.0).cos()))
        .add(&sigma.scale(Complex64::new(0.0, -(angle / 2.0).sin())))
}

impl CheckOutcome {
    /// Merge a second deviation with its own tolerance into this check by
    /// rescaling it onto the primary tolerance.
    fn and_gate(mut self, deviation: f64, tolerance: f64) -> Self {
        if deviation > tolerance {
            self.passed = false;
            self.max_deviation = self.max_deviation.max(deviation * self.tolerance / tolerance);
        }
        self
    }
}
