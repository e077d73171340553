//! Experiment design over the input angles: the determinant surface, the
//! grid-plus-refinement maximizer, and a shot-noise study demonstrating
//! that inversion error is smallest where `|det Lambda|` peaks.

use crate::channel::ChiMatrix1Q;
use crate::faulty::{build_faulty_lambda, reconstruct_faulty, total_map_probabilities, FaultySetting};
use crate::protocol::{
    numeric_lambda, reconstruct_ideal, sample_shots, simulate_probabilities, LambdaSystem,
};
use crate::qobj::InputParams;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

/// Angle tolerance of the coordinate-descent refinement.
pub const REFINE_TOL: f64 = 1e-8;
/// Coarse scan resolution used by `optimize`.
pub const COARSE_GRID: usize = 64;

/// One sampled point of the determinant surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub theta: f64,
    pub phi: f64,
    pub absdet: f64,
    pub cond: f64,
}

/// The optimizer's report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptimum {
    pub theta: f64,
    pub phi: f64,
    pub absdet: f64,
    pub cond: f64,
}

/// One row of the error-amplification study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationPoint {
    pub theta: f64,
    pub phi: f64,
    pub mean_error: f64,
    pub absdet: f64,
}

fn system_at(theta: f64, phi: f64, noise: Option<&FaultySetting>) -> LambdaSystem {
    let params = InputParams::new(theta, phi);
    match noise {
        None => numeric_lambda(&params),
        Some(s) => build_faulty_lambda(&s.with_params(params)),
    }
}

/// Uniform grid over `theta in [0, pi/2]`, `phi in [0, pi]` (boundaries
/// included; they carry the zeros of the surface). Angles of `noise`, when
/// given, are overridden point by point.
pub fn det_surface(
    grid_theta: usize,
    grid_phi: usize,
    noise: Option<&FaultySetting>,
) -> Vec<SurfacePoint> {
    assert!(grid_theta >= 2 && grid_phi >= 2, "grid must be at least 2x2");
    let mut out = Vec::with_capacity(grid_theta * grid_phi);
    for ti in 0..grid_theta {
        let theta = FRAC_PI_2 * ti as f64 / (grid_theta - 1) as f64;
        for pi_ in 0..grid_phi {
            let phi = PI * pi_ as f64 / (grid_phi - 1) as f64;
            let sys = system_at(theta, phi, noise);
            out.push(SurfacePoint {
                theta,
                phi,
                absdet: sys.absdet(),
                cond: sys.cond(),
            });
        }
    }
    out
}

/// Maximize `|det Lambda|`: coarse 64x64 scan, then coordinate descent
/// with a shrinking step down to `REFINE_TOL`, reported in the fundamental
/// domain `theta in (0, pi/4]`, `phi in (0, pi)`.
pub fn optimize(noise: Option<&FaultySetting>) -> DesignOptimum {
    optimize_with_grid(COARSE_GRID, noise)
}

/// `optimize` with an explicit coarse-scan resolution; the result is
/// stable under refinement past the default.
pub fn optimize_with_grid(grid: usize, noise: Option<&FaultySetting>) -> DesignOptimum {
    let objective = |theta: f64, phi: f64| system_at(theta, phi, noise).absdet();
    let mut best = (0.0, 0.0, f64::MIN);
    for ti in 0..grid {
        let theta = FRAC_PI_2 * (ti as f64 + 0.5) / grid as f64;
        for pi_ in 0..grid {
            let phi = PI * (pi_ as f64 + 0.5) / grid as f64;
            let v = objective(theta, phi);
            if v > best.2 {
                best = (theta, phi, v);
            }
        }
    }
    let initial_step = FRAC_PI_2 / grid as f64;
    let (mut theta, mut phi, value) = refine(&objective, initial_step, best.0, best.1, best.2);
    // fold into the fundamental domain and re-refine from the image point
    if theta > FRAC_PI_4 {
        let folded = FRAC_PI_2 - theta;
        let folded_value = objective(folded, phi);
        let refined = refine(&objective, initial_step, folded, phi, folded_value);
        theta = refined.0;
        phi = refined.1;
    }
    let _ = value;
    let sys = system_at(theta, phi, noise);
    DesignOptimum {
        theta,
        phi,
        absdet: sys.absdet(),
        cond: sys.cond(),
    }
}

fn refine(
    objective: &impl Fn(f64, f64) -> f64,
    initial_step: f64,
    mut theta: f64,
    mut phi: f64,
    mut value: f64,
) -> (f64, f64, f64) {
    let mut step = initial_step;
    while step > REFINE_TOL {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let t = (theta + dt).clamp(0.0, FRAC_PI_2);
            let p = (phi + dp).clamp(0.0, PI);
            let v = objective(t, p);
            if v > value {
                theta = t;
                phi = p;
                value = v;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (theta, phi, value)
}

/// Default angle sample set for the amplification study: the optimum plus
/// progressively worse-conditioned neighbors. Degenerate `phi` multiples
/// of pi are excluded by construction.
pub fn default_study_angles() -> Vec<(f64, f64)> {
    vec![
        (FRAC_PI_8, FRAC_PI_2),
        (FRAC_PI_8 / 2.0, FRAC_PI_2),
        (FRAC_PI_8, FRAC_PI_4),
        (0.55, 2.0),
    ]
}

/// Monte Carlo error amplification: per angle pair, reconstruct seeded
/// random CP-TP channels from `shots`-sample frequencies and report the
/// mean max-entry error over `trials`. Channel and sampling seeds depend
/// only on (seed, trial), so every angle sees the same random stream.
pub fn error_amplification_study(
    noise: Option<&FaultySetting>,
    shots: u64,
    trials: u32,
    seed: u64,
    angles: &[(f64, f64)],
) -> Vec<AmplificationPoint> {
    assert!(shots >= 100, "study needs at least 100 shots per setting");
    assert!(trials >= 10, "study needs at least 10 trials");
    let mut out = Vec::with_capacity(angles.len());
    for &(theta, phi) in angles {
        let params = InputParams::new(theta, phi);
        let setting = noise.map(|s| s.with_params(params));
        let system = match &setting {
            None => numeric_lambda(&params),
            Some(s) => build_faulty_lambda(s),
        };
        let mut total_error = 0.0;
        for trial in 0..trials {
            let chi = ChiMatrix1Q::random(seed.wrapping_add(1000 + trial as u64), true, false);
            let pv = match &setting {
                None => simulate_probabilities(&chi, &params).expect("non-degenerate angles"),
                Some(s) => total_map_probabilities(&chi, s).expect("non-degenerate angles"),
            };
            let sampled = sample_shots(&pv, shots, seed.wrapping_add(trial as u64));
            let rec = match &setting {
                None => reconstruct_ideal(&sampled, &params),
                Some(s) => reconstruct_faulty(&sampled, s),
            }
            .expect("system is invertible at the study angles");
            total_error += rec.chi.matrix().sub(chi.matrix()).max_abs();
        }
        out.push(AmplificationPoint {
            theta,
            phi,
            mean_error: total_error / trials as f64,
            absdet: system.absdet(),
        });
    }
    out
}
