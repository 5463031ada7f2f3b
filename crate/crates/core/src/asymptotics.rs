//! Limit distribution of the ABM estimator.
//!
//! `sqrt(k) (1/γ̂ - 1/γ, σ̂/σ - 1)` is asymptotically normal with covariance
//! `M Σ Mᵀ`, where `Σ` is the covariance of a Gaussian vector `Y` built from
//! Brownian functionals. The variance of `sqrt(k)(γ̂ - γ)` follows by the
//! delta method: `d γ = -γ² d(1/γ)`, so it equals `γ⁴ (MΣMᵀ)₁₁ = γ² a`.
//!
//! `Σ` can be checked by Monte Carlo: with `U, S` independent standard
//! exponentials, `Cov(Y_i, Y_j) = E[g_i(U) g_j(S) min(U, S)]` for
//! `g₁(u) = γ(1 + log u)`, `g₂(u) = -1`, `g₃(u) = γ/u`.

use crate::distributions::rng::stream_rng;
use crate::error::{invalid, Result};
use crate::parallel::{map_indexed, Parallelism};
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Variances of competing estimators, in units of `γ²`.
pub const DISJOINT_BM_VARIANCE: f64 = 0.608;
pub const SLIDING_BM_VARIANCE: f64 = 0.494;
pub const HILL_VARIANCE: f64 = 1.0;

pub type Mat2x3 = [[f64; 3]; 2];
pub type Mat3 = [[f64; 3]; 3];
pub type Mat2 = [[f64; 2]; 2];

/// `Γ''(2) = (1-τ)² + π²/6 - 1`, from `ψ(2) = 1 - τ` and `ψ'(2) = π²/6 - 1`.
pub fn gamma_second_derivative_at_two() -> f64 {
    (1.0 - EULER_GAMMA).powi(2) + PI * PI / 6.0 - 1.0
}

/// The constant `p` with `Var(Y₁) = γ² p`.
pub fn var_y1_constant() -> f64 {
    let t = EULER_GAMMA;
    let tl = t + LN_2;
    0.5 * (t + 8f64.ln() - 1.0) - (PI * PI - 6.0 * tl + 6.0 * tl * tl) / 12.0 - (1.0 - t - LN_2)
        + (2.0 - t) * (1.0 - t)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "gamma = {gamma} must be positive and finite"
        )))
    }
}

pub fn m_matrix(gamma: f64) -> Result<Mat2x3> {
    check_gamma(gamma)?;
    let t = EULER_GAMMA;
    let c = 6.0 / (PI * PI);
    let g2 = gamma * gamma;
    Ok([
        [c / g2, c * (1.0 - t) / gamma, -c / g2],
        [
            c * (t - 1.0),
            -c * gamma * (gamma_second_derivative_at_two() + 1.0),
            c * (1.0 - t),
        ],
    ])
}

pub fn sigma_matrix(gamma: f64) -> Result<Mat3> {
    check_gamma(gamma)?;
    let t = EULER_GAMMA;
    let g2 = gamma * gamma;
    let s11 = g2 * var_y1_constant();
    let s21 = -0.5 * gamma * (1.0 - t + LN_2);
    let s22 = 0.5;
    let s31 = g2 * ((3.0 - t - 0.5 * LN_2) * LN_2 - PI * PI / 12.0);
    let s32 = -gamma * LN_2;
    let s33 = 2.0 * g2 * LN_2;
    Ok([[s11, s21, s31], [s21, s22, s32], [s31, s32, s33]])
}

/// `M Σ Mᵀ`
pub fn limit_covariance(gamma: f64) -> Result<Mat2> {
    let m = m_matrix(gamma)?;
    let s = sigma_matrix(gamma)?;
    let mut ms = [[0.0; 3]; 2];
    for i in 0..2 {
        for j in 0..3 {
            ms[i][j] = (0..3).map(|l| m[i][l] * s[l][j]).sum();
        }
    }
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (0..3).map(|l| ms[i][l] * m[j][l]).sum();
        }
    }
    Ok(out)
}

/// The constant `a` in `sqrt(k)(γ̂ - γ) → N(0, γ² a)`.
pub fn abm_variance_constant(gamma: f64) -> Result<f64> {
    let cov = limit_covariance(gamma)?;
    // Var(γ̂) = γ⁴ Var(1/γ̂); divide by γ² to get a
    Ok(gamma * gamma * cov[0][0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticMatrices {
    pub gamma: f64,
    pub m: Mat2x3,
    pub sigma: Mat3,
    pub limit_cov: Mat2,
    pub variance_constant_a: f64,
}

impl AsymptoticMatrices {
    pub fn new(gamma: f64) -> Result<Self> {
        Ok(Self {
            gamma,
            m: m_matrix(gamma)?,
            sigma: sigma_matrix(gamma)?,
            limit_cov: limit_covariance(gamma)?,
            variance_constant_a: abm_variance_constant(gamma)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceEstimate {
    pub gamma: f64,
    pub reps: usize,
    pub seed: u64,
    /// Symmetrized Monte Carlo estimate of `Cov(Y)`.
    pub estimate: Mat3,
    pub std_error: Mat3,
}

impl CovarianceEstimate {
    /// Largest `|estimate - reference| / std_error` over all entries.
    pub fn max_z_score(&self, reference: &Mat3) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let z = (self.estimate[i][j] - reference[i][j]).abs() / self.std_error[i][j];
                worst = worst.max(z);
            }
        }
        worst
    }
}

pub const MC_CHUNK: usize = 10_000;

// The six upper-triangle entries in row-major order.
const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: [f64; 6],
    sum_sq: [f64; 6],
}

fn g(gamma: f64, u: f64) -> [f64; 3] {
    [gamma * (1.0 + u.ln()), -1.0, gamma / u]
}

/// Monte Carlo estimate of `Cov(Y)` from `reps` exponential pairs.
///
/// Off-diagonal entries average the `(i,j)` and `(j,i)` estimators per draw.
/// Draws are split into chunks of [`MC_CHUNK`]; chunk `c` uses stream `c` of
/// `seed`, and chunk sums are combined in chunk order.
pub fn covariance_mc_check(
    gamma: f64,
    reps: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<CovarianceEstimate> {
    check_gamma(gamma)?;
    if reps < 1000 {
        return Err(invalid(format!("reps = {reps} must be at least 1000")));
    }
    let chunks = reps.div_ceil(MC_CHUNK);
    let partial = map_indexed(parallelism, chunks, |c| {
        let mut rng = stream_rng(seed, c as u64);
        let len = MC_CHUNK.min(reps - c * MC_CHUNK);
        let mut acc = Moments::default();
        for _ in 0..len {
            let u: f64 = rng.sample(Exp1);
            let s: f64 = rng.sample(Exp1);
            let (gu, gs) = (g(gamma, u), g(gamma, s));
            let w = u.min(s);
            for (slot, &(i, j)) in PAIRS.iter().enumerate() {
                let z = 0.5 * (gu[i] * gs[j] + gu[j] * gs[i]) * w;
                acc.sum[slot] += z;
                acc.sum_sq[slot] += z * z;
            }
        }
        acc
    });

    let mut total = Moments::default();
    for part in &partial {
        for slot in 0..6 {
            total.sum[slot] += part.sum[slot];
            total.sum_sq[slot] += part.sum_sq[slot];
        }
    }
    let nf = reps as f64;
    let mut estimate = [[0.0; 3]; 3];
    let mut std_error = [[0.0; 3]; 3];
    for (slot, &(i, j)) in PAIRS.iter().enumerate() {
        let mean = total.sum[slot] / nf;
        let var = (total.sum_sq[slot] / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        let se = (var / nf).sqrt();
        estimate[i][j] = mean;
        estimate[j][i] = mean;
        std_error[i][j] = se;
        std_error[j][i] = se;
    }
    Ok(CovarianceEstimate {
        gamma,
        reps,
        seed,
        estimate,
        std_error,
    })
}
