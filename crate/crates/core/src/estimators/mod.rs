//! Estimators of a positive extreme value index.
//!
//! Three block-maxima estimators share the weighted Fréchet ML fit in
//! [`frechet`]:
//!
//! - **ABM** (all block maxima): every size-`m` subset of the sample is a
//!   block; equivalent to the top `n-m+1` order statistics weighted by
//!   [`abm_weights`](crate::weights::abm_weights). Permutation invariant.
//! - **Disjoint BM**: `floor(n/m)` consecutive blocks from the front.
//! - **Sliding BM**: all `n-m+1` windows of length `m`, equally weighted.
//!   This is plain Fréchet ML on window maxima, not a bias-corrected
//!   quasi-likelihood.
//!
//! Hill is included as a variance benchmark only.

pub mod frechet;
pub mod sample;
pub mod sliding;

use crate::error::{invalid, Error, Result};
use crate::weights::{abm_weights, WeightVector};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub use frechet::{fit_frechet_wml, psi, FrechetFit, SolverDiagnostics, DEFAULT_TOL};
pub use sample::{SortedTruncatedSample, DEFAULT_TRUNCATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[serde(alias = "ABM")]
    Abm,
    #[serde(rename = "bm", alias = "disjoint", alias = "disjoint_bm")]
    DisjointBm,
    #[serde(rename = "sliding", alias = "sliding_bm")]
    SlidingBm,
    Hill,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Abm,
        Method::DisjointBm,
        Method::SlidingBm,
        Method::Hill,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Abm => "abm",
            Method::DisjointBm => "bm",
            Method::SlidingBm => "sliding",
            Method::Hill => "hill",
        }
    }

    pub fn is_block_maxima(self) -> bool {
        !matches!(self, Method::Hill)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "abm" => Ok(Method::Abm),
            "bm" | "disjoint" | "disjoint_bm" => Ok(Method::DisjointBm),
            "sliding" | "sliding_bm" => Ok(Method::SlidingBm),
            "hill" => Ok(Method::Hill),
            other => Err(invalid(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub method: Method,
    pub gamma_hat: f64,
    /// Absent for Hill.
    pub sigma_hat: Option<f64>,
    /// Block size; absent for Hill.
    pub m: Option<usize>,
    /// `n/m` for ABM and sliding, the block count for disjoint BM, the number
    /// of upper order statistics for Hill.
    pub k_effective: f64,
    pub solver: Option<SolverDiagnostics>,
}

impl EstimateResult {
    fn from_fit(method: Method, m: usize, k_effective: f64, fit: FrechetFit) -> Self {
        Self {
            method,
            gamma_hat: fit.gamma,
            sigma_hat: Some(fit.sigma),
            m: Some(m),
            k_effective,
            solver: Some(fit.solver),
        }
    }
}

/// ABM estimator with its weights computed once for a fixed `(n, m)`.
#[derive(Debug, Clone)]
pub struct AbmEstimator {
    weights: WeightVector,
    support: usize,
}

impl AbmEstimator {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let weights = abm_weights(n, m)?;
        let support = weights.support();
        Ok(Self { weights, support })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn estimate(&self, raw: &[f64], c: f64, tol: f64) -> Result<EstimateResult> {
        let n = self.weights.n;
        if raw.len() != n {
            return Err(invalid(format!(
                "expected {n} observations, got {}",
                raw.len()
            )));
        }
        self.estimate_sorted(&SortedTruncatedSample::new(raw, c)?, tol)
    }

    /// Same as [`estimate`](Self::estimate) on an already sorted and
    /// truncated sample of size `n`.
    pub fn estimate_sorted(
        &self,
        sample: &SortedTruncatedSample,
        tol: f64,
    ) -> Result<EstimateResult> {
        let (n, m) = (self.weights.n, self.weights.m);
        if sample.n_raw() != n {
            return Err(invalid(format!(
                "expected {n} observations, got {}",
                sample.n_raw()
            )));
        }
        // zero-weight order statistics cannot move the fit
        let top = &sample.values()[..self.support];
        let fit = fit_frechet_wml(top, &self.weights.values[..self.support], tol, None)?;
        Ok(EstimateResult::from_fit(
            Method::Abm,
            m,
            n as f64 / m as f64,
            fit,
        ))
    }
}

pub fn abm_estimate(raw: &[f64], m: usize, c: f64, tol: f64) -> Result<EstimateResult> {
    if raw.len() < m {
        return Err(invalid(format!(
            "sample size {} is below block size {m}",
            raw.len()
        )));
    }
    AbmEstimator::new(raw.len(), m)?.estimate(raw, c, tol)
}

fn fit_equal_weights(maxima: &[f64], c: f64, tol: f64) -> Result<FrechetFit> {
    let truncated: Vec<f64> = maxima.iter().map(|&x| x.max(c)).collect();
    let w = vec![1.0 / truncated.len() as f64; truncated.len()];
    fit_frechet_wml(&truncated, &w, tol, None)
}

fn check_ml_inputs(raw: &[f64], m: usize, c: f64) -> Result<()> {
    if m < 2 {
        return Err(invalid(format!("block size m = {m} must be at least 2")));
    }
    sample::check_truncation(c)?;
    sample::check_finite(raw)
}

pub fn disjoint_bm_estimate(raw: &[f64], m: usize, c: f64, tol: f64) -> Result<EstimateResult> {
    check_ml_inputs(raw, m, c)?;
    let blocks = raw.len() / m;
    if blocks < 2 {
        return Err(invalid(format!(
            "n = {} with m = {m} gives {blocks} block(s); need at least 2",
            raw.len()
        )));
    }
    let maxima = sliding::disjoint_maxima(raw, m);
    let fit = fit_equal_weights(&maxima, c, tol)?;
    Ok(EstimateResult::from_fit(
        Method::DisjointBm,
        m,
        blocks as f64,
        fit,
    ))
}

pub fn sliding_bm_estimate(raw: &[f64], m: usize, c: f64, tol: f64) -> Result<EstimateResult> {
    check_ml_inputs(raw, m, c)?;
    if raw.len() < m {
        return Err(invalid(format!(
            "sliding blocks need n >= m, got n = {}",
            raw.len()
        )));
    }
    let maxima = sliding::sliding_maxima(raw, m);
    let fit = fit_equal_weights(&maxima, c, tol)?;
    Ok(EstimateResult::from_fit(
        Method::SlidingBm,
        m,
        raw.len() as f64 / m as f64,
        fit,
    ))
}

/// Hill estimator on the top `k` order statistics.
pub fn hill_estimate(raw: &[f64], k: usize) -> Result<EstimateResult> {
    sample::check_finite(raw)?;
    if k == 0 || k >= raw.len() {
        return Err(invalid(format!(
            "k = {k} must lie in 1..={}",
            raw.len().saturating_sub(1)
        )));
    }
    let desc = sample::sorted_desc(raw);
    hill_from_sorted(&desc, k)
}

pub(crate) fn hill_from_sorted(desc: &[f64], k: usize) -> Result<EstimateResult> {
    let threshold = desc[k];
    if !(threshold > 0.0) {
        return Err(invalid(format!(
            "threshold order statistic X(n-k) = {threshold} must be positive"
        )));
    }
    // ratios first: exact under power-of-two rescaling
    let mean_log = desc[..k].iter().map(|x| (x / threshold).ln()).sum::<f64>() / k as f64;
    Ok(EstimateResult {
        method: Method::Hill,
        gamma_hat: mean_log,
        sigma_hat: None,
        m: None,
        k_effective: k as f64,
        solver: None,
    })
}

/// Runs `method` with `k` blocks (or `k` order statistics for Hill).
/// Block methods use `m = floor(n/k)`.
pub fn estimate_at_k(
    raw: &[f64],
    method: Method,
    k: usize,
    c: f64,
    tol: f64,
) -> Result<EstimateResult> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if method == Method::Hill {
        return hill_estimate(raw, k);
    }
    let m = raw.len() / k;
    if m < 2 {
        return Err(invalid(format!(
            "k = {k} gives block size m = {m} < 2 for n = {}",
            raw.len()
        )));
    }
    match method {
        Method::Abm => abm_estimate(raw, m, c, tol),
        Method::DisjointBm => disjoint_bm_estimate(raw, m, c, tol),
        Method::SlidingBm => sliding_bm_estimate(raw, m, c, tol),
        Method::Hill => unreachable!(),
    }
}

#[derive(Debug)]
pub struct SweepRow {
    pub k: usize,
    pub result: Result<EstimateResult>,
}

/// One estimate per entry of `k_grid`; failures are kept as error rows.
pub fn k_sweep(raw: &[f64], method: Method, k_grid: &[usize], c: f64, tol: f64) -> Vec<SweepRow> {
    k_grid
        .iter()
        .map(|&k| SweepRow {
            k,
            result: estimate_at_k(raw, method, k, c, tol),
        })
        .collect()
}
