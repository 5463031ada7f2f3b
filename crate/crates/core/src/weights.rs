//! All-block-maxima weights on the upper order statistics.
//!
//! The i-th largest observation of a sample of size `n` is the maximum of
//! `C(n-i, m-1)` of the `C(n, m)` size-`m` blocks, so in the likelihood of
//! all block maxima it carries weight `p_i = C(n-i, m-1) / C(n, m)` for
//! `i = 1..=n-m+1`. For `k = n/m` these weights are close to the exponential
//! profile `q_i = exp(-(i-1)/k) / k`.

use crate::error::{invalid, Result};
use serde::Serialize;

/// Weights smaller than this are flushed to zero and the recursion stops.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    pub values: Vec<f64>,
    pub n: usize,
    pub m: usize,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `k = n / m` as a real number.
    pub fn k(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    /// Number of leading weights that are not flushed to zero.
    pub fn support(&self) -> usize {
        self.values
            .iter()
            .position(|&w| w == 0.0)
            .unwrap_or(self.values.len())
    }
}

fn check_block(n: usize, m: usize) -> Result<()> {
    if m < 2 {
        return Err(invalid(format!("block size m = {m} must be at least 2")));
    }
    if m > n {
        return Err(invalid(format!(
            "block size m = {m} exceeds sample size n = {n}"
        )));
    }
    Ok(())
}

/// `p_i = C(n-i, m-1) / C(n, m)` for `i = 1..=n-m+1`.
///
/// Uses `p_1 = m/n` and `p_{i+1} = p_i (n-m-i+1)/(n-i)`. Not renormalized:
/// the analytic sum is 1.
pub fn abm_weights(n: usize, m: usize) -> Result<WeightVector> {
    check_block(n, m)?;
    let len = n - m + 1;
    let mut values = vec![0.0; len];
    let mut p = m as f64 / n as f64;
    values[0] = p;
    for i in 1..len {
        // i here is the 1-based index of the previous weight
        p *= (n - m - i + 1) as f64 / (n - i) as f64;
        if p < UNDERFLOW_FLOOR {
            break;
        }
        values[i] = p;
    }
    Ok(WeightVector { values, n, m })
}

/// First `count` terms of `q_i = (1/k) exp(-(i-1)/k)` with `k = n/m`.
pub fn exp_weights(n: usize, m: usize, count: usize) -> Result<Vec<f64>> {
    check_block(n, m)?;
    if count == 0 || count > n - m + 1 {
        return Err(invalid(format!(
            "count = {count} must lie in 1..={}",
            n - m + 1
        )));
    }
    let k = n as f64 / m as f64;
    Ok((0..count).map(|i| (-(i as f64) / k).exp() / k).collect())
}

/// `max |p_i / q_i - 1|` over `1 <= i <= floor(k (log k)^d)`, clipped to the
/// available `n - m + 1` weights and to at least one term.
pub fn weight_approximation_error(n: usize, m: usize, d: f64) -> Result<f64> {
    check_block(n, m)?;
    if m == n {
        return Err(invalid("need n > m so that k = n/m > 1"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(invalid(format!("exponent d = {d} must be positive")));
    }
    let k = n as f64 / m as f64;
    let reach = (k * k.ln().powf(d)).floor();
    let upper = if reach.is_finite() && reach >= 1.0 {
        (reach as usize).min(n - m + 1)
    } else {
        1
    };

    let p = abm_weights(n, m)?;
    let q = exp_weights(n, m, upper)?;
    Ok(p.values[..upper]
        .iter()
        .zip(&q)
        .map(|(pi, qi)| (pi / qi - 1.0).abs())
        .fold(0.0, f64::max))
}
