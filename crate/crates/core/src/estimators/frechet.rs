//! Weighted maximum-likelihood fit of the two-parameter Fréchet distribution
//! `G(x) = exp(-(x/σ)^{-1/γ})`.
//!
//! Profiling out σ leaves the score equation `Ψ(γ) = 0` with
//!
//! ```text
//! Ψ(γ) = γ + Σ w x^{-1/γ} log x / Σ w x^{-1/γ} - Σ w log x
//! ```
//!
//! and then `σ = (Σ w x^{-1/γ})^{-γ}`. All sums are taken relative to the
//! smallest positively weighted observation so that `x^{-1/γ}` stays in
//! `(0, 1]` for every γ.

use crate::error::{invalid, Error, Result};
use crate::numerics::roots::brent;
use crate::numerics::KahanSum;
use serde::Serialize;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_BRACKET: (f64, f64) = (0.05, 2.0);
pub const BRACKET_LIMITS: (f64, f64) = (1e-6, 1e3);
const BRACKET_GROWTH: f64 = 4.0;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetFit {
    pub gamma: f64,
    pub sigma: f64,
    pub solver: SolverDiagnostics,
}

/// Log-transformed weighted sample, centered at the smallest positively
/// weighted observation.
#[derive(Debug, Clone)]
pub(crate) struct CenteredLogs<'a> {
    /// `log x_i - log x_min`, all non-negative.
    offsets: Vec<f64>,
    weights: &'a [f64],
    log_min: f64,
    /// `Σ w_i (log x_i - log x_min)`
    mean_offset: f64,
}

impl<'a> CenteredLogs<'a> {
    pub(crate) fn new(values: &[f64], weights: &'a [f64]) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(invalid(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if values.is_empty() {
            return Err(invalid("empty sample"));
        }
        if let Some(x) = values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(invalid(format!(
                "observation {x} must be positive and finite"
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid(format!(
                "weight {w} must be non-negative and finite"
            )));
        }
        let log_min = values
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(x, _)| x.ln())
            .fold(f64::INFINITY, f64::min);
        if !log_min.is_finite() {
            return Err(invalid("all weights are zero"));
        }
        let offsets: Vec<f64> = values.iter().map(|x| (x.ln() - log_min).max(0.0)).collect();
        let mean_offset = offsets
            .iter()
            .zip(weights)
            .map(|(d, w)| w * d)
            .collect::<KahanSum>()
            .value();
        Ok(Self {
            offsets,
            weights,
            log_min,
            mean_offset,
        })
    }

    /// True when every positively weighted observation equals the minimum.
    pub(crate) fn is_degenerate(&self) -> bool {
        self.offsets
            .iter()
            .zip(self.weights)
            .all(|(d, w)| *w == 0.0 || *d == 0.0)
    }

    /// `(Σ w e, Σ w e d)` with `e = exp(-d/γ)`.
    fn moments(&self, gamma: f64) -> (f64, f64) {
        let mut mass = KahanSum::new();
        let mut first = KahanSum::new();
        for (&d, &w) in self.offsets.iter().zip(self.weights) {
            if w == 0.0 {
                continue;
            }
            let e = (-d / gamma).exp();
            mass.add(w * e);
            first.add(w * e * d);
        }
        (mass.value(), first.value())
    }

    pub(crate) fn psi(&self, gamma: f64) -> f64 {
        let (mass, first) = self.moments(gamma);
        gamma + first / mass - self.mean_offset
    }

    pub(crate) fn sigma(&self, gamma: f64) -> f64 {
        let (mass, _) = self.moments(gamma);
        // (x_min^{-1/γ} Σ w e)^{-γ} = x_min · (Σ w e)^{-γ}
        (self.log_min - gamma * mass.ln()).exp()
    }
}

/// The profile score `Ψ(γ)` for a weighted sample.
pub fn psi(gamma: f64, values: &[f64], weights: &[f64]) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid(format!(
            "gamma = {gamma} must be positive and finite"
        )));
    }
    Ok(CenteredLogs::new(values, weights)?.psi(gamma))
}

/// Solves `Ψ(γ) = 0` and returns `(γ, σ)` with solver diagnostics.
///
/// The bracket starts at `bracket_hint` (or [`DEFAULT_BRACKET`]) and grows
/// by a factor 4 outward per side within [`BRACKET_LIMITS`] until Ψ changes
/// sign.
pub fn fit_frechet_wml(
    values: &[f64],
    weights: &[f64],
    tol: f64,
    bracket_hint: Option<(f64, f64)>,
) -> Result<FrechetFit> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance {tol} must be positive")));
    }
    let logs = CenteredLogs::new(values, weights)?;
    if logs.is_degenerate() {
        return Err(Error::NoUniqueMaximizer);
    }

    let (min_lo, max_hi) = BRACKET_LIMITS;
    let (mut lo, mut hi) = bracket_hint.unwrap_or(DEFAULT_BRACKET);
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(invalid(format!("bad bracket hint ({lo}, {hi})")));
    }
    lo = lo.max(min_lo);
    hi = hi.min(max_hi);
    let mut psi_lo = logs.psi(lo);
    let mut psi_hi = logs.psi(hi);
    // Ψ is negative near 0 and positive for large γ.
    while psi_lo > 0.0 && lo > min_lo {
        lo = (lo / BRACKET_GROWTH).max(min_lo);
        psi_lo = logs.psi(lo);
    }
    while psi_hi < 0.0 && hi < max_hi {
        hi = (hi * BRACKET_GROWTH).min(max_hi);
        psi_hi = logs.psi(hi);
    }
    if !(psi_lo <= 0.0 && psi_hi >= 0.0) {
        return Err(Error::BracketingFailed {
            lo,
            hi,
            psi_lo,
            psi_hi,
        });
    }

    let sol = brent(|g| logs.psi(g), lo, hi, tol, MAX_ITER).ok_or(Error::BracketingFailed {
        lo,
        hi,
        psi_lo,
        psi_hi,
    })?;
    let gamma = sol.root;
    Ok(FrechetFit {
        gamma,
        sigma: logs.sigma(gamma),
        solver: SolverDiagnostics {
            iterations: sol.iterations,
            bracket: sol.bracket,
            residual: sol.residual,
        },
    })
}
