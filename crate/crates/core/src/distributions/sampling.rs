//! Inverse-transform and recursive samplers for the simulation designs.

use crate::error::{invalid, Result};
use rand::distr::Open01;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

/// Student-t(ν) draws built as `Z / sqrt(V/ν)` with `Z ~ N(0,1)` and
/// `V ~ χ²(ν)`.
#[derive(Debug, Clone, Copy)]
pub struct StudentT {
    nu: f64,
    chi2: ChiSquared<f64>,
}

impl StudentT {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(invalid(format!(
                "degrees of freedom nu = {nu} must be positive"
            )));
        }
        let chi2 = ChiSquared::new(nu).map_err(|e| invalid(e.to_string()))?;
        Ok(Self { nu, chi2 })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

impl Distribution<f64> for StudentT {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let v = self.chi2.sample(rng);
        z / (v / self.nu).sqrt()
    }
}

/// Scale making a Student-t(ν) variable unit-variance; requires ν > 2.
pub fn unit_variance_scale(nu: f64) -> Result<f64> {
    if nu > 2.0 && nu.is_finite() {
        Ok(((nu - 2.0) / nu).sqrt())
    } else {
        Err(invalid(format!(
            "unit-variance t innovations need nu > 2, got {nu}"
        )))
    }
}

pub(crate) fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// Pareto(γ) quantile at `u`: `u^{-γ}`.
pub fn pareto_quantile(gamma: f64, u: f64) -> f64 {
    u.powf(-gamma)
}

/// Fréchet(γ) quantile at `u`: `(-log u)^{-γ}`.
pub fn frechet_quantile(gamma: f64, u: f64) -> f64 {
    (-u.ln()).powf(-gamma)
}

/// `X_1 = ε_1`, `X_t = φ X_{t-1} + ε_t`, keeping the last `n` of
/// `n + burn_in` values.
pub fn ar1_from_innovations(phi: f64, innovations: &[f64], burn_in: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(innovations.len().saturating_sub(burn_in));
    let mut prev = 0.0;
    for (t, &eps) in innovations.iter().enumerate() {
        let x = if t == 0 { eps } else { phi * prev + eps };
        if t >= burn_in {
            out.push(x);
        }
        prev = x;
    }
    out
}

pub fn ar1_series<R: Rng + ?Sized>(
    phi: f64,
    n: usize,
    burn_in: usize,
    innovation_nu: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(phi.abs() < 1.0) {
        return Err(invalid(format!(
            "AR(1) coefficient phi = {phi} must satisfy |phi| < 1"
        )));
    }
    let t = StudentT::new(innovation_nu)?;
    let eps: Vec<f64> = (0..n + burn_in).map(|_| t.sample(rng)).collect();
    Ok(ar1_from_innovations(phi, &eps, burn_in))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchParams {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl GarchParams {
    pub fn validate(&self) -> Result<()> {
        let GarchParams {
            lambda0,
            lambda1,
            lambda2,
        } = *self;
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(invalid(format!("lambda0 = {lambda0} must be positive")));
        }
        if !(lambda1 >= 0.0 && lambda2 >= 0.0) {
            return Err(invalid("lambda1 and lambda2 must be non-negative"));
        }
        if !(lambda1 + lambda2 < 1.0) {
            return Err(invalid(format!(
                "stationarity requires lambda1 + lambda2 < 1, got {}",
                lambda1 + lambda2
            )));
        }
        Ok(())
    }
}

/// Variance path and observations from a fixed innovation sequence.
/// Returns `(x, sigma2)`, both of full length.
pub fn garch_from_innovations(p: GarchParams, innovations: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(innovations.len());
    let mut s2 = Vec::with_capacity(innovations.len());
    let mut var = p.lambda0 / (1.0 - p.lambda1 - p.lambda2);
    for (t, &eps) in innovations.iter().enumerate() {
        if t > 0 {
            let x_prev: f64 = xs[t - 1];
            var = p.lambda0 + p.lambda1 * x_prev * x_prev + p.lambda2 * var;
        }
        s2.push(var);
        xs.push(var.sqrt() * eps);
    }
    (xs, s2)
}

/// GARCH(1,1) with unit-variance Student-t(ν) innovations.
pub fn garch_series<R: Rng + ?Sized>(
    p: GarchParams,
    nu: f64,
    n: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    p.validate()?;
    let scale = unit_variance_scale(nu)?;
    let t = StudentT::new(nu)?;
    let eps: Vec<f64> = (0..n + burn_in).map(|_| scale * t.sample(rng)).collect();
    let (mut xs, _) = garch_from_innovations(p, &eps);
    Ok(xs.split_off(burn_in))
}

/// `|ε_t|` for the first half, `r |ε_t|` for the second.
pub fn scale_het_series<R: Rng + ?Sized>(
    r: f64,
    nu: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n % 2 != 0 {
        return Err(invalid(format!(
            "scale heterogeneity splits at n/2; n = {n} is odd"
        )));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("scale ratio r = {r} must be positive")));
    }
    let t = StudentT::new(nu)?;
    Ok((0..n)
        .map(|i| {
            let e = t.sample(rng).abs();
            if i < n / 2 {
                e
            } else {
                r * e
            }
        })
        .collect())
}
