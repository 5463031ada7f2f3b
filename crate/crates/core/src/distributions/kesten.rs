//! Tail index of a GARCH(1,1) process via the Kesten moment equation
//! `E(λ1 ε² + λ2)^κ = 1`, giving `γ = 1/(2κ)`.
//!
//! The innovations ε are Student-t(ν) rescaled to unit variance, the same
//! law [`garch_series`](super::sampling::garch_series) draws from. Moments
//! are computed by adaptive Gauss–Kronrod quadrature over `[0, ∞)` against
//! the (even) t density.

use super::sampling::unit_variance_scale;
use crate::error::{invalid, Error, Result};
use crate::numerics::quadrature::integrate_half_line;
use crate::numerics::roots::bisect;
use statrs::distribution::{Continuous, StudentsT};

const QUAD_TOL: f64 = 1e-10;
const QUAD_MAX_INTERVALS: usize = 4000;
const KAPPA_TOL: f64 = 1e-8;
const EDGE: f64 = 1e-6;
const SCAN_POINTS: usize = 64;

struct MomentFn {
    l1: f64,
    l2: f64,
    scale: f64,
    density: StudentsT,
}

impl MomentFn {
    fn new(l1: f64, l2: f64, nu: f64) -> Result<Self> {
        let scale = unit_variance_scale(nu)?;
        let density = StudentsT::new(0.0, 1.0, nu).map_err(|e| invalid(e.to_string()))?;
        Ok(Self {
            l1,
            l2,
            scale,
            density,
        })
    }

    fn base(&self, t: f64) -> f64 {
        let e = self.scale * t;
        self.l1 * e * e + self.l2
    }

    /// `E(λ1 ε² + λ2)^κ - 1`
    fn h(&self, kappa: f64) -> f64 {
        let r = integrate_half_line(
            |t| 2.0 * self.base(t).powf(kappa) * self.density.pdf(t),
            QUAD_TOL,
            QUAD_MAX_INTERVALS,
        );
        r.value - 1.0
    }

    /// `E log(λ1 ε² + λ2)`
    fn mean_log(&self) -> f64 {
        integrate_half_line(
            |t| 2.0 * self.base(t).ln() * self.density.pdf(t),
            QUAD_TOL,
            QUAD_MAX_INTERVALS,
        )
        .value
    }
}

/// Solves for κ on `(0, ν/2)` and returns `γ = 1/(2κ)`.
pub fn kesten_gamma(l1: f64, l2: f64, nu: f64) -> Result<f64> {
    kesten_kappa(l1, l2, nu).map(|k| 0.5 / k)
}

pub fn kesten_kappa(l1: f64, l2: f64, nu: f64) -> Result<f64> {
    if !(l1 >= 0.0 && l1.is_finite()) {
        return Err(invalid(format!("lambda1 = {l1} must be non-negative")));
    }
    if !(0.0..1.0).contains(&l2) {
        return Err(invalid(format!("lambda2 = {l2} must lie in [0, 1)")));
    }
    let f = MomentFn::new(l1, l2, nu)?;
    if l1 == 0.0 {
        // E λ2^κ = λ2^κ < 1 for every κ > 0
        return Err(Error::NoKestenIndex(format!(
            "lambda1 = 0: lambda2^kappa < 1 for all kappa"
        )));
    }
    let drift = f.mean_log();
    if !(drift < 0.0) {
        return Err(Error::NoKestenIndex(format!(
            "E log(lambda1 eps^2 + lambda2) = {drift} is not negative"
        )));
    }

    // h is convex with h(0) = 0 and h'(0) < 0, so it is negative until the
    // root; scan for the first positive value.
    let upper = 0.5 * nu - EDGE;
    let mut lo = 0.0;
    let mut hi = None;
    for j in 1..=SCAN_POINTS {
        let kappa = upper * j as f64 / SCAN_POINTS as f64;
        if f.h(kappa) > 0.0 {
            hi = Some(kappa);
            break;
        }
        lo = kappa;
    }
    let hi = hi.ok_or_else(|| {
        Error::NoKestenIndex(format!("moment equation has no root on (0, {upper})"))
    })?;
    // lo may be 0, where h vanishes exactly; nudge into the negative region.
    let lo = if lo == 0.0 { hi / 1024.0 } else { lo };
    let sol = bisect(|k| f.h(k), lo, hi, KAPPA_TOL, 200)
        .ok_or_else(|| Error::NoKestenIndex("lost the sign change while bisecting".into()))?;
    Ok(sol.root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_garch_designs() {
        let heavy = kesten_gamma(0.11, 0.88, 6.0).unwrap();
        let light = kesten_gamma(0.08, 0.91, 6.0).unwrap();
        assert!((heavy - 0.35).abs() < 0.01, "{heavy}");
        assert!((light - 0.29).abs() < 0.01, "{light}");
        assert!(light < heavy);
    }

    #[test]
    fn no_arch_term_has_no_index() {
        assert!(matches!(
            kesten_gamma(0.0, 0.9, 6.0),
            Err(Error::NoKestenIndex(_))
        ));
    }

    #[test]
    fn explosive_drift_has_no_index() {
        // E log(10 ε²) > 0
        assert!(matches!(
            kesten_gamma(10.0, 0.0, 6.0),
            Err(Error::NoKestenIndex(_))
        ));
    }

    #[test]
    fn moment_at_one_is_persistence() {
        // unit-variance innovations: E(λ1 ε² + λ2) = λ1 + λ2
        let f = MomentFn::new(0.11, 0.88, 6.0).unwrap();
        assert!((f.h(1.0) - (0.99 - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(kesten_gamma(0.1, 1.0, 6.0).is_err());
        assert!(kesten_gamma(-0.1, 0.5, 6.0).is_err());
        assert!(kesten_gamma(0.1, 0.5, 2.0).is_err());
    }
}
