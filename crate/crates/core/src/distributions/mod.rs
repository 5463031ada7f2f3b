//! Data-generating processes for the simulation designs.

pub mod kesten;
pub mod rng;
pub mod sampling;

use crate::error::{invalid, Result};
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

pub use kesten::kesten_gamma;
pub use rng::{stream_rng, RngStream};
pub use sampling::{ar1_series, garch_series, scale_het_series, GarchParams, StudentT};

/// Burn-in discarded by the AR(1) and GARCH designs.
pub const DEFAULT_BURN_IN: usize = 100;

/// The process families. Serialized flat, tagged by `"dgp"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dgp", rename_all = "snake_case")]
pub enum Family {
    Pareto {
        gamma: f64,
    },
    Frechet {
        gamma: f64,
    },
    /// `|T|` with `T ~ t(ν)`.
    HalfStudentT {
        nu: f64,
    },
    /// Signed `t(ν)`.
    StudentT {
        nu: f64,
    },
    /// AR(1) with signed `t(ν)` innovations.
    Ar1 {
        phi: f64,
        nu: f64,
    },
    /// GARCH(1,1) with unit-variance `t(ν)` innovations.
    Garch11 {
        lambda0: f64,
        lambda1: f64,
        lambda2: f64,
        nu: f64,
    },
    /// `|ε|` then `r|ε|` halves, `ε ~ t(ν)`.
    ScaleHet {
        r: f64,
        nu: f64,
    },
}

impl Family {
    /// JSON keys each family accepts besides `"dgp"`.
    pub fn parameter_keys(tag: &str) -> Option<&'static [&'static str]> {
        Some(match tag {
            "pareto" | "frechet" => &["gamma"],
            "half_student_t" | "student_t" => &["nu"],
            "ar1" => &["phi", "nu"],
            "garch11" => &["lambda0", "lambda1", "lambda2", "nu"],
            "scale_het" => &["r", "nu"],
            _ => return None,
        })
    }

    pub fn is_iid(&self) -> bool {
        matches!(
            self,
            Family::Pareto { .. }
                | Family::Frechet { .. }
                | Family::HalfStudentT { .. }
                | Family::StudentT { .. }
        )
    }
}

/// A process together with its known extreme value index and second-order
/// metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgpSpec {
    pub family: Family,
    pub true_gamma: f64,
    /// Second-order parameter of the tail quantile function; metadata only.
    pub rho: Option<f64>,
    /// Second-order parameter of the block-maxima quantile function; metadata only.
    pub rho_prime: Option<f64>,
    pub burn_in: usize,
    /// Extremal index, where known (AR(1): `1 - φ⁴`); metadata only.
    pub extremal_index: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {v} must be positive and finite")))
    }
}

impl DgpSpec {
    pub fn new(family: Family) -> Result<Self> {
        let t_meta = |nu: f64| (1.0 / nu, Some(-2.0 / nu), Some(-2.0 / nu));
        let (true_gamma, rho, rho_prime) = match family {
            Family::Pareto { gamma } => {
                positive("gamma", gamma)?;
                (gamma, Some(f64::NEG_INFINITY), Some(-1.0))
            }
            Family::Frechet { gamma } => {
                positive("gamma", gamma)?;
                (gamma, Some(-1.0), Some(f64::NEG_INFINITY))
            }
            Family::HalfStudentT { nu } | Family::StudentT { nu } | Family::ScaleHet { nu, .. } => {
                positive("nu", nu)?;
                if let Family::ScaleHet { r, .. } = family {
                    positive("r", r)?;
                }
                t_meta(nu)
            }
            Family::Ar1 { phi, nu } => {
                positive("nu", nu)?;
                if !(phi.abs() < 1.0) {
                    return Err(invalid(format!("AR(1) phi = {phi} must satisfy |phi| < 1")));
                }
                t_meta(nu)
            }
            Family::Garch11 {
                lambda0,
                lambda1,
                lambda2,
                nu,
            } => {
                GarchParams {
                    lambda0,
                    lambda1,
                    lambda2,
                }
                .validate()?;
                positive("nu", nu)?;
                (kesten_gamma(lambda1, lambda2, nu)?, None, None)
            }
        };
        let burn_in = match family {
            Family::Ar1 { .. } | Family::Garch11 { .. } => DEFAULT_BURN_IN,
            _ => 0,
        };
        let extremal_index = match family {
            Family::Ar1 { phi, .. } => Some(1.0 - phi.powi(4)),
            _ => None,
        };
        Ok(Self {
            family,
            true_gamma,
            rho,
            rho_prime,
            burn_in,
            extremal_index,
        })
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    /// Draws `n` observations. For the i.i.d. families this is exactly
    /// [`sample_iid`].
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self.family {
            f if f.is_iid() => sample_iid(self, n, rng),
            Family::Ar1 { phi, nu } => ar1_series(phi, n, self.burn_in, nu, rng),
            Family::Garch11 {
                lambda0,
                lambda1,
                lambda2,
                nu,
            } => garch_series(
                GarchParams {
                    lambda0,
                    lambda1,
                    lambda2,
                },
                nu,
                n,
                self.burn_in,
                rng,
            ),
            Family::ScaleHet { r, nu } => scale_het_series(r, nu, n, rng),
            _ => unreachable!(),
        }
    }
}

/// Inverse-transform sampling for the i.i.d. families.
pub fn sample_iid<R: Rng + ?Sized>(spec: &DgpSpec, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    match spec.family {
        Family::Pareto { gamma } => Ok((0..n)
            .map(|_| sampling::pareto_quantile(gamma, sampling::uniform_open(rng)))
            .collect()),
        Family::Frechet { gamma } => Ok((0..n)
            .map(|_| sampling::frechet_quantile(gamma, sampling::uniform_open(rng)))
            .collect()),
        Family::HalfStudentT { nu } => {
            let t = StudentT::new(nu)?;
            Ok((0..n).map(|_| t.sample(rng).abs()).collect())
        }
        Family::StudentT { nu } => {
            let t = StudentT::new(nu)?;
            Ok((0..n).map(|_| t.sample(rng)).collect())
        }
        other => Err(invalid(format!("{other:?} is not an i.i.d. family"))),
    }
}
