use crate::distributions::DgpSpec;
use crate::error::{Error, Result};
use crate::estimators::{Method, DEFAULT_TOL, DEFAULT_TRUNCATION};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_REPS: usize = 100;
pub const DEFAULT_SEED: u64 = 20_240_101;

/// `k = round(n^l)` for `l` in {1/3, 1/2, 2/3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KRule {
    CubeRoot,
    SquareRoot,
    TwoThirds,
}

impl KRule {
    pub fn exponent(self) -> f64 {
        match self {
            KRule::CubeRoot => 1.0 / 3.0,
            KRule::SquareRoot => 0.5,
            KRule::TwoThirds => 2.0 / 3.0,
        }
    }

    pub fn k_for(self, n: usize) -> usize {
        (n as f64).powf(self.exponent()).round() as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KRule::CubeRoot => "n^1/3",
            KRule::SquareRoot => "n^1/2",
            KRule::TwoThirds => "n^2/3",
        }
    }
}

impl fmt::Display for KRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace(' ', "").as_str() {
            "n^1/3" | "1/3" => Ok(KRule::CubeRoot),
            "n^1/2" | "1/2" | "sqrt" => Ok(KRule::SquareRoot),
            "n^2/3" | "2/3" => Ok(KRule::TwoThirds),
            other => Err(Error::Config(format!("unknown k rule {other:?}"))),
        }
    }
}

impl Serialize for KRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for KRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KSpec {
    Grid(Vec<usize>),
    Rule(KRule),
}

impl KSpec {
    pub fn ks_for(&self, n: usize) -> Vec<usize> {
        match self {
            KSpec::Grid(ks) => ks.clone(),
            KSpec::Rule(rule) => vec![rule.k_for(n)],
        }
    }
}

/// How replicate series are drawn when `n_grid` has several sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleNesting {
    /// One series of length `max(n_grid)` per replicate; each `n` uses its
    /// prefix.
    #[default]
    Prefix,
    /// A fresh series per `n`, drawn in `n_grid` order from the replicate's
    /// stream.
    Fresh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: Option<String>,
    pub dgp: DgpSpec,
    pub n_grid: Vec<usize>,
    pub k: KSpec,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub c: f64,
    pub base_seed: u64,
    pub nesting: SampleNesting,
    pub tol: f64,
}

impl ExperimentConfig {
    /// A config with the harness defaults (`c = 1e-3`, 100 replicates,
    /// ABM vs disjoint BM, prefix nesting).
    pub fn new(dgp: DgpSpec, n_grid: Vec<usize>, k: KSpec) -> Self {
        Self {
            name: None,
            dgp,
            n_grid,
            k,
            methods: vec![Method::Abm, Method::DisjointBm],
            reps: DEFAULT_REPS,
            c: DEFAULT_TRUNCATION,
            base_seed: DEFAULT_SEED,
            nesting: SampleNesting::Prefix,
            tol: DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        if self.reps == 0 {
            return bad("reps", "must be at least 1".into());
        }
        if self.n_grid.is_empty() {
            return bad("n_grid", "must not be empty".into());
        }
        if self.methods.is_empty() {
            return bad("methods", "must not be empty".into());
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad("c", format!("{} must be positive", self.c));
        }
        if !(self.tol > 0.0) {
            return bad("tol", format!("{} must be positive", self.tol));
        }
        if let KSpec::Grid(ks) = &self.k {
            if ks.is_empty() {
                return bad("k_grid", "must not be empty".into());
            }
        }
        if matches!(
            self.dgp.family,
            crate::distributions::Family::ScaleHet { .. }
        ) {
            if let Some(n) = self.n_grid.iter().find(|&&n| n % 2 != 0) {
                return bad(
                    "n_grid",
                    format!("scale heterogeneity needs even n, got {n}"),
                );
            }
        }
        for &n in &self.n_grid {
            if n < 4 {
                return bad("n_grid", format!("sample size {n} is too small"));
            }
            for k in self.k.ks_for(n) {
                if k == 0 {
                    return bad("k_grid", "k must be at least 1".into());
                }
                if self.methods.iter().any(|m| m.is_block_maxima()) && n / k < 2 {
                    return bad(
                        "k_grid",
                        format!("k = {k} gives block size {} < 2 at n = {n}", n / k),
                    );
                }
                if self.methods.contains(&Method::Hill) && k >= n {
                    return bad(
                        "k_grid",
                        format!("Hill needs k < n, got k = {k} at n = {n}"),
                    );
                }
            }
        }
        Ok(())
    }

    pub fn max_n(&self) -> usize {
        self.n_grid.iter().copied().max().unwrap_or(0)
    }
}
