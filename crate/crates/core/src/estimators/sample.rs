use crate::error::{invalid, Result};

/// Default left-truncation constant.
pub const DEFAULT_TRUNCATION: f64 = 1e-3;

/// Order statistics in descending order, each floored at `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedTruncatedSample {
    values: Vec<f64>,
    c: f64,
}

impl SortedTruncatedSample {
    pub fn new(raw: &[f64], c: f64) -> Result<Self> {
        check_truncation(c)?;
        check_finite(raw)?;
        let mut values: Vec<f64> = raw.iter().map(|&x| x.max(c)).collect();
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self { values, c })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_raw(&self) -> usize {
        self.values.len()
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

pub(crate) fn check_truncation(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "truncation constant c = {c} must be positive and finite"
        )))
    }
}

pub(crate) fn check_finite(raw: &[f64]) -> Result<()> {
    match raw.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(invalid(format!(
            "observation {i} is not finite ({})",
            raw[i]
        ))),
        None => Ok(()),
    }
}

/// Sorts a copy of `raw` in descending order.
pub(crate) fn sorted_desc(raw: &[f64]) -> Vec<f64> {
    let mut v = raw.to_vec();
    v.sort_unstable_by(|a, b| b.total_cmp(a));
    v
}
