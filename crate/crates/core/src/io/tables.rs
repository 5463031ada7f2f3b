//! Result types rendered as [`ResultTable`]s.

use super::table::{Cell, ResultTable};
use crate::error::Result;
use crate::estimators::{EstimateResult, SweepRow};
use crate::simulation::{McSummary, PathRow};
use crate::weights::WeightVector;

pub fn weights_table(w: &WeightVector) -> ResultTable {
    let mut t = ResultTable::new(["index", "weight"]);
    for (i, &p) in w.values.iter().enumerate() {
        t.push(vec![(i + 1).into(), p.into()]).expect("arity");
    }
    t
}

pub const ESTIMATE_COLUMNS: [&str; 10] = [
    "method",
    "k",
    "m",
    "k_effective",
    "gamma_hat",
    "sigma_hat",
    "iterations",
    "bracket_lo",
    "bracket_hi",
    "error",
];

fn estimate_row(k: Option<usize>, method: &str, result: &Result<EstimateResult>) -> Vec<Cell> {
    match result {
        Ok(e) => {
            let s = e.solver.as_ref();
            vec![
                e.method.as_str().into(),
                k.into(),
                e.m.into(),
                e.k_effective.into(),
                e.gamma_hat.into(),
                e.sigma_hat.into(),
                s.map(|s| s.iterations).into(),
                s.map(|s| s.bracket.0).into(),
                s.map(|s| s.bracket.1).into(),
                Cell::Missing,
            ]
        }
        Err(err) => {
            let mut row = vec![Cell::Missing; ESTIMATE_COLUMNS.len()];
            row[0] = method.into();
            row[1] = k.into();
            row[9] = err.to_string().into();
            row
        }
    }
}

pub fn estimate_table(
    method: &str,
    k: Option<usize>,
    result: &Result<EstimateResult>,
) -> ResultTable {
    let mut t = ResultTable::new(ESTIMATE_COLUMNS);
    t.push(estimate_row(k, method, result)).expect("arity");
    t
}

pub fn sweep_table(method: &str, rows: &[SweepRow]) -> ResultTable {
    let mut t = ResultTable::new(ESTIMATE_COLUMNS);
    for r in rows {
        t.push(estimate_row(Some(r.k), method, &r.result))
            .expect("arity");
    }
    t
}

pub fn path_table(rows: &[PathRow]) -> ResultTable {
    let mut t = ResultTable::new(ESTIMATE_COLUMNS);
    for r in rows {
        t.push(estimate_row(Some(r.k), r.method.as_str(), &r.result))
            .expect("arity");
    }
    t
}

pub const SUMMARY_COLUMNS: [&str; 14] = [
    "method",
    "n",
    "k",
    "m",
    "true_gamma",
    "reps",
    "reps_succeeded",
    "valid",
    "mean",
    "bias",
    "variance",
    "mse",
    "implied_asym_var",
    "note",
];

pub fn summary_table(s: &McSummary) -> ResultTable {
    let mut t = ResultTable::new(SUMMARY_COLUMNS);
    for r in &s.rows {
        let note = if r.valid {
            Cell::Missing
        } else {
            "invalid: more than half the fits failed".into()
        };
        t.push(vec![
            r.cell.method.as_str().into(),
            r.cell.n.into(),
            r.cell.k.into(),
            r.cell.m.into(),
            s.true_gamma.into(),
            r.reps.into(),
            r.reps_succeeded.into(),
            r.valid.into(),
            r.mean.into(),
            r.bias.into(),
            r.variance.into(),
            r.mse.into(),
            r.implied_asym_var.into(),
            note,
        ])
        .expect("arity");
    }
    t
}
