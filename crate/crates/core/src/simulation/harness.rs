use super::config::{ExperimentConfig, KRule, KSpec, SampleNesting};
use crate::distributions::{stream_rng, DgpSpec, Family};
use crate::error::Result;
use crate::estimators::{
    self, disjoint_bm_estimate, k_sweep, sliding_bm_estimate, AbmEstimator, EstimateResult, Method,
    SortedTruncatedSample, DEFAULT_TOL, DEFAULT_TRUNCATION,
};
use crate::parallel::{map_indexed, Parallelism};
use serde::Serialize;
use std::collections::HashMap;

/// One `(method, n, k)` combination evaluated in every replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cell {
    pub method: Method,
    pub n: usize,
    pub k: usize,
    /// `floor(n/k)` for block methods.
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    #[serde(flatten)]
    pub cell: Cell,
    pub reps: usize,
    pub reps_succeeded: usize,
    /// False when more than half the replicates failed; the statistics
    /// below are then withheld.
    pub valid: bool,
    pub mean: Option<f64>,
    pub bias: Option<f64>,
    /// Population variance (divisor = successful replicates).
    pub variance: Option<f64>,
    pub mse: Option<f64>,
    /// `k · variance / γ²`
    pub implied_asym_var: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub true_gamma: f64,
    pub base_seed: u64,
    pub rows: Vec<McRow>,
}

impl McSummary {
    pub fn row(&self, method: Method, n: usize, k: usize) -> Option<&McRow> {
        self.rows
            .iter()
            .find(|r| r.cell.method == method && r.cell.n == n && r.cell.k == k)
    }

    /// Smallest MSE over the valid cells of `method` at sample size `n`.
    pub fn min_mse(&self, method: Method, n: usize) -> Option<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.cell.method == method && r.cell.n == n)
            .filter_map(|r| r.mse.map(|v| (r.cell.k, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

pub(crate) fn cells_for(config: &ExperimentConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &n in &config.n_grid {
        for k in config.k.ks_for(n) {
            for &method in &config.methods {
                let m = method.is_block_maxima().then(|| n / k.max(1));
                cells.push(Cell { method, n, k, m });
            }
        }
    }
    cells
}

struct Evaluator<'a> {
    config: &'a ExperimentConfig,
    cells: Vec<Cell>,
    abm: HashMap<(usize, usize), AbmEstimator>,
}

impl<'a> Evaluator<'a> {
    fn new(config: &'a ExperimentConfig) -> Self {
        let cells = cells_for(config);
        let mut abm = HashMap::new();
        for cell in &cells {
            if let (Method::Abm, Some(m)) = (cell.method, cell.m) {
                if m >= 2 && m <= cell.n {
                    if let Ok(est) = AbmEstimator::new(cell.n, m) {
                        abm.entry((cell.n, m)).or_insert(est);
                    }
                }
            }
        }
        Self { config, cells, abm }
    }

    fn draw(&self, replicate: usize) -> Result<HashMap<usize, Vec<f64>>> {
        let mut rng = stream_rng(self.config.base_seed, replicate as u64);
        let dgp = &self.config.dgp;
        let fresh = self.config.nesting == SampleNesting::Fresh
            || matches!(dgp.family, Family::ScaleHet { .. });
        let mut series = HashMap::new();
        if fresh {
            for &n in &self.config.n_grid {
                let s = dgp.sample(n, &mut rng)?;
                series.entry(n).or_insert(s);
            }
        } else {
            let full = dgp.sample(self.config.max_n(), &mut rng)?;
            for &n in &self.config.n_grid {
                series.entry(n).or_insert_with(|| full[..n].to_vec());
            }
        }
        Ok(series)
    }

    fn evaluate(
        &self,
        cell: &Cell,
        raw: &[f64],
        sorted: &SortedTruncatedSample,
        desc: &[f64],
    ) -> Option<f64> {
        let (c, tol) = (self.config.c, self.config.tol);
        let result = match (cell.method, cell.m) {
            (Method::Hill, _) => {
                if cell.k == 0 || cell.k >= desc.len() {
                    return None;
                }
                estimators::hill_from_sorted(desc, cell.k)
            }
            (Method::Abm, Some(m)) => match self.abm.get(&(cell.n, m)) {
                Some(est) => est.estimate_sorted(sorted, tol),
                None => return None,
            },
            (Method::DisjointBm, Some(m)) => disjoint_bm_estimate(raw, m, c, tol),
            (Method::SlidingBm, Some(m)) => sliding_bm_estimate(raw, m, c, tol),
            _ => return None,
        };
        result.ok().map(|r| r.gamma_hat)
    }

    /// γ̂ for every cell, in cell order; `None` marks a failed fit.
    fn replicate(&self, replicate: usize) -> Vec<Option<f64>> {
        let series = match self.draw(replicate) {
            Ok(s) => s,
            Err(_) => return vec![None; self.cells.len()],
        };
        let mut prepared: HashMap<usize, (SortedTruncatedSample, Vec<f64>)> = HashMap::new();
        self.cells
            .iter()
            .map(|cell| {
                let raw = &series[&cell.n];
                let (sorted, desc) = prepared.entry(cell.n).or_insert_with(|| {
                    let sorted = SortedTruncatedSample::new(raw, self.config.c)
                        .expect("validated truncation and finite draws");
                    let desc = estimators::sample::sorted_desc(raw);
                    (sorted, desc)
                });
                self.evaluate(cell, raw, sorted, desc)
            })
            .collect()
    }
}

fn summarize(cell: Cell, estimates: &[f64], reps: usize, gamma: f64) -> McRow {
    let ok = estimates.len();
    let valid = ok > 0 && 2 * ok >= reps;
    let mut row = McRow {
        cell,
        reps,
        reps_succeeded: ok,
        valid,
        mean: None,
        bias: None,
        variance: None,
        mse: None,
        implied_asym_var: None,
    };
    if !valid {
        return row;
    }
    let nf = ok as f64;
    let mean = estimates.iter().sum::<f64>() / nf;
    let variance = estimates.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / nf;
    let bias = mean - gamma;
    // identical to mean((γ̂ - γ)²) for the population variance
    let mse = variance + bias * bias;
    row.mean = Some(mean);
    row.bias = Some(bias);
    row.variance = Some(variance);
    row.mse = Some(mse);
    row.implied_asym_var = Some(cell.k as f64 * variance / (gamma * gamma));
    row
}

/// Runs every cell of `config` on `config.reps` seeded replicates.
///
/// Replicate `r` draws from stream `r` of `base_seed`, and every cell of that
/// replicate sees the same series. Replicates may run concurrently;
/// aggregation is in replicate order, so the summary does not depend on
/// `parallelism`.
pub fn run_experiment(config: &ExperimentConfig, parallelism: Parallelism) -> Result<McSummary> {
    config.validate()?;
    let eval = Evaluator::new(config);
    let per_rep = map_indexed(parallelism, config.reps, |r| eval.replicate(r));
    let gamma = config.dgp.true_gamma;

    let rows = eval
        .cells
        .iter()
        .enumerate()
        .map(|(j, &cell)| {
            let estimates: Vec<f64> = per_rep.iter().filter_map(|rep| rep[j]).collect();
            summarize(cell, &estimates, config.reps, gamma)
        })
        .collect();
    Ok(McSummary {
        true_gamma: gamma,
        base_seed: config.base_seed,
        rows,
    })
}

/// Raw replicate estimates of a config, `[replicate][cell]`, with the cell
/// list. Mostly useful for tests and diagnostics.
pub fn replicate_estimates(
    config: &ExperimentConfig,
    parallelism: Parallelism,
) -> Result<(Vec<Cell>, Vec<Vec<Option<f64>>>)> {
    config.validate()?;
    let eval = Evaluator::new(config);
    let per_rep = map_indexed(parallelism, config.reps, |r| eval.replicate(r));
    Ok((eval.cells.clone(), per_rep))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpliedVarianceRow {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub reps_succeeded: usize,
    pub implied_asym_var: Option<f64>,
}

/// `k · Var(γ̂_ABM) / γ²` on half-Student-t(2) data for each `n`, with
/// `k = round(n^l)`.
pub fn implied_asymptotic_variance_experiment(
    rule: KRule,
    n_grid: &[usize],
    reps: usize,
    seed: u64,
    nesting: SampleNesting,
    parallelism: Parallelism,
) -> Result<Vec<ImpliedVarianceRow>> {
    let dgp = DgpSpec::new(Family::HalfStudentT { nu: 2.0 })?;
    let mut config = ExperimentConfig::new(dgp, n_grid.to_vec(), KSpec::Rule(rule));
    config.methods = vec![Method::Abm];
    config.reps = reps;
    config.base_seed = seed;
    config.nesting = nesting;
    let summary = run_experiment(&config, parallelism)?;
    Ok(summary
        .rows
        .iter()
        .map(|r| ImpliedVarianceRow {
            n: r.cell.n,
            k: r.cell.k,
            m: r.cell.m.unwrap_or(0),
            reps_succeeded: r.reps_succeeded,
            implied_asym_var: r.implied_asym_var,
        })
        .collect())
}

#[derive(Debug)]
pub struct PathRow {
    pub method: Method,
    pub k: usize,
    pub result: Result<EstimateResult>,
}

/// Estimates along `k_grid` for each method on one sample drawn from stream
/// 0 of `seed`.
pub fn single_sample_path(
    dgp: &DgpSpec,
    n: usize,
    k_grid: &[usize],
    methods: &[Method],
    seed: u64,
) -> Result<Vec<PathRow>> {
    let raw = dgp.sample(n, &mut stream_rng(seed, 0))?;
    Ok(methods
        .iter()
        .flat_map(|&method| {
            k_sweep(&raw, method, k_grid, DEFAULT_TRUNCATION, DEFAULT_TOL)
                .into_iter()
                .map(move |row| PathRow {
                    method,
                    k: row.k,
                    result: row.result,
                })
        })
        .collect())
}

/// Median of `|γ̂(k_{j+1}) - γ̂(k_j)|` along the successful points of a path.
pub fn path_roughness(path: &[PathRow], method: Method) -> Option<f64> {
    let mut pts: Vec<(usize, f64)> = path
        .iter()
        .filter(|r| r.method == method)
        .filter_map(|r| r.result.as_ref().ok().map(|e| (r.k, e.gamma_hat)))
        .collect();
    pts.sort_by_key(|p| p.0);
    let mut diffs: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    if diffs.is_empty() {
        return None;
    }
    diffs.sort_by(f64::total_cmp);
    let mid = diffs.len() / 2;
    Some(if diffs.len() % 2 == 1 {
        diffs[mid]
    } else {
        0.5 * (diffs[mid - 1] + diffs[mid])
    })
}
