//! Seeded Monte Carlo experiments.

pub mod config;
pub mod harness;
pub mod registry;

pub use config::{ExperimentConfig, KRule, KSpec, SampleNesting, DEFAULT_REPS, DEFAULT_SEED};
pub use harness::{
    implied_asymptotic_variance_experiment, path_roughness, replicate_estimates, run_experiment,
    single_sample_path, Cell, ImpliedVarianceRow, McRow, McSummary, PathRow,
};
pub use registry::{
    default_k_grid, experiment_registry, lookup, path_k_grid, Experiment, PathConfig, RegistryEntry,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{DgpSpec, Family};
    use crate::estimators::Method;
    use crate::parallel::Parallelism;

    fn small(reps: usize) -> ExperimentConfig {
        let dgp = DgpSpec::new(Family::HalfStudentT { nu: 2.0 }).unwrap();
        let mut c = ExperimentConfig::new(dgp, vec![200, 400], KSpec::Grid(vec![10, 20, 40]));
        c.methods = Method::ALL.to_vec();
        c.reps = reps;
        c
    }

    #[test]
    fn single_replicate_has_zero_variance() {
        let s = run_experiment(&small(1), Parallelism::Sequential).unwrap();
        for r in &s.rows {
            assert_eq!(r.variance, Some(0.0));
            assert_eq!(r.mse, Some(r.bias.unwrap().powi(2)));
        }
    }

    #[test]
    fn mse_decomposes() {
        let s = run_experiment(&small(30), Parallelism::Sequential).unwrap();
        assert_eq!(s.rows.len(), 2 * 3 * 4);
        for r in &s.rows {
            let (mse, b, v) = (r.mse.unwrap(), r.bias.unwrap(), r.variance.unwrap());
            assert!((mse - (b * b + v)).abs() <= 1e-12 * mse.max(1.0));
            assert_eq!(r.implied_asym_var.unwrap(), r.cell.k as f64 * v / 0.25);
        }
    }

    #[test]
    fn schedule_independent() {
        let c = small(12);
        let a = run_experiment(&c, Parallelism::Sequential).unwrap();
        let b = run_experiment(&c, Parallelism::threads(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cells_share_the_series() {
        // ABM at k = n/m and sliding BM see the same draw: re-running a
        // single-method config reproduces the values of the joint run.
        let joint = small(5);
        let mut solo = joint.clone();
        solo.methods = vec![Method::SlidingBm];
        let (cells, a) = replicate_estimates(&joint, Parallelism::Sequential).unwrap();
        let (solo_cells, b) = replicate_estimates(&solo, Parallelism::Sequential).unwrap();
        for (j, cell) in solo_cells.iter().enumerate() {
            let i = cells.iter().position(|c| c == cell).unwrap();
            for r in 0..5 {
                assert_eq!(a[r][i], b[r][j]);
            }
        }
    }

    #[test]
    fn failed_majority_is_flagged() {
        // Pareto with c far above every draw: all truncated values are equal
        let dgp = DgpSpec::new(Family::Pareto { gamma: 0.5 }).unwrap();
        let mut c = ExperimentConfig::new(dgp, vec![100], KSpec::Grid(vec![10]));
        c.c = 1e9;
        c.reps = 4;
        let s = run_experiment(&c, Parallelism::Sequential).unwrap();
        for r in &s.rows {
            assert!(!r.valid);
            assert_eq!(r.reps_succeeded, 0);
            assert_eq!(r.mse, None);
        }
    }

    #[test]
    fn invalid_configs() {
        let mut c = small(1);
        c.reps = 0;
        assert!(c.validate().is_err());
        let mut c = small(1);
        c.k = KSpec::Grid(vec![150]);
        assert!(c.validate().is_err());
        let mut c = small(1);
        c.n_grid.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn implied_variance_with_two_reps_is_defined() {
        let rows = implied_asymptotic_variance_experiment(
            KRule::CubeRoot,
            &[500],
            2,
            1,
            SampleNesting::Prefix,
            Parallelism::Sequential,
        )
        .unwrap();
        let v = rows[0].implied_asym_var.unwrap();
        assert!(v.is_finite() && v >= 0.0);
        assert_eq!(rows[0].k, 8);
    }

    #[test]
    fn path_is_order_free() {
        let dgp = DgpSpec::new(Family::HalfStudentT { nu: 2.0 }).unwrap();
        let a = single_sample_path(&dgp, 1000, &[10, 20, 50], &[Method::Abm], 4).unwrap();
        let b = single_sample_path(&dgp, 1000, &[50, 10, 20], &[Method::Abm], 4).unwrap();
        for row in &a {
            let other = b.iter().find(|r| r.k == row.k).unwrap();
            assert_eq!(row.result.as_ref().unwrap(), other.result.as_ref().unwrap());
        }
    }
}
