use super::config::{ExperimentConfig, KRule, KSpec, SampleNesting};
use crate::distributions::{DgpSpec, Family};
use crate::error::{Error, Result};
use crate::estimators::Method;

pub const FIG1_N_GRID: [usize; 5] = [500, 1000, 2000, 5000, 10_000];
pub const FIG1_REPS: usize = 200;
pub const PATH_N: usize = 10_000;

/// `k = j·n/100` for `j = 1..=25`: block sizes from 100 down to 4.
pub fn default_k_grid(n: usize) -> Vec<usize> {
    (1..=25).map(|j| j * n / 100).filter(|&k| k >= 1).collect()
}

/// k grid for the single-sample path: every 10 from 10 to `n/10`.
pub fn path_k_grid(n: usize) -> Vec<usize> {
    (1..=n / 100).map(|j| 10 * j).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathConfig {
    pub dgp: DgpSpec,
    pub n: usize,
    pub k_grid: Vec<usize>,
    pub methods: Vec<Method>,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    MonteCarlo(ExperimentConfig),
    SamplePath(PathConfig),
}

impl Experiment {
    pub fn base_seed(&self) -> u64 {
        match self {
            Experiment::MonteCarlo(c) => c.base_seed,
            Experiment::SamplePath(p) => p.base_seed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            Experiment::MonteCarlo(c) => c.base_seed = seed,
            Experiment::SamplePath(p) => p.base_seed = seed,
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub experiment: Experiment,
}

fn mse_config(name: &str, family: Family, n: usize) -> ExperimentConfig {
    let dgp = DgpSpec::new(family).expect("registry families are valid");
    let mut config = ExperimentConfig::new(dgp, vec![n], KSpec::Grid(default_k_grid(n)));
    config.name = Some(name.to_string());
    config
}

fn fig1(name: &str, rule: KRule) -> ExperimentConfig {
    let dgp = DgpSpec::new(Family::HalfStudentT { nu: 2.0 }).expect("valid");
    let mut config = ExperimentConfig::new(dgp, FIG1_N_GRID.to_vec(), KSpec::Rule(rule));
    config.name = Some(name.to_string());
    config.methods = vec![Method::Abm];
    config.reps = FIG1_REPS;
    config.nesting = SampleNesting::Prefix;
    config
}

/// All canned experiments, in a fixed order.
pub fn experiment_registry() -> Vec<RegistryEntry> {
    let mc =
        |name: &'static str, description: &'static str, config: ExperimentConfig| RegistryEntry {
            name,
            description,
            experiment: Experiment::MonteCarlo(config),
        };
    let t = |nu| Family::HalfStudentT { nu };
    let garch = |lambda1, lambda2| Family::Garch11 {
        lambda0: 0.5,
        lambda1,
        lambda2,
        nu: 6.0,
    };

    let mut entries = vec![
        mc(
            "fig1-implied-variance-l13",
            "implied variance of ABM, half-t(2), k = n^1/3",
            fig1("fig1-implied-variance-l13", KRule::CubeRoot),
        ),
        mc(
            "fig1-implied-variance-l12",
            "implied variance of ABM, half-t(2), k = n^1/2",
            fig1("fig1-implied-variance-l12", KRule::SquareRoot),
        ),
        mc(
            "fig1-implied-variance-l23",
            "implied variance of ABM, half-t(2), k = n^2/3",
            fig1("fig1-implied-variance-l23", KRule::TwoThirds),
        ),
        RegistryEntry {
            name: "fig2-single-sample",
            description: "ABM and disjoint BM paths over k on one half-t(2) sample, n = 10000",
            experiment: Experiment::SamplePath(PathConfig {
                dgp: DgpSpec::new(t(2.0)).expect("valid"),
                n: PATH_N,
                k_grid: path_k_grid(PATH_N),
                methods: vec![Method::Abm, Method::DisjointBm],
                base_seed: super::config::DEFAULT_SEED,
            }),
        },
    ];
    let rest: [(&'static str, &'static str, Family, usize); 12] = [
        (
            "fig3a-student-t2",
            "MSE/bias/variance over k, half-t(2), n = 1000",
            t(2.0),
            1000,
        ),
        (
            "fig3b-student-t3",
            "MSE/bias/variance over k, half-t(3), n = 1000",
            t(3.0),
            1000,
        ),
        (
            "fig3c-student-t4",
            "MSE/bias/variance over k, half-t(4), n = 1000",
            t(4.0),
            1000,
        ),
        (
            "fig3d-student-t5",
            "MSE/bias/variance over k, half-t(5), n = 1000",
            t(5.0),
            1000,
        ),
        (
            "fig6a-frechet",
            "Frechet(1/2), n = 1000",
            Family::Frechet { gamma: 0.5 },
            1000,
        ),
        (
            "fig6b-pareto",
            "Pareto(1/2), n = 1000",
            Family::Pareto { gamma: 0.5 },
            1000,
        ),
        (
            "fig7-ar1-phi01",
            "AR(1), phi = 0.1, t(2) innovations, n = 2000",
            Family::Ar1 { phi: 0.1, nu: 2.0 },
            2000,
        ),
        (
            "fig7-ar1-phi05",
            "AR(1), phi = 0.5, t(2) innovations, n = 2000",
            Family::Ar1 { phi: 0.5, nu: 2.0 },
            2000,
        ),
        (
            "fig7-ar1-phi09",
            "AR(1), phi = 0.9, t(2) innovations, n = 2000",
            Family::Ar1 { phi: 0.9, nu: 2.0 },
            2000,
        ),
        (
            "fig8-garch-heavy",
            "GARCH(1,1) (0.5, 0.11, 0.88), t(6), n = 2000",
            garch(0.11, 0.88),
            2000,
        ),
        (
            "fig8-garch-light",
            "GARCH(1,1) (0.5, 0.08, 0.91), t(6), n = 2000",
            garch(0.08, 0.91),
            2000,
        ),
        (
            "fig9-scalehet-r2",
            "scale heterogeneity r = 2, t(2), n = 1000",
            Family::ScaleHet { r: 2.0, nu: 2.0 },
            1000,
        ),
    ];
    for (name, description, family, n) in rest {
        entries.push(mc(name, description, mse_config(name, family, n)));
    }
    entries.push(mc(
        "fig9-scalehet-r5",
        "scale heterogeneity r = 5, t(2), n = 1000",
        mse_config(
            "fig9-scalehet-r5",
            Family::ScaleHet { r: 5.0, nu: 2.0 },
            1000,
        ),
    ));
    entries
}

pub fn registry_names() -> Vec<&'static str> {
    experiment_registry().iter().map(|e| e.name).collect()
}

pub fn lookup(name: &str) -> Result<RegistryEntry> {
    experiment_registry()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            Error::Config(format!(
                "unknown experiment {name:?}; known: {}",
                registry_names().join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = registry_names();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn every_entry_validates() {
        for entry in experiment_registry() {
            if let Experiment::MonteCarlo(c) = &entry.experiment {
                c.validate()
                    .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            }
        }
    }

    #[test]
    fn frozen_parameters() {
        let Experiment::MonteCarlo(c) = lookup("fig3a-student-t2").unwrap().experiment else {
            panic!()
        };
        assert_eq!(c.dgp.family, Family::HalfStudentT { nu: 2.0 });
        assert_eq!((c.n_grid.clone(), c.reps), (vec![1000], 100));

        let Experiment::MonteCarlo(c) = lookup("fig7-ar1-phi09").unwrap().experiment else {
            panic!()
        };
        assert_eq!(c.n_grid, vec![2000]);
        assert_eq!(c.dgp.burn_in, 100);
        assert_eq!(c.c, 1e-3);

        let Experiment::MonteCarlo(c) = lookup("fig8-garch-heavy").unwrap().experiment else {
            panic!()
        };
        let Family::Garch11 { lambda0, .. } = c.dgp.family else {
            panic!()
        };
        assert_eq!(lambda0, 0.5);
        assert!((c.dgp.true_gamma - 0.35).abs() < 0.01);

        assert!(lookup("nope").is_err());
    }

    #[test]
    fn default_grid_keeps_blocks_of_at_least_four() {
        let ks = default_k_grid(1000);
        assert_eq!(ks.first(), Some(&10));
        assert_eq!(ks.last(), Some(&250));
    }
}
