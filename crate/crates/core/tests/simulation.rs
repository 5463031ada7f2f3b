use abm_evi::distributions::{DgpSpec, Family};
use abm_evi::io::run_to_tables;
use abm_evi::simulation::{
    implied_asymptotic_variance_experiment, lookup, path_k_grid, path_roughness, run_experiment,
    single_sample_path, Experiment, ExperimentConfig, KRule, KSpec, SampleNesting, DEFAULT_SEED,
};
use abm_evi::{abm_estimate, Method, Parallelism};

fn half_t2() -> DgpSpec {
    DgpSpec::new(Family::HalfStudentT { nu: 2.0 }).unwrap()
}

#[test]
fn implied_variance_band_two_seeds() {
    for seed in [DEFAULT_SEED, 7] {
        let rows = implied_asymptotic_variance_experiment(
            KRule::CubeRoot,
            &[10_000],
            200,
            seed,
            SampleNesting::Prefix,
            Parallelism::default(),
        )
        .unwrap();
        let v = rows[0].implied_asym_var.unwrap();
        assert!((0.25..=0.55).contains(&v), "seed {seed}: {v}");
    }
}

#[test]
fn fresh_nesting_differs_but_stays_in_band() {
    let run = |nesting| {
        implied_asymptotic_variance_experiment(
            KRule::CubeRoot,
            &[2000, 5000],
            200,
            3,
            nesting,
            Parallelism::default(),
        )
        .unwrap()
    };
    let (p, f) = (run(SampleNesting::Prefix), run(SampleNesting::Fresh));
    assert_ne!(p, f);
    for r in p.iter().chain(&f) {
        let v = r.implied_asym_var.unwrap();
        assert!((0.25..=0.55).contains(&v), "{r:?}");
    }
}

// Medians of |γ̂(k_{j+1}) - γ̂(k_j)| on the canonical sample, recorded once.
const ABM_ROUGHNESS: f64 = 1.7085050436727034e-4;
const BM_ROUGHNESS: f64 = 7.848217776983413e-4;

#[test]
fn single_sample_path_smoothness_fixture() {
    let path = single_sample_path(
        &half_t2(),
        10_000,
        &path_k_grid(10_000),
        &[Method::Abm, Method::DisjointBm],
        DEFAULT_SEED,
    )
    .unwrap();
    let abm = path_roughness(&path, Method::Abm).unwrap();
    let bm = path_roughness(&path, Method::DisjointBm).unwrap();
    assert!(abm < bm);
    assert!((abm / ABM_ROUGHNESS - 1.0).abs() < 1e-9, "{abm}");
    assert!((bm / BM_ROUGHNESS - 1.0).abs() < 1e-9, "{bm}");
}

#[test]
fn singleton_path_equals_direct_estimate() {
    let path = single_sample_path(&half_t2(), 1000, &[40], &[Method::Abm], 5).unwrap();
    let raw = half_t2()
        .sample(1000, &mut abm_evi::distributions::stream_rng(5, 0))
        .unwrap();
    let direct = abm_estimate(&raw, 25, 1e-3, 1e-10).unwrap();
    assert_eq!(path.len(), 1);
    assert_eq!(path[0].result.as_ref().unwrap(), &direct);
}

#[test]
fn abm_beats_disjoint_bm_at_optimal_k() {
    let Experiment::MonteCarlo(config) = lookup("fig3a-student-t2").unwrap().experiment else {
        panic!()
    };
    let s = run_experiment(&config, Parallelism::default()).unwrap();
    let (_, abm) = s.min_mse(Method::Abm, 1000).unwrap();
    let (_, bm) = s.min_mse(Method::DisjointBm, 1000).unwrap();
    assert!(abm <= bm, "{abm} vs {bm}");
}

#[test]
fn pareto_abm_is_nearly_unbiased() {
    let dgp = DgpSpec::new(Family::Pareto { gamma: 0.5 }).unwrap();
    let mut c = ExperimentConfig::new(dgp, vec![2000], KSpec::Grid(vec![40]));
    c.methods = vec![Method::Abm];
    let s = run_experiment(&c, Parallelism::default()).unwrap();
    let mean = s.rows[0].mean.unwrap();
    assert!((0.45..=0.55).contains(&mean), "{mean}");
}

#[test]
fn registry_runs_are_thread_count_free() {
    for name in [
        "fig6b-pareto",
        "fig8-garch-light",
        "fig9-scalehet-r5",
        "fig2-single-sample",
    ] {
        let mut e = lookup(name).unwrap().experiment;
        if let Experiment::MonteCarlo(c) = &mut e {
            c.reps = 20;
        }
        let a = run_to_tables(Some(name), &e, Parallelism::Sequential).unwrap();
        let b = run_to_tables(Some(name), &e, Parallelism::threads(3)).unwrap();
        assert_eq!(a.manifest.content_hash, b.manifest.content_hash, "{name}");
        let c =
            run_to_tables(Some(name), &e.clone().with_seed(1), Parallelism::threads(3)).unwrap();
        assert_ne!(a.manifest.content_hash, c.manifest.content_hash, "{name}");
    }
}

#[test]
fn garch_cells_use_kesten_gamma() {
    let Experiment::MonteCarlo(mut c) = lookup("fig8-garch-heavy").unwrap().experiment else {
        panic!()
    };
    c.reps = 3;
    let s = run_experiment(&c, Parallelism::default()).unwrap();
    assert!((s.true_gamma - 0.349).abs() < 0.005);
    assert_ne!(s.true_gamma, 1.0 / 6.0);
}
