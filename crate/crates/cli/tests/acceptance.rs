//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use abm_evi::asymptotics::sigma_matrix;
use abm_evi::distributions::{kesten_gamma, stream_rng, DgpSpec, Family};
use abm_evi::estimators::{abm_estimate, fit_frechet_wml, psi, sliding_bm_estimate, DEFAULT_TOL};
use abm_evi::io::run_to_tables;
use abm_evi::simulation::{
    experiment_registry, implied_asymptotic_variance_experiment, lookup, run_experiment,
    Experiment, ExperimentConfig, KRule, KSpec, SampleNesting, DEFAULT_SEED,
};
use abm_evi::{abm_weights, disjoint_bm_estimate, weight_approximation_error, Method, Parallelism};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::LN_2;
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_abm-evi"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn matrix(v: &Value) -> Result<[[f64; 3]; 3], String> {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = v[i][j].as_f64().ok_or("matrix entry missing")?;
        }
    }
    Ok(m)
}

fn c1_variance_constant() -> Check {
    let v = cli_json(&["verify", "--what", "variance-constant"])?;
    let values = v["values"].as_array().ok_or("no values")?;
    let mut seen = Vec::new();
    for item in values {
        let (g, a) = (
            item["gamma"].as_f64().unwrap_or(f64::NAN),
            item["a"].as_f64().unwrap_or(f64::NAN),
        );
        ensure((a - 0.393).abs() <= 0.001, format!("a({g}) = {a}"))?;
        seen.push(g);
    }
    ensure(seen == [0.5, 1.0, 2.0], format!("gamma grid {seen:?}"))?;
    Ok(format!(
        "a = {:.6} at gamma 0.5, 1, 2",
        values[0]["a"].as_f64().unwrap_or(f64::NAN)
    ))
}

fn c2_covariance_mc() -> Check {
    let v = cli_json(&[
        "verify",
        "--what",
        "covariance-mc",
        "--gamma",
        "1",
        "--reps",
        "100000",
    ])?;
    let est = matrix(&v["estimate"])?;
    let se = matrix(&v["std_error"])?;
    let closed = sigma_matrix(1.0).map_err(|e| e.to_string())?;
    let printed = [
        [0.70, -0.56, 0.62],
        [-0.56, 0.50, -0.69],
        [0.62, -0.69, 1.38],
    ];
    let mut worst_z: f64 = 0.0;
    let mut worst_printed: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst_printed = worst_printed.max((est[i][j] - printed[i][j]).abs());
            worst_z = worst_z.max((est[i][j] - closed[i][j]).abs() / se[i][j]);
        }
    }
    ensure(
        worst_printed <= 0.02,
        format!("max |MC - printed| = {worst_printed:.4}"),
    )?;
    ensure(
        worst_z <= 4.0,
        format!("max z vs closed form = {worst_z:.2}"),
    )?;
    Ok(format!(
        "max |MC - printed| = {worst_printed:.4}, max z = {worst_z:.2}"
    ))
}

fn c3_sigma_spot_values() -> Check {
    let s = sigma_matrix(1.0).map_err(|e| e.to_string())?;
    ensure(s[1][1] == 0.5, format!("S22 = {}", s[1][1]))?;
    ensure(
        (s[2][2] - 2.0 * LN_2).abs() <= 1e-15,
        format!("S33 = {}", s[2][2]),
    )?;
    ensure(
        (s[0][0] - 0.706).abs() <= 0.001,
        format!("S11 = {}", s[0][0]),
    )?;
    Ok(format!(
        "S11 = {:.6}, S22 = {}, S33 = {:.9}",
        s[0][0], s[1][1], s[2][2]
    ))
}

fn ln_choose(a: usize, b: usize) -> f64 {
    ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
}

fn c4_weight_oracle() -> Check {
    let mut rng = stream_rng(4, 0);
    let mut worst_rel: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=2000usize);
        let m = rng.random_range(2..=n);
        let w = abm_weights(n, m).map_err(|e| e.to_string())?;
        worst_sum = worst_sum.max((w.values.iter().sum::<f64>() - 1.0).abs());
        let base = ln_choose(n, m);
        for (j, &p) in w.values.iter().enumerate() {
            let q = (ln_choose(n - j - 1, m - 1) - base).exp();
            if q > 1e-300 && p > 0.0 {
                worst_rel = worst_rel.max(((p - q) / q).abs());
            }
        }
    }
    ensure(
        worst_rel <= 1e-10,
        format!("max relative error {worst_rel:e}"),
    )?;
    ensure(worst_sum <= 1e-12, format!("max |sum - 1| {worst_sum:e}"))?;
    let small = abm_weights(4, 2).map_err(|e| e.to_string())?;
    for (a, b) in small.values.iter().zip([0.5, 1.0 / 3.0, 1.0 / 6.0]) {
        ensure(
            (a - b).abs() <= f64::EPSILON * b,
            format!("(4,2): {a} vs {b}"),
        )?;
    }
    Ok(format!(
        "max rel err {worst_rel:.1e}, max |sum-1| {worst_sum:.1e}"
    ))
}

fn c5_lemma_decay() -> Check {
    let errs: Vec<f64> = [1_000usize, 10_000, 100_000]
        .iter()
        .map(|&n| weight_approximation_error(n, (n as f64).sqrt().round() as usize, 1.0))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(errs[0] > errs[1] && errs[1] > errs[2], format!("{errs:?}"))?;
    Ok(format!(
        "errors {:.5} > {:.5} > {:.5}",
        errs[0], errs[1], errs[2]
    ))
}

fn c6_implied_variance() -> Check {
    let rows = implied_asymptotic_variance_experiment(
        KRule::CubeRoot,
        &[2000, 5000, 10_000],
        200,
        DEFAULT_SEED,
        SampleNesting::Prefix,
        Parallelism::from_env(),
    )
    .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for r in &rows {
        let v = r
            .implied_asym_var
            .ok_or(format!("n = {}: invalid cell", r.n))?;
        ensure((0.25..=0.55).contains(&v), format!("n = {}: {v:.4}", r.n))?;
        parts.push(format!("n={} k={}: {v:.3}", r.n, r.k));
    }
    Ok(parts.join(", "))
}

fn c7_mse_comparison() -> Check {
    let Experiment::MonteCarlo(config) = lookup("fig3a-student-t2")
        .map_err(|e| e.to_string())?
        .experiment
    else {
        return Err("fig3a-student-t2 is not a Monte Carlo experiment".into());
    };
    let s = run_experiment(&config, Parallelism::from_env()).map_err(|e| e.to_string())?;
    let (ka, abm) = s.min_mse(Method::Abm, 1000).ok_or("no ABM cells")?;
    let (kb, bm) = s.min_mse(Method::DisjointBm, 1000).ok_or("no BM cells")?;
    ensure(
        abm <= bm,
        format!("ABM {abm:.5} (k={ka}) > BM {bm:.5} (k={kb})"),
    )?;
    Ok(format!(
        "min MSE ABM {abm:.5} (k={ka}) <= BM {bm:.5} (k={kb})"
    ))
}

fn c8_kesten() -> Check {
    let heavy = kesten_gamma(0.11, 0.88, 6.0).map_err(|e| e.to_string())?;
    let light = kesten_gamma(0.08, 0.91, 6.0).map_err(|e| e.to_string())?;
    ensure((0.34..=0.36).contains(&heavy), format!("heavy {heavy}"))?;
    ensure((0.28..=0.30).contains(&light), format!("light {light}"))?;
    Ok(format!("gamma {heavy:.5} and {light:.5}"))
}

fn brute_force_root(x: &[f64], w: &[f64]) -> Option<f64> {
    let f = |g: f64| psi(g, x, w).unwrap_or(f64::NAN);
    let steps = 100_000;
    let mut prev = (1e-3, f(1e-3));
    for i in 1..=steps {
        let g = 1e-3 * 1e4f64.powf(i as f64 / steps as f64);
        let v = f(g);
        if prev.1 < 0.0 && v >= 0.0 {
            let (mut lo, mut hi) = (prev.0, g);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = (g, v);
    }
    None
}

fn c9_estimator_properties() -> Check {
    let c = 1e-3;
    let dgp = DgpSpec::new(Family::HalfStudentT { nu: 2.0 }).map_err(|e| e.to_string())?;
    let mut x = dgp
        .sample(500, &mut stream_rng(9, 0))
        .map_err(|e| e.to_string())?;
    let base = abm_estimate(&x, 10, c, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let mut rng = stream_rng(9, 1);
    for i in 0..20 {
        x.shuffle(&mut rng);
        let again = abm_estimate(&x, 10, c, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(
            again == base,
            format!("permutation {i} changed the ABM fit"),
        )?;
    }

    let pareto = DgpSpec::new(Family::Pareto { gamma: 0.5 }).map_err(|e| e.to_string())?;
    let y = pareto
        .sample(400, &mut stream_rng(9, 2))
        .map_err(|e| e.to_string())?;
    let ys: Vec<f64> = y.iter().map(|v| 7.5 * v).collect();
    type Est = fn(&[f64], usize, f64, f64) -> abm_evi::Result<abm_evi::EstimateResult>;
    let ests: [Est; 3] = [abm_estimate, disjoint_bm_estimate, sliding_bm_estimate];
    for est in ests {
        let a = est(&y, 8, c, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let b = est(&ys, 8, c, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(
            (a.gamma_hat - b.gamma_hat).abs() < 1e-8,
            "gamma not scale invariant",
        )?;
        let rel = (b.sigma_hat.unwrap_or(0.0) / (7.5 * a.sigma_hat.unwrap_or(1.0)) - 1.0).abs();
        ensure(rel < 1e-8, format!("sigma not scale equivariant ({rel:e})"))?;
    }

    let mut worst_psi: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let mut rng = stream_rng(9, 3);
    for trial in 0..50 {
        let n = rng.random_range(3..=50usize);
        let xs: Vec<f64> = (0..n)
            .map(|_| 0.1 + 10.0 * rng.random::<f64>().powi(3))
            .collect();
        let m = rng.random_range(2..=n.div_ceil(2));
        let w = abm_weights(n, m).map_err(|e| e.to_string())?;
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let top = &sorted[..w.len()];
        let fit = match fit_frechet_wml(top, &w.values, DEFAULT_TOL, None) {
            Ok(f) => f,
            Err(_) => continue,
        };
        worst_psi = worst_psi.max(
            psi(fit.gamma, top, &w.values)
                .map_err(|e| e.to_string())?
                .abs(),
        );
        let oracle = brute_force_root(top, &w.values)
            .ok_or(format!("trial {trial}: oracle found no root"))?;
        worst_oracle = worst_oracle.max((fit.gamma - oracle).abs());
    }
    ensure(worst_psi <= 1e-10, format!("max |psi| {worst_psi:e}"))?;
    ensure(
        worst_oracle <= 1e-6,
        format!("max |gamma - oracle| {worst_oracle:e}"),
    )?;
    Ok(format!(
        "20 permutations bit-exact, max |psi| {worst_psi:.1e}, max oracle gap {worst_oracle:.1e}"
    ))
}

fn c10_hill() -> Check {
    let dgp = DgpSpec::new(Family::Pareto { gamma: 0.5 }).map_err(|e| e.to_string())?;
    let mut config = ExperimentConfig::new(dgp, vec![100_000], KSpec::Grid(vec![1000]));
    config.methods = vec![Method::Hill];
    config.reps = 100;
    let s = run_experiment(&config, Parallelism::from_env()).map_err(|e| e.to_string())?;
    let v = s.rows[0].implied_asym_var.ok_or("invalid cell")?;
    ensure(
        (0.8..=1.25).contains(&v),
        format!("k Var / gamma^2 = {v:.4}"),
    )?;
    Ok(format!("k Var / gamma^2 = {v:.4}"))
}

fn c11_determinism() -> Check {
    let mut count = 0;
    for entry in experiment_registry() {
        let a = run_to_tables(Some(entry.name), &entry.experiment, Parallelism::Sequential)
            .map_err(|e| e.to_string())?;
        let b = run_to_tables(Some(entry.name), &entry.experiment, Parallelism::threads(4))
            .map_err(|e| e.to_string())?;
        ensure(
            a.manifest.content_hash == b.manifest.content_hash,
            format!("{}: hashes differ", entry.name),
        )?;
        count += 1;
    }
    Ok(format!(
        "{count} registry experiments, 1 vs 4 threads, identical hashes"
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "variance constant",
            limit: Some(Duration::from_secs(1)),
            run: c1_variance_constant,
        },
        Criterion {
            id: 2,
            name: "covariance oracle",
            limit: Some(Duration::from_secs(5)),
            run: c2_covariance_mc,
        },
        Criterion {
            id: 3,
            name: "closed-form spot values",
            limit: None,
            run: c3_sigma_spot_values,
        },
        Criterion {
            id: 4,
            name: "weight oracle",
            limit: None,
            run: c4_weight_oracle,
        },
        Criterion {
            id: 5,
            name: "weight approximation decay",
            limit: Some(Duration::from_secs(10)),
            run: c5_lemma_decay,
        },
        Criterion {
            id: 6,
            name: "implied asymptotic variance",
            limit: Some(Duration::from_secs(300)),
            run: c6_implied_variance,
        },
        Criterion {
            id: 7,
            name: "ABM vs disjoint BM at optimal k",
            limit: Some(Duration::from_secs(180)),
            run: c7_mse_comparison,
        },
        Criterion {
            id: 8,
            name: "Kesten solver",
            limit: Some(Duration::from_secs(1)),
            run: c8_kesten,
        },
        Criterion {
            id: 9,
            name: "estimator properties",
            limit: None,
            run: c9_estimator_properties,
        },
        Criterion {
            id: 10,
            name: "Hill sanity",
            limit: Some(Duration::from_secs(60)),
            run: c10_hill,
        },
        Criterion {
            id: 11,
            name: "determinism",
            limit: None,
            run: c11_determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {}: {detail} ({elapsed:.2?})", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {}: {detail} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
