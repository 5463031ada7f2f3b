use abm_evi::asymptotics::{self, AsymptoticMatrices};
use abm_evi::distributions::stream_rng;
use abm_evi::estimators::{self, k_sweep, DEFAULT_TOL, DEFAULT_TRUNCATION};
use abm_evi::io::{self, content_hash, tables, Format};
use abm_evi::simulation::{self, Experiment, SampleNesting, DEFAULT_SEED};
use abm_evi::{abm_weights, Error, Method, Parallelism};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "abm-evi",
    version,
    about = "All-block-maxima estimation of the extreme value index"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ABM weights for sample size n and block size m.
    Weights {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Estimate the extreme value index of a file of observations.
    Estimate(EstimateArgs),
    /// Run a registry or config experiment, or dump a raw series.
    Simulate(SimulateArgs),
    /// Check the asymptotic constants; prints JSON.
    Verify(VerifyArgs),
    /// List the registry experiments.
    List,
}

#[derive(Args)]
struct EstimateArgs {
    /// One number per line; `#` lines are comments.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    method: Method,
    /// Block size.
    #[arg(long, conflicts_with_all = ["k", "k_grid"])]
    m: Option<usize>,
    /// Number of blocks (`m = floor(n/k)`), or order statistics for Hill.
    #[arg(long, conflicts_with = "k_grid")]
    k: Option<usize>,
    /// Sweep `a:b:step`, inclusive.
    #[arg(long)]
    k_grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    c: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    /// Registry experiment name (see `list`).
    #[arg(long, conflicts_with_all = ["config", "dgp"])]
    experiment: Option<String>,
    /// JSON experiment config.
    #[arg(long, conflicts_with = "dgp")]
    config: Option<PathBuf>,
    /// JSON process description; with --n writes one raw series to --out.
    #[arg(long, requires = "n")]
    dgp: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides ABM_EVI_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    nesting: Option<NestingArg>,
    /// Output directory (experiments) or file (raw series).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum NestingArg {
    Prefix,
    Fresh,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Matrices,
    CovarianceMc,
    VarianceConstant,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    what: What,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Validation(String),
    Fit(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Fit(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Fit(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NoUniqueMaximizer | Error::BracketingFailed { .. } => Failure::Fit(msg),
            Error::Io(_) | Error::Csv(_) => Failure::Io(msg),
            _ => Failure::Validation(msg),
        }
    }
}

type CliResult = Result<(), Failure>;

fn io_err(what: &str, e: std::io::Error) -> Failure {
    Failure::Io(format!("{what}: {e}"))
}

fn emit(bytes: &[u8], hash: &str) -> CliResult {
    use std::io::Write;
    std::io::stdout()
        .write_all(bytes)
        .map_err(|e| io_err("stdout", e))?;
    eprintln!("content-hash: {hash}");
    Ok(())
}

fn emit_json(value: &Value) -> CliResult {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    bytes.push(b'\n');
    let hash = content_hash(&bytes);
    emit(&bytes, &hash)
}

fn parallelism(threads: Option<usize>) -> Parallelism {
    match threads {
        Some(0) | None => Parallelism::from_env(),
        Some(t) => Parallelism::threads(t),
    }
}

fn parse_k_grid(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || {
        Failure::Validation(format!(
            "--k-grid {spec:?}: expected a:b:step with 1 <= a <= b, step >= 1"
        ))
    };
    let parts: Vec<usize> = spec
        .split(':')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let (a, b, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, s] => (a, b, s),
        _ => return Err(bad()),
    };
    if a == 0 || a > b || step == 0 {
        return Err(bad());
    }
    Ok((a..=b).step_by(step).collect())
}

fn weights(n: usize, m: usize, format: Format) -> CliResult {
    let w = abm_weights(n, m)?;
    let table = tables::weights_table(&w);
    let bytes = table.render(format, None)?;
    emit(&bytes, &table.content_hash()?)
}

fn estimate(args: EstimateArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| io_err(&args.input.display().to_string(), e))?;
    let raw = io::parse_observations(&text)?;
    let method = args.method;
    let name = method.as_str();
    if let Some(spec) = &args.k_grid {
        let grid = parse_k_grid(spec)?;
        let rows = k_sweep(&raw, method, &grid, args.c, args.tol);
        let table = tables::sweep_table(name, &rows);
        emit(&table.render(args.format, None)?, &table.content_hash()?)?;
        if rows.iter().all(|r| r.result.is_err()) {
            return Err(Failure::Fit("every entry of the k grid failed".into()));
        }
        return Ok(());
    }
    let (k, result) = match (args.m, args.k) {
        (Some(m), None) => {
            let r = match method {
                Method::Abm => estimators::abm_estimate(&raw, m, args.c, args.tol),
                Method::DisjointBm => estimators::disjoint_bm_estimate(&raw, m, args.c, args.tol),
                Method::SlidingBm => estimators::sliding_bm_estimate(&raw, m, args.c, args.tol),
                Method::Hill => {
                    return Err(Failure::Validation("hill takes --k, not --m".into()));
                }
            };
            (None, r)
        }
        (None, Some(k)) => (
            Some(k),
            estimators::estimate_at_k(&raw, method, k, args.c, args.tol),
        ),
        _ => {
            return Err(Failure::Validation(
                "give one of --m, --k or --k-grid".into(),
            ))
        }
    };
    let table = tables::estimate_table(name, k, &result);
    match result {
        Ok(_) => emit(&table.render(args.format, None)?, &table.content_hash()?),
        Err(e) => Err(e.into()),
    }
}

fn simulate(args: SimulateArgs) -> CliResult {
    if let Some(dgp_path) = &args.dgp {
        let text = std::fs::read_to_string(dgp_path)
            .map_err(|e| io_err(&dgp_path.display().to_string(), e))?;
        let dgp = io::parse_dgp(&text)?;
        let n = args.n.unwrap_or_default();
        let xs = dgp.sample(n, &mut stream_rng(args.seed.unwrap_or(DEFAULT_SEED), 0))?;
        let body = io::format_observations(&xs);
        std::fs::write(&args.out, &body).map_err(|e| io_err(&args.out.display().to_string(), e))?;
        eprintln!("content-hash: {}", content_hash(body.as_bytes()));
        return Ok(());
    }
    let (name, mut experiment) = match (&args.experiment, &args.config) {
        (Some(name), None) => (Some(name.clone()), simulation::lookup(name)?.experiment),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| io_err(&path.display().to_string(), e))?;
            (None, io::parse_config_str(&text)?)
        }
        _ => {
            return Err(Failure::Validation(
                "give --experiment, --config, or --dgp with --n".into(),
            ))
        }
    };
    if let Some(seed) = args.seed {
        experiment = experiment.with_seed(seed);
    }
    match &mut experiment {
        Experiment::MonteCarlo(c) => {
            if let Some(r) = args.reps {
                c.reps = r;
            }
            if let Some(n) = args.nesting {
                c.nesting = match n {
                    NestingArg::Prefix => SampleNesting::Prefix,
                    NestingArg::Fresh => SampleNesting::Fresh,
                };
            }
            c.validate()?;
        }
        Experiment::SamplePath(p) => {
            if args.reps.is_some() || args.nesting.is_some() {
                return Err(Failure::Validation(
                    "--reps and --nesting do not apply to path experiments".into(),
                ));
            }
            if let Some(n) = args.n {
                p.n = n;
            }
        }
    }
    let out = io::run_to_tables(name.as_deref(), &experiment, parallelism(args.threads))?;
    out.write_to(&args.out)?;
    for (file, table) in &out.tables {
        let invalid = table
            .column("valid")
            .map(|j| {
                table
                    .rows()
                    .iter()
                    .filter(|r| r[j] == io::Cell::Bool(false))
                    .count()
            })
            .unwrap_or(0);
        if invalid > 0 {
            eprintln!("warning: {file}: {invalid} cell(s) flagged invalid");
        }
    }
    eprintln!("content-hash: {}", out.manifest.content_hash);
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult {
    let value = match args.what {
        What::Matrices => {
            let m = AsymptoticMatrices::new(args.gamma.unwrap_or(1.0))?;
            json!({ "what": "matrices", "result": m })
        }
        What::VarianceConstant => {
            let grid = match args.gamma {
                Some(g) => vec![g],
                None => vec![0.5, 1.0, 2.0],
            };
            let values = grid
                .iter()
                .map(|&g| Ok(json!({ "gamma": g, "a": asymptotics::abm_variance_constant(g)? })))
                .collect::<Result<Vec<_>, Error>>()?;
            json!({
                "what": "variance-constant",
                "values": values,
                "competitors": {
                    "sliding_bm": asymptotics::SLIDING_BM_VARIANCE,
                    "disjoint_bm": asymptotics::DISJOINT_BM_VARIANCE,
                    "hill": asymptotics::HILL_VARIANCE,
                },
            })
        }
        What::CovarianceMc => {
            let gamma = args.gamma.unwrap_or(1.0);
            let est = asymptotics::covariance_mc_check(
                gamma,
                args.reps,
                args.seed,
                parallelism(args.threads),
            )?;
            let closed = asymptotics::sigma_matrix(gamma)?;
            json!({
                "what": "covariance-mc",
                "gamma": gamma,
                "reps": est.reps,
                "seed": est.seed,
                "estimate": est.estimate,
                "std_error": est.std_error,
                "closed_form": closed,
                "max_z_score": est.max_z_score(&closed),
            })
        }
    };
    emit_json(&value)
}

fn list() -> CliResult {
    let mut s = String::new();
    for e in simulation::experiment_registry() {
        s.push_str(&format!("{}\t{}\n", e.name, e.description));
    }
    emit(s.as_bytes(), &content_hash(s.as_bytes()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Weights { n, m, format } => weights(n, m, format),
        Command::Estimate(args) => estimate(args),
        Command::Simulate(args) => simulate(args),
        Command::Verify(args) => verify(args),
        Command::List => list(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
