//! JSON experiment configs.
//!
//! A config is one flat object. The process is named by `"dgp"` with its
//! parameters alongside:
//!
//! ```json
//! {"dgp": "garch11", "lambda0": 0.5, "lambda1": 0.11, "lambda2": 0.88, "nu": 6,
//!  "n": 2000, "k_grid": [20, 40, 60], "methods": ["abm", "bm"], "reps": 100}
//! ```
//!
//! Other keys: `name`, `kind` (`"monte_carlo"` or `"path"`), `n_grid`,
//! `k_rule` (`"n^1/3"`, `"n^1/2"`, `"n^2/3"`), `c`, `base_seed`, `nesting`
//! (`"prefix"` or `"fresh"`), `burn_in`, `tol`. Missing keys take the harness
//! defaults; unknown keys are rejected.

use crate::distributions::{DgpSpec, Family};
use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::simulation::config::{ExperimentConfig, KRule, KSpec, SampleNesting};
use crate::simulation::registry::{self, default_k_grid, path_k_grid, Experiment, PathConfig};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};
use std::path::Path;

const COMMON_KEYS: &[&str] = &[
    "name",
    "kind",
    "dgp",
    "n",
    "n_grid",
    "k_grid",
    "k_rule",
    "methods",
    "reps",
    "c",
    "base_seed",
    "nesting",
    "burn_in",
    "tol",
];
const PATH_ONLY_INVALID: &[&str] = &["n_grid", "k_rule", "reps", "c", "nesting", "tol"];

fn config_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn take<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str) -> Result<Option<T>> {
    obj.get(key)
        .map(|v| serde_json::from_value(v.clone()).map_err(|e| config_err(key, e)))
        .transpose()
}

fn as_object(value: &Value) -> Result<&Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))
}

/// Process description from a flat object; keys other than the family's
/// parameters and `burn_in` are ignored here.
fn dgp_from_object(obj: &Map<String, Value>) -> Result<DgpSpec> {
    let tag = obj
        .get("dgp")
        .and_then(Value::as_str)
        .ok_or_else(|| config_err("dgp", "missing or not a string"))?;
    let keys = Family::parameter_keys(tag).ok_or_else(|| {
        config_err(
            "dgp",
            format!(
                "unknown process {tag:?}; expected one of pareto, frechet, half_student_t, \
                 student_t, ar1, garch11, scale_het"
            ),
        )
    })?;
    let mut fam = Map::new();
    fam.insert("dgp".into(), Value::from(tag));
    for &k in keys {
        match obj.get(k) {
            Some(v) => {
                fam.insert(k.into(), v.clone());
            }
            None => return Err(config_err(k, format!("required by dgp {tag:?}"))),
        }
    }
    let family: Family =
        serde_json::from_value(Value::Object(fam)).map_err(|e| config_err("dgp", e))?;
    let mut spec = DgpSpec::new(family).map_err(|e| config_err("dgp", e))?;
    if let Some(b) = take::<usize>(obj, "burn_in")? {
        spec = spec.with_burn_in(b);
    }
    Ok(spec)
}

fn check_keys(obj: &Map<String, Value>, extra: &[&str]) -> Result<()> {
    let mut unknown: Vec<&str> = obj
        .keys()
        .map(String::as_str)
        .filter(|k| !COMMON_KEYS.contains(k) && !extra.contains(k))
        .collect();
    if unknown.is_empty() {
        return Ok(());
    }
    unknown.sort_unstable();
    Err(Error::Config(format!(
        "unknown keys: {}",
        unknown.join(", ")
    )))
}

/// Parses a process-only description (used for raw series dumps).
pub fn parse_dgp(text: &str) -> Result<DgpSpec> {
    let value: Value = serde_json::from_str(text)?;
    let obj = as_object(&value)?;
    let tag = obj.get("dgp").and_then(Value::as_str).unwrap_or_default();
    let mut allowed = vec!["dgp", "burn_in"];
    allowed.extend_from_slice(Family::parameter_keys(tag).unwrap_or_default());
    let mut unknown: Vec<&str> = obj
        .keys()
        .map(String::as_str)
        .filter(|k| !allowed.contains(k))
        .collect();
    if !unknown.is_empty() {
        unknown.sort_unstable();
        return Err(Error::Config(format!(
            "unknown keys: {}",
            unknown.join(", ")
        )));
    }
    dgp_from_object(obj)
}

pub fn experiment_from_value(value: &Value) -> Result<Experiment> {
    let obj = as_object(value)?;
    let tag = obj.get("dgp").and_then(Value::as_str).unwrap_or_default();
    check_keys(obj, Family::parameter_keys(tag).unwrap_or_default())?;
    let dgp = dgp_from_object(obj)?;

    let n_grid = match (take::<usize>(obj, "n")?, take::<Vec<usize>>(obj, "n_grid")?) {
        (Some(_), Some(_)) => return Err(config_err("n", "give either n or n_grid, not both")),
        (Some(n), None) => vec![n],
        (None, Some(g)) => g,
        (None, None) => return Err(config_err("n", "missing (or give n_grid)")),
    };
    let methods = match take::<Vec<String>>(obj, "methods")? {
        Some(ms) => ms
            .iter()
            .map(|m| m.parse::<Method>().map_err(|e| config_err("methods", e)))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let k_grid = take::<Vec<usize>>(obj, "k_grid")?;
    let k_rule = take::<KRule>(obj, "k_rule")?;
    let base_seed = take::<u64>(obj, "base_seed")?;
    let name = take::<String>(obj, "name")?;
    let kind = take::<String>(obj, "kind")?.unwrap_or_else(|| "monte_carlo".into());

    match kind.as_str() {
        "path" => {
            if let Some(k) = PATH_ONLY_INVALID.iter().find(|k| obj.contains_key(**k)) {
                return Err(config_err(k, "not used by path experiments"));
            }
            if n_grid.len() != 1 {
                return Err(config_err("n", "path experiments take a single n"));
            }
            let n = n_grid[0];
            Ok(Experiment::SamplePath(PathConfig {
                dgp,
                n,
                k_grid: k_grid.unwrap_or_else(|| path_k_grid(n)),
                methods: if methods.is_empty() {
                    vec![Method::Abm, Method::DisjointBm]
                } else {
                    methods
                },
                base_seed: base_seed.unwrap_or(crate::simulation::DEFAULT_SEED),
            }))
        }
        "monte_carlo" => {
            let k = match (k_grid, k_rule) {
                (Some(_), Some(_)) => {
                    return Err(config_err(
                        "k_grid",
                        "give either k_grid or k_rule, not both",
                    ))
                }
                (Some(g), None) => KSpec::Grid(g),
                (None, Some(r)) => KSpec::Rule(r),
                (None, None) => {
                    let smallest = n_grid.iter().copied().min().unwrap_or(0);
                    KSpec::Grid(default_k_grid(smallest))
                }
            };
            let mut config = ExperimentConfig::new(dgp, n_grid, k);
            config.name = name;
            if !methods.is_empty() {
                config.methods = methods;
            }
            if let Some(r) = take(obj, "reps")? {
                config.reps = r;
            }
            if let Some(c) = take(obj, "c")? {
                config.c = c;
            }
            if let Some(s) = base_seed {
                config.base_seed = s;
            }
            if let Some(n) = take::<SampleNesting>(obj, "nesting")? {
                config.nesting = n;
            }
            if let Some(t) = take(obj, "tol")? {
                config.tol = t;
            }
            config.validate()?;
            Ok(Experiment::MonteCarlo(config))
        }
        other => Err(config_err(
            "kind",
            format!("unknown kind {other:?}; expected monte_carlo or path"),
        )),
    }
}

pub fn parse_config_str(text: &str) -> Result<Experiment> {
    let value: Value = serde_json::from_str(text)?;
    experiment_from_value(&value)
}

/// Resolves `source` as a registry name, else as a path to a JSON file.
pub fn parse_config(source: &str) -> Result<Experiment> {
    if let Ok(entry) = registry::lookup(source) {
        return Ok(entry.experiment);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(Error::Config(format!(
            "{source:?} is neither a registry experiment nor an existing file"
        )));
    }
    parse_config_str(&std::fs::read_to_string(path)?)
}

fn dgp_to_object(dgp: &DgpSpec) -> Map<String, Value> {
    let mut obj = match serde_json::to_value(dgp.family) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    obj.insert("burn_in".into(), Value::from(dgp.burn_in));
    obj
}

/// The config in the input schema, with every default made explicit.
/// Parsing the result gives back the same experiment.
pub fn experiment_to_value(experiment: &Experiment) -> Value {
    let methods = |ms: &[Method]| Value::from(ms.iter().map(|m| m.as_str()).collect::<Vec<_>>());
    let mut obj;
    match experiment {
        Experiment::MonteCarlo(c) => {
            obj = dgp_to_object(&c.dgp);
            obj.insert("kind".into(), Value::from("monte_carlo"));
            if let Some(name) = &c.name {
                obj.insert("name".into(), Value::from(name.clone()));
            }
            obj.insert("n_grid".into(), Value::from(c.n_grid.clone()));
            match &c.k {
                KSpec::Grid(g) => obj.insert("k_grid".into(), Value::from(g.clone())),
                KSpec::Rule(r) => obj.insert("k_rule".into(), Value::from(r.as_str())),
            };
            obj.insert("methods".into(), methods(&c.methods));
            obj.insert("reps".into(), Value::from(c.reps));
            obj.insert("c".into(), Value::from(c.c));
            obj.insert("base_seed".into(), Value::from(c.base_seed));
            obj.insert(
                "nesting".into(),
                serde_json::to_value(c.nesting).unwrap_or(Value::Null),
            );
            obj.insert("tol".into(), Value::from(c.tol));
        }
        Experiment::SamplePath(p) => {
            obj = dgp_to_object(&p.dgp);
            obj.insert("kind".into(), Value::from("path"));
            obj.insert("n".into(), Value::from(p.n));
            obj.insert("k_grid".into(), Value::from(p.k_grid.clone()));
            obj.insert("methods".into(), methods(&p.methods));
            obj.insert("base_seed".into(), Value::from(p.base_seed));
        }
    }
    Value::Object(obj)
}
