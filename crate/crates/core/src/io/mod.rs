//! Config parsing, observation files, result tables and manifests.

pub mod config;
pub mod input;
pub mod manifest;
pub mod table;
pub mod tables;

pub use config::{experiment_to_value, parse_config, parse_config_str, parse_dgp};
pub use input::{format_observations, parse_observations, read_observations};
pub use manifest::{Manifest, TableEntry, TOOL_VERSION};
pub use table::{content_hash, Cell, Format, ResultTable};

use crate::error::Result;
use crate::parallel::Parallelism;
use crate::simulation::{run_experiment, single_sample_path, Experiment};
use std::fs;
use std::path::Path;

/// Output of one experiment: named tables plus their manifest.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub tables: Vec<(String, ResultTable)>,
    pub manifest: Manifest,
}

impl RunOutput {
    /// Writes each table as CSV and `manifest.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (file, table) in &self.tables {
            table.write(&dir.join(file), Format::Csv, None)?;
        }
        let mut bytes = serde_json::to_vec_pretty(&self.manifest)?;
        bytes.push(b'\n');
        fs::write(dir.join("manifest.json"), bytes)?;
        Ok(())
    }
}

/// Runs an experiment and assembles its tables and manifest.
pub fn run_to_tables(
    name: Option<&str>,
    experiment: &Experiment,
    parallelism: Parallelism,
) -> Result<RunOutput> {
    let tables = match experiment {
        Experiment::MonteCarlo(c) => {
            let summary = run_experiment(c, parallelism)?;
            vec![("summary.csv".to_string(), tables::summary_table(&summary))]
        }
        Experiment::SamplePath(p) => {
            let rows = single_sample_path(&p.dgp, p.n, &p.k_grid, &p.methods, p.base_seed)?;
            vec![("path.csv".to_string(), tables::path_table(&rows))]
        }
    };
    let name = name.map(str::to_string).or_else(|| match experiment {
        Experiment::MonteCarlo(c) => c.name.clone(),
        Experiment::SamplePath(_) => None,
    });
    let refs: Vec<(String, &ResultTable)> = tables.iter().map(|(f, t)| (f.clone(), t)).collect();
    let manifest = Manifest::new(
        name,
        Some(experiment.base_seed()),
        experiment_to_value(experiment),
        &refs,
    )?;
    Ok(RunOutput { tables, manifest })
}
