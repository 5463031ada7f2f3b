use super::table::{content_hash, ResultTable};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_NAME: &str = "abm-evi";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub file: String,
    pub rows: usize,
    pub columns: Vec<String>,
    pub content_hash: String,
}

/// Describes one run: the config that produced it and a hash per table.
///
/// Nothing run-specific (time, host, thread count) is recorded, so equal
/// inputs give an equal manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub experiment: Option<String>,
    pub base_seed: Option<u64>,
    pub config: Value,
    pub tables: Vec<TableEntry>,
    /// Hash over the `file hash` listing of all tables, in order.
    pub content_hash: String,
}

impl Manifest {
    pub fn new(
        experiment: Option<String>,
        base_seed: Option<u64>,
        config: Value,
        tables: &[(String, &ResultTable)],
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(tables.len());
        let mut listing = String::new();
        for (file, table) in tables {
            let hash = table.content_hash()?;
            listing.push_str(&format!("{file} {hash}\n"));
            entries.push(TableEntry {
                file: file.clone(),
                rows: table.rows().len(),
                columns: table.schema().to_vec(),
                content_hash: hash,
            });
        }
        Ok(Self {
            tool: TOOL_NAME.into(),
            tool_version: TOOL_VERSION.into(),
            experiment,
            base_seed,
            config,
            tables: entries,
            content_hash: content_hash(listing.as_bytes()),
        })
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_on_content_only() {
        let mut t = ResultTable::new(["x"]);
        t.push(vec![1.5f64.into()]).unwrap();
        let a = Manifest::new(None, Some(1), Value::Null, &[("t.csv".into(), &t)]).unwrap();
        let b = Manifest::new(None, Some(1), Value::Null, &[("t.csv".into(), &t)]).unwrap();
        assert_eq!(a.content_hash, b.content_hash);
        t.push(vec![2.5f64.into()]).unwrap();
        let c = Manifest::new(None, Some(1), Value::Null, &[("t.csv".into(), &t)]).unwrap();
        assert_ne!(a.content_hash, c.content_hash);
    }
}
