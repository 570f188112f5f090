//! Versioned run reports.

use serde::Serialize;
use serde_json::{Map, Value};
use voa_tensor::dual::report::{PropertyReport, Status};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything that determines a run, echoed into its report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub instance: String,
    pub cutoff: i64,
    pub window: Option<i64>,
    pub suite: Option<String>,
    pub properties: Vec<String>,
    pub lambda: Option<String>,
    pub flavor: String,
    pub modules: Vec<String>,
    pub seed: u64,
}

/// One result row: the property report plus command-specific fields.
#[derive(Clone, Debug)]
pub struct Entry {
    pub report: PropertyReport,
    pub extra: Map<String, Value>,
    pub details: Vec<String>,
}

impl Entry {
    pub fn new(report: PropertyReport) -> Self {
        Entry { report, extra: Map::new(), details: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.into(), value);
        self
    }

    /// Fails or errors; an unmet hypothesis is not a failure.
    pub fn is_failure(&self) -> bool {
        matches!(self.report.status, Status::Fail | Status::Error)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: RunConfig,
    pub results: Vec<Entry>,
}

impl Report {
    pub fn new(config: RunConfig, mut results: Vec<Entry>) -> Self {
        results.sort_by(|a, b| a.report.id.cmp(&b.report.id));
        Report { config, results }
    }

    pub fn ok(&self) -> bool {
        !self.results.iter().any(Entry::is_failure)
    }

    pub fn to_json(&self) -> String {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|e| {
                let mut v = serde_json::to_value(&e.report).expect("report serializes");
                if let Value::Object(m) = &mut v {
                    m.extend(e.extra.clone());
                }
                v
            })
            .collect();
        let doc = serde_json::json!({
            "schemaVersion": SCHEMA_VERSION,
            "config": self.config,
            "results": results,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.results {
            s.push_str(&e.report.to_string());
            for d in &e.details {
                s.push_str(&format!("  {d}\n"));
            }
        }
        let failed = self.results.iter().filter(|e| e.is_failure()).count();
        s.push_str(&format!("{} results, {} failed\n", self.results.len(), failed));
        s
    }
}
