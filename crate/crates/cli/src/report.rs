use serde_json::{json, Map, Value};

use crate::{CliError, Format};

pub const SCHEMA_VERSION: &str = "1";

/// A command's output. `results` is the JSON payload; `table` is its flat
/// CSV rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "schema_version": SCHEMA_VERSION,
        })
    }
}

/// JSON with sorted keys, or CSV with a fixed header per command.
pub fn format_report(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report.to_json())
                .map_err(|e| CliError::Format(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| CliError::Format(e.to_string());
            w.write_record(&report.header).map_err(fail)?;
            for row in &report.rows {
                w.write_record(row).map_err(fail)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Format(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Format(e.to_string()))
        }
    }
}
