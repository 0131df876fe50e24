use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Failure;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub version: String,
}

impl OutputEnvelope {
    pub fn new(command: &str, parameters: BTreeMap<String, Value>, results: Value) -> Self {
        OutputEnvelope {
            command: command.to_string(),
            parameters,
            results,
            version: VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String, Failure> {
        let mut s = serde_json::to_string_pretty(self).map_err(Failure::usage)?;
        s.push('\n');
        Ok(s)
    }
}

/// Shortest representation that parses back to the same f64, always with a
/// period as decimal separator and no grouping.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV text with a fixed header.
pub struct Table {
    out: String,
    width: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Table {
            out: String::new(),
            width: header.len(),
        };
        t.row(header.iter().map(|h| h.to_string()).collect());
        t
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.width);
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
