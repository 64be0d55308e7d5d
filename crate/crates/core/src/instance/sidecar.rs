use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphKind;

/// Sidecar written next to a generated graph file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub seed: u64,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub formula_alpha: Option<usize>,
    pub kind: GraphKind,
    /// Generator parameters as given, seed excluded.
    #[serde(default, skip_serializing_if = "toml::Table::is_empty")]
    pub parameters: toml::Table,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl InstanceMeta {
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("metadata serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}
