use serde::{Deserialize, Serialize};

use crate::group::GroupSpec;

/// Output format version shared by every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    #[default]
    Exhaustive,
    Random,
}

/// Everything that determines a run; copied into every artifact it writes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub group: Option<GroupSpec>,
    pub leaves: usize,
    pub max_degree: Option<u64>,
    pub automorphisms: bool,
    pub mode: SearchMode,
    pub seed: u64,
    pub out: Option<String>,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(command: &str, group: Option<GroupSpec>) -> Self {
        RunConfig {
            command: command.to_string(),
            group,
            leaves: 3,
            max_degree: None,
            automorphisms: false,
            mode: SearchMode::Exhaustive,
            seed: 0,
            out: None,
            workers: 1,
        }
    }
}
