//! Machine-readable result envelope.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    #[serde(rename = "elapsed-ms")]
    pub elapsed_ms: u64,
    #[serde(rename = "nodes-explored")]
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub problem: String,
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub stats: Stats,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, String>,
}

impl ResultEnvelope {
    pub fn new(problem: impl Into<String>, answer: impl Into<Answer>) -> Self {
        ResultEnvelope {
            problem: problem.into(),
            answer: answer.into(),
            witness: None,
            stats: Stats::default(),
            detail: BTreeMap::new(),
        }
    }

    pub fn with_witness(mut self, witness: Option<Vec<usize>>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_detail(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.detail.insert(key.into(), value.to_string());
        self
    }
}
