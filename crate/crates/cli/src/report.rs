//! Machine-readable JSON reports. Field order is fixed by struct
//! declaration and every map is sorted, so identical runs produce
//! byte-identical documents apart from the timestamp.

use serde::Serialize;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA: &str = "boxspace-report/v1";

/// Three-valued verdict: finite truncations certify or refute a concrete
/// finite statement, and everything extrapolated stays evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Refuted,
    EvidenceOnly,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub mode: String,
    pub cap: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub provenance: Provenance,
    pub results: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub timestamp: u64,
}

impl<T: Serialize> Report<T> {
    pub fn new(
        command: &str,
        input: Option<String>,
        params: serde_json::Map<String, serde_json::Value>,
        provenance: Provenance,
        results: T,
        verdict: Option<Verdict>,
    ) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            input,
            params,
            provenance,
            results,
            verdict,
            timestamp,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Helper for building the params map in sorted order.
pub fn params(entries: &[(&str, serde_json::Value)]) -> serde_json::Map<String, serde_json::Value> {
    let mut map = serde_json::Map::new();
    for (k, v) in entries {
        map.insert((*k).to_string(), v.clone());
    }
    map
}
