use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use zigzag::twists::Status;

pub const TOOL: &str = "zz";

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub status: String,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub milliseconds: Option<u64>,
}

impl Record {
    pub fn new(name: impl Into<String>, anchor: &str, status: Status, data: Value) -> Record {
        Record { name: name.into(), anchor: anchor.to_string(), status: status.label().to_string(), data, milliseconds: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass.label()
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail.label()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    pub field: String,
    pub seed: u64,
    pub records: Vec<Record>,
}

/// Hex SHA-256 of the normalized invocation.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, canonical_args: &str, field: &str, seed: u64, mut records: Vec<Record>) -> Report {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_digest: digest(&format!("{canonical_args} field={field} seed={seed}")),
            field: field.to_string(),
            seed,
            records,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.records.iter().any(Record::failed)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{:<7} {}\n", r.status, r.name));
        }
        let count = |s: Status| self.records.iter().filter(|r| r.status == s.label()).count();
        out.push_str(&format!(
            "{} records: {} pass, {} fail, {} unknown\n",
            self.records.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Unknown)
        ));
        out
    }
}
