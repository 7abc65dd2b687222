//! Run reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: String,
    pub bound: Option<usize>,
    pub depth: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub n: Option<i64>,
    pub morphism: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub passed: bool,
    pub verdict: Option<bool>,
    pub detail: String,
    pub digest: Option<String>,
}

impl Record {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Record {
        Record { name: name.into(), passed, verdict: None, detail: detail.into(), digest: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub graph: Option<String>,
    pub config: RunConfig,
    pub records: Vec<Record>,
    /// Free-form result lines (evaluated expressions, path lists, dumps).
    pub output: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: impl Into<String>, graph: Option<String>, config: RunConfig) -> Report {
        Report { command: command.into(), graph, config, records: Vec::new(), output: Vec::new(), status: Status::Pass }
    }

    pub fn push(&mut self, record: Record) {
        if !record.passed {
            self.status = Status::Fail;
        }
        self.records.push(record);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn header(&self) -> String {
        let c = &self.config;
        let mut opts = vec![format!("field {}", c.field)];
        let named = [("bound", c.bound.map(|v| v.to_string())), ("depth", c.depth.map(|v| v.to_string()))];
        let more = [("trials", c.trials.map(|v| v.to_string())), ("N", c.n.map(|v| v.to_string()))];
        for (k, v) in named.into_iter().chain(more) {
            if let Some(v) = v {
                opts.push(format!("{k} {v}"));
            }
        }
        if let Some(m) = &c.morphism {
            opts.push(format!("morphism {m}"));
        }
        opts.push(format!("seed {}", c.seed));
        let on = self.graph.as_ref().map(|g| format!(" on {g}")).unwrap_or_default();
        let status = if self.passed() { "pass" } else { "fail" };
        format!("{}{on} ({}): {status}", self.command, opts.join(", "))
    }

    /// A header line and an aligned table, then the output lines. A report
    /// with output but no records prints only its output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !(self.records.is_empty() && !self.output.is_empty()) {
            out.push_str(&self.header());
            out.push('\n');
        }
        let width = self.records.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
        for r in &self.records {
            let mark = if r.passed { "PASS" } else { "FAIL" };
            let verdict = match r.verdict {
                Some(true) => "true  ",
                Some(false) => "false ",
                None => "",
            };
            let pad = width - r.name.chars().count();
            let line = format!("{mark}  {}{}  {verdict}{}", r.name, " ".repeat(pad), r.detail);
            let _ = writeln!(out, "{}", line.trim_end());
            if let Some(d) = &r.digest {
                let _ = writeln!(out, "      {}  digest {d}", " ".repeat(width));
            }
        }
        for line in &self.output {
            let _ = writeln!(out, "{line}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}
