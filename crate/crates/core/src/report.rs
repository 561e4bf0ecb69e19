use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A machine-readable record of one run: tool version, seed, digests of every
/// input file and one entry per pipeline stage. Serialized as JSON; `render_tsv`
/// gives a flat view of the stage table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub stages: Vec<StageRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: u64,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub subject: String,
    pub outcome: String,
    pub detail: serde_json::Value,
    pub millis: u64,
}

impl RunReport {
    pub fn new(command: &str, seed: Option<u64>) -> RunReport {
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            inputs: Vec::new(),
            stages: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            bytes: bytes.len() as u64,
            digest: format!("{:016x}", fnv1a(&bytes)),
        });
        Ok(())
    }

    pub fn push_stage(
        &mut self,
        stage: &str,
        subject: &str,
        outcome: &str,
        detail: serde_json::Value,
        millis: u64,
    ) {
        self.stages.push(StageRecord {
            stage: stage.to_string(),
            subject: subject.to_string(),
            outcome: outcome.to_string(),
            detail,
            millis,
        });
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn render_tsv(&self) -> String {
        let mut out = String::from("stage\tsubject\toutcome\tmillis\tdetail\n");
        for s in &self.stages {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                s.stage, s.subject, s.outcome, s.millis, s.detail
            ));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_tsv_layout() {
        let mut r = RunReport::new("classify --demo", Some(7));
        r.push_stage("decompose", "toy", "ok", serde_json::json!({"rank": 3}), 12);
        r.push_stage("check", "toy", "ok", serde_json::Value::Null, 1);
        let json = r.to_json().unwrap();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.command, "classify --demo");
        assert_eq!(back.seed, Some(7));
        assert_eq!(back.stages.len(), 2);
        let tsv = r.render_tsv();
        let mut lines = tsv.lines();
        assert_eq!(lines.next(), Some("stage\tsubject\toutcome\tmillis\tdetail"));
        assert_eq!(tsv.lines().count(), 3);
    }

    #[test]
    fn input_digests_are_stable() {
        let dir = std::env::temp_dir().join(format!("drg-report-tests-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("input.txt");
        std::fs::write(&path, "fixed contents").unwrap();
        let mut a = RunReport::new("x", None);
        a.record_input(&path).unwrap();
        let mut b = RunReport::new("x", None);
        b.record_input(&path).unwrap();
        assert_eq!(a.inputs[0].digest, b.inputs[0].digest);
        assert_eq!(a.inputs[0].bytes, 14);
        std::fs::write(&path, "other contents!").unwrap();
        let mut c = RunReport::new("x", None);
        c.record_input(&path).unwrap();
        assert_ne!(a.inputs[0].digest, c.inputs[0].digest);
    }
}
