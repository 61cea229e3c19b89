//! The report every command produces, in JSON or plain text.

use std::time::Instant;

use gpdact::quantize::QCheck;
use gpdact::span::Difference;
use gpdact::structures::EqualityCheck;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, witness: impl FnOnce() -> String) -> Check {
        Check { name: name.into(), pass, witness: (!pass).then(witness), timing_ms: None }
    }

    pub fn from_equality(prefix: &str, c: &EqualityCheck) -> Check {
        let name = format!("{prefix}{}", c.name);
        let witness = match &c.witness {
            Some(d) => describe_difference(d),
            None => format!("comparison failed: {}", c.name),
        };
        Check::new(name, c.pass, || witness)
    }

    pub fn from_q(prefix: &str, c: &QCheck) -> Check {
        let witness = c.witness.as_ref().map(|w| w.description.clone()).unwrap_or_else(|| c.name.clone());
        Check::new(format!("{prefix}{}", c.name), c.pass, || witness)
    }
}

pub fn describe_difference(d: &Difference) -> String {
    format!(
        "stage {:?}, entry ({}, {}): {} vs {}",
        d.stage, d.s_label, d.t_label, d.left, d.right
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs_digest: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub details: Value,
}

/// Collects checks while a command runs.
pub struct Builder {
    command: String,
    hasher: Sha256,
    seed: Option<u64>,
    checks: Vec<Check>,
    details: serde_json::Map<String, Value>,
    timings: bool,
    clock: Instant,
}

impl Builder {
    pub fn new(command: &str, timings: bool) -> Builder {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Builder {
            command: command.into(),
            hasher,
            seed: None,
            checks: Vec::new(),
            details: serde_json::Map::new(),
            timings,
            clock: Instant::now(),
        }
    }

    /// Feeds an input (argument or file contents) into the digest.
    pub fn input(&mut self, bytes: impl AsRef<[u8]>) {
        let bytes = bytes.as_ref();
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
        self.input(seed.to_le_bytes());
    }

    pub fn check(&mut self, mut c: Check) {
        if self.timings {
            c.timing_ms = Some(self.clock.elapsed().as_secs_f64() * 1e3);
            self.clock = Instant::now();
        }
        self.checks.push(c);
    }

    pub fn checks(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.check(c);
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.into(), serde_json::to_value(value).expect("serializable detail"));
    }

    pub fn finish(mut self) -> Report {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = self.checks.iter().all(|c| c.pass);
        Report {
            schema: SCHEMA,
            command: self.command,
            inputs_digest: hex::encode(self.hasher.finalize()),
            pass,
            seed: self.seed,
            checks: self.checks,
            details: Value::Object(self.details),
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\ninputs: {}\n", self.command, self.inputs_digest);
        if let Some(s) = self.seed {
            out.push_str(&format!("seed: {s}\n"));
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {}", c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" -- {w}"));
            }
            if let Some(t) = c.timing_ms {
                out.push_str(&format!(" [{t:.1} ms]"));
            }
            out.push('\n');
        }
        if let Value::Object(map) = &self.details {
            for (k, v) in map {
                match v {
                    Value::String(s) if s.contains('\n') => out.push_str(&format!("{k}:\n{s}")),
                    Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    other => out.push_str(&format!("{k}: {other}\n")),
                }
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!(
            "overall: {} ({passed}/{} checks)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_failing_check_fails_the_report() {
        let mut b = Builder::new("t", false);
        b.check(Check::new("b", true, || unreachable!()));
        b.check(Check::new("a", false, || "witness".into()));
        let r = b.finish();
        assert!(!r.pass);
        assert_eq!(r.checks[0].name, "a");
        assert_eq!(r.checks[0].witness.as_deref(), Some("witness"));
        assert!(r.to_text().contains("FAIL a -- witness"));
        assert!(r.to_text().ends_with("overall: FAIL (1/2 checks)\n"));
    }

    #[test]
    fn digest_separates_inputs() {
        let digest = |parts: &[&str]| {
            let mut b = Builder::new("t", false);
            for p in parts {
                b.input(p);
            }
            b.finish().inputs_digest
        };
        assert_ne!(digest(&["ab", "c"]), digest(&["a", "bc"]));
        assert_eq!(digest(&["ab", "c"]), digest(&["ab", "c"]));
    }
}
