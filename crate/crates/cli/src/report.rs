use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// The invocation as echoed in a report. The thread count and output path
/// are left out so that reports do not depend on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub full: bool,
    pub force: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Discrepancies worth surfacing that do not make the check fail.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    pub details: Value,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, details: Value) -> Self {
        Self {
            name: name.into(),
            pass,
            flags: Vec::new(),
            details,
        }
    }

    pub fn flag(mut self, note: impl Into<String>) -> Self {
        self.flags.push(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    pub version: &'static str,
    pub outcome: bool,
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: CommandEcho) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            outcome: true,
            results: Vec::new(),
            timings_ms: None,
        }
    }

    pub fn push(&mut self, r: CheckResult) {
        self.outcome &= r.pass;
        self.results.push(r);
    }

    pub fn time(&mut self, key: impl Into<String>, ms: f64) {
        self.timings_ms.get_or_insert_with(BTreeMap::new).insert(key.into(), ms);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.command;
        let mut s = c.name.to_string();
        if let Some(d) = c.d {
            let _ = write!(s, " d={d}");
        }
        if let Some(scheme) = &c.scheme {
            let _ = write!(s, " scheme={scheme}");
        }
        if let Some(p) = c.prime {
            let _ = write!(s, " p={p}");
        }
        if let Some(m) = &c.mode {
            let _ = write!(s, " mode={m}");
        }
        let _ = writeln!(s, "\noutcome: {}", if self.outcome { "PASS" } else { "FAIL" });
        for r in &self.results {
            let _ = writeln!(s, "[{}] {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
            for f in &r.flags {
                let _ = writeln!(s, "    flag: {f}");
            }
            if let Value::Object(map) = &r.details {
                for (k, v) in map {
                    let _ = writeln!(s, "    {k}: {}", compact(v));
                }
            }
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                let _ = writeln!(s, "time {k}: {v:.1} ms");
            }
        }
        s
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn echo() -> CommandEcho {
        CommandEcho {
            name: "verify".into(),
            d: Some(2),
            scheme: None,
            prime: None,
            mode: None,
            full: false,
            force: false,
            seed: 0,
        }
    }

    #[test]
    fn empty_report_has_empty_results() {
        let v: Value = serde_json::from_str(&Report::new(echo()).to_json()).unwrap();
        assert_eq!(v["results"], json!([]));
        assert_eq!(v["outcome"], json!(true));
        assert!(v.get("timings_ms").is_none());
    }

    #[test]
    fn failing_check_sets_outcome() {
        let mut r = Report::new(echo());
        r.push(CheckResult::new("a", true, json!({})));
        r.push(CheckResult::new("b", false, json!({"x": 1})).flag("note"));
        assert!(!r.outcome);
        let text = r.to_text();
        assert!(text.contains("[FAIL] b"));
        assert!(text.contains("flag: note"));
        assert!(text.contains("x: 1"));
    }
}
