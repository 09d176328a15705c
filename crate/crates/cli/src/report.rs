use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One expected-vs-computed comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bundles_used: Option<usize>,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Serialize, computed: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).expect("plain data");
        let computed = serde_json::to_value(computed).expect("plain data");
        let pass = expected == computed;
        Check {
            name: name.into(),
            expected,
            computed,
            pass,
            bundles_used: None,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: expected {}, computed {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.expected,
            self.computed
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub results: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagram: Option<Value>,
    /// Human-readable body, printed verbatim in text mode.
    #[serde(default)]
    pub lines: Vec<String>,
    pub cached: bool,
}

impl Report {
    pub fn new(command: &str, params: Map<String, Value>) -> Self {
        Report {
            command: command.to_string(),
            params,
            results: Vec::new(),
            diagram: None,
            lines: Vec::new(),
            cached: false,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|c| c.pass)
    }

    /// Records a check and its PASS/FAIL line.
    pub fn check(&mut self, c: Check) {
        self.lines.push(c.line());
        self.results.push(c);
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            if !l.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}
