//! Command results and their text or JSON rendering.

use serde_json::{json, Value};

/// Input or usage problem; exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Failure {
    pub fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Output of a successful invocation. A `violation` means the checked
/// property failed; it carries the counterexample and maps to exit 1.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub data: Value,
    pub violation: Option<Value>,
}

impl Report {
    pub fn pass(text: impl Into<String>, data: Value) -> Self {
        Report { text: text.into(), data, violation: None }
    }

    pub fn fail(text: impl Into<String>, data: Value, counterexample: Value) -> Self {
        Report { text: text.into(), data, violation: Some(counterexample) }
    }

    pub fn render_text(&self) -> String {
        let mut s = self.text.clone();
        if !s.is_empty() && !s.ends_with('\n') {
            s.push('\n');
        }
        if let Some(cx) = &self.violation {
            s.push_str(&format!("counterexample: {cx}\n"));
        }
        s
    }

    pub fn render_json(&self) -> Value {
        let status = if self.violation.is_some() { "violation" } else { "ok" };
        let mut v = json!({ "status": status, "result": self.data });
        if let Some(cx) = &self.violation {
            v["counterexample"] = cx.clone();
        }
        v
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|source| Failure::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn write_json<T: serde::Serialize>(path: &std::path::Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|source| Failure::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn violation_is_rendered_as_one_json_line() {
        let r = Report::fail("not respecting", json!(null), json!({"first": ["<0>"]}));
        assert_eq!(r.render_text(), "not respecting\ncounterexample: {\"first\":[\"<0>\"]}\n");
        assert_eq!(r.render_json()["status"], "violation");
        assert_eq!(Report::pass("ok", json!(1)).render_json()["status"], "ok");
    }
}
