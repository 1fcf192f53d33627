//! Pass/fail checks and the line-oriented `key=value` record format.

use std::fmt;

/// Outcome of one identity or conjecture test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Witness or short explanation; empty on success.
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: if passed { String::new() } else { detail.into() } }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, detail: String::new() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, detail: detail.into() }
    }

    /// Collapses a list of findings: passes iff `witnesses` is empty.
    pub fn from_witnesses(name: impl Into<String>, witnesses: Vec<String>) -> Self {
        if witnesses.is_empty() {
            Check::pass(name)
        } else {
            Check::fail(name, witnesses.join("; "))
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "PASS {}", self.name)
        } else {
            write!(f, "FAIL {}: {}", self.name, self.detail)
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// One report line of `key=value` pairs; values never contain whitespace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record { fields: vec![("record".into(), kind.into())] }
    }

    pub fn kv(mut self, key: &str, value: impl fmt::Display) -> Self {
        let v: String = value.to_string().chars().filter(|c| !c.is_whitespace()).collect();
        self.fields.push((key.into(), if v.is_empty() { "-".into() } else { v }));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn check(c: &Check) -> Self {
        Record::new("check").kv("name", &c.name).kv("status", if c.passed { "PASS" } else { "FAIL" }).kv("detail", &c.detail)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_strip_whitespace() {
        let r = Record::new("set").kv("members", "{0, eps}").kv("empty", "");
        assert_eq!(r.to_string(), "record=set members={0,eps} empty=-");
        assert_eq!(r.get("members"), Some("{0,eps}"));
    }

    #[test]
    fn witnesses_decide_status() {
        assert!(Check::from_witnesses("x", vec![]).passed);
        let c = Check::from_witnesses("x", vec!["a".into(), "b".into()]);
        assert!(!c.passed);
        assert_eq!(c.to_string(), "FAIL x: a; b");
    }
}
