//! Aggregation of a suite run directory into one summary.

use std::path::Path;

use serde_json::{json, Value};

use crate::suite::SECTIONS;
use crate::{exit, read_file, CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub value: Value,
    pub text: String,
    pub code: i32,
}

/// Reads `<id>.json` for every known section. Absent sections are
/// "skipped"; any failed section makes the exit code 1.
pub fn summarize(dir: &Path) -> CliResult<Summary> {
    if !dir.is_dir() {
        return Err(CliError::input(format!("{} is not a run directory", dir.display())));
    }
    let mut rows = Vec::with_capacity(SECTIONS.len());
    let mut text = String::new();
    let (mut passed, mut failed, mut skipped) = (0usize, 0usize, 0usize);
    for (id, title) in SECTIONS {
        let path = dir.join(format!("{id}.json"));
        let status = if path.exists() {
            let v: Value = serde_json::from_str(&read_file(&path)?)?;
            match v["passed"].as_bool() {
                Some(true) => "pass",
                Some(false) => "fail",
                None => return Err(CliError::input(format!("{} has no \"passed\" field", path.display()))),
            }
        } else {
            "skipped"
        };
        match status {
            "pass" => passed += 1,
            "fail" => failed += 1,
            _ => skipped += 1,
        }
        text.push_str(&format!("{:<8} {id:<16} {title}\n", status.to_uppercase()));
        rows.push(json!({"id": id, "title": title, "status": status}));
    }
    text.push_str(&format!("{passed} passed, {failed} failed, {skipped} skipped\n"));
    let config = dir.join("config.json");
    let config = if config.exists() { serde_json::from_str(&read_file(&config)?)? } else { Value::Null };
    let value = json!({
        "sections": rows,
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
        "config": config,
    });
    let code = if failed > 0 { exit::VIOLATION } else { exit::OK };
    Ok(Summary { value, text, code })
}
