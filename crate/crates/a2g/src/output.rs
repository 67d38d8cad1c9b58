//! CSV tables, the run manifest and the comparison report.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Map, Value as Json};

use crate::config::{Params, Value};
use crate::experiments::{Outcome, Table};

/// Comma-separated, `.` decimals, LF endings, header first.
pub fn csv(table: &Table) -> String {
    let mut s = table.header.join(",");
    s.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| number(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn number(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn json_number(x: f64) -> Json {
    if x.fract() == 0.0 && x.abs() < 9e15 {
        json!(x as i64)
    } else {
        json!(x)
    }
}

/// `git describe` of the working directory, or `unknown` outside a checkout.
pub fn git_describe() -> String {
    Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string())
}

fn params_json(params: &Params) -> Json {
    let mut map = Map::new();
    for (k, v) in params.iter() {
        let j = match v {
            Value::Word(w) => Json::String(w.clone()),
            Value::Numbers(xs) if xs.len() == 1 => json_number(xs[0]),
            Value::Numbers(xs) => Json::Array(xs.iter().map(|&x| json_number(x)).collect()),
        };
        map.insert(k.to_string(), j);
    }
    Json::Object(map)
}

/// Everything needed to reproduce the CSVs; the thread count is left out
/// because it does not change them.
pub fn manifest(experiment: &str, params: &Params, outcome: &Outcome) -> String {
    let files: Vec<String> = outcome.tables.iter().map(|t| format!("{}.csv", t.name)).collect();
    let doc = json!({
        "experiment": experiment,
        "params": params_json(params),
        "seed": params.count("seed").ok(),
        "trials": params.count("trials").ok(),
        "version": env!("CARGO_PKG_VERSION"),
        "git_describe": git_describe(),
        "files": files,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("manifest serialises");
    s.push('\n');
    s
}

pub fn report(experiment: &str, outcome: &Outcome) -> String {
    let mut s = format!("experiment {experiment}\n");
    for c in &outcome.checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let kind = if c.bound { "bound" } else { "claim" };
        s.push_str(&format!("{verdict} [{kind}] {}: {}\n", c.name, c.detail));
    }
    let failed = outcome.checks.iter().filter(|c| !c.pass).count();
    s.push_str(&format!(
        "{} checks, {} failed, {} bound violations\n",
        outcome.checks.len(),
        failed,
        outcome.bound_violations()
    ));
    s
}

/// Writes the CSVs, `manifest.json` and `report.txt` into `dir`.
pub fn write_all(dir: &Path, experiment: &str, params: &Params, outcome: &Outcome) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    for table in &outcome.tables {
        put(format!("{}.csv", table.name), csv(table))?;
    }
    put("manifest.json".into(), manifest(experiment, params, outcome))?;
    put("report.txt".into(), report(experiment, outcome))?;
    Ok(written)
}
