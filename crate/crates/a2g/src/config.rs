//! Flat `key = value` run configuration.
//!
//! Numeric keys hold a list: `1, 2` or a range `start:step:stop` (stop
//! included when it lands on the grid; grid values are rounded to 1e-9).
//! Unit suffixes in key names give the unit the value is written in; the
//! experiments convert to SI.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Numbers,
    Word(&'static [&'static str]),
}

/// One documented key.
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub help: &'static str,
    /// Hard domain: values outside are always rejected.
    pub domain: (f64, f64),
    /// Range of the reference parameter table; leaving it needs `--force`.
    pub table: Option<(f64, f64)>,
}

const ANY: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);
const NONNEG: (f64, f64) = (0.0, f64::INFINITY);
const POSITIVE: (f64, f64) = (f64::MIN_POSITIVE, f64::INFINITY);
const UNIT: (f64, f64) = (0.0, 1.0);

pub const SCHEMA: &[Key] = &[
    Key { name: "lambda0_per_km2", kind: Kind::Numbers, help: "UAV intensity, UAVs/km^2", domain: POSITIVE, table: Some((1.0, 20.0)) },
    Key { name: "v0_kmh", kind: Kind::Numbers, help: "mean UAV speed, km/h (DMS: sigma = sqrt(2/pi) v0)", domain: NONNEG, table: Some((25.0, 45.0)) },
    Key { name: "model", kind: Kind::Word(&["dms", "sms"]), help: "mobility model", domain: ANY, table: None },
    Key { name: "scheme", kind: Kind::Word(&["delaunay", "voronoi", "hexagonal"]), help: "serving rule", domain: ANY, table: None },
    Key { name: "frame", kind: Kind::Word(&["uavs", "ue_equivalent", "ue_constant"]), help: "which side moves", domain: ANY, table: None },
    Key { name: "alpha", kind: Kind::Numbers, help: "path-loss exponent", domain: (2.0 + 1e-12, 20.0), table: Some((2.4, 3.6)) },
    Key { name: "antennas", kind: Kind::Numbers, help: "antennas per UAV (M)", domain: (1.0, 64.0), table: None },
    Key { name: "rician_k", kind: Kind::Numbers, help: "Rician factor K", domain: NONNEG, table: Some((1.0, 1.0)) },
    Key { name: "h_m", kind: Kind::Numbers, help: "UAV altitude, m", domain: POSITIVE, table: Some((150.0, 150.0)) },
    Key { name: "h_spread_m", kind: Kind::Numbers, help: "altitudes drawn from h_m +- h_spread_m, m", domain: NONNEG, table: None },
    Key { name: "zeta", kind: Kind::Numbers, help: "probability that a handoff drops the link", domain: UNIT, table: Some((0.0, 1.0)) },
    Key { name: "handoff_p", kind: Kind::Numbers, help: "fixed handoff probability for the analytic curve", domain: UNIT, table: None },
    Key { name: "t_s", kind: Kind::Numbers, help: "leg length, s", domain: NONNEG, table: None },
    Key { name: "gamma_db", kind: Kind::Numbers, help: "SIR threshold, dB", domain: ANY, table: None },
    Key { name: "pc_exponent", kind: Kind::Numbers, help: "fractional power-control exponent", domain: UNIT, table: None },
    Key { name: "eta", kind: Kind::Numbers, help: "eta-mu power ratio", domain: POSITIVE, table: None },
    Key { name: "mu", kind: Kind::Numbers, help: "eta-mu cluster parameter", domain: POSITIVE, table: None },
    Key { name: "trials", kind: Kind::Numbers, help: "Monte Carlo trials per curve", domain: (1.0, 1e12), table: None },
    Key { name: "seed", kind: Kind::Numbers, help: "root seed", domain: (0.0, 9_007_199_254_740_992.0), table: None },
];

pub fn key(name: &str) -> Option<&'static Key> {
    SCHEMA.iter().find(|k| k.name == name)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Numbers(Vec<f64>),
    Word(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Word(w) => f.write_str(w),
            Value::Numbers(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn parse_number(s: &str) -> Result<f64, ConfigError> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => err(format!("not a finite number: `{}`", s.trim())),
    }
}

/// Parses `a, b, c` or `start:step:stop`.
pub fn parse_numbers(s: &str) -> Result<Vec<f64>, ConfigError> {
    let s = s.trim();
    if s.is_empty() {
        return err("empty value");
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return err(format!("a range is start:step:stop, got `{s}`"));
        }
        let (a, step, b) = (parse_number(parts[0])?, parse_number(parts[1])?, parse_number(parts[2])?);
        if !(step > 0.0) || b < a {
            return err(format!("range `{s}` needs step > 0 and stop >= start"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        if n > 100_000 {
            return err(format!("range `{s}` has too many points"));
        }
        return Ok((0..=n).map(|k| ((a + k as f64 * step) * 1e9).round() / 1e9).collect());
    }
    s.split(',').map(parse_number).collect()
}

/// Resolved parameters of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<&'static str, Value>,
    forced: bool,
}

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    /// Accept values outside the reference table (domain checks still apply).
    pub fn force(mut self, yes: bool) -> Self {
        self.forced = yes;
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Value)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    /// Sets a value without the table check (experiment defaults).
    pub fn set_default(&mut self, name: &str, raw: &str) -> Result<(), ConfigError> {
        let (k, v) = parse_entry(name, raw)?;
        check_domain(k, &v)?;
        self.values.insert(k.name, v);
        Ok(())
    }

    /// Sets a user-supplied value.
    pub fn set(&mut self, name: &str, raw: &str) -> Result<(), ConfigError> {
        let (k, v) = parse_entry(name, raw)?;
        check_domain(k, &v)?;
        if !self.forced {
            check_table(k, &v)?;
        }
        self.values.insert(k.name, v);
        Ok(())
    }

    /// Applies `key=value` or `key = value`.
    pub fn set_assignment(&mut self, line: &str) -> Result<(), ConfigError> {
        match line.split_once('=') {
            Some((k, v)) => self.set(k.trim(), v),
            None => err(format!("expected key=value, got `{line}`")),
        }
    }

    /// Reads a `key = value` file; `#` starts a comment.
    pub fn load_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.set_assignment(line)
                .map_err(|e| ConfigError(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    /// Reads the `params` object of a run manifest. The values were checked
    /// when the manifest was written, so the table ranges are not enforced.
    pub fn load_manifest(&mut self, text: &str) -> Result<(), ConfigError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ConfigError(format!("bad manifest: {e}")))?;
        let Some(params) = doc.get("params").and_then(|p| p.as_object()) else {
            return err("manifest has no params object");
        };
        for (k, v) in params {
            let raw = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(x) => x.to_string(),
                serde_json::Value::Array(xs) => xs
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                _ => return err(format!("manifest value of `{k}` is neither text nor numbers")),
            };
            self.set_default(k, &raw)?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            self.load_manifest(&text)
        } else {
            self.load_text(&text)
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    pub fn nums(&self, name: &str) -> Result<&[f64], ConfigError> {
        match self.values.get(name) {
            Some(Value::Numbers(xs)) => Ok(xs),
            Some(Value::Word(_)) => err(format!("`{name}` is not numeric")),
            None => err(format!("`{name}` is required by this experiment")),
        }
    }

    pub fn num(&self, name: &str) -> Result<f64, ConfigError> {
        match self.nums(name)? {
            [x] => Ok(*x),
            _ => err(format!("`{name}` takes a single value here")),
        }
    }

    pub fn opt_num(&self, name: &str) -> Result<Option<f64>, ConfigError> {
        if self.values.contains_key(name) {
            self.num(name).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn count(&self, name: &str) -> Result<u64, ConfigError> {
        let x = self.num(name)?;
        if x.fract() != 0.0 {
            return err(format!("`{name}` must be an integer"));
        }
        Ok(x as u64)
    }

    pub fn word(&self, name: &str) -> Result<&str, ConfigError> {
        match self.values.get(name) {
            Some(Value::Word(w)) => Ok(w),
            Some(Value::Numbers(_)) => err(format!("`{name}` is not a word")),
            None => err(format!("`{name}` is required by this experiment")),
        }
    }
}

fn parse_entry(name: &str, raw: &str) -> Result<(&'static Key, Value), ConfigError> {
    let Some(k) = key(name.trim()) else {
        return err(format!("unknown key `{}`", name.trim()));
    };
    let v = match k.kind {
        Kind::Numbers => Value::Numbers(parse_numbers(raw)?),
        Kind::Word(choices) => {
            let w = raw.trim();
            if !choices.contains(&w) {
                return err(format!("`{}` must be one of {}, got `{w}`", k.name, choices.join("|")));
            }
            Value::Word(w.to_string())
        }
    };
    Ok((k, v))
}

fn check_domain(k: &Key, v: &Value) -> Result<(), ConfigError> {
    if let Value::Numbers(xs) = v {
        let (lo, hi) = k.domain;
        if let Some(x) = xs.iter().find(|&&x| x < lo || x > hi) {
            return err(format!("`{}` = {x} is invalid ({})", k.name, k.help));
        }
    }
    Ok(())
}

fn check_table(k: &Key, v: &Value) -> Result<(), ConfigError> {
    if let (Value::Numbers(xs), Some((lo, hi))) = (v, k.table) {
        if let Some(x) = xs.iter().find(|&&x| x < lo - 1e-12 || x > hi + 1e-12) {
            return err(format!(
                "`{}` = {x} is outside the reference range [{lo}, {hi}]; pass --force to run it anyway",
                k.name
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_stop() {
        assert_eq!(parse_numbers("0:5:30").unwrap(), vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
        assert_eq!(parse_numbers("-10:2.5:-5").unwrap(), vec![-10.0, -7.5, -5.0]);
        assert_eq!(parse_numbers("1, 2").unwrap(), vec![1.0, 2.0]);
        assert!(parse_numbers("1:0:3").is_err());
        assert!(parse_numbers("nan").is_err());
    }

    #[test]
    fn zero_intensity_is_invalid_even_when_forced() {
        let mut p = Params::new().force(true);
        assert!(p.set("lambda0_per_km2", "0").is_err());
        assert!(p.set("lambda0_per_km2", "50").is_ok());
    }

    #[test]
    fn table_range_needs_force() {
        let mut p = Params::new();
        assert!(p.set("lambda0_per_km2", "50").is_err());
        assert!(p.set("lambda0_per_km2", "1, 20").is_ok());
        assert!(p.set("bogus", "1").is_err());
        assert!(p.set("model", "walk").is_err());
    }

    #[test]
    fn text_and_manifest_round_trip() {
        let mut p = Params::new();
        p.load_text("# run\nalpha = 2.6\nmodel = sms # constant speed\nt_s = 0:3:9\n").unwrap();
        assert_eq!(p.num("alpha").unwrap(), 2.6);
        assert_eq!(p.word("model").unwrap(), "sms");
        assert_eq!(p.nums("t_s").unwrap().len(), 4);
        let mut q = Params::new();
        q.load_manifest(r#"{"params": {"alpha": 2.6, "model": "sms", "t_s": [0, 3, 6, 9]}}"#).unwrap();
        assert_eq!(p, q);
    }
}
