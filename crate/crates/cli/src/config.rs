//! Flat key=value (or JSON object) configuration with `DSTBC_<KEY>` overrides.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

pub const ENV_PREFIX: &str = "DSTBC_";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    /// Key=value lines (`#` comments, blank lines skipped) or a JSON object.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let trimmed = text.trim_start();
        let mut values = BTreeMap::new();
        if trimmed.starts_with('{') {
            let json: serde_json::Value = serde_json::from_str(text)
                .map_err(|e| CliError::Usage(format!("{origin}: invalid JSON: {e}")))?;
            let obj = json
                .as_object()
                .ok_or_else(|| CliError::Usage(format!("{origin}: expected a JSON object")))?;
            for (k, v) in obj {
                let s = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_string))
                        .collect::<Vec<_>>()
                        .join(","),
                    other => other.to_string(),
                };
                values.insert(normalize(k), s);
            }
        } else {
            for (i, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected key = value", i + 1)))?;
                values.insert(normalize(k.trim()), v.trim().to_string());
            }
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Rejects keys outside `known`, then applies `DSTBC_<KEY>` overrides.
    pub fn resolve(mut self, known: &[&str]) -> Result<Self, CliError> {
        if let Some(bad) = self.values.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::Usage(format!(
                "unknown config key `{bad}` (known: {})",
                known.join(", ")
            )));
        }
        for key in known {
            if let Ok(v) = std::env::var(format!("{ENV_PREFIX}{}", key.to_ascii_uppercase())) {
                self.values.insert(key.to_string(), v);
            }
        }
        Ok(self)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`: {e}")))
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key).map(str::to_ascii_lowercase).as_deref() {
            None => Ok(false),
            Some("1" | "true" | "yes" | "on") => Ok(true),
            Some("0" | "false" | "no" | "off" | "") => Ok(false),
            Some(v) => Err(CliError::Usage(format!("config key `{key}`: expected a boolean, got `{v}`"))),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<T>()
                            .map_err(|e| CliError::Usage(format!("config key `{key}`: cannot parse `{s}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}
