use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// `--param key=value` pairs, checked against the keys an experiment
/// understands.
#[derive(Debug, Default)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn parse(raw: &[String]) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for item in raw {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param expects key=value, got `{item}`")))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(CliError::Usage(format!("empty key in `{item}`")));
            }
            if map.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("parameter `{k}` given twice")));
            }
        }
        Ok(Self(map))
    }

    pub fn allow(&self, experiment: &str, keys: &[&str]) -> CliResult<()> {
        match self.0.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) if keys.is_empty() => Err(CliError::Usage(format!("{experiment} takes no parameters, got `{k}`"))),
            Some(k) => Err(CliError::Usage(format!(
                "unknown parameter `{k}` for {experiment}; expected one of {}",
                keys.join(", ")
            ))),
            None => Ok(()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.0
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("cannot parse parameter `{key}` value `{v}`")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list.
    pub fn list_or<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> CliResult<Vec<T>> {
        let Some(v) = self.0.get(key) else {
            return Ok(default.to_vec());
        };
        let items: CliResult<Vec<T>> = v
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("cannot parse `{s}` in parameter `{key}`")))
            })
            .collect();
        let items = items?;
        if items.is_empty() {
            return Err(CliError::Usage(format!("parameter `{key}` is empty")));
        }
        Ok(items)
    }
}
