//! `key = value` configuration files. Blank lines and `#` comments are
//! skipped; command-line flags and environment variables take precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};

pub const KEYS: &[&str] = &["data_dir", "jobs", "seed", "groups", "trees", "permutations", "rows_per_class", "top"];

#[derive(Debug, Default, Clone)]
pub struct Config {
    path: Option<PathBuf>,
    values: BTreeMap<String, (usize, String)>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text, Some(path))
    }

    pub fn parse(text: &str, path: Option<&Path>) -> Result<Self> {
        let name = path.map(|p| p.display().to_string()).unwrap_or_else(|| "config".into());
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("{name}:{}: expected `key = value`", i + 1);
            };
            let k = k.trim();
            if !KEYS.contains(&k) {
                bail!("{name}:{}: unknown key `{k}` (known: {})", i + 1, KEYS.join(", "));
            }
            values.insert(k.to_string(), (i + 1, v.trim().to_string()));
        }
        Ok(Config { path: path.map(Path::to_path_buf), values })
    }

    /// `flag` if given, else the parsed config value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e| {
                let name = self.path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "config".into());
                anyhow::anyhow!("{name}:{line}: invalid value for `{key}`: {e}")
            }),
        }
    }
}
