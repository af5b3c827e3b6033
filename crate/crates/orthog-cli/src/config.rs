//! Strict, line-oriented `key = value` config files with one `[section]`
//! per experiment. Unknown sections or keys abort with the line number, so
//! committed experiment recipes stay diff-checkable.

use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct Config {
    /// section -> key -> (value, line number)
    sections: BTreeMap<String, BTreeMap<String, (String, usize)>>,
}

/// Keys each experiment section accepts.
pub fn allowed_keys(section: &str) -> Option<&'static [&'static str]> {
    match section {
        "orthocheck" => Some(&["family", "nmax", "order", "tolerance", "out"]),
        "gnorm" => Some(&["family", "trunc", "order", "tolerance", "out"]),
        "transfer" => Some(&[
            "direction",
            "alpha",
            "function",
            "sweep",
            "trunc",
            "order",
            "kmax",
            "tolerance",
            "out",
        ]),
        "linearize" => Some(&["alpha", "beta", "m", "n", "tolerance", "out"]),
        "kernel" => Some(&[
            "alpha",
            "beta",
            "t",
            "grid",
            "trunc",
            "order",
            "tolerance",
            "out",
        ]),
        "ratios" => Some(&["family", "p", "trunc", "order", "tolerance", "out"]),
        _ => None,
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, (String, usize)>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim().to_string();
                if allowed_keys(&name).is_none() {
                    bail!("line {lineno}: unknown section [{name}]");
                }
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {lineno}: expected `key = value`, got `{line}`");
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            let Some(section) = current.clone() else {
                bail!("line {lineno}: `{key}` appears before any [section]");
            };
            let allowed = allowed_keys(&section).unwrap();
            if !allowed.contains(&key.as_str()) {
                bail!(
                    "line {lineno}: unknown key `{key}` in [{section}] (allowed: {})",
                    allowed.join(", ")
                );
            }
            let entry = sections.get_mut(&section).unwrap();
            if entry.contains_key(&key) {
                bail!("line {lineno}: duplicate key `{key}` in [{section}]");
            }
            entry.insert(key, (value, lineno));
        }
        Ok(Config { sections })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn section(&self, name: &str) -> Section<'_> {
        Section {
            name: name.to_string(),
            entries: self.sections.get(name),
        }
    }
}

pub struct Section<'a> {
    name: String,
    entries: Option<&'a BTreeMap<String, (String, usize)>>,
}

impl<'a> Section<'a> {
    pub fn get(&self, key: &str) -> Option<&'a str> {
        self.entries
            .and_then(|m| m.get(key))
            .map(|(v, _)| v.as_str())
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, |v| v.parse::<f64>().map_err(anyhow::Error::from))
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse_with(key, |v| v.parse::<usize>().map_err(anyhow::Error::from))
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.parse_with(key, parse_f64_list)
    }

    fn parse_with<T>(&self, key: &str, f: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let line = self.entries.unwrap().get(key).unwrap().1;
                Ok(Some(f(v).with_context(|| {
                    format!("line {line}: bad value for `{key}` in [{}]", self.name)
                })?))
            }
        }
    }
}

pub fn parse_f64_list(v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(anyhow::Error::from))
        .collect()
}
