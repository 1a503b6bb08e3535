//! Plain-text `key=value` run configuration. Command-line flags win over
//! file values; keys outside the flag vocabulary are rejected.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};

const KNOWN_KEYS: [&str; 13] = [
    "q", "two-l", "x", "profile", "t", "a", "exponent", "depth", "n", "seed", "out", "format",
    "precision",
];

/// Parsed config file: ordered `key = value` entries, comments and blank
/// lines skipped.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    entries: Vec<(String, String)>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file '{}'", path.display()))?;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {} is not key=value: '{line}'", lineno + 1);
            };
            let k = k.trim().to_string();
            if !KNOWN_KEYS.contains(&k.as_str()) {
                bail!(
                    "unknown config key '{k}' (known keys: {})",
                    KNOWN_KEYS.join(", ")
                );
            }
            entries.push((k, v.trim().to_string()));
        }
        Ok(Self { entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        // last occurrence wins, like flags repeated on a command line
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// One resolved parameter source: flag value if given, else config file
/// value, else the command's default.
#[derive(Debug, Clone)]
pub struct Resolver {
    file: FileConfig,
}

impl Resolver {
    pub fn new(config_path: Option<&PathBuf>) -> Result<Self> {
        let file = match config_path {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Ok(Self { file })
    }

    /// Flag wins; otherwise the config file value is parsed as `T`.
    pub fn typed<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key '{key}': cannot parse '{raw}': {e}")),
        }
    }

    pub fn string(&self, key: &str, flag: Option<&String>) -> Option<String> {
        flag.cloned().or_else(|| self.file.get(key).map(str::to_string))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!(
            "brickdist-config-test-{}-{}.cfg",
            std::process::id(),
            content.len()
        ));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_and_merges() {
        let path = write_temp("# comment\nq = 3\ntwo-l=12\nformat = json\n");
        let r = Resolver::new(Some(&path)).unwrap();
        assert_eq!(r.typed::<u32>("q", None).unwrap(), Some(3));
        assert_eq!(r.typed::<u32>("q", Some(5)).unwrap(), Some(5));
        assert_eq!(r.typed::<u32>("two-l", None).unwrap(), Some(12));
        assert_eq!(r.string("format", None).as_deref(), Some("json"));
        assert_eq!(r.string("profile", None), None);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        let path = write_temp("qq = 3\n");
        assert!(FileConfig::load(&path).is_err());
        std::fs::remove_file(&path).unwrap();
        let path = write_temp("just words\n");
        assert!(FileConfig::load(&path).is_err());
        std::fs::remove_file(path).unwrap();
    }
}
