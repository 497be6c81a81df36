//! Defaults from a `key = value` file and environment overrides.
//!
//! Keys: `terms` (truncation bound), `grid` (exponent grid), `cyclotomic_order`.
//! Lines starting with `#` are comments. The environment variables
//! `MLDO_TERMS`, `MLDO_GRID` and `MLDO_CYCLOTOMIC_ORDER` override the file;
//! `MLDO_CONFIG` names the file when `--config` is absent.

use std::collections::HashMap;
use std::path::Path;

use mldo_core::scalar::{int, parse_rat};
use mldo_core::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct Defaults {
    pub terms: Rat,
    pub grid: u64,
    pub cyclotomic_order: u64,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            terms: int(10),
            grid: 48,
            cyclotomic_order: 48,
        }
    }
}

impl Defaults {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        let positive = |v: &str| v.parse::<u64>().ok().filter(|&n| n > 0).ok_or(format!("{key}: expected a positive integer, got {v:?}"));
        match key {
            "terms" => self.terms = parse_rat(value).map_err(|e| format!("terms: {e}"))?,
            "grid" => self.grid = positive(value)?,
            "cyclotomic_order" => self.cyclotomic_order = positive(value)?,
            _ => return Err(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    pub fn parse_file(&mut self, text: &str) -> Result<(), String> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(format!("line {}: expected key = value", n + 1))?;
            self.set(k.trim(), v).map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(())
    }

    /// Built-in values, then the config file, then the environment.
    pub fn load(path: Option<&Path>, env: &HashMap<String, String>) -> Result<Self, String> {
        let mut d = Defaults::default();
        let from_env = env.get("MLDO_CONFIG").map(Path::new);
        if let Some(p) = path.or(from_env) {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            d.parse_file(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        for (var, key) in [("MLDO_TERMS", "terms"), ("MLDO_GRID", "grid"), ("MLDO_CYCLOTOMIC_ORDER", "cyclotomic_order")] {
            if let Some(v) = env.get(var) {
                d.set(key, v).map_err(|e| format!("{var}: {e}"))?;
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let dir = std::env::temp_dir().join(format!("mldo-config-{}", std::process::id()));
        std::fs::write(&dir, "# defaults\nterms = 7\ngrid=24\n").unwrap();
        let mut env = HashMap::new();
        let d = Defaults::load(Some(&dir), &env).unwrap();
        assert_eq!((d.terms.clone(), d.grid, d.cyclotomic_order), (int(7), 24, 48));
        env.insert("MLDO_GRID".to_string(), "72".to_string());
        assert_eq!(Defaults::load(Some(&dir), &env).unwrap().grid, 72);
        std::fs::remove_file(&dir).unwrap();
    }

    #[test]
    fn rejects_bad_lines() {
        let mut d = Defaults::default();
        assert!(d.parse_file("terms 7").is_err());
        assert!(d.parse_file("colour = red").is_err());
        assert!(d.parse_file("grid = 0").is_err());
    }
}
