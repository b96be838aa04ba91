//! Optional flat key-value JSON config. Values act as defaults; explicit
//! command-line flags override them.

use serde_json::Value;
use std::path::Path;
use symqcc_core::error::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub out: Option<String>,
    pub trials: Option<usize>,
    pub randomness: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read config {}: {e}", path.display())))?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| Error::input(format!("config is not valid JSON: {e}")))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::input("config must be a flat JSON object"))?;
        let mut cfg = FileConfig::default();
        for (key, value) in obj {
            match key.as_str() {
                "seed" => cfg.seed = value.as_u64(),
                "mode" => cfg.mode = value.as_str().map(String::from),
                "out" => cfg.out = value.as_str().map(String::from),
                "trials" => cfg.trials = value.as_u64().map(|v| v as usize),
                "randomness" => cfg.randomness = value.as_str().map(String::from),
                other => return Err(Error::input(format!("unknown config key \"{other}\""))),
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_known_keys() {
        let dir = std::env::temp_dir().join("symqcc-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"seed": 9, "mode": "ledger", "trials": 50}"#).unwrap();
        let cfg = FileConfig::load(&path).unwrap();
        assert_eq!(cfg.seed, Some(9));
        assert_eq!(cfg.mode.as_deref(), Some("ledger"));
        assert_eq!(cfg.trials, Some(50));
        std::fs::write(&path, r#"{"bogus": 1}"#).unwrap();
        assert!(FileConfig::load(&path).is_err());
    }
}
