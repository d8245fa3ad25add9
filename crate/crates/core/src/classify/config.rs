use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::birmaps::{DEFAULT_DEGREE_BOUND, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};

/// Optional JSON config; missing keys take the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub order_cap: u64,
    pub degree_bound: u32,
    pub root_degree_bound: usize,
    /// Largest conductor accepted for input scalars.
    pub conductor_cap: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order_cap: DEFAULT_ORDER_CAP,
            degree_bound: DEFAULT_DEGREE_BOUND,
            root_degree_bound: 3,
            conductor_cap: 1000,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn check_conductor(&self, n: u32) -> Result<()> {
        if n > self.conductor_cap {
            return Err(Error::CapExceeded(format!("conductor {n} above cap {}", self.conductor_cap)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_config() {
        let c = Config::from_json(r#"{"order_cap": 10}"#).unwrap();
        assert_eq!(c.order_cap, 10);
        assert_eq!(c.degree_bound, DEFAULT_DEGREE_BOUND);
        assert!(Config::from_json(r#"{"order_kap": 10}"#).is_err());
        assert!(Config::from_json("[").is_err());
        assert!(Config::default().check_conductor(2000).is_err());
    }
}
