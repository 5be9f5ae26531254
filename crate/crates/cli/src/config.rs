//! Flat TOML config files merged under command-line flags of the same name.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use renewal_sets::{ConeSpec, SummandDistribution};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn read_file(path: &Path) -> Result<Map<String, Value>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let value = serde_json::to_value(table).map_err(|e| ConfigError(e.to_string()))?;
    match value {
        Value::Object(map) => {
            if let Some((key, _)) = map.iter().find(|(_, v)| v.is_object() || v.is_array()) {
                return Err(ConfigError(format!("config must be flat key/value pairs; `{key}` is nested")));
            }
            Ok(map)
        }
        _ => Err(ConfigError("config file must be a table".into())),
    }
}

/// File values overridden by flags, then completed with the command defaults.
pub fn resolve<C: DeserializeOwned>(file: Map<String, Value>, flags: &impl Serialize) -> Result<C, ConfigError> {
    let mut merged = file;
    if let Value::Object(cli) = serde_json::to_value(flags).map_err(|e| ConfigError(e.to_string()))? {
        for (k, v) in cli {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| ConfigError(e.to_string()))
}

/// SHA-256 of the command name and the canonical JSON of the resolved config.
pub fn config_hash(command: &str, resolved: &impl Serialize) -> String {
    let json = serde_json::to_string(resolved).expect("config serializes");
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(json.as_bytes());
    hex::encode(h.finalize())
}

pub fn parse_distribution(s: &str) -> Result<SummandDistribution, ConfigError> {
    s.parse().map_err(|e| ConfigError(format!("distribution `{s}`: {e}")))
}

/// `aperture:THETA[:DIM]` or `angles:LO,HI` (radians).
pub fn parse_cone(s: &str, dim: usize) -> Result<ConeSpec<f64>, ConfigError> {
    let err = |m: String| ConfigError(format!("cone `{s}`: {m}"));
    let (kind, rest) = s.split_once(':').ok_or_else(|| err("expected kind:parameters".into()))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| err(e.to_string()));
    let cone = match kind.trim() {
        "aperture" => {
            let mut parts = rest.split(':');
            let theta = num(parts.next().unwrap_or(""))?;
            let d = match parts.next() {
                Some(v) => v.trim().parse::<usize>().map_err(|e| err(e.to_string()))?,
                None => dim,
            };
            ConeSpec::aperture(d, theta)
        }
        "angles" => {
            let (lo, hi) = rest.split_once(',').ok_or_else(|| err("angles need LO,HI".into()))?;
            ConeSpec::angles(num(lo)?, num(hi)?)
        }
        other => return Err(err(format!("unknown cone kind `{other}`"))),
    };
    cone.map_err(|e| err(e.to_string()))
}

pub fn parse_vector(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| ConfigError(format!("vector `{s}`: {e}"))))
        .collect()
}

pub fn require_seed(seed: Option<u64>) -> Result<u64, ConfigError> {
    seed.ok_or_else(|| ConfigError("--seed is required for statistical commands".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Flags {
        seed: Option<u64>,
        t: Option<f64>,
    }

    #[derive(serde::Deserialize, Debug, PartialEq)]
    #[serde(default, deny_unknown_fields)]
    struct Cfg {
        seed: Option<u64>,
        t: f64,
    }

    impl Default for Cfg {
        fn default() -> Self {
            Self { seed: None, t: 1.0 }
        }
    }

    #[test]
    fn flags_override_file_and_defaults_fill_gaps() {
        let mut file = Map::new();
        file.insert("seed".into(), Value::from(3));
        file.insert("t".into(), Value::from(2.0));
        let c: Cfg = resolve(file.clone(), &Flags { seed: None, t: Some(5.0) }).unwrap();
        assert_eq!(c, Cfg { seed: Some(3), t: 5.0 });
        let c: Cfg = resolve(Map::new(), &Flags { seed: None, t: None }).unwrap();
        assert_eq!(c, Cfg::default());
        file.insert("bogus".into(), Value::from(1));
        assert!(resolve::<Cfg>(file, &Flags { seed: None, t: None }).is_err());
    }

    #[test]
    fn cone_strings() {
        assert_eq!(parse_cone("aperture:0.5", 2).unwrap(), ConeSpec::aperture(2, 0.5).unwrap());
        assert_eq!(parse_cone("aperture:0.5:3", 2).unwrap().dim(), 3);
        assert!(parse_cone("angles:0.1,0.2", 2).is_ok());
        assert!(parse_cone("angles:0.3,0.2", 2).is_err());
        assert!(parse_cone("disc:1", 2).is_err());
    }

    #[test]
    fn hash_depends_on_command_and_values() {
        let a = config_hash("clt", &Flags { seed: Some(1), t: None });
        assert_eq!(a, config_hash("clt", &Flags { seed: Some(1), t: None }));
        assert_ne!(a, config_hash("lil", &Flags { seed: Some(1), t: None }));
        assert_ne!(a, config_hash("clt", &Flags { seed: Some(2), t: None }));
        assert_eq!(a.len(), 64);
    }
}
