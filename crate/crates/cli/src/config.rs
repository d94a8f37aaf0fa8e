//! Experiment configuration files.

use std::path::{Path, PathBuf};

use listop_core::constructions::{hadamard, random_code, random_linear_code, reed_solomon};
use listop_core::ratio::parse_ratio;
use listop_core::{derive_seed, io, CodeMatrix, Ratio64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{invalid, CliError, CliResult};
use crate::scenarios::Scenario;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_code: Option<BaseCodeSpec>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Where the base code comes from. Generated codes draw from
/// `derive_seed(master_seed, "base-code", 0)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseCodeSpec {
    /// A code file; relative paths resolve against the config's directory.
    File(PathBuf),
    Random {
        q: u64,
        n: usize,
        #[serde(rename = "N")]
        big_n: usize,
    },
    RandomLinear { q: u64, n: usize, k: usize },
    /// Evaluation points `0, 1, ..., n - 1`.
    ReedSolomon { q: u64, k: usize, n: usize },
    Hadamard { k: u32 },
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        let dir = path.parent().unwrap_or(Path::new(""));
        if let Some(BaseCodeSpec::File(p)) = &mut cfg.base_code {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        if let Some(out) = &mut cfg.output {
            if out.is_relative() {
                *out = dir.join(&*out);
            }
        }
        Ok(cfg)
    }

    /// Deserializes `params` into the scenario's parameter struct.
    pub fn params<T: DeserializeOwned>(&self) -> CliResult<T> {
        serde_json::from_value(Value::Object(self.params.clone())).map_err(|e| CliError::Validation(format!("params: {e}")))
    }

    pub fn base_code(&self, cap: u128) -> CliResult<CodeMatrix> {
        let spec = self.base_code.as_ref().ok_or_else(|| invalid("base_code", "required by this scenario"))?;
        let seed = derive_seed(self.master_seed, "base-code", 0);
        let code = match spec {
            BaseCodeSpec::File(p) => io::load_code(p),
            BaseCodeSpec::Random { q, n, big_n } => random_code(*q, *n, *big_n, seed),
            BaseCodeSpec::RandomLinear { q, n, k } => random_linear_code(*q, *n, *k, seed, cap),
            BaseCodeSpec::ReedSolomon { q, k, n } => {
                let points: Vec<u64> = (0..*n as u64).collect();
                reed_solomon(*q, *k, &points, cap)
            }
            BaseCodeSpec::Hadamard { k } => hadamard(*k),
        };
        code.map_err(|e| match CliError::from(e) {
            CliError::Validation(m) => invalid("base_code", m),
            other => other,
        })
    }
}

/// A rational parameter written as `"1/4"`, `"0.25"` or `0.25`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioParam(pub Ratio64);

impl<'de> Deserialize<'de> for RatioParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(u64),
            Float(f64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(s) => s,
            Raw::Int(i) => i.to_string(),
            Raw::Float(f) => f.to_string(),
        };
        parse_ratio(&text).map(RatioParam).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RatioParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl RatioParam {
    pub fn f64(self) -> f64 {
        listop_core::ratio::to_f64(self.0)
    }
}
