use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use fwb_core::field_linalg::{Field, FieldDesc};

pub const CONFIG_ENV: &str = "FWB_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Guards {
    /// Largest algebra or module dimension accepted from input.
    pub max_dim: usize,
    /// Largest number of parameter points in an enumerated family.
    pub max_family: usize,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_dim: 4096,
            max_family: 1_000_000,
            workers: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkbenchConfig {
    pub seed: u64,
    pub guards: Guards,
    pub output_dir: PathBuf,
    /// Optional JSON list of field descriptors checked against the built-in
    /// moduli before anything runs.
    pub field_table: Option<PathBuf>,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        WorkbenchConfig {
            seed: 0x5eed,
            guards: Guards::default(),
            output_dir: PathBuf::from("fwb-out"),
            field_table: None,
        }
    }
}

impl WorkbenchConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.guards;
        if g.max_dim == 0 || g.max_family == 0 {
            bail!("guards must be positive");
        }
        if let Some(path) = &self.field_table {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading field table {}", path.display()))?;
            let table: Vec<FieldDesc> = serde_json::from_str(&text).context("parsing field table")?;
            for d in table {
                let builtin = Field::new(d.p, d.e)?;
                if *builtin.desc() != d {
                    bail!("field table entry for F_{}^{} disagrees with the built-in modulus", d.p, d.e);
                }
            }
        }
        Ok(())
    }
}
