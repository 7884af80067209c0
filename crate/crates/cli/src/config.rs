// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Run configuration: one serializable record per invocation.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use kdense::null_models::{DkOrder, DEFAULT_INSTANCES, DEFAULT_SWAP_FACTOR};
use kdense::profiles::DEFAULT_BIN_WIDTH;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Instances used by the core analysis when none are configured.
pub const CORE_DEFAULT_INSTANCES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    #[default]
    Decompose,
    Compare,
    Null,
    Core,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    /// Drop edges last seen before this epoch.
    pub cutoff: Option<i64>,
    pub bin_width: f64,
    pub d: u8,
    /// `None` picks the command default.
    pub instances: Option<usize>,
    pub seed: u64,
    pub swap_factor: f64,
    pub out: PathBuf,
    pub format: Format,
    pub relationships: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub ranks: Vec<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::default(),
            inputs: Vec::new(),
            cutoff: None,
            bin_width: DEFAULT_BIN_WIDTH,
            d: 0,
            instances: None,
            seed: 0,
            swap_factor: DEFAULT_SWAP_FACTOR,
            out: PathBuf::from("out"),
            format: Format::default(),
            relationships: None,
            weights: None,
            ranks: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_file(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn instance_count(&self) -> usize {
        self.instances.unwrap_or(match self.command {
            Command::Core => CORE_DEFAULT_INSTANCES,
            _ => DEFAULT_INSTANCES,
        })
    }

    pub fn dk_order(&self) -> anyhow::Result<DkOrder> {
        DkOrder::try_from(self.d).map_err(|e| anyhow::anyhow!(e))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        match self.command {
            Command::Compare => ensure!(
                !self.inputs.is_empty(),
                "compare needs at least one --input"
            ),
            _ => ensure!(
                self.inputs.len() == 1,
                "{:?} takes exactly one --input, got {}",
                self.command,
                self.inputs.len()
            ),
        }
        if self.command == Command::Cone && self.relationships.is_none() {
            bail!("cone needs --relationships");
        }
        let paths = self
            .inputs
            .iter()
            .chain(&self.relationships)
            .chain(&self.weights)
            .chain(&self.ranks);
        for p in paths {
            ensure!(p.is_file(), "no such file: {}", p.display());
        }
        ensure!(
            self.bin_width > 0.0 && self.bin_width <= 1.0,
            "bin width must be in (0, 1], got {}",
            self.bin_width
        );
        self.dk_order()?;
        ensure!(self.instance_count() >= 1, "instances must be at least 1");
        ensure!(
            self.swap_factor > 0.0 && self.swap_factor.is_finite(),
            "swap factor must be positive, got {}",
            self.swap_factor
        );
        Ok(())
    }

    /// SHA-256 over the configuration with the output directory left out, so
    /// the same analysis written to two places hashes the same.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = PathBuf::new();
        c.instances = Some(self.instance_count());
        let text = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
