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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kdense_cli::{run, Command, Format, RunConfig};

/// k-dense decomposition analyses of AS-level topology snapshots.
#[derive(Parser)]
#[command(name = "kdense", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decompose one snapshot and write its profiles and summaries.
    Decompose(Opts),
    /// Compare profiles and growth across snapshots.
    Compare(Opts),
    /// Decompose a dK-random ensemble built from one snapshot.
    Null(Opts),
    /// Analyse the densest core against 0K and 1K ensembles.
    Core(Opts),
    /// Customer cones and rank overlaps of the densest set.
    Cone(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    /// TOML file with run settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Snapshot edge list (repeatable).
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    /// Drop edges last seen before this epoch.
    #[arg(long, allow_negative_numbers = true)]
    cutoff: Option<i64>,
    #[arg(long)]
    bin_width: Option<f64>,
    /// dK order of the null model.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    d: Option<u8>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    swap_factor: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// AS relationship file (`A|B|r` lines).
    #[arg(long)]
    relationships: Option<PathBuf>,
    /// Per-AS weights (`as_token,weight`).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Ranked AS list (`rank,as_token,score`, repeatable).
    #[arg(long = "ranks")]
    ranks: Vec<PathBuf>,
}

impl Opts {
    fn into_config(self, command: Command) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_toml_file(path)?,
            None => RunConfig::default(),
        };
        cfg.command = command;
        if !self.inputs.is_empty() {
            cfg.inputs = self.inputs;
        }
        if !self.ranks.is_empty() {
            cfg.ranks = self.ranks;
        }
        cfg.cutoff = self.cutoff.or(cfg.cutoff);
        cfg.bin_width = self.bin_width.unwrap_or(cfg.bin_width);
        cfg.d = self.d.unwrap_or(cfg.d);
        cfg.instances = self.instances.or(cfg.instances);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.swap_factor = self.swap_factor.unwrap_or(cfg.swap_factor);
        cfg.out = self.out.unwrap_or(cfg.out);
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        cfg.relationships = self.relationships.or(cfg.relationships);
        cfg.weights = self.weights.or(cfg.weights);
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Decompose(o) => (Command::Decompose, o),
        Cmd::Compare(o) => (Command::Compare, o),
        Cmd::Null(o) => (Command::Null, o),
        Cmd::Core(o) => (Command::Core, o),
        Cmd::Cone(o) => (Command::Cone, o),
    };
    match opts.into_config(command).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
