use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fitscape_core::theory::LawKind;
use fitscape_core::Params;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Parses a real written either as a decimal or as a fraction `a/b`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            a / b
        }
        None => s.parse().map_err(|e| format!("{s:?}: {e}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not a finite number"))
    }
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_real)
        .collect()
}

fn parse_law_name(s: &str) -> Result<String, String> {
    s.parse::<LawKind>()
        .map(|k| k.name().to_string())
        .map_err(|e| e.to_string())
}

/// Resolves validated law names; an empty list selects `default`.
pub fn resolve_laws(names: &[String], default: &[LawKind]) -> Vec<LawKind> {
    if names.is_empty() {
        return default.to_vec();
    }
    names.iter().filter_map(|n| n.parse().ok()).collect()
}

#[derive(Debug, Parser)]
#[command(
    name = "fitscape",
    version,
    about = "Preferential-attachment birth/death/mutation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Run the population process; write sites.csv and traj.csv.
    Simulate(SimulateArgs),
    /// Per-site population sizes of a final snapshot (plot-ready).
    Fig1(Fig1Args),
    /// Observed and theoretical proportions of sites by size.
    Fig2(HistArgs),
    /// Pool replicates and pick the site-size law that fits best.
    Adjudicate(HistArgs),
    /// Check the monotone coupling of the epsilon-chains.
    CouplingCheck(CouplingArgs),
    /// Uniform-attachment, whole-site-deletion comparison model.
    Bas(HistArgs),
    /// Adjudication in the no-death regime (p = 1).
    PureBirth(PureBirthArgs),
    /// Mean size of a mutant's site over time against the Gamma-ratio prediction.
    MutantGrowth(GrowthArgs),
    /// Mean-field phase table over a grid of birth probabilities.
    Meanfield(MeanfieldArgs),
    /// Tables of the closed-form site-size laws.
    Theory(TheoryArgs),
    /// Re-run the command recorded in a manifest.json.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Birth probability.
    #[arg(long, default_value = "0.75", value_parser = parse_real)]
    pub p: f64,
    /// Mutation probability.
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r: f64,
    /// Step horizon.
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

impl ModelArgs {
    pub fn params(&self) -> CliResult<Params> {
        Params::new(self.p, self.r, self.steps, self.seed)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    /// Trajectory cadence in steps.
    #[arg(long, default_value_t = 100)]
    pub sample_every: u64,
    /// Split fitness for the L/R columns (default: critical fitness, capped at 1).
    #[arg(long, value_parser = parse_real)]
    pub fc_override: Option<f64>,
    /// Steps run before recording starts.
    #[arg(long, default_value_t = 0)]
    pub burn_in: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Fig1Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    pub burn_in: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 8)]
    pub replicates: u64,
    /// Sizes at or above this value are pooled into one bin.
    #[arg(long, default_value_t = 50)]
    pub k_max: u64,
    /// Comma-separated laws: theorem, consistent, pure-birth, bas-geometric.
    #[arg(long, value_delimiter = ',', value_parser = parse_law_name)]
    pub laws: Vec<String>,
    /// Count every site instead of only those above the critical fitness.
    #[arg(long)]
    pub all_sites: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PureBirthArgs {
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r: f64,
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub replicates: u64,
    #[arg(long, default_value_t = 50)]
    pub k_max: u64,
    #[arg(long, value_delimiter = ',', value_parser = parse_law_name)]
    pub laws: Vec<String>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CouplingArgs {
    #[arg(long, default_value = "0.75", value_parser = parse_real)]
    pub p: f64,
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r: f64,
    /// Split fitness of the chains.
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub f: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Independent coupled runs.
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    /// Number of equally spaced epsilon values on [0, 1].
    #[arg(long, default_value_t = 5)]
    pub grid_size: usize,
    /// Explicit comma-separated epsilon grid (overrides --grid-size).
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    pub grid: Vec<f64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Negative control: use a layout that does not preserve the ordering.
    #[arg(long, hide = true)]
    pub broken_layout: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GrowthArgs {
    #[arg(long, default_value = "1", value_parser = parse_real)]
    pub p: f64,
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r: f64,
    /// Birth step of the followed mutant.
    #[arg(long, default_value_t = 100)]
    pub birth_step: u64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub replicates: u64,
    /// Follow the first mutant born at or after the birth step instead of
    /// requiring one exactly at it.
    #[arg(long)]
    pub first_after: bool,
    /// Only follow mutants fitter than this (default: the critical fitness when p < 1).
    #[arg(long, value_parser = parse_real)]
    pub min_fitness: Option<f64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MeanfieldArgs {
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r: f64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.45,0.55,4/7,0.6,0.65,2/3,0.7,0.8,0.9",
        value_parser = parse_real
    )]
    pub p_grid: Vec<f64>,
    /// Also fit exponents from simulated runs.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub replicates: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TheoryArgs {
    #[arg(long, default_value = "0.75", value_parser = parse_real)]
    pub p: f64,
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r: f64,
    #[arg(long, default_value_t = 50)]
    pub k_max: u64,
    #[arg(long, value_delimiter = ',', value_parser = parse_law_name)]
    pub laws: Vec<String>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write into this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Fig1(_) => "fig1",
            Command::Fig2(_) => "fig2",
            Command::Adjudicate(_) => "adjudicate",
            Command::CouplingCheck(_) => "coupling-check",
            Command::Bas(_) => "bas",
            Command::PureBirth(_) => "pure-birth",
            Command::MutantGrowth(_) => "mutant-growth",
            Command::Meanfield(_) => "meanfield",
            Command::Theory(_) => "theory",
            Command::Replay(_) => "replay",
        }
    }

    pub fn out_dir(&self) -> Option<&PathBuf> {
        match self {
            Command::Simulate(a) => Some(&a.model.out),
            Command::Fig1(a) => Some(&a.model.out),
            Command::Fig2(a) | Command::Adjudicate(a) | Command::Bas(a) => Some(&a.model.out),
            Command::CouplingCheck(a) => Some(&a.out),
            Command::PureBirth(a) => Some(&a.out),
            Command::MutantGrowth(a) => Some(&a.out),
            Command::Meanfield(a) => Some(&a.out),
            Command::Theory(a) => Some(&a.out),
            Command::Replay(_) => None,
        }
    }

    pub fn set_out_dir(&mut self, dir: PathBuf) {
        match self {
            Command::Simulate(a) => a.model.out = dir,
            Command::Fig1(a) => a.model.out = dir,
            Command::Fig2(a) | Command::Adjudicate(a) | Command::Bas(a) => a.model.out = dir,
            Command::CouplingCheck(a) => a.out = dir,
            Command::PureBirth(a) => a.out = dir,
            Command::MutantGrowth(a) => a.out = dir,
            Command::Meanfield(a) => a.out = dir,
            Command::Theory(a) => a.out = dir,
            Command::Replay(_) => {}
        }
    }

    /// `(seed, replicates)` recorded in the manifest.
    pub fn seeding(&self) -> (Option<u64>, Option<u64>) {
        match self {
            Command::Simulate(a) => (Some(a.model.seed), Some(a.replicates)),
            Command::Fig1(a) => (Some(a.model.seed), Some(1)),
            Command::Fig2(a) | Command::Adjudicate(a) | Command::Bas(a) => {
                (Some(a.model.seed), Some(a.replicates))
            }
            Command::CouplingCheck(a) => (Some(a.seed), Some(a.replicates)),
            Command::PureBirth(a) => (Some(a.seed), Some(a.replicates)),
            Command::MutantGrowth(a) => (Some(a.seed), Some(a.replicates)),
            Command::Meanfield(a) => (Some(a.seed), Some(a.replicates)),
            Command::Theory(_) | Command::Replay(_) => (None, None),
        }
    }
}
