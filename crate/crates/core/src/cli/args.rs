use std::path::PathBuf;

use clap::Parser;

use super::commands::Command;
use super::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "pibus",
    version,
    about = "Quantum-bus coupling, gate and switch calculations"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Replaces the sweep grid (units of omega_c), e.g. `--lambda-s 0.1,0.2`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lambda_s: Option<Vec<f64>>,
    #[arg(long)]
    pub omega_q_ghz: Option<f64>,
    /// Fixed Fock truncation per resonator; disables the automatic policy.
    #[arg(long)]
    pub fock: Option<usize>,
    /// Data-qubit levels.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub levels: Option<u8>,
    #[arg(long)]
    pub no_dissipation: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl Args {
    /// The configuration file with command-line overrides applied.
    pub fn effective_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        self.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(grid) = &self.lambda_s {
            cfg.lambda_s_over_omega_c = grid.clone();
        }
        if let Some(w) = self.omega_q_ghz {
            cfg.omega_q_ghz = w;
        }
        if let Some(n) = self.fock {
            cfg.bus.n_ph = n;
            cfg.bus.max_n_ph = cfg.bus.max_n_ph.max(n);
            cfg.bus.auto_fock = false;
        }
        if let Some(l) = self.levels {
            cfg.bus.data_levels = l as usize;
        }
        if self.no_dissipation {
            cfg.dissipation = false;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
    }
}

/// Parses, runs and writes the table. Returns whether every row succeeded.
pub fn main_with(args: &Args) -> Result<bool> {
    let cfg = args.effective_config()?;
    let table = super::run(args.command, &cfg)?;
    match &cfg.output.path {
        Some(path) => {
            let mut file = std::io::BufWriter::new(
                std::fs::File::create(path)
                    .map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))?,
            );
            table.write(cfg.output.format, &mut file)?;
        }
        None => table.write(cfg.output.format, &mut std::io::stdout().lock())?,
    }
    for (i, row) in table.rows.iter().enumerate() {
        for m in &row.messages {
            log::warn!("row {i} ({}): {m}", row.status.as_str());
        }
    }
    Ok(!table.has_errors())
}
