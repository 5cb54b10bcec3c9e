use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bus::BusParams;
use crate::dynamics::DecoherenceParams;
use crate::error::{Error, Result};
use crate::fluxqubit::FluxQubitParams;
use crate::gates::GateOptions;
use crate::units::{RateConvention, Units};

/// Largest `lambda_s / omega_c` accepted in a sweep grid.
pub const MAX_LAMBDA_S_RATIO: f64 = 0.45;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Bus parameters in units of `omega_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BusConfig {
    pub omega_c: f64,
    pub omega_f: f64,
    pub lambda: f64,
    pub n_ph: usize,
    /// Raise `n_ph` until the coupling sum changes by less than `fock_tol`.
    pub auto_fock: bool,
    pub fock_tol: f64,
    pub max_n_ph: usize,
    pub data_levels: usize,
    pub anharm_ratio: f64,
}

impl Default for BusConfig {
    fn default() -> Self {
        let p = BusParams::default();
        Self {
            omega_c: p.omega_c,
            omega_f: p.omega_f1,
            lambda: p.lambda,
            n_ph: p.n_ph,
            auto_fock: true,
            fock_tol: 0.01,
            max_n_ph: 7,
            data_levels: p.data_levels,
            anharm_ratio: p.anharm_ratio,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluxConfig {
    pub circuit: FluxQubitParams,
    pub f_off: f64,
    pub f_grid: Vec<f64>,
    pub basis_size: usize,
}

impl Default for FluxConfig {
    fn default() -> Self {
        Self {
            circuit: FluxQubitParams::default(),
            f_off: 0.522,
            f_grid: (0..=15).map(|i| 0.5 + 0.002 * i as f64).collect(),
            basis_size: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkConfig {
    pub sizes: Vec<usize>,
    /// `lambda_s / omega_c` at which the pairwise on and off couplings are
    /// computed.
    pub lambda_s_over_omega_c: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            sizes: vec![2, 3, 12, 100],
            lambda_s_over_omega_c: 0.3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub omega_q_ghz: f64,
    pub rate_convention: RateConvention,
    pub bus: BusConfig,
    /// Sweep grid in units of `omega_c`, strictly ascending.
    pub lambda_s_over_omega_c: Vec<f64>,
    pub dissipation: bool,
    pub decoherence: DecoherenceParams,
    /// Dressed states kept in the master equation.
    pub truncation: usize,
    pub flux: FluxConfig,
    pub network: NetworkConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega_q_ghz: 4.0,
            rate_convention: RateConvention::default(),
            bus: BusConfig::default(),
            lambda_s_over_omega_c: vec![0.1, 0.15, 0.2, 0.25, 0.3, 0.32],
            dissipation: true,
            decoherence: DecoherenceParams::default(),
            truncation: 60,
            flux: FluxConfig::default(),
            network: NetworkConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn check_ascending<T: PartialOrd + Copy + std::fmt::Debug>(name: &str, grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name} must not be empty")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "{name} must be strictly ascending ({:?} then {:?})",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_q_ghz.is_finite() && self.omega_q_ghz > 0.0) {
            return Err(Error::Config(format!(
                "omega_q_ghz must be positive, got {}",
                self.omega_q_ghz
            )));
        }
        check_ascending("lambda_s_over_omega_c", &self.lambda_s_over_omega_c)?;
        if let Some(x) = self
            .lambda_s_over_omega_c
            .iter()
            .find(|x| !(0.0..=MAX_LAMBDA_S_RATIO).contains(*x))
        {
            return Err(Error::Config(format!(
                "lambda_s_over_omega_c = {x} is outside [0, {MAX_LAMBDA_S_RATIO}]"
            )));
        }
        self.bus_params(0.0).validate()?;
        if self.bus.max_n_ph < self.bus.n_ph {
            return Err(Error::Config("bus.max_n_ph must be at least bus.n_ph".into()));
        }
        if !(self.bus.fock_tol > 0.0) {
            return Err(Error::Config("bus.fock_tol must be positive".into()));
        }
        self.decoherence.validate()?;
        if self.truncation < 4 {
            return Err(Error::Config("truncation must keep at least four states".into()));
        }
        self.flux.circuit.validate()?;
        check_ascending("flux.f_grid", &self.flux.f_grid)?;
        if let Some(f) = self
            .flux
            .f_grid
            .iter()
            .chain([&self.flux.f_off])
            .find(|f| !(0.0..=1.0).contains(*f))
        {
            return Err(Error::Config(format!("flux value {f} is outside [0, 1]")));
        }
        check_ascending("network.sizes", &self.network.sizes)?;
        if self.network.sizes[0] < 2 {
            return Err(Error::Config("network.sizes entries must be at least 2".into()));
        }
        Ok(())
    }

    /// SHA-256 of the physics settings; the output section is left out.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("output");
        }
        let text = value.to_string();
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn units(&self) -> Units {
        Units {
            omega_q_ghz: self.omega_q_ghz,
            rate_convention: self.rate_convention,
        }
    }

    pub fn bus_params(&self, lambda_s_over_omega_c: f64) -> BusParams {
        let b = &self.bus;
        BusParams {
            omega_q: 1.0,
            omega_c: b.omega_c,
            omega_f1: b.omega_f,
            omega_f2: b.omega_f,
            lambda: b.lambda,
            lambda_s1: lambda_s_over_omega_c * b.omega_c,
            lambda_s2: lambda_s_over_omega_c * b.omega_c,
            n_ph: b.n_ph,
            data_levels: b.data_levels,
            anharm_ratio: b.anharm_ratio,
        }
    }

    pub fn gate_options(&self) -> GateOptions {
        GateOptions {
            decoherence: self.dissipation.then(|| self.decoherence.clone()),
            units: self.units(),
            truncation: self.truncation,
            auto_fock: self.bus.auto_fock,
            fock_tol: self.bus.fock_tol,
            max_n_ph: self.bus.max_n_ph,
            ..GateOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"omega_q": 4}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bus": {"omega_c": 3, "colour": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"decoherence": {"t1": 1}}"#).is_err());
    }

    #[test]
    fn grids_must_ascend() {
        assert!(RunConfig::from_json(r#"{"lambda_s_over_omega_c": []}"#).is_err());
        assert!(RunConfig::from_json(r#"{"lambda_s_over_omega_c": [0.3, 0.2]}"#).is_err());
        assert!(RunConfig::from_json(r#"{"lambda_s_over_omega_c": [0.2, 0.2]}"#).is_err());
        assert!(RunConfig::from_json(r#"{"lambda_s_over_omega_c": [0.5]}"#).is_err());
        assert!(RunConfig::from_json(r#"{"flux": {"f_grid": [0.52, 0.5]}}"#).is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.output.format = OutputFormat::Json;
        assert_eq!(a.hash(), b.hash());
        b.omega_q_ghz = 5.0;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
