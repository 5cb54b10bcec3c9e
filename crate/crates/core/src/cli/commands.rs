use rayon::prelude::*;

use super::config::RunConfig;
use super::table::{Row, Table};
use crate::bus::{BusParams, ModelVariant};
use crate::error::{Error, Result};
use crate::fluxqubit::{flux_spectrum, flux_sweep, switch_analysis_with_ratios, switch_ratios};
use crate::gates::{direct_gate_pipeline, gate_pipeline};
use crate::network::{
    coefficient_sum_on_qubit, interaction_hamiltonian, network_on_off_ratio, residual_on_last_qubit, ArchitectureState,
    MAX_EXPLICIT_QUBITS,
};
use crate::spectral::{converge_fock, effective_coupling_split, effective_coupling_sum, effective_coupling_sw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    SweepCoupling,
    GateFidelity,
    FluxSweep,
    Switch,
    Crosstalk,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SweepCoupling => "sweep-coupling",
            Command::GateFidelity => "gate-fidelity",
            Command::FluxSweep => "flux-sweep",
            Command::Switch => "switch",
            Command::Crosstalk => "crosstalk",
        }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let (columns, rows) = match command {
        Command::SweepCoupling => sweep_coupling(cfg),
        Command::GateFidelity => gate_fidelity(cfg),
        Command::FluxSweep => flux_sweep_rows(cfg),
        Command::Switch => switch(cfg),
        Command::Crosstalk => crosstalk(cfg),
    };
    Ok(Table {
        command: command.name().to_string(),
        columns,
        rows,
        metadata: metadata(cfg),
    })
}

fn metadata(cfg: &RunConfig) -> Vec<(String, String)> {
    vec![
        ("pibus_version".into(), env!("CARGO_PKG_VERSION").into()),
        ("config_sha256".into(), cfg.hash()),
        (
            "units".into(),
            format!(
                "energies and couplings in units of omega_q = 2 pi x {} GHz unless suffixed _ghz (cycle frequency); times in ns",
                cfg.omega_q_ghz
            ),
        ),
        (
            "rate_convention".into(),
            serde_json::to_value(cfg.rate_convention)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        ),
        ("dissipation".into(), cfg.dissipation.to_string()),
    ]
}

/// Bus parameters at a grid point with the Fock policy applied. A failed
/// policy keeps the configured truncation and is reported.
fn bus_at(cfg: &RunConfig, ratio: f64) -> (BusParams, Option<Error>) {
    let p = cfg.bus_params(ratio);
    if !cfg.bus.auto_fock {
        return (p, None);
    }
    match converge_fock(&p, cfg.bus.fock_tol, cfg.bus.max_n_ph) {
        Ok(fc) => {
            let n = p.n_ph.max(fc.n_ph);
            (p.with_n_ph(n), None)
        }
        Err(e) => (p, Some(e)),
    }
}

fn note(row: &mut Row, err: Option<Error>) {
    if let Some(e) = err {
        row.try_set(0, Err(e));
    }
}

fn sweep_coupling(cfg: &RunConfig) -> (Vec<&'static str>, Vec<Row>) {
    let columns = vec![
        "lambda_s_over_omega_c",
        "lambda_s",
        "n_ph",
        "lambda_eff_sum",
        "lambda_eff_sum_cr",
        "lambda_eff_split_full",
        "lambda_eff_split_rwa",
        "lambda_eff_sw",
        "full_over_rwa",
        "lambda_eff_sum_ghz",
        "lambda_eff_split_full_ghz",
    ];
    let ghz = cfg.omega_q_ghz;
    let rows = cfg
        .lambda_s_over_omega_c
        .par_iter()
        .map(|&r| {
            let (p, fock_err) = bus_at(cfg, r);
            let mut row = Row::new(columns.len());
            row.set(0, r);
            note(&mut row, fock_err);
            row.set(1, p.lambda_s1);
            row.set(2, p.n_ph as f64);
            match effective_coupling_sum(&p) {
                Ok(c) => {
                    let s = c.lambda_eff_sum.unwrap_or(f64::NAN);
                    row.set(3, s);
                    row.set(4, c.lambda_eff_sum_cr.unwrap_or(f64::NAN));
                    row.set(9, s * ghz);
                }
                Err(e) => row.try_set(3, Err(e)),
            }
            let split = |v| effective_coupling_split(&p, v).map(|c| c.lambda_xx_split.unwrap_or(f64::NAN));
            let full = split(ModelVariant::Full);
            let rwa = split(ModelVariant::BusRwa);
            if let (Ok(f), Ok(w)) = (&full, &rwa) {
                if *w != 0.0 {
                    row.set(8, (f / w).abs());
                }
            }
            if let Ok(f) = &full {
                row.set(10, f * ghz);
            }
            row.try_set(5, full);
            row.try_set(6, rwa);
            row.try_set(7, effective_coupling_sw(&p));
            row
        })
        .collect();
    (columns, rows)
}

fn gate_fidelity(cfg: &RunConfig) -> (Vec<&'static str>, Vec<Row>) {
    let columns = vec![
        "lambda_s_over_omega_c",
        "n_ph",
        "f_avg_bus",
        "f_avg_direct",
        "t_gate_ns",
        "leakage",
        "theta_a",
        "theta_b",
        "lambda_xx",
        "lambda_xx_ghz",
        "f_uncompensated_bus",
    ];
    let opts = cfg.gate_options();
    let rows = cfg
        .lambda_s_over_omega_c
        .par_iter()
        .map(|&r| match gate_pipeline(&cfg.bus_params(r), &opts) {
            Ok(g) => {
                let mut row = Row::new(columns.len());
                row.set(0, r);
                row.set(1, g.n_ph as f64);
                row.set(2, g.f_avg);
                row.try_set(3, direct_gate_pipeline(g.lambda_xx, 1.0, &opts).map(|d| d.f_avg));
                row.set(4, g.t_gate_ns);
                row.set(5, g.leakage);
                row.set(6, g.theta_a);
                row.set(7, g.theta_b);
                row.set(8, g.lambda_xx);
                row.set(9, g.lambda_xx * cfg.omega_q_ghz);
                row.set(10, g.f_uncompensated);
                row
            }
            Err(e) => Row::failed(columns.len(), &[r], &e),
        })
        .collect();
    (columns, rows)
}

fn flux_sweep_rows(cfg: &RunConfig) -> (Vec<&'static str>, Vec<Row>) {
    let columns = vec!["f", "omega_f", "omega_f_ghz", "dipole", "dipole_over_on"];
    let fc = &cfg.flux;
    let on = flux_spectrum(&fc.circuit.at_flux(0.5), fc.basis_size);
    let rows = flux_sweep(&fc.circuit, &fc.f_grid, fc.basis_size)
        .into_iter()
        .zip(&fc.f_grid)
        .map(|(res, &f)| match res {
            Ok(s) => {
                let mut row = Row::new(columns.len());
                row.set(0, f);
                row.set(1, s.omega_f_ghz / cfg.omega_q_ghz);
                row.set(2, s.omega_f_ghz);
                row.set(3, s.dipole);
                row.try_set(4, on.as_ref().map(|o| s.dipole / o.dipole).map_err(clone_err));
                row
            }
            Err(e) => Row::failed(columns.len(), &[f], &e),
        })
        .collect();
    (columns, rows)
}

fn clone_err(e: &Error) -> Error {
    Error::Numerical(e.to_string())
}

fn switch(cfg: &RunConfig) -> (Vec<&'static str>, Vec<Row>) {
    let columns = vec![
        "lambda_s_over_omega_c",
        "f_off",
        "freq_ratio",
        "dipole_ratio",
        "omega_f_off_ghz",
        "lambda_eff_on",
        "lambda_eff_off",
        "on_off_ratio",
        "single_off_residual",
        "single_off_on_off_ratio",
        "partner_shift",
        "partner_shift_ghz",
    ];
    let fc = &cfg.flux;
    let ratios = switch_ratios(&fc.circuit.at_flux(fc.f_off), fc.basis_size);
    let rows = cfg
        .lambda_s_over_omega_c
        .par_iter()
        .map(|&r| {
            let (on, off) = match &ratios {
                Ok(x) => x,
                Err(e) => return Row::failed(columns.len(), &[r, fc.f_off], &clone_err(e)),
            };
            let (p, fock_err) = bus_at(cfg, r);
            let freq_ratio = off.omega_f / on.omega_f;
            let dipole_ratio = off.dipole / on.dipole;
            match switch_analysis_with_ratios(&p, freq_ratio, dipole_ratio) {
                Ok(s) => {
                    let mut row = Row::new(columns.len());
                    let vals = [
                        r,
                        fc.f_off,
                        freq_ratio,
                        dipole_ratio,
                        off.omega_f_ghz,
                        s.lambda_eff_on,
                        s.lambda_eff_off,
                        s.on_off_ratio,
                        s.single_off.residual,
                        s.single_off.on_off_ratio,
                        s.single_off.partner_shift,
                        s.single_off.partner_shift * cfg.omega_q_ghz,
                    ];
                    for (i, v) in vals.into_iter().enumerate() {
                        row.set(i, v);
                    }
                    note(&mut row, fock_err);
                    row
                }
                Err(e) => Row::failed(columns.len(), &[r, fc.f_off], &e),
            }
        })
        .collect();
    (columns, rows)
}

fn crosstalk(cfg: &RunConfig) -> (Vec<&'static str>, Vec<Row>) {
    let columns = vec![
        "n",
        "lambda_s_over_omega_c",
        "lambda_eff_on",
        "lambda_eff_off",
        "residual_last_qubit",
        "residual_last_qubit_ghz",
        "explicit_coefficient_sum",
        "network_on_off_ratio",
        "pairwise_on_off_ratio",
    ];
    let fc = &cfg.flux;
    let ls = cfg.network.lambda_s_over_omega_c;
    let pair = switch_ratios(&fc.circuit.at_flux(fc.f_off), fc.basis_size).and_then(|(on, off)| {
        let (p, _) = bus_at(cfg, ls);
        switch_analysis_with_ratios(&p, off.omega_f / on.omega_f, off.dipole / on.dipole)
    });
    let rows = cfg
        .network
        .sizes
        .par_iter()
        .map(|&n| {
            let nf = n as f64;
            let s = match &pair {
                Ok(s) => s,
                Err(e) => return Row::failed(columns.len(), &[nf, ls], &clone_err(e)),
            };
            let mut row = Row::new(columns.len());
            row.set(0, nf);
            row.set(1, ls);
            row.set(2, s.lambda_eff_on);
            row.set(3, s.lambda_eff_off);
            match residual_on_last_qubit(n, s.lambda_eff_off) {
                Ok(res) => {
                    row.set(4, res);
                    row.set(5, res * cfg.omega_q_ghz);
                }
                Err(e) => return Row::failed(columns.len(), &[nf, ls], &e),
            }
            if n <= MAX_EXPLICIT_QUBITS {
                row.try_set(
                    6,
                    ArchitectureState::uniform(n, s.lambda_eff_off)
                        .and_then(|a| interaction_hamiltonian(&a))
                        .and_then(|h| coefficient_sum_on_qubit(&h, n)),
                );
            }
            row.try_set(7, network_on_off_ratio(n, s.lambda_eff_on, s.lambda_eff_off));
            row.set(8, s.on_off_ratio);
            row
        })
        .collect();
    (columns, rows)
}
