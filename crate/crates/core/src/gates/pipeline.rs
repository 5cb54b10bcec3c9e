use std::f64::consts::PI;

use faer::c64;
use serde::Serialize;

use super::fidelity::{ideal_sqrt_iswap, optimize_phase_compensation, process_channel};
use super::subspace::{logical_subspace, LogicalSubspace};
use crate::bus::{
    build_direct_coupling, build_hamiltonian, coupling_operators, direct_coupling_operators, full_space, BusParams,
    ModelVariant,
};
use crate::dynamics::{dressed_jump_operators, rate_channels, DecoherenceParams, LindbladModel, SolverOptions};
use crate::error::{Error, Result};
use crate::ops::Ket;
use crate::spectral::{
    bus_couplings, converge_fock, data_basis, data_bus_product, diagonalize, split_from_spectrum,
    swap_reference_states, Spectrum,
};
use crate::units::Units;

#[derive(Clone, Debug, PartialEq)]
pub struct GateOptions {
    /// `None` runs without dissipation.
    pub decoherence: Option<DecoherenceParams>,
    pub units: Units,
    /// Number of dressed states kept in the master equation.
    pub truncation: usize,
    /// Raise `n_ph` until the coupling changes by less than `fock_tol`.
    pub auto_fock: bool,
    pub fock_tol: f64,
    pub max_n_ph: usize,
    pub solver: SolverOptions,
}

impl Default for GateOptions {
    fn default() -> Self {
        Self {
            decoherence: Some(DecoherenceParams::default()),
            units: Units::default(),
            truncation: 60,
            auto_fock: true,
            fock_tol: 0.01,
            max_n_ph: 7,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityResult {
    pub f_avg: f64,
    pub f_uncompensated: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    /// Gate time in units of `1/omega_q`.
    pub t_gate: f64,
    pub t_gate_ns: f64,
    pub leakage: f64,
    /// Signed `sigma_x sigma_x` coefficient that set the gate time.
    pub lambda_xx: f64,
    pub n_ph: usize,
    pub logical_overlaps: [f64; 4],
}

/// `pi / (4 |lambda|)`, the √iSWAP time of an XX exchange of strength lambda.
pub fn sqrt_iswap_time(lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::invalid(format!(
            "cannot derive a gate time from coupling {lambda}"
        )));
    }
    Ok(PI / (4.0 * lambda.abs()))
}

/// Dressed spectrum of the full model with its logical states and the
/// swap-doublet splitting.
#[derive(Clone, Debug)]
pub struct DressedModel {
    pub params: BusParams,
    pub spectrum: Spectrum,
    pub logical: LogicalSubspace,
    pub lambda_xx: f64,
}

/// Applies the truncation policy, diagonalizes the full Hamiltonian and
/// identifies the logical states.
pub fn dressed_model(params: &BusParams, opts: &GateOptions) -> Result<DressedModel> {
    params.validate()?;
    let mut params = params.clone();
    if opts.auto_fock {
        let fc = converge_fock(&params, opts.fock_tol, opts.max_n_ph)?;
        params.n_ph = params.n_ph.max(fc.n_ph);
    }
    let h = build_hamiltonian(&params, ModelVariant::Full)?;
    let spectrum = diagonalize(&h, Some(opts.truncation))?;
    let ground = bus_couplings(&params, ModelVariant::Full)?.ground();
    let (plus, minus) = swap_reference_states(&params, &ground)?;
    let split = split_from_spectrum(&spectrum, &plus, &minus)?;
    let space = full_space(&params)?;
    let refs = logical_references(params.data_levels, |d| data_bus_product(&space, d, &ground))?;
    let logical = logical_subspace(&spectrum, &refs)?;
    Ok(DressedModel {
        params,
        spectrum,
        logical,
        lambda_xx: split.lambda_xx,
    })
}

fn logical_references(levels: usize, make: impl Fn(&[c64]) -> Result<Ket>) -> Result<[Ket; 4]> {
    let k = |a, b| make(&data_basis(levels, a, b));
    Ok([k(0, 0)?, k(0, 1)?, k(1, 0)?, k(1, 1)?])
}

fn run_gate(
    spectrum: &Spectrum,
    logical: &LogicalSubspace,
    channels: Vec<crate::bus::CouplingChannel>,
    params: &BusParams,
    t_gate: f64,
    lambda_xx: f64,
    opts: &GateOptions,
) -> Result<FidelityResult> {
    let m = spectrum.len();
    if logical.max_index() >= m {
        return Err(Error::invalid("truncation does not contain the computational subspace"));
    }
    let rated = rate_channels(channels, opts.decoherence.as_ref(), params, &opts.units)?;
    let jumps = dressed_jump_operators(spectrum, &rated, m)?;
    let model = LindbladModel::dressed(spectrum, jumps)?;
    let channel = process_channel(&model, logical.coefficients(), t_gate, &opts.solver)?;
    let comp = optimize_phase_compensation(&channel, &ideal_sqrt_iswap())?;
    Ok(FidelityResult {
        f_avg: comp.fidelity,
        f_uncompensated: comp.uncompensated,
        theta_a: comp.theta_a,
        theta_b: comp.theta_b,
        t_gate,
        t_gate_ns: opts.units.time_to_ns(t_gate),
        leakage: channel.leakage(),
        lambda_xx,
        n_ph: params.n_ph,
        logical_overlaps: logical.overlaps(),
    })
}

/// √iSWAP through the bus: gate time from the doublet splitting, channel
/// from the dressed master equation, then z-phase compensation.
pub fn gate_pipeline(params: &BusParams, opts: &GateOptions) -> Result<FidelityResult> {
    let dm = dressed_model(params, opts)?;
    gate_from_dressed(&dm, opts)
}

pub fn gate_from_dressed(dm: &DressedModel, opts: &GateOptions) -> Result<FidelityResult> {
    let t_gate = sqrt_iswap_time(dm.lambda_xx)?;
    let channels = coupling_operators(&dm.params)?;
    run_gate(
        &dm.spectrum,
        &dm.logical,
        channels,
        &dm.params,
        t_gate,
        dm.lambda_xx,
        opts,
    )
}

/// The same gate on two directly coupled qubits,
/// `H = (w_q/2)(sz_a + sz_b) + lambda_xx sx_a sx_b`, with the data-qubit
/// decoherence only.
pub fn direct_gate_pipeline(lambda_xx: f64, omega_q: f64, opts: &GateOptions) -> Result<FidelityResult> {
    let h = build_direct_coupling(lambda_xx, omega_q)?;
    let spectrum = diagonalize(&h, None)?;
    let space = h.space().clone();
    let refs = logical_references(2, |d| Ket::new(space.clone(), d.to_vec()))?;
    let logical = logical_subspace(&spectrum, &refs)?;
    let params = BusParams {
        omega_q,
        ..BusParams::default()
    };
    let t_gate = sqrt_iswap_time(lambda_xx)?;
    run_gate(
        &spectrum,
        &logical,
        direct_coupling_operators()?,
        &params,
        t_gate,
        lambda_xx,
        opts,
    )
}

/// Population of the dressed `|01>` while the dressed `|10>` evolves without
/// dissipation.
pub fn swap_trace(dm: &DressedModel, times: &[f64]) -> Vec<f64> {
    let c = dm.logical.coefficients();
    let e = dm.spectrum.energies();
    times
        .iter()
        .map(|&t| {
            let amp: c64 = (0..e.len())
                .map(|k| c[(k, 1)].conj() * c[(k, 2)] * c64::from_polar(1.0, -e[k] * t))
                .sum();
            amp.norm_sqr()
        })
        .collect()
}
