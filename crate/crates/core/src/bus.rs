//! Hamiltonian of the Π-connector bus and its two data qubits.
//!
//! Subsystem order is `[q_a, q_b, f_1, f_2, C_1, C_2, C_3]`. Flux qubit `f_1`
//! couples to resonators `C_1` and `C_3`, `f_2` to `C_2` and `C_3`; data qubit
//! `q_a` couples to `C_1` and `q_b` to `C_2`.

use std::sync::Arc;

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{embed, embed_named, local_operator, CompositeSpace, LocalOp, Operator, SubsystemSpec};

pub const Q_A: usize = 0;
pub const Q_B: usize = 1;
pub const F_1: usize = 2;
pub const F_2: usize = 3;
pub const C_1: usize = 4;
pub const C_2: usize = 5;
pub const C_3: usize = 6;

/// Number of subsystems preceding the bus in the full space.
const BUS_OFFSET: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    Full,
    /// Rotating-wave approximation on the flux-qubit/resonator couplings only.
    BusRwa,
    /// Two qubits with an ideal `sigma_x sigma_x` interaction.
    Direct,
}

/// Physical parameters, in units of the data-qubit frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BusParams {
    pub omega_q: f64,
    pub omega_c: f64,
    pub omega_f1: f64,
    pub omega_f2: f64,
    pub lambda: f64,
    pub lambda_s1: f64,
    pub lambda_s2: f64,
    pub n_ph: usize,
    pub data_levels: usize,
    /// `(E_2 - E_1) / (E_1 - E_0)` for three-level data qubits.
    pub anharm_ratio: f64,
}

impl Default for BusParams {
    fn default() -> Self {
        Self {
            omega_q: 1.0,
            omega_c: 3.0,
            omega_f1: 3.0,
            omega_f2: 3.0,
            lambda: 0.05,
            lambda_s1: 0.0,
            lambda_s2: 0.0,
            n_ph: 3,
            data_levels: 2,
            anharm_ratio: 0.8,
        }
    }
}

impl BusParams {
    /// Sets both flux-qubit couplings to `ratio * omega_c`.
    pub fn with_lambda_s_ratio(mut self, ratio: f64) -> Self {
        self.lambda_s1 = ratio * self.omega_c;
        self.lambda_s2 = ratio * self.omega_c;
        self
    }

    pub fn with_n_ph(mut self, n_ph: usize) -> Self {
        self.n_ph = n_ph;
        self
    }

    pub fn with_data_levels(mut self, levels: usize) -> Self {
        self.data_levels = levels;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("omega_q", self.omega_q),
            ("omega_c", self.omega_c),
            ("omega_f1", self.omega_f1),
            ("omega_f2", self.omega_f2),
            ("lambda", self.lambda),
            ("lambda_s1", self.lambda_s1),
            ("lambda_s2", self.lambda_s2),
            ("anharm_ratio", self.anharm_ratio),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.omega_q == 0.0 {
            return Err(Error::invalid("omega_q must be positive"));
        }
        if self.n_ph < 1 {
            return Err(Error::invalid("n_ph must be at least 1"));
        }
        if !matches!(self.data_levels, 2 | 3) {
            return Err(Error::invalid(format!(
                "data_levels must be 2 or 3, got {}",
                self.data_levels
            )));
        }
        if self.lambda >= self.omega_q {
            log::warn!(
                "lambda = {} is not small compared to omega_q = {}",
                self.lambda,
                self.omega_q
            );
        }
        Ok(())
    }

    fn data_spec(&self, label: &str) -> SubsystemSpec {
        if self.data_levels == 3 {
            SubsystemSpec::qutrit(label)
        } else {
            SubsystemSpec::qubit(label)
        }
    }

    fn bus_specs(&self) -> Result<Vec<SubsystemSpec>> {
        Ok(vec![
            SubsystemSpec::qubit("f1"),
            SubsystemSpec::qubit("f2"),
            SubsystemSpec::mode("C1", self.n_ph)?,
            SubsystemSpec::mode("C2", self.n_ph)?,
            SubsystemSpec::mode("C3", self.n_ph)?,
        ])
    }

    /// Bare data-qubit level energies, ground first.
    pub fn data_energies(&self) -> Vec<f64> {
        let w = self.omega_q;
        let mut e = vec![-0.5 * w, 0.5 * w];
        if self.data_levels == 3 {
            e.push(0.5 * w + self.anharm_ratio * w);
        }
        e
    }
}

pub fn full_space(params: &BusParams) -> Result<Arc<CompositeSpace>> {
    let mut subs = vec![params.data_spec("qa"), params.data_spec("qb")];
    subs.extend(params.bus_specs()?);
    Ok(Arc::new(CompositeSpace::new(subs)?))
}

pub fn bus_space(params: &BusParams) -> Result<Arc<CompositeSpace>> {
    Ok(Arc::new(CompositeSpace::new(params.bus_specs()?)?))
}

fn diagonal_local(values: &[f64]) -> Mat<c64> {
    Mat::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            c64::new(values[i], 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    })
}

/// Coupling operator of a data qubit: `sigma_x` for two levels, `b + b^dagger`
/// for three levels.
fn data_coupling_local(levels: usize) -> Result<Mat<c64>> {
    local_operator(LocalOp::Quadrature, levels)
}

/// Dephasing operator of a data qubit, `1 - 2 n`.
fn data_dephasing_local(levels: usize) -> Mat<c64> {
    let d: Vec<f64> = (0..levels).map(|n| 1.0 - 2.0 * n as f64).collect();
    diagonal_local(&d)
}

/// Bus Hamiltonian `H_Pi` on the subsystems starting at `offset`.
fn bus_terms(
    space: &Arc<CompositeSpace>,
    offset: usize,
    params: &BusParams,
    variant: ModelVariant,
) -> Result<Operator> {
    let f = [offset, offset + 1];
    let c = [offset + 2, offset + 3, offset + 4];
    let mut h = Operator::zeros(space.clone());
    for (&fi, w) in f.iter().zip([params.omega_f1, params.omega_f2]) {
        h = &h + &embed_named(LocalOp::SigmaZ, fi, space)?.scale(-0.5 * w);
    }
    for &ci in &c {
        h = &h + &embed_named(LocalOp::Number, ci, space)?.scale(params.omega_c);
    }
    let links = [
        (f[0], [c[0], c[2]], params.lambda_s1),
        (f[1], [c[1], c[2]], params.lambda_s2),
    ];
    for (fi, modes, g) in links {
        if g == 0.0 {
            continue;
        }
        for ci in modes {
            let term = match variant {
                ModelVariant::Full => {
                    &embed_named(LocalOp::SigmaX, fi, space)? * &embed_named(LocalOp::Quadrature, ci, space)?
                }
                ModelVariant::BusRwa => {
                    let up =
                        &embed_named(LocalOp::SigmaPlus, fi, space)? * &embed_named(LocalOp::Annihilate, ci, space)?;
                    &up + &up.adjoint()
                }
                ModelVariant::Direct => return Err(Error::invalid("the direct variant has no bus")),
            };
            h = &h + &term.scale(g);
        }
    }
    Ok(h)
}

/// Full Hamiltonian `H_qb + H_Pi + H_int` on the seven-subsystem space.
pub fn build_hamiltonian(params: &BusParams, variant: ModelVariant) -> Result<Operator> {
    params.validate()?;
    if variant == ModelVariant::Direct {
        return Err(Error::invalid("use build_direct_coupling for the direct variant"));
    }
    let space = full_space(params)?;
    let levels = params.data_levels;
    let e = diagonal_local(&params.data_energies());
    let mut h = &embed(&e, Q_A, &space)? + &embed(&e, Q_B, &space)?;
    h = &h + &bus_terms(&space, BUS_OFFSET, params, variant)?;
    if params.lambda != 0.0 {
        let x = data_coupling_local(levels)?;
        for (q, c) in [(Q_A, C_1), (Q_B, C_2)] {
            let term = &embed(&x, q, &space)? * &embed_named(LocalOp::Quadrature, c, &space)?;
            h = &h + &term.scale(params.lambda);
        }
    }
    Ok(h)
}

/// The bus alone together with its three resonator quadratures.
#[derive(Clone, Debug)]
pub struct BusOperators {
    pub hamiltonian: Operator,
    /// `X_1, X_2, X_3` on the bus space.
    pub quadratures: [Operator; 3],
}

pub fn build_bus_hamiltonian(params: &BusParams, variant: ModelVariant) -> Result<BusOperators> {
    params.validate()?;
    let space = bus_space(params)?;
    let hamiltonian = bus_terms(&space, 0, params, variant)?;
    let quadratures = [
        embed_named(LocalOp::Quadrature, C_1 - BUS_OFFSET, &space)?,
        embed_named(LocalOp::Quadrature, C_2 - BUS_OFFSET, &space)?,
        embed_named(LocalOp::Quadrature, C_3 - BUS_OFFSET, &space)?,
    ];
    Ok(BusOperators {
        hamiltonian,
        quadratures,
    })
}

/// `(w/2)(|1><1| - |0><0|)` on each qubit plus `lambda_eff sigma_x sigma_x`.
pub fn build_direct_coupling(lambda_eff: f64, omega_q: f64) -> Result<Operator> {
    if !lambda_eff.is_finite() || !omega_q.is_finite() {
        return Err(Error::invalid("direct coupling parameters must be finite"));
    }
    let space = Arc::new(CompositeSpace::new(vec![
        SubsystemSpec::qubit("qa"),
        SubsystemSpec::qubit("qb"),
    ])?);
    let za = embed_named(LocalOp::SigmaZ, 0, &space)?;
    let zb = embed_named(LocalOp::SigmaZ, 1, &space)?;
    let xx = &embed_named(LocalOp::SigmaX, 0, &space)? * &embed_named(LocalOp::SigmaX, 1, &space)?;
    Ok(&(&za + &zb).scale(-0.5 * omega_q) + &xx.scale(lambda_eff))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Relaxation,
    Dephasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelSource {
    DataQubit,
    FluxQubit,
    Resonator,
}

/// A bare system operator through which one component couples to its bath.
#[derive(Clone, Debug)]
pub struct CouplingChannel {
    pub label: String,
    pub source: ChannelSource,
    pub kind: ChannelKind,
    pub operator: Operator,
}

fn channels_for_qubits(
    space: &Arc<CompositeSpace>,
    qubits: &[(usize, ChannelSource, &Mat<c64>, &Mat<c64>)],
) -> Result<Vec<CouplingChannel>> {
    let mut out = Vec::new();
    for &(idx, source, relax, dephase) in qubits {
        let label = space.subsystems()[idx].label().to_string();
        out.push(CouplingChannel {
            label: label.clone(),
            source,
            kind: ChannelKind::Relaxation,
            operator: embed(relax, idx, space)?,
        });
        out.push(CouplingChannel {
            label,
            source,
            kind: ChannelKind::Dephasing,
            operator: embed(dephase, idx, space)?,
        });
    }
    Ok(out)
}

/// Bath coupling operators on the full space: relaxation and dephasing for
/// every qubit, relaxation through `X` for every resonator.
pub fn coupling_operators(params: &BusParams) -> Result<Vec<CouplingChannel>> {
    params.validate()?;
    let space = full_space(params)?;
    let dx = data_coupling_local(params.data_levels)?;
    let dz = data_dephasing_local(params.data_levels);
    let fx = local_operator(LocalOp::SigmaX, 2)?;
    let fz = local_operator(LocalOp::SigmaZ, 2)?;
    let mut out = channels_for_qubits(
        &space,
        &[
            (Q_A, ChannelSource::DataQubit, &dx, &dz),
            (Q_B, ChannelSource::DataQubit, &dx, &dz),
            (F_1, ChannelSource::FluxQubit, &fx, &fz),
            (F_2, ChannelSource::FluxQubit, &fx, &fz),
        ],
    )?;
    for c in [C_1, C_2, C_3] {
        out.push(CouplingChannel {
            label: space.subsystems()[c].label().to_string(),
            source: ChannelSource::Resonator,
            kind: ChannelKind::Relaxation,
            operator: embed_named(LocalOp::Quadrature, c, &space)?,
        });
    }
    Ok(out)
}

/// Relaxation and dephasing channels of the two qubits in the direct model.
pub fn direct_coupling_operators() -> Result<Vec<CouplingChannel>> {
    let space = Arc::new(CompositeSpace::new(vec![
        SubsystemSpec::qubit("qa"),
        SubsystemSpec::qubit("qb"),
    ])?);
    let x = local_operator(LocalOp::SigmaX, 2)?;
    let z = local_operator(LocalOp::SigmaZ, 2)?;
    channels_for_qubits(
        &space,
        &[
            (0, ChannelSource::DataQubit, &x, &z),
            (1, ChannelSource::DataQubit, &x, &z),
        ],
    )
}
