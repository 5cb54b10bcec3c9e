use serde::{Deserialize, Serialize};

use crate::bus::{BusParams, ChannelKind, ChannelSource, CouplingChannel};
use crate::error::{Error, Result};
use crate::ops::Operator;
use crate::units::Units;

/// Lifetimes in microseconds and the resonator quality factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoherenceParams {
    pub data_t1_us: f64,
    pub data_tphi_us: f64,
    pub flux_t1_us: f64,
    pub flux_tphi_us: f64,
    pub resonator_q: f64,
}

impl Default for DecoherenceParams {
    fn default() -> Self {
        Self {
            data_t1_us: 70.0,
            data_tphi_us: 92.0,
            flux_t1_us: 20.0,
            flux_tphi_us: 10.0,
            resonator_q: 5e5,
        }
    }
}

impl DecoherenceParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("data_t1_us", self.data_t1_us),
            ("data_tphi_us", self.data_tphi_us),
            ("flux_t1_us", self.flux_t1_us),
            ("flux_tphi_us", self.flux_tphi_us),
            ("resonator_q", self.resonator_q),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Rate of a bath channel in internal units: `1/T1` for qubit relaxation,
    /// `1/(2 T_phi)` for qubit dephasing (so that coherences decay as
    /// `exp(-t/T_phi)` under a `sigma_z` jump), `omega_c/Q` for resonators.
    pub fn rate(&self, source: ChannelSource, kind: ChannelKind, omega_c: f64, units: &Units) -> f64 {
        match (source, kind) {
            (ChannelSource::DataQubit, ChannelKind::Relaxation) => units.rate_from_lifetime_us(self.data_t1_us),
            (ChannelSource::DataQubit, ChannelKind::Dephasing) => 0.5 * units.rate_from_lifetime_us(self.data_tphi_us),
            (ChannelSource::FluxQubit, ChannelKind::Relaxation) => units.rate_from_lifetime_us(self.flux_t1_us),
            (ChannelSource::FluxQubit, ChannelKind::Dephasing) => 0.5 * units.rate_from_lifetime_us(self.flux_tphi_us),
            (ChannelSource::Resonator, ChannelKind::Relaxation) => omega_c / self.resonator_q,
            (ChannelSource::Resonator, ChannelKind::Dephasing) => 0.0,
        }
    }
}

/// A bath operator with its rate.
#[derive(Clone, Debug)]
pub struct RatedChannel {
    pub label: String,
    pub kind: ChannelKind,
    pub operator: Operator,
    pub rate: f64,
}

/// Attaches rates to bath channels; `None` gives every channel rate zero.
pub fn rate_channels(
    channels: Vec<CouplingChannel>,
    dec: Option<&DecoherenceParams>,
    params: &BusParams,
    units: &Units,
) -> Result<Vec<RatedChannel>> {
    if let Some(d) = dec {
        d.validate()?;
    }
    Ok(channels
        .into_iter()
        .map(|c| RatedChannel {
            rate: dec.map_or(0.0, |d| d.rate(c.source, c.kind, params.omega_c, units)),
            label: c.label,
            kind: c.kind,
            operator: c.operator,
        })
        .collect())
}
