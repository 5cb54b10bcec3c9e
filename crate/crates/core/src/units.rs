//! Conversion between internal units (energies in units of the data-qubit
//! frequency, times in units of its inverse) and laboratory units.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How a laboratory rate `1/T` is turned into an internal rate.
///
/// `Ordinary` takes the quoted qubit frequency as a cycle frequency, so one
/// internal time unit is `1/(2 pi f_q)`. `Angular` takes it as an angular
/// frequency in rad/ns, so one internal time unit is `1/f_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RateConvention {
    Ordinary,
    #[default]
    Angular,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Units {
    /// Data-qubit frequency in GHz (cycle frequency).
    pub omega_q_ghz: f64,
    pub rate_convention: RateConvention,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            omega_q_ghz: 4.0,
            rate_convention: RateConvention::default(),
        }
    }
}

impl Units {
    pub fn new(omega_q_ghz: f64) -> Self {
        Self {
            omega_q_ghz,
            ..Self::default()
        }
    }

    /// Internal time `t` (in `1/omega_q`) to nanoseconds, with
    /// `omega_q = 2 pi f_q`.
    pub fn time_to_ns(&self, t: f64) -> f64 {
        t / (2.0 * PI * self.omega_q_ghz)
    }

    pub fn ns_to_time(&self, ns: f64) -> f64 {
        ns * 2.0 * PI * self.omega_q_ghz
    }

    /// Internal energy (in units of `omega_q`) to GHz.
    pub fn energy_to_ghz(&self, e: f64) -> f64 {
        e * self.omega_q_ghz
    }

    /// Rate for a lifetime given in microseconds, in internal units.
    pub fn rate_from_lifetime_us(&self, t_us: f64) -> f64 {
        let per_ns = 1.0 / (t_us * 1e3);
        match self.rate_convention {
            RateConvention::Ordinary => per_ns / (2.0 * PI * self.omega_q_ghz),
            RateConvention::Angular => per_ns / self.omega_q_ghz,
        }
    }
}
