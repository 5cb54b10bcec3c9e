//! Simulation of an ultrastrongly coupled quantum bus (the Π-connector) that
//! mediates an effective exchange interaction between two distant data qubits.
//!
//! Energies are in units of the data-qubit frequency `omega_q` and times in
//! units of `1/omega_q`; see [`units`] for conversion to GHz and ns.

pub mod bus;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fluxqubit;
pub mod gates;
pub mod network;
pub mod ops;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
