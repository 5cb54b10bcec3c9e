//! Logical subspace, two-qubit channels and the √iSWAP fidelity.

mod fidelity;
mod pipeline;
mod subspace;

pub use fidelity::{
    average_gate_fidelity, ideal_sqrt_iswap, optimize_phase_compensation, process_channel, rz_pair, Channel,
    PhaseCompensation,
};
pub use pipeline::{
    direct_gate_pipeline, dressed_model, gate_from_dressed, gate_pipeline, sqrt_iswap_time, swap_trace, DressedModel,
    FidelityResult, GateOptions,
};
pub use subspace::{logical_subspace, LogicalSubspace};
