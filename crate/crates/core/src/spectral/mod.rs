//! Eigenanalysis and effective couplings.

mod coupling;
mod eigen;
mod paths;
mod schrieffer_wolff;

pub use coupling::{
    bus_couplings, bus_induced_shifts, converge_fock, data_basis, data_bus_product, dressed_qubit_frequency,
    effective_coupling_split, effective_coupling_sum, effective_coupling_sum_variant, split_from_spectrum,
    swap_doublet_data, swap_reference_states, BusCouplings, DoubletSplit, EffectiveCoupling, FockConvergence,
};
pub use eigen::{diagonalize, Spectrum};
pub use paths::{virtual_path_weights, VirtualPath};
pub use schrieffer_wolff::{effective_coupling_sw, schrieffer_wolff};
