//! Closed and open-system time evolution.

mod decoherence;
mod integrate;
mod lindblad;
mod unitary;

pub use decoherence::{rate_channels, DecoherenceParams, RatedChannel};
pub use integrate::{dopri5, SolverOptions};
pub use lindblad::{dressed_jump_operators, mesolve, Jump, LindbladModel, Trajectory};
pub use unitary::{unitary_evolve, KetTrajectory};
