//! Exact statevector engine for small chains: the reference against which
//! the free-fermion engine is checked, plus everything that needs the full
//! many-body state.

mod density;
mod spectrum;
mod state;
mod teleport;

pub use density::{
    charge_projector, reduced_density, sre_cycling_check, sym_resolved, sym_resolved_rho,
    CyclingReport, LocalRepresentation, ReducedDensity,
};
pub use spectrum::{
    edge_flip_operators, many_body_spectrum, EdgeOperator, ManyBodySpectrum, SpectralCluster,
    SPECTRUM_CAP,
};
pub use state::{
    exp_i_x, gate_adjoint, gate_mul, hadamard, hadamard_all, pauli_x, pauli_z, Gate, PureState,
    DEFAULT_CAP,
};
pub use teleport::{teleport, teleport_phase, teleport_trivial, Branch, TeleportReport};
