//! Free-fermion engine: the kicked Ising chain as a Majorana quadratic
//! problem, with `O(L²)` cost per gate layer and `O(L³)` per parity.

mod covariance;
mod generator;
mod pfaffian;
mod spectrum;

pub use covariance::CovarianceMatrix;
pub use generator::{
    compose, compose_step, exponentiate, jw_generators, layer_pairs, AntisymGenerator, FloquetStep,
    MapAccumulator, OrthogonalMap, RotationLayer,
};
pub use pfaffian::{antisymmetry_defect, pfaffian};
pub use spectrum::{fold_phase, pi_mode_gap, quasienergy_spectrum, QuasienergySpectrum};
