//! Protocols and post-processing on top of the engines.

mod crossing;
mod engine;
mod fit;
mod scaling;
mod sweep;

pub use crossing::{envelope_crossing, CrossingReport, MIN_CROSSING_STEPS};
pub use engine::{make_engine, Engine, EngineKind};
pub use fit::{cosine_fit, fm_tail_fit, fm_tail_window, FitResult, FIT_GRID, MIN_FIT_LEN};
pub use scaling::{
    amplitude_scaling, domain_wall_profile, ProfileFit, ScalingFit, MIN_PROFILE_POINTS,
    MIN_SCALING_POINTS,
};
pub use sweep::{
    compare_engines, path_drive, pi_mode_at, pi_mode_trace, run_adiabatic, run_adiabatic_tail,
    run_sequence, run_stop_and_repeat, EngineComparison, SweepMeta, SweepSeries,
    ENGINE_AGREEMENT_TOL,
};
