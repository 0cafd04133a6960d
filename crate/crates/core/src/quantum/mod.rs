//! Quantum and classical generators of behaviours for the line network, and
//! the distance measures that bound how far two behaviours can drift apart.

mod behaviour;
mod bound;
mod lhv;
mod matrix;
mod measurement;
mod scenario;
mod state;

pub use behaviour::{
    behaviour_from_state, collapse, no_signalling_check, sample_behaviour, sample_distribution,
    sample_point, FullDistribution, NoSignallingReport, SignallingWitness, NORMALIZATION_TOL,
};
pub use bound::{behaviour_bound_check, BoundReport};
pub use lhv::{lhv_evaluate, LhvModel};
pub use matrix::{c, ComplexMatrix, MATRIX_TOL};
pub use measurement::MeasurementSet;
pub use scenario::{qkd_scenario, ScenarioKind};
pub use state::{
    fidelity, fidelity_bounds_check, partial_trace, partial_trace_subsystems, trace_distance,
    DensityMatrix, DensityMatrixJson, FidelityBounds, Keep,
};
