//! Phase-covariant 1→2 cloning of qudits.
//!
//! - [`qudit`]: Weyl operators, Bell and phase states, partial traces.
//! - [`cloning`]: cloners in the error-operator expansion, clone states and fidelities.
//! - [`phase_covariant`]: the `(v, x, y)` family, the symmetric optimum and the
//!   asymmetric tradeoff frontier.
//! - [`verifier`]: independent optimization over all CP trace-preserving maps
//!   in the Choi representation.
//! - [`zoo`]: fidelities of the universal, real and two-basis cloners for comparison.

pub mod cloning;
pub mod error;
pub mod phase_covariant;
pub mod qudit;
pub mod verifier;
pub mod zoo;

pub use cloning::{phase_overlap, AmplitudeMatrix, Output};
pub use error::{Error, Result};
pub use phase_covariant::{
    asym_fidelity, fidelity_from_shrinking, optimal_fidelity, optimal_symmetric, optimal_symmetric_by_search,
    shrinking_factor, symmetric_fidelity, tradeoff_frontier, tradeoff_point, uniform_grid, FrontierSolver, PcParams,
    SymmetricParams, TradeoffPoint,
};
pub use qudit::{
    bell_state, partial_trace, phase_state, weyl_operator, ComplexMatrix, DensityMatrix, StateVector, C64,
};
pub use verifier::{
    build_fom, choi_of_amplitudes, choi_of_ansatz, optimize_map, optimize_map_projected, ChoiOperator, FigureOfMerit,
    MapOptimum, MapSummary, MAX_VERIFY_DIM,
};
pub use zoo::{comparison_fidelity, ClonerKind};
