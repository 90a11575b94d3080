//! Closed-form fidelities of the comparison cloners.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::phase_covariant::optimal_fidelity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClonerKind {
    /// Optimal universal cloner.
    Universal,
    /// Optimal cloner of real states.
    Real,
    /// Optimal cloner of two mutually unbiased bases.
    MutuallyUnbiased,
    /// Optimal symmetric phase-covariant cloner.
    PhaseCovariant,
}

impl ClonerKind {
    pub const ALL: [ClonerKind; 4] = [
        ClonerKind::Universal,
        ClonerKind::Real,
        ClonerKind::PhaseCovariant,
        ClonerKind::MutuallyUnbiased,
    ];
}

/// Symmetric 1→2 fidelity of the given cloner in dimension `d`.
pub fn comparison_fidelity(kind: ClonerKind, d: usize) -> Result<f64> {
    if d < 2 {
        return domain(format!("dimension must be at least 2, got {d}"));
    }
    let df = d as f64;
    Ok(match kind {
        ClonerKind::Universal => (df + 3.0) / (2.0 * (df + 1.0)),
        ClonerKind::MutuallyUnbiased => 0.5 * (1.0 + 1.0 / df.sqrt()),
        ClonerKind::Real => 0.5 + ((df * df + 4.0 * df + 20.0).sqrt() - df + 2.0) / (4.0 * (df + 2.0)),
        ClonerKind::PhaseCovariant => optimal_fidelity(d)?,
    })
}
