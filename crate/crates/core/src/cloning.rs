//! 1→2 cloning maps in the Weyl error-operator expansion.
//!
//! A cloner is described by a `d×d` amplitude matrix `a`: on input `|ψ⟩`
//! it produces `Σ a_{m,n} U_{m,n}|ψ⟩_A |B_{m,−n}⟩_{BC}`. Clone A ends up in
//! the mixture of `U_{m,n}|ψ⟩` with weights `|a_{m,n}|²`; clone B sees the
//! same mixture with weights `|b_{m,n}|²`, where `b` is the Fourier dual of
//! `a`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::qudit::{bell_state, root_of_unity, weyl_operator, ComplexMatrix, DensityMatrix, StateVector, C64};

/// Which output clone to look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Output {
    A,
    B,
}

/// Normalized `d×d` amplitude matrix indexed `(m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix {
    a: ComplexMatrix,
}

impl AmplitudeMatrix {
    /// Checks `Σ|a_{m,n}|² = 1` within `1e-9`.
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        if !a.is_square() || a.nrows() < 2 {
            return domain("amplitude matrix must be square with d >= 2");
        }
        let norm = a.norm_squared();
        if (norm - 1.0).abs() > 1e-9 {
            return domain(format!("amplitude matrix has squared norm {norm}, expected 1"));
        }
        Ok(Self { a })
    }

    /// Rescales `a` to unit Frobenius norm.
    pub fn normalized(a: ComplexMatrix) -> Result<Self> {
        let norm = a.norm();
        if norm == 0.0 || !norm.is_finite() {
            return domain("cannot normalize a zero amplitude matrix");
        }
        Self::new(a / C64::new(norm, 0.0))
    }

    /// Point mass at `(0,0)`: clone A is perfect, clone B fully mixed.
    pub fn identity_cloner(d: usize) -> Result<Self> {
        if d < 2 {
            return domain("dimension must be at least 2");
        }
        let mut a = ComplexMatrix::zeros(d, d);
        a[(0, 0)] = C64::new(1.0, 0.0);
        Ok(Self { a })
    }

    pub fn d(&self) -> usize {
        self.a.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.a[(m, n)]
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_squared()
    }

    /// Amplitudes for clone B: `b_{m,n} = (1/d) Σ_{x,y} e^{2πi(nx−my)/d} a_{x,y}`.
    pub fn fourier_dual(&self) -> AmplitudeMatrix {
        let d = self.d();
        let scale = C64::new(1.0 / d as f64, 0.0);
        let b = ComplexMatrix::from_fn(d, d, |m, n| {
            let mut acc = C64::new(0.0, 0.0);
            for x in 0..d {
                for y in 0..d {
                    acc += root_of_unity((n * x) as i64 - (m * y) as i64, d) * self.a[(x, y)];
                }
            }
            acc * scale
        });
        AmplitudeMatrix { a: b }
    }

    fn weights(&self, clone: Output) -> AmplitudeMatrix {
        match clone {
            Output::A => self.clone(),
            Output::B => self.fourier_dual(),
        }
    }

    /// Reduced states `(ρ_A, ρ_B)` of the two clones for input `ψ`.
    pub fn clone_states(&self, psi: &StateVector) -> Result<(DensityMatrix, DensityMatrix)> {
        let d = self.check_input(psi)?;
        let b = self.fourier_dual();
        let mut rho_a = ComplexMatrix::zeros(d, d);
        let mut rho_b = ComplexMatrix::zeros(d, d);
        for m in 0..d {
            for n in 0..d {
                let proj = psi.apply(&weyl_operator(m, n, d)?)?.projector();
                rho_a += &proj * C64::new(self.a[(m, n)].norm_sqr(), 0.0);
                rho_b += proj * C64::new(b.a[(m, n)].norm_sqr(), 0.0);
            }
        }
        Ok((DensityMatrix::new(rho_a)?, DensityMatrix::new(rho_b)?))
    }

    /// `Σ |w_{m,n}|² |⟨ψ|U_{m,n}ψ⟩|²` with `w = a` or its dual.
    pub fn fidelity(&self, psi: &StateVector, clone: Output) -> Result<f64> {
        let d = self.check_input(psi)?;
        let w = self.weights(clone);
        let amps = psi.amplitudes();
        let mut f = 0.0;
        for m in 0..d {
            for n in 0..d {
                let weight = w.a[(m, n)].norm_sqr();
                if weight == 0.0 {
                    continue;
                }
                // ⟨ψ|U_{m,n}|ψ⟩ = Σ_k e^{2πi kn/d} ψ_k conj(ψ_{k+m})
                let overlap: C64 = (0..d)
                    .map(|k| root_of_unity((k * n) as i64, d) * amps[k] * amps[(k + m) % d].conj())
                    .sum();
                f += weight * overlap.norm_sqr();
            }
        }
        Ok(f)
    }

    /// The full A⊗B⊗C output `Σ a_{m,n} U_{m,n}|ψ⟩ ⊗ |B_{m,−n}⟩` (dimension `d³`).
    pub fn tripartite_state(&self, psi: &StateVector) -> Result<StateVector> {
        let d = self.check_input(psi)?;
        let mut out = DVector::zeros(d * d * d);
        for m in 0..d {
            for n in 0..d {
                let amp = self.a[(m, n)];
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let shifted = psi.apply(&weyl_operator(m, n, d)?)?;
                let bell = bell_state(m, (d - n) % d, d)?;
                out += shifted.tensor(&bell).amplitudes() * amp;
            }
        }
        Ok(StateVector::from_raw(out))
    }

    fn check_input(&self, psi: &StateVector) -> Result<usize> {
        if psi.dim() != self.d() {
            return domain(format!(
                "state of dimension {} fed to a d = {} cloner",
                psi.dim(),
                self.d()
            ));
        }
        Ok(self.d())
    }
}

/// `⟨ψ|U_{m,n}ψ⟩` for the equatorial state with the given phases:
/// `(1/d) Σ_k e^{i(φ_k − φ_{k+m})} e^{2πi nk/d}`.
pub fn phase_overlap(phases: &[f64], m: usize, n: usize) -> Result<C64> {
    let d = phases.len();
    if d < 2 || m >= d || n >= d {
        return domain(format!("invalid phase overlap arguments (m={m}, n={n}, d={d})"));
    }
    let sum: C64 = (0..d)
        .map(|k| C64::from_polar(1.0, phases[k] - phases[(k + m) % d]) * root_of_unity((n * k) as i64, d))
        .sum();
    Ok(sum / d as f64)
}
