//! Dense qudit linear algebra: Weyl error operators, generalized Bell
//! states, equatorial phase states and partial traces.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Result};

pub type C64 = Complex64;

/// Dense, row/column addressed complex matrix.
pub type ComplexMatrix = DMatrix<C64>;

/// `exp(2πi k/d)`.
#[inline]
pub(crate) fn root_of_unity(k: i64, d: usize) -> C64 {
    let d = d as i64;
    let k = k.rem_euclid(d);
    C64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return domain(format!("dimension must be at least 2, got {d}"));
    }
    Ok(())
}

fn check_index(m: usize, n: usize, d: usize) -> Result<()> {
    check_dim(d)?;
    if m >= d || n >= d {
        return domain(format!("indices ({m}, {n}) out of range for d = {d}"));
    }
    Ok(())
}

/// A pure state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps `amplitudes` after rescaling them to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if v.is_empty() || !norm.is_finite() || norm == 0.0 {
            return domain("cannot normalize an empty or zero vector");
        }
        Ok(Self {
            amplitudes: v / C64::new(norm, 0.0),
        })
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(k: usize, dim: usize) -> Result<Self> {
        if dim == 0 || k >= dim {
            return domain(format!("basis index {k} out of range for dimension {dim}"));
        }
        let mut v = DVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_raw(amplitudes: DVector<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> StateVector {
        Self {
            amplitudes: self.amplitudes.map(|z| z.conj()),
        }
    }

    /// `op |self⟩`.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<StateVector> {
        if op.ncols() != self.dim() {
            return domain(format!(
                "operator with {} columns applied to state of dimension {}",
                op.ncols(),
                self.dim()
            ));
        }
        Ok(Self {
            amplitudes: op * &self.amplitudes,
        })
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }
}

/// A density operator. Construction checks Hermiticity and unit trace;
/// positivity is checked on demand by [`DensityMatrix::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return domain("density matrix must be square and nonempty");
        }
        let rho = Self { matrix };
        if hermiticity_defect(&rho.matrix) > 1e-10 {
            return domain("density matrix is not Hermitian");
        }
        if (rho.trace() - 1.0).abs() > 1e-10 {
            return domain(format!("density matrix trace {} differs from 1", rho.trace()));
        }
        Ok(rho)
    }

    /// Skips the trace check; used for unnormalized operators fed to
    /// [`partial_trace`].
    pub fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn pure(psi: &StateVector) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        psi.amplitudes().dotc(&(&self.matrix * psi.amplitudes())).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Checks Hermiticity, unit trace and positivity at the given tolerances.
    pub fn validate(&self, herm_tol: f64, eig_tol: f64) -> Result<()> {
        let defect = hermiticity_defect(&self.matrix);
        if defect > herm_tol {
            return domain(format!("Hermiticity defect {defect:e}"));
        }
        if (self.trace() - 1.0).abs() > herm_tol {
            return domain(format!("trace {} differs from 1", self.trace()));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -eig_tol {
            return domain(format!("negative eigenvalue {min:e}"));
        }
        Ok(())
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return domain("trace distance between operators of different dimension");
        }
        let diff = &self.matrix - &other.matrix;
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
    }
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Weyl error operator `U_{m,n} = Σ_k e^{2πi kn/d} |k+m⟩⟨k|`, indices mod d.
pub fn weyl_operator(m: usize, n: usize, d: usize) -> Result<ComplexMatrix> {
    check_index(m, n, d)?;
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        u[((k + m) % d, k)] = root_of_unity((k * n) as i64, d);
    }
    Ok(u)
}

/// Generalized Bell state `|B_{m,n}⟩ = d^{-1/2} Σ_k e^{2πi kn/d} |k⟩|k+m⟩`.
pub fn bell_state(m: usize, n: usize, d: usize) -> Result<StateVector> {
    check_index(m, n, d)?;
    let scale = 1.0 / (d as f64).sqrt();
    let mut v = DVector::zeros(d * d);
    for k in 0..d {
        v[k * d + (k + m) % d] = root_of_unity((k * n) as i64, d) * scale;
    }
    Ok(StateVector::from_raw(v))
}

/// Equatorial state `d^{-1/2} Σ_k e^{iφ_k} |k⟩`.
pub fn phase_state(phases: &[f64]) -> Result<StateVector> {
    let d = phases.len();
    if d < 2 {
        return domain(format!("phase state needs at least 2 phases, got {d}"));
    }
    let scale = 1.0 / (d as f64).sqrt();
    Ok(StateVector::from_raw(DVector::from_iterator(
        d,
        phases.iter().map(|&phi| C64::from_polar(scale, phi)),
    )))
}

/// Partial trace of an operator on `⊗_i C^{dims[i]}`, keeping the factors
/// listed in `keep` (in increasing order).
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) {
        return domain("factor dimensions must be positive");
    }
    if !rho.is_square() || rho.nrows() != total {
        return domain(format!(
            "operator of size {}x{} does not match factor dimensions {dims:?}",
            rho.nrows(),
            rho.ncols()
        ));
    }
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return domain(format!("invalid subsystem selection {keep:?}"));
    }

    // Row-major strides of the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len() - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    let offsets = |factors: &[usize], fdims: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for (f, &fd) in factors.iter().zip(fdims).rev() {
                    off += (idx % fd) * strides[*f];
                    idx /= fd;
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(keep, &kept_dims, out_dim);
    let traced_off = offsets(&traced, &traced_dims, traced_total);

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (i, &ri) in kept_off.iter().enumerate() {
        for (j, &cj) in kept_off.iter().enumerate() {
            out[(i, j)] = traced_off.iter().map(|&t| rho[(ri + t, cj + t)]).sum();
        }
    }
    Ok(out)
}
