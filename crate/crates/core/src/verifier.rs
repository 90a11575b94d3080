//! Optimality check over all cloning channels.
//!
//! A channel from the input to the two clones is represented by its Choi
//! operator `S = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)` on `input ⊗ A ⊗ B`. With that
//! convention the fidelity of clone A on `|ψ⟩` is
//! `Tr[S (ψ*ψ*ᵀ ⊗ ψψ† ⊗ I)]`, and averaging over the phases of the
//! equatorial states gives the linear figures of merit `R_A`, `R_B`.
//!
//! [`optimize_map`] maximizes `Tr[S (p R_A + (1−p) R_B)]` over trace
//! preserving CP maps with the fixed-point iteration
//! `S ← Λ^{-1/2} R S R Λ^{-1/2}`, `Λ = Tr_out[R S R]`.

use nalgebra::DVector;
use serde::Serialize;

use crate::cloning::AmplitudeMatrix;
use crate::error::{domain, Error, Result};
use crate::phase_covariant::PcParams;
use crate::qudit::{hermitian_eigenvalues, hermiticity_defect, partial_trace, ComplexMatrix, StateVector, C64};

/// Largest dimension handled by the dense verifier (`d³ = 216`).
pub const MAX_VERIFY_DIM: usize = 6;

/// Eigenvalue floor applied before inverting `Λ`.
const LAMBDA_FLOOR: f64 = 1e-12;

fn check_verify_dim(d: usize) -> Result<()> {
    if !(2..=MAX_VERIFY_DIM).contains(&d) {
        return domain(format!("verifier supports 2 <= d <= {MAX_VERIFY_DIM}, got {d}"));
    }
    Ok(())
}

/// Choi operator of a channel `input → A ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator {
    d: usize,
    s: ComplexMatrix,
}

impl ChoiOperator {
    pub fn new(d: usize, s: ComplexMatrix) -> Result<Self> {
        let n = d * d * d;
        if s.nrows() != n || s.ncols() != n {
            return domain(format!("Choi operator must be {n}x{n} for d = {d}"));
        }
        Ok(Self { d, s })
    }

    /// `I/d²`: every input goes to the maximally mixed output.
    pub fn maximally_mixed(d: usize) -> Self {
        let n = d * d * d;
        Self {
            d,
            s: ComplexMatrix::identity(n, n) / C64::new((d * d) as f64, 0.0),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.s
    }

    /// `Tr_{A,B} S`, a `d×d` operator on the input.
    pub fn output_trace(&self) -> ComplexMatrix {
        partial_trace(&self.s, &[0], &[self.d, self.d * self.d]).expect("dimensions fixed at construction")
    }

    /// Largest entry of `|Tr_{A,B} S − I|`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let id = ComplexMatrix::identity(self.d, self.d);
        (self.output_trace() - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.s)[0]
    }

    /// Hermitian within `1e-10`, eigenvalues `≥ −1e-9`, trace preserving within `1e-9`.
    pub fn validate(&self) -> Result<()> {
        let herm = hermiticity_defect(&self.s);
        if herm > 1e-10 {
            return domain(format!("Choi operator not Hermitian (defect {herm:e})"));
        }
        let min = self.min_eigenvalue();
        if min < -1e-9 {
            return domain(format!("Choi operator not positive (eigenvalue {min:e})"));
        }
        let tp = self.trace_preservation_residual();
        if tp > 1e-9 {
            return domain(format!("Choi operator not trace preserving (residual {tp:e})"));
        }
        Ok(())
    }

    /// `Re Tr[S R]`.
    pub fn score(&self, r: &ComplexMatrix) -> f64 {
        trace_product(&self.s, r)
    }
}

/// `Re Tr[A B]` without forming the product.
fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Phase-averaged fidelity operators for the two clones plus the weight
/// `p` on clone A.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOfMerit {
    pub d: usize,
    pub r_a: ComplexMatrix,
    pub r_b: ComplexMatrix,
    pub p: f64,
}

impl FigureOfMerit {
    pub fn with_weight(mut self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("asymmetry weight {p} outside [0, 1]"));
        }
        self.p = p;
        Ok(self)
    }

    /// `p R_A + (1−p) R_B`.
    pub fn combined(&self) -> ComplexMatrix {
        &self.r_a * C64::new(self.p, 0.0) + &self.r_b * C64::new(1.0 - self.p, 0.0)
    }

    pub fn fidelities(&self, s: &ChoiOperator) -> (f64, f64) {
        (s.score(&self.r_a), s.score(&self.r_b))
    }
}

/// `E_φ[ψ*ψ*ᵀ ⊗ ψψ†]` on `input ⊗ clone` for uniformly random phases.
///
/// Entry `((a,c),(b,e))` averages `e^{i(φ_b + φ_c − φ_a − φ_e)}/d²`, which
/// survives only when the multisets `{b, c}` and `{a, e}` coincide.
pub fn phase_averaged_projector(d: usize) -> ComplexMatrix {
    let n = d * d;
    let w = C64::new(1.0 / n as f64, 0.0);
    ComplexMatrix::from_fn(n, n, |row, col| {
        let (a, c) = (row / d, row % d);
        let (b, e) = (col / d, col % d);
        if (b == a && c == e) || (b == e && c == a) {
            w
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Builds `R_A`, `R_B` for dimension `d` (weight defaults to `p = 1/2`).
pub fn build_fom(d: usize) -> Result<FigureOfMerit> {
    check_verify_dim(d)?;
    let pavg = phase_averaged_projector(d);
    let id = ComplexMatrix::identity(d, d);
    let r_a = pavg.kronecker(&id);
    let n = d * d * d;
    // same operator acting on input ⊗ B with identity on A
    let r_b = ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, ka, kb) = (row / (d * d), (row / d) % d, row % d);
        let (j, la, lb) = (col / (d * d), (col / d) % d, col % d);
        if ka == la {
            pavg[(i * d + kb, j * d + lb)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(FigureOfMerit { d, r_a, r_b, p: 0.5 })
}

/// Choi operator of a cloner given by its amplitude matrix, with the
/// machine system traced out.
pub fn choi_of_amplitudes(a: &AmplitudeMatrix) -> Result<ChoiOperator> {
    let d = a.d();
    check_verify_dim(d)?;
    let d3 = d * d * d;
    let mut omega = DVector::<C64>::zeros(d * d3);
    for i in 0..d {
        let out = a.tripartite_state(&StateVector::basis(i, d)?)?;
        omega.rows_mut(i * d3, d3).copy_from(out.amplitudes());
    }
    let full = &omega * omega.adjoint();
    let s = partial_trace(&full, &[0, 1, 2], &[d, d, d, d])?;
    ChoiOperator::new(d, s)
}

pub fn choi_of_ansatz(params: &PcParams) -> Result<ChoiOperator> {
    choi_of_amplitudes(&params.ansatz_matrix()?)
}

/// Result of [`optimize_map`].
#[derive(Debug, Clone)]
pub struct MapOptimum {
    pub choi: ChoiOperator,
    pub f_a: f64,
    pub f_b: f64,
    pub iterations: usize,
    /// Objective after each iteration, starting with the seed.
    pub history: Vec<f64>,
}

/// Summary of an optimizer run, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapSummary {
    pub d: usize,
    pub p: f64,
    pub f_a: f64,
    pub f_b: f64,
    pub iterations: usize,
}

impl MapOptimum {
    pub fn objective(&self) -> f64 {
        *self.history.last().expect("history holds the seed")
    }

    pub fn summary(&self, p: f64) -> MapSummary {
        MapSummary {
            d: self.choi.d,
            p,
            f_a: self.f_a,
            f_b: self.f_b,
            iterations: self.iterations,
        }
    }
}

/// `M^{-1/2}` for Hermitian positive `M`, eigenvalues floored at `floor`.
fn inverse_sqrt(m: &ComplexMatrix, floor: f64) -> ComplexMatrix {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let scale = eig.eigenvalues.map(|l| C64::new(1.0 / l.max(floor).sqrt(), 0.0));
    let q = &eig.eigenvectors;
    q * ComplexMatrix::from_diagonal(&scale) * q.adjoint()
}

/// Maximizes `Tr[S R]`, `R = p R_A + (1−p) R_B`, over trace-preserving CP
/// maps. Stops when the objective changes by less than `tol`.
pub fn optimize_map(fom: &FigureOfMerit, tol: f64, max_iter: usize) -> Result<MapOptimum> {
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let d = fom.d;
    check_verify_dim(d)?;
    let r = fom.combined();
    let id_out = ComplexMatrix::identity(d * d, d * d);
    let mut s = ChoiOperator::maximally_mixed(d);
    let mut history = vec![s.score(&r)];
    let mut last_delta = f64::INFINITY;

    for it in 1..=max_iter {
        let rsr = &r * &s.s * &r;
        let lambda = partial_trace(&rsr, &[0], &[d, d * d])?;
        let k = inverse_sqrt(&lambda, LAMBDA_FLOOR).kronecker(&id_out);
        let mut next = &k * rsr * &k;
        // keep exact Hermiticity against round-off drift
        next = (&next + next.adjoint()) * C64::new(0.5, 0.0);
        s = ChoiOperator { d, s: next };
        let obj = s.score(&r);
        last_delta = obj - history.last().copied().unwrap_or(0.0);
        history.push(obj);
        if last_delta.abs() < tol {
            let (f_a, f_b) = fom.fidelities(&s);
            return Ok(MapOptimum {
                choi: s,
                f_a,
                f_b,
                iterations: it,
                history,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: last_delta.abs(),
        best: history.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        best_iterate: Vec::new(),
    })
}

/// Euclidean projection onto `{S = S†, Tr_out S = I}`.
fn project_trace_preserving(s: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let n_out = d * d;
    let excess = partial_trace(s, &[0], &[d, n_out]).expect("fixed dims") - ComplexMatrix::identity(d, d);
    let corr = (excess / C64::new(n_out as f64, 0.0)).kronecker(&ComplexMatrix::identity(n_out, n_out));
    s - corr
}

fn project_psd(s: &ComplexMatrix) -> ComplexMatrix {
    let h = (s + s.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let clipped = eig.eigenvalues.map(|l| C64::new(l.max(0.0), 0.0));
    let q = &eig.eigenvectors;
    q * ComplexMatrix::from_diagonal(&clipped) * q.adjoint()
}

/// Projection onto PSD ∩ trace-preserving via Dykstra's alternating scheme.
fn project_feasible(s: &ComplexMatrix, d: usize, sweeps: usize) -> ComplexMatrix {
    let n = s.nrows();
    let mut x = s.clone();
    let mut p = ComplexMatrix::zeros(n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    for _ in 0..sweeps {
        let y = project_psd(&(&x + &p));
        p = &x + &p - &y;
        let next = project_trace_preserving(&(&y + &q), d);
        q = &y + &q - &next;
        x = next;
    }
    x
}

/// Slow first-order cross-check for [`optimize_map`]: projected gradient
/// ascent `S ← Π(S + step·R)` with the projection onto the feasible set
/// computed by Dykstra sweeps. Intended for small `d` only.
pub fn optimize_map_projected(
    fom: &FigureOfMerit,
    step: f64,
    iters: usize,
    sweeps: usize,
) -> Result<(ChoiOperator, f64, f64)> {
    let d = fom.d;
    check_verify_dim(d)?;
    let r = fom.combined();
    let mut s = ChoiOperator::maximally_mixed(d).s;
    for _ in 0..iters {
        s = project_feasible(&(&s + &r * C64::new(step, 0.0)), d, sweeps);
    }
    let choi = ChoiOperator { d, s };
    let (f_a, f_b) = fom.fidelities(&choi);
    Ok((choi, f_a, f_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_covariant::{optimal_fidelity, optimal_symmetric, tradeoff_point, FrontierSolver};
    use crate::qudit::phase_state;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn fom_is_hermitian_psd() {
        for d in 2..=4 {
            let fom = build_fom(d).unwrap();
            for r in [&fom.r_a, &fom.r_b] {
                assert!(hermiticity_defect(r) < 1e-12);
                assert!(hermitian_eigenvalues(r)[0] > -1e-10);
            }
        }
        assert!(build_fom(1).is_err());
        assert!(build_fom(7).is_err());
    }

    #[test]
    fn identity_channel_scores() {
        for d in 2..=4 {
            let fom = build_fom(d).unwrap();
            let s = choi_of_ansatz(&PcParams::identity(d).unwrap()).unwrap();
            let (fa, fb) = fom.fidelities(&s);
            assert_abs_diff_eq!(fa, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(fb, 1.0 / d as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_ansatz_choi_is_identity_times_depolarizer() {
        let d = 3;
        let s = choi_of_ansatz(&PcParams::identity(d).unwrap()).unwrap();
        // Choi of identity on A: |Ω⟩⟨Ω| with |Ω⟩ = Σ|ii⟩, tensored with I/d on B
        let mut omega = DVector::<C64>::zeros(d * d);
        for i in 0..d {
            omega[i * d + i] = C64::new(1.0, 0.0);
        }
        let expect = (&omega * omega.adjoint()).kronecker(&(ComplexMatrix::identity(d, d) / C64::new(d as f64, 0.0)));
        assert!(max_abs(&(s.matrix() - expect)) < 1e-12);
    }

    #[test]
    fn exact_average_matches_monte_carlo() {
        let d = 2;
        let exact = phase_averaged_projector(d);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples = 1_000_000;
        let mut acc = ComplexMatrix::zeros(d * d, d * d);
        for _ in 0..samples {
            let psi = phase_state(&[rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)]).unwrap();
            let v = psi.conj().tensor(&psi);
            acc += v.projector();
        }
        acc /= C64::new(samples as f64, 0.0);
        assert!(max_abs(&(acc - exact)) < 2e-3);
    }

    #[test]
    fn fom_is_phase_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for d in 2..=4 {
            let fom = build_fom(d).unwrap();
            for _ in 0..5 {
                let z = ComplexMatrix::from_diagonal(&DVector::from_fn(d, |_, _| {
                    C64::from_polar(1.0, rng.gen_range(0.0..TAU))
                }));
                let u = z.conjugate().kronecker(&z).kronecker(&z);
                for r in [&fom.r_a, &fom.r_b] {
                    let rotated = &u * r * u.adjoint();
                    assert!(max_abs(&(rotated - r)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fom_matches_pointwise_fidelity() {
        // Tr[S R] equals the fidelity of the ansatz on any equatorial state
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for d in 2..=4 {
            let fom = build_fom(d).unwrap();
            for _ in 0..5 {
                let p = PcParams::normalized(
                    d,
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
                .unwrap();
                let s = choi_of_ansatz(&p).unwrap();
                s.validate().unwrap();
                let (fa, fb) = p.fidelities();
                let (sa, sb) = fom.fidelities(&s);
                assert_abs_diff_eq!(sa, fa, epsilon = 1e-10);
                assert_abs_diff_eq!(sb, fb, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn ansatz_choi_is_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let p = PcParams::normalized(
                3,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .unwrap();
            assert!(choi_of_ansatz(&p).unwrap().trace_preservation_residual() < 1e-12);
        }
    }

    #[test]
    fn symmetric_qubit_choi_landmark() {
        let fom = build_fom(2).unwrap();
        let s = choi_of_ansatz(&PcParams::from(optimal_symmetric(2).unwrap().1)).unwrap();
        let (fa, fb) = fom.fidelities(&s);
        assert_abs_diff_eq!(fa, 0.853553, epsilon = 1e-6);
        assert_abs_diff_eq!(fb, 0.853553, epsilon = 1e-6);
    }

    #[test]
    fn optimizer_hits_symmetric_optimum() {
        for d in [2, 3] {
            let fom = build_fom(d).unwrap();
            let opt = optimize_map(&fom, 1e-10, 10_000).unwrap();
            let f = optimal_fidelity(d).unwrap();
            assert_abs_diff_eq!(opt.f_a, f, epsilon = 1e-6);
            assert_abs_diff_eq!(opt.f_b, f, epsilon = 1e-6);
            assert!(opt.objective() <= f + 1e-6);
        }
        let f3 = (5.0 + 17f64.sqrt()) / 12.0;
        let opt = optimize_map(&build_fom(3).unwrap(), 1e-10, 10_000).unwrap();
        assert_abs_diff_eq!(opt.f_a, f3, epsilon = 1e-6);
    }

    #[test]
    fn optimizer_is_monotone_and_feasible() {
        for d in [2, 3] {
            for p in [0.1, 0.3, 0.5, 0.8, 1.0] {
                let fom = build_fom(d).unwrap().with_weight(p).unwrap();
                let opt = optimize_map(&fom, 1e-10, 10_000).unwrap();
                for w in opt.history.windows(2) {
                    assert!(w[1] >= w[0] - 1e-12, "d={d} p={p}");
                }
                opt.choi.validate().unwrap();
            }
        }
    }

    #[test]
    fn optimizer_matches_frontier() {
        for d in [2, 3] {
            for i in 1..=9 {
                let p = i as f64 / 10.0;
                let fom = build_fom(d).unwrap().with_weight(p).unwrap();
                let opt = optimize_map(&fom, 1e-10, 10_000).unwrap();
                let pt = tradeoff_point(d, p, FrontierSolver::Exact).unwrap();
                assert_abs_diff_eq!(opt.f_a, pt.f_a, epsilon = 1e-6);
                assert_abs_diff_eq!(opt.f_b, pt.f_b, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn optimizer_reports_non_convergence() {
        let fom = build_fom(3).unwrap().with_weight(0.7).unwrap();
        match optimize_map(&fom, 1e-14, 2) {
            Err(Error::NonConvergence {
                iterations, residual, ..
            }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
        assert!(optimize_map(&fom, 0.0, 10).is_err());
    }

    #[test]
    fn projected_gradient_cross_check() {
        for p in [0.5, 0.8] {
            let fom = build_fom(2).unwrap().with_weight(p).unwrap();
            let (choi, fa, fb) = optimize_map_projected(&fom, 0.5, 400, 60).unwrap();
            let opt = optimize_map(&fom, 1e-10, 10_000).unwrap();
            assert!(choi.trace_preservation_residual() < 1e-6);
            assert!(choi.min_eigenvalue() > -1e-6);
            assert_abs_diff_eq!(p * fa + (1.0 - p) * fb, opt.objective(), epsilon = 1e-4);
        }
    }
}
