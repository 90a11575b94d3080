//! Phase-covariant cloners built from the three-parameter `(v, x, y)`
//! amplitude matrix
//!
//! ```text
//!   v y ... y
//!   x x ... x
//!   :       :
//!   x x ... x
//! ```
//!
//! with `v² + (d−1)y² + d(d−1)x² = 1`. Clone A has fidelity `v² + (d−1)x²`
//! on every equatorial state; the Fourier dual keeps the same shape, so
//! clone B has `v'² + (d−1)x'²`.
//!
//! Both fidelities and the normalization are quadratic forms in `(v, x, y)`,
//! so any weighted sum `p·F_A + (1−p)·F_B` is maximized by the top
//! eigenvector of a 3×3 symmetric matrix once the (diagonal) normalization
//! form is whitened. That is the default frontier solver; a seeded
//! Nelder–Mead multistart over the unit sphere is kept as an independent
//! cross-check.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::brent::BrentOpt;
use argmin::solver::neldermead::NelderMead;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cloning::AmplitudeMatrix;
use crate::error::{domain, Error, Result};
use crate::qudit::{ComplexMatrix, C64};

const NORM_TOL: f64 = 1e-9;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return domain(format!("dimension must be at least 2, got {d}"));
    }
    Ok(())
}

/// Real amplitudes `(v, x, y)` of a phase-covariant cloner in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PcParams {
    pub d: usize,
    pub v: f64,
    pub x: f64,
    pub y: f64,
}

impl PcParams {
    /// Checks the normalization `v² + (d−1)y² + d(d−1)x² = 1` within `1e-9`.
    pub fn new(d: usize, v: f64, x: f64, y: f64) -> Result<Self> {
        check_dim(d)?;
        let p = Self { d, v, x, y };
        let n = p.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return domain(format!("(v, x, y) = ({v}, {x}, {y}) has norm² {n} at d = {d}"));
        }
        Ok(p)
    }

    /// Rescales an arbitrary nonzero triple onto the normalization surface.
    pub fn normalized(d: usize, v: f64, x: f64, y: f64) -> Result<Self> {
        check_dim(d)?;
        let n = Self { d, v, x, y }.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return domain("cannot normalize a zero parameter triple");
        }
        Self::new(d, v / n, x / n, y / n)
    }

    /// `v = 1`: clone A is perfect, clone B fully mixed.
    pub fn identity(d: usize) -> Result<Self> {
        Self::new(d, 1.0, 0.0, 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        let d = self.d as f64;
        self.v * self.v + (d - 1.0) * self.y * self.y + d * (d - 1.0) * self.x * self.x
    }

    /// Parameters `(v', x', y')` of the Fourier-dual matrix seen by clone B.
    pub fn dual(&self) -> (f64, f64, f64) {
        let d = self.d as f64;
        let (v, x, y) = (self.v, self.x, self.y);
        let vp = (v + (d - 1.0) * y + d * (d - 1.0) * x) / d;
        let yp = (v + (d - 1.0) * y - d * x) / d;
        let xp = (v - y) / d;
        (vp, xp, yp)
    }

    pub fn ansatz_matrix(&self) -> Result<AmplitudeMatrix> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return domain(format!("parameters violate normalization (norm² = {n})"));
        }
        let d = self.d;
        let a = ComplexMatrix::from_fn(d, d, |m, k| {
            let val = match (m, k) {
                (0, 0) => self.v,
                (0, _) => self.y,
                _ => self.x,
            };
            C64::new(val, 0.0)
        });
        AmplitudeMatrix::new(a)
    }

    /// `(F_A, F_B)` on any equatorial state.
    pub fn fidelities(&self) -> (f64, f64) {
        let dm1 = self.d as f64 - 1.0;
        let (vp, xp, _) = self.dual();
        (self.v * self.v + dm1 * self.x * self.x, vp * vp + dm1 * xp * xp)
    }
}

/// Symmetric-cloner parameters `(V, X)` with `V² + 2(d−1)X² = 1`.
///
/// They map to `v = (V + (d−1)X)/√d`, `y = (V − X)/√d`, `x = X/√d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricParams {
    pub d: usize,
    pub v: f64,
    pub x: f64,
}

impl SymmetricParams {
    pub fn constraint(&self) -> f64 {
        self.v * self.v + 2.0 * (self.d as f64 - 1.0) * self.x * self.x
    }

    /// Common fidelity of both clones.
    pub fn fidelity(&self) -> f64 {
        symmetric_fidelity(self.d, self.v, self.x)
    }
}

impl From<SymmetricParams> for PcParams {
    fn from(s: SymmetricParams) -> Self {
        let root = (s.d as f64).sqrt();
        let dm1 = s.d as f64 - 1.0;
        PcParams {
            d: s.d,
            v: (s.v + dm1 * s.x) / root,
            x: s.x / root,
            y: (s.v - s.x) / root,
        }
    }
}

/// `F = [1 + (d−1)(d−2)X² + 2(d−1)VX] / d`.
pub fn symmetric_fidelity(d: usize, v: f64, x: f64) -> f64 {
    let d = d as f64;
    (1.0 + (d - 1.0) * (d - 2.0) * x * x + 2.0 * (d - 1.0) * v * x) / d
}

/// Closed-form optimal symmetric fidelity.
pub fn optimal_fidelity(d: usize) -> Result<f64> {
    check_dim(d)?;
    let df = d as f64;
    let disc = (df - 2.0).powi(2) + 8.0 * (df - 1.0);
    Ok((1.0 + (df - 2.0 + disc.sqrt()) / 4.0) / df)
}

/// Optimal symmetric cloner: `(F_opt, (V, X))`, with `V, X ≥ 0`.
pub fn optimal_symmetric(d: usize) -> Result<(f64, SymmetricParams)> {
    let f = optimal_fidelity(d)?;
    let df = d as f64;
    let denom = 1.0 + (df - 2.0) * f;
    let v2 = (df - 1.0) / df / denom;
    let x2 = 1.0 / (2.0 * (df - 1.0)) - 1.0 / (2.0 * df) / denom;
    Ok((
        f,
        SymmetricParams {
            d,
            v: v2.sqrt(),
            x: x2.max(0.0).sqrt(),
        },
    ))
}

struct SymmetricObjective {
    d: usize,
}

impl SymmetricObjective {
    fn params(&self, x: f64) -> (f64, f64) {
        let v2 = 1.0 - 2.0 * (self.d as f64 - 1.0) * x * x;
        (v2.max(0.0).sqrt(), x)
    }
}

impl CostFunction for SymmetricObjective {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, ArgminError> {
        let (v, x) = self.params(*x);
        Ok(-symmetric_fidelity(self.d, v, x))
    }
}

/// Maximizes the symmetric fidelity along the constraint curve with a
/// bounded 1-D Brent search over `X ∈ [0, 1/√(2(d−1))]`, `V ≥ 0`.
/// Independent of the closed form.
pub fn optimal_symmetric_by_search(d: usize) -> Result<(f64, SymmetricParams)> {
    check_dim(d)?;
    let upper = 1.0 / (2.0 * (d as f64 - 1.0)).sqrt();
    let solver = BrentOpt::new(0.0, upper).set_tolerance(1e-14, 1e-15);
    let obj = SymmetricObjective { d };
    let res = Executor::new(obj, solver)
        .configure(|s| s.max_iters(500))
        .run()
        .map_err(|e| Error::Domain(format!("Brent search failed: {e}")))?;
    let state = res.state();
    let x = *state
        .get_best_param()
        .ok_or_else(|| Error::Domain("Brent search returned no iterate".into()))?;
    let (v, x) = SymmetricObjective { d }.params(x);
    Ok((-state.get_best_cost(), SymmetricParams { d, v, x }))
}

/// `F_A` as a function of `F_B` and `(v, y)`: `v² + Δ` with
/// `Δ = (√disc − v − (d−1)y)² / ((d−1)d²)` and
/// `disc = d²F_B − (d−1)(v−y)²` expanded as in the reference formula.
///
/// Corresponds to the branch where the dual amplitude `v'` is nonnegative.
pub fn asym_fidelity(f_b: f64, v: f64, y: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    let df = d as f64;
    let disc = 2.0 * y * df * v - y * y * df + v * v - 2.0 * v * y + y * y + f_b * df * df - df * v * v;
    if disc < 0.0 {
        return Err(Error::Infeasible { discriminant: disc });
    }
    let num = -2.0 * y * df - 2.0 * v + 2.0 * y + 2.0 * disc.sqrt();
    let delta = num * num / (4.0 * (df - 1.0) * df * df);
    Ok(v * v + delta)
}

/// `η = (dF − 1)/(d − 1)`. Inputs within `1e-12` outside `[1/d, 1]` are
/// clamped.
pub fn shrinking_factor(f: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    let df = d as f64;
    const SLACK: f64 = 1e-12;
    if !(1.0 / df - SLACK..=1.0 + SLACK).contains(&f) {
        return domain(format!("fidelity {f} outside [1/{d}, 1]"));
    }
    Ok(((df * f - 1.0) / (df - 1.0)).clamp(0.0, 1.0))
}

/// Inverse of [`shrinking_factor`]: `F = η + (1−η)/d`.
pub fn fidelity_from_shrinking(eta: f64, d: usize) -> f64 {
    eta + (1.0 - eta) / d as f64
}

/// One point of the asymmetric tradeoff frontier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub d: usize,
    /// Weight on clone A.
    pub p: f64,
    pub f_a: f64,
    pub f_b: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub params: PcParams,
}

impl TradeoffPoint {
    fn from_params(params: PcParams, p: f64) -> Result<Self> {
        let (f_a, f_b) = params.fidelities();
        // unclamped, so F = η + (1−η)/d holds exactly even for solver round-off
        let eta = |f: f64| {
            let d = params.d as f64;
            (d * f - 1.0) / (d - 1.0)
        };
        Ok(Self {
            d: params.d,
            p,
            f_a,
            f_b,
            eta_a: eta(f_a),
            eta_b: eta(f_b),
            params,
        })
    }

    pub fn objective(&self) -> f64 {
        self.p * self.f_a + (1.0 - self.p) * self.f_b
    }
}

/// How to maximize `p·F_A + (1−p)·F_B` over normalized `(v, x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrontierSolver {
    /// Top eigenvector of the whitened 3×3 quadratic form.
    #[default]
    Exact,
    /// Nelder–Mead on the unit sphere with seeded random restarts.
    Search { restarts: usize, seed: u64 },
}

/// Whitening: `(v, x, y) = T u` maps the unit sphere onto the
/// normalization surface.
fn whitening(d: usize) -> Vector3<f64> {
    let df = d as f64;
    Vector3::new(1.0, 1.0 / (df * (df - 1.0)).sqrt(), 1.0 / (df - 1.0).sqrt())
}

/// The weighted objective as a quadratic form in the whitened coordinates.
fn weighted_form(d: usize, p: f64) -> Matrix3<f64> {
    let df = d as f64;
    let qa = Matrix3::from_diagonal(&Vector3::new(1.0, df - 1.0, 0.0));
    let cv = Vector3::new(1.0, df * (df - 1.0), df - 1.0) / df;
    let cx = Vector3::new(1.0, 0.0, -1.0) / df;
    let qb = cv * cv.transpose() + cx * cx.transpose() * (df - 1.0);
    let t = Matrix3::from_diagonal(&whitening(d));
    t * (qa * p + qb * (1.0 - p)) * t
}

fn params_from_sphere(d: usize, u: Vector3<f64>) -> Result<PcParams> {
    let mut u = u / u.norm();
    // fix the global sign: v >= 0, or x >= 0 when v vanishes
    if u[0] < -1e-14 || (u[0].abs() <= 1e-14 && u[1] < 0.0) {
        u = -u;
    }
    let w = whitening(d);
    PcParams::new(d, u[0] * w[0], u[1] * w[1], u[2] * w[2])
}

fn exact_point(d: usize, p: f64) -> Result<PcParams> {
    let eig = weighted_form(d, p).symmetric_eigen();
    let top = eig.eigenvalues.imax();
    params_from_sphere(d, eig.eigenvectors.column(top).into_owned())
}

fn sphere_point(angles: &[f64]) -> Vector3<f64> {
    let (t, f) = (angles[0], angles[1]);
    Vector3::new(t.cos(), t.sin() * f.cos(), t.sin() * f.sin())
}

struct SphereObjective {
    form: Matrix3<f64>,
}

impl CostFunction for SphereObjective {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, angles: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        let u = sphere_point(angles);
        Ok(-(u.transpose() * self.form * u)[0])
    }
}

fn search_point(d: usize, p: f64, restarts: usize, seed: u64) -> Result<PcParams> {
    const MAX_ITERS: u64 = 4000;
    let form = weighted_form(d, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut converged = false;
    let mut last_iters = 0;
    for _ in 0..restarts.max(1) {
        let start = [
            rng.gen_range(0.0..std::f64::consts::PI),
            rng.gen_range(0.0..std::f64::consts::TAU),
        ];
        let simplex = vec![
            start.to_vec(),
            vec![start[0] + 0.3, start[1]],
            vec![start[0], start[1] + 0.3],
        ];
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-15)
            .map_err(|e| Error::Domain(e.to_string()))?;
        let res = Executor::new(SphereObjective { form }, solver)
            .configure(|s| s.max_iters(MAX_ITERS))
            .run()
            .map_err(|e| Error::Domain(format!("Nelder-Mead failed: {e}")))?;
        let state = res.state();
        last_iters = state.get_iter() as usize;
        let ok = matches!(
            state.get_termination_status(),
            TerminationStatus::Terminated(TerminationReason::SolverConverged)
        );
        let cost = state.get_best_cost();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = state.get_best_param().cloned().map(|a| (cost, a));
            converged = ok;
        }
    }
    let (cost, angles) = best.expect("at least one restart");
    let u = sphere_point(&angles);
    if !converged {
        // residual: norm of the projected gradient of the Rayleigh quotient
        let g = form * u * 2.0;
        let resid = (g - u * (u.dot(&g))).norm();
        return Err(Error::NonConvergence {
            iterations: last_iters,
            residual: resid,
            best: -cost,
            best_iterate: u.iter().copied().collect(),
        });
    }
    params_from_sphere(d, u)
}

/// Maximizes `p·F_A + (1−p)·F_B` for a single weight `p ∈ [0, 1]`.
pub fn tradeoff_point(d: usize, p: f64, solver: FrontierSolver) -> Result<TradeoffPoint> {
    check_dim(d)?;
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("asymmetry weight {p} outside [0, 1]"));
    }
    let params = match solver {
        FrontierSolver::Exact => exact_point(d, p)?,
        FrontierSolver::Search { restarts, seed } => search_point(d, p, restarts, seed)?,
    };
    TradeoffPoint::from_params(params, p)
}

/// Traces the frontier over the weights in `grid`, in the given order.
pub fn tradeoff_frontier(d: usize, grid: &[f64], solver: FrontierSolver) -> Result<Vec<TradeoffPoint>> {
    if grid.is_empty() {
        return domain("empty asymmetry grid");
    }
    grid.iter().map(|&p| tradeoff_point(d, p, solver)).collect()
}

/// `n` uniformly spaced weights on `[0, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}
