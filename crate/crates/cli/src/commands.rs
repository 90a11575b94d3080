//! Table builders behind each subcommand.

use qclone_core::{
    build_fom, comparison_fidelity, optimal_symmetric, optimize_map, shrinking_factor, tradeoff_point, ClonerKind,
    Error as CoreError, FrontierSolver,
};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::table::{Table, Value};

/// Largest `|ΔF|` between the two verification routes that still passes.
pub const VERIFY_THRESHOLD: f64 = 1e-5;

pub const FIG1_COLUMNS: [&str; 5] = ["d", "F_opt", "V", "X", "eta"];
pub const FIG2_COLUMNS: [&str; 6] = ["d", "p", "F_A", "F_B", "eta_A", "eta_B"];
pub const FIG3_COLUMNS: [&str; 5] = ["d", "F_U", "F_R", "F_PC", "F_MU"];
pub const VERIFY_COLUMNS: [&str; 9] = [
    "d",
    "p",
    "F_A_frontier",
    "F_B_frontier",
    "F_A_choi",
    "F_B_choi",
    "dF_A",
    "dF_B",
    "iterations",
];
pub const TRADEOFF_COLUMNS: [&str; 9] = ["d", "p", "F_A", "F_B", "eta_A", "eta_B", "v", "x", "y"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NonConvergence,
    Discrepancy,
}

impl Status {
    fn worst(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Discrepancy, _) | (_, Discrepancy) => Discrepancy,
            (NonConvergence, _) | (_, NonConvergence) => NonConvergence,
            _ => Ok,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub table: Table,
    pub status: Status,
    /// Human-readable notes for stderr.
    pub diagnostics: Vec<String>,
}

impl CommandOutput {
    fn ok(table: Table) -> Self {
        Self {
            table,
            status: Status::Ok,
            diagnostics: Vec::new(),
        }
    }
}

fn optimal_row(d: usize) -> Result<Vec<Value>, CoreError> {
    let (f, s) = optimal_symmetric(d)?;
    Ok(vec![
        d.into(),
        f.into(),
        s.v.into(),
        s.x.into(),
        shrinking_factor(f, d)?.into(),
    ])
}

/// Symmetric optimum for every `d` in `[d_min, d_max]`.
pub fn fig1(cfg: &SweepConfig) -> Result<CommandOutput, CoreError> {
    let mut table = Table::new("fig1", &FIG1_COLUMNS);
    for d in cfg.d_min..=cfg.d_max {
        table.push(optimal_row(d)?);
    }
    Ok(CommandOutput::ok(table))
}

/// Tradeoff frontier for each dimension in `cfg.dims` over `cfg.p_grid`.
pub fn fig2(cfg: &SweepConfig) -> CommandOutput {
    let cells: Vec<(usize, f64)> = cfg
        .dims
        .iter()
        .flat_map(|&d| cfg.p_grid.iter().map(move |&p| (d, p)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(d, p)| (d, p, tradeoff_point(d, p, cfg.solver)))
        .collect();

    let mut out = CommandOutput::ok(Table::new("fig2", &FIG2_COLUMNS));
    for (d, p, res) in results {
        match res {
            Ok(pt) => out.table.push(vec![
                d.into(),
                p.into(),
                pt.f_a.into(),
                pt.f_b.into(),
                pt.eta_a.into(),
                pt.eta_b.into(),
            ]),
            Err(e) => {
                out.diagnostics.push(format!("d={d} p={p}: {e}"));
                out.status = out.status.worst(Status::NonConvergence);
                let nan = Value::Num(f64::NAN);
                out.table.push(vec![d.into(), p.into(), nan, nan, nan, nan]);
            }
        }
    }
    out
}

/// Comparison-cloner fidelities for every `d` in `[d_min, d_max]`.
pub fn fig3(cfg: &SweepConfig) -> Result<CommandOutput, CoreError> {
    let mut table = Table::new("fig3", &FIG3_COLUMNS);
    for d in cfg.d_min..=cfg.d_max {
        let mut row = vec![Value::from(d)];
        for kind in [
            ClonerKind::Universal,
            ClonerKind::Real,
            ClonerKind::PhaseCovariant,
            ClonerKind::MutuallyUnbiased,
        ] {
            row.push(comparison_fidelity(kind, d)?.into());
        }
        table.push(row);
    }
    Ok(CommandOutput::ok(table))
}

/// Compares the `(v, x, y)` frontier with the Choi-operator optimizer on
/// every `(d, p)` cell.
pub fn verify(cfg: &SweepConfig) -> Result<CommandOutput, CoreError> {
    let cells: Vec<(usize, f64)> = cfg
        .dims
        .iter()
        .flat_map(|&d| cfg.p_grid.iter().map(move |&p| (d, p)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(d, p)| {
            let frontier = tradeoff_point(d, p, cfg.solver);
            let choi = build_fom(d)
                .and_then(|f| f.with_weight(p))
                .and_then(|f| optimize_map(&f, cfg.tol, cfg.max_iter));
            (d, p, frontier, choi)
        })
        .collect();

    let mut out = CommandOutput::ok(Table::new("verify", &VERIFY_COLUMNS));
    let mut worst: f64 = 0.0;
    for (d, p, frontier, choi) in results {
        let frontier = frontier?;
        match choi {
            Ok(opt) => {
                let (da, db) = ((frontier.f_a - opt.f_a).abs(), (frontier.f_b - opt.f_b).abs());
                worst = worst.max(da).max(db);
                if da.max(db) > VERIFY_THRESHOLD {
                    out.status = out.status.worst(Status::Discrepancy);
                    out.diagnostics
                        .push(format!("d={d} p={p}: discrepancy {:e}", da.max(db)));
                }
                out.table.push(vec![
                    d.into(),
                    p.into(),
                    frontier.f_a.into(),
                    frontier.f_b.into(),
                    opt.f_a.into(),
                    opt.f_b.into(),
                    da.into(),
                    db.into(),
                    opt.iterations.into(),
                ]);
            }
            Err(e @ CoreError::NonConvergence { .. }) => {
                out.status = out.status.worst(Status::NonConvergence);
                out.diagnostics.push(format!("d={d} p={p}: {e}"));
                let nan = Value::Num(f64::NAN);
                out.table.push(vec![
                    d.into(),
                    p.into(),
                    frontier.f_a.into(),
                    frontier.f_b.into(),
                    nan,
                    nan,
                    nan,
                    nan,
                    cfg.max_iter.into(),
                ]);
            }
            Err(e) => return Err(e),
        }
    }
    out.diagnostics
        .push(format!("max |dF| = {worst:e} over {} cells", out.table.rows.len()));
    Ok(out)
}

pub fn optimal(d: usize) -> Result<CommandOutput, CoreError> {
    let mut table = Table::new("optimal", &FIG1_COLUMNS);
    table.push(optimal_row(d)?);
    Ok(CommandOutput::ok(table))
}

pub fn tradeoff(d: usize, p: f64, solver: FrontierSolver) -> Result<CommandOutput, CoreError> {
    let pt = tradeoff_point(d, p, solver)?;
    let mut table = Table::new("tradeoff", &TRADEOFF_COLUMNS);
    table.push(vec![
        d.into(),
        p.into(),
        pt.f_a.into(),
        pt.f_b.into(),
        pt.eta_a.into(),
        pt.eta_b.into(),
        pt.params.v.into(),
        pt.params.x.into(),
        pt.params.y.into(),
    ]);
    Ok(CommandOutput::ok(table))
}
