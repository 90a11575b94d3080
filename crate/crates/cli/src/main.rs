use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qclone_cli::commands::{self, CommandOutput, Status};
use qclone_cli::config::{parse_dims, parse_p_grid, ConfigError, Format, SweepConfig};
use qclone_cli::exit;
use qclone_core::{Error as CoreError, FrontierSolver};

#[derive(Parser)]
#[command(
    name = "qclone",
    version,
    about = "Phase-covariant qudit cloning: figures, tradeoffs and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric optimal fidelity versus dimension
    Fig1,
    /// Shrinking-factor tradeoff curves
    Fig2,
    /// Comparison with universal, real and two-basis cloners
    Fig3,
    /// Check the frontier against an optimization over all CP maps
    Verify,
    /// Optimal symmetric cloner for one dimension
    Optimal {
        #[arg(long)]
        d: usize,
    },
    /// One point of the asymmetric frontier
    Tradeoff {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Exact,
    Search,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, global = true, default_value_t = 2)]
    d_min: usize,
    #[arg(long, global = true, default_value_t = 100)]
    d_max: usize,
    /// Comma-separated dimensions (fig2: 2,3,4,10,100; verify: 2,3)
    #[arg(long, global = true)]
    dims: Option<String>,
    /// Comma-separated weights or `uniform:N` (fig2: uniform:41; verify: 0.1,...,0.9)
    #[arg(long, global = true)]
    p_grid: Option<String>,
    /// Objective tolerance of the CP-map optimizer
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_iter: usize,
    /// Seed for the restart search solver
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = SolverArg::Exact)]
    solver: SolverArg,
    #[arg(long, global = true, default_value_t = 20)]
    restarts: usize,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

fn build_config(args: &SweepArgs, verify: bool) -> Result<SweepConfig, ConfigError> {
    let defaults = SweepConfig::default();
    let dims = match &args.dims {
        Some(s) => parse_dims(s)?,
        None if verify => vec![2, 3],
        None => defaults.dims,
    };
    let p_grid = match &args.p_grid {
        Some(s) => parse_p_grid(s)?,
        None if verify => (1..=9).map(|i| i as f64 / 10.0).collect(),
        None => defaults.p_grid,
    };
    let solver = match args.solver {
        SolverArg::Exact => FrontierSolver::Exact,
        SolverArg::Search => FrontierSolver::Search {
            restarts: args.restarts,
            seed: args.seed,
        },
    };
    let cfg = SweepConfig {
        d_min: args.d_min,
        d_max: args.d_max,
        dims,
        p_grid,
        tol: args.tol,
        max_iter: args.max_iter,
        seed: args.seed,
        solver,
        output_path: args.out.clone(),
        format: match args.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
    };
    if verify {
        cfg.validate_for_verify()?;
    } else {
        cfg.validate()?;
    }
    Ok(cfg)
}

fn core_exit(e: &CoreError) -> i32 {
    match e {
        CoreError::NonConvergence { .. } => exit::NON_CONVERGENCE,
        _ => exit::USAGE,
    }
}

fn emit(out: &CommandOutput, cfg: &SweepConfig) -> i32 {
    for line in &out.diagnostics {
        eprintln!("{line}");
    }
    let text = match cfg.format {
        Format::Csv => out.table.to_csv(),
        Format::Json => out.table.to_json(),
    };
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return exit::USAGE;
            }
        }
        None => print!("{text}"),
    }
    match out.status {
        Status::Ok => exit::SUCCESS,
        Status::NonConvergence => exit::NON_CONVERGENCE,
        Status::Discrepancy => exit::DISCREPANCY,
    }
}

fn run(cli: Cli) -> i32 {
    let verify = matches!(cli.command, Command::Verify);
    let cfg = match build_config(&cli.sweep, verify) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::USAGE;
        }
    };
    let result = match cli.command {
        Command::Fig1 => commands::fig1(&cfg),
        Command::Fig2 => Ok(commands::fig2(&cfg)),
        Command::Fig3 => commands::fig3(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Optimal { d } => commands::optimal(d),
        Command::Tradeoff { d, p } => commands::tradeoff(d, p, cfg.solver),
    };
    match result {
        Ok(out) => emit(&out, &cfg),
        Err(e) => {
            eprintln!("error: {e}");
            core_exit(&e)
        }
    }
}

fn main() -> ExitCode {
    let code = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            }
        }
    };
    ExitCode::from(code as u8)
}
