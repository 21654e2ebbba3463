mod render;

use std::fmt;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pcrank_core::bounds::{kappa_recommendation, CopReport};
use pcrank_core::reduction::{discrepancy_guaranteed_target, CONSISTENT_K, DEFAULT_MAX_STEPS, DEFAULT_THETA};
use pcrank_core::{
    analyze, cop_check, parse_matrix, rank_ev, reduce, EigenOptions, MatrixFormat, PcMatrix,
    ReduceParams, Revision,
};

#[derive(Parser)]
#[command(name = "pcrank", version, about = "Pairwise-comparison ranking workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ranking, inconsistency indices, discrepancy and bounds for one matrix.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum, default_value_t = Output::Table)]
        output: Output,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Order-preservation (POP / POIP) tables for the eigenvector ranking.
    Cop {
        input: PathBuf,
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum, default_value_t = Output::Table)]
        output: Output,
        /// Skip the O(n^4) intensity scan above this size unless --full.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Run the intensity scan regardless of size.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Revise judgments until Koczkodaj's index reaches a target.
    Reduce {
        input: PathBuf,
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = DEFAULT_THETA)]
        theta: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Where to write the revised matrix (JSON).
        #[arg(long)]
        out: PathBuf,
        /// Where to write the revision log; defaults to `<out>.log.json`.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run the HTTP API (and the web UI when --static points at built assets).
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Persist sessions as JSON snapshots in this directory.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SolverArgs {
    /// Power-iteration residual tolerance.
    #[arg(long, default_value_t = EigenOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = EigenOptions::default().max_iter)]
    max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> EigenOptions {
        EigenOptions {
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Reduce K by at least κ, which guarantees a smaller discrepancy.
    #[arg(long)]
    kappa: bool,
    /// Reduce K to at most this value.
    #[arg(long)]
    target_k: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

enum CliError {
    Core(pcrank_core::Error),
    Io(PathBuf, std::io::Error),
    Unreached { target: f64, best: f64, steps: usize },
    Falsified(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(pcrank_core::Error::NoConvergence { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io(..) | CliError::Unreached { .. } => 1,
            CliError::Falsified(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Unreached { target, best, steps } => write!(
                f,
                "target K <= {target} not reached in {steps} steps (best K = {best})"
            ),
            CliError::Falsified(n) => write!(
                f,
                "{n} order-preservation rows meet the theorem premise but fail the conclusion"
            ),
        }
    }
}

impl From<pcrank_core::Error> for CliError {
    fn from(e: pcrank_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze {
            input,
            io,
            output,
            solver,
        } => cmd_analyze(&input, io.format, output, solver.options()),
        Command::Cop {
            input,
            io,
            output,
            max_n,
            full,
            solver,
        } => cmd_cop(&input, io.format, output, max_n, full, solver.options()),
        Command::Reduce {
            input,
            io,
            target,
            theta,
            max_steps,
            out,
            log,
            solver,
        } => cmd_reduce(
            &input,
            io.format,
            target,
            theta,
            max_steps,
            &out,
            log,
            solver.options(),
        ),
        Command::Serve {
            port,
            host,
            static_dir,
            snapshot_dir,
            solver,
        } => cmd_serve(SocketAddr::new(host, port), static_dir, snapshot_dir, solver.options()),
    }
}

fn load(path: &Path, format: Option<Format>) -> CliResult<PcMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let format = match format {
        Some(Format::Json) => MatrixFormat::Json,
        Some(Format::Csv) => MatrixFormat::Csv,
        None => MatrixFormat::from_path(path),
    };
    parse_matrix(&text, format).map_err(|e| {
        eprintln!("{}: invalid {format} matrix", path.display());
        e.into()
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn print_json<T: Serialize>(value: &T) {
    let mut text = serde_json::to_string_pretty(value).expect("report serialisation");
    text.push('\n');
    emit(&text);
}

fn cmd_analyze(
    input: &Path,
    format: Option<Format>,
    output: Output,
    opts: EigenOptions,
) -> CliResult<()> {
    let m = load(input, format)?;
    let report = analyze(&m, opts)?;
    match output {
        Output::Json => print_json(&report),
        Output::Table => emit(&render::analysis(&report)),
    }
    Ok(())
}

fn cmd_cop(
    input: &Path,
    format: Option<Format>,
    output: Output,
    max_n: usize,
    full: bool,
    opts: EigenOptions,
) -> CliResult<()> {
    let m = load(input, format)?;
    if m.n() < 3 {
        return Err(pcrank_core::Error::KoczkodajUndefined { n: m.n() }.into());
    }
    let mu = rank_ev(&m, opts)?;
    let k = pcrank_core::koczkodaj_index(&m)?.0;
    let with_poip = full || m.n() <= max_n;
    if !with_poip {
        eprintln!(
            "warning: n = {} exceeds --max-n {max_n}; intensity (POIP) scan skipped, pass --full to run it",
            m.n()
        );
    }
    let cop: CopReport = cop_check(&m, &mu, k, with_poip)?;
    match output {
        Output::Json => print_json(&cop),
        Output::Table => emit(&render::cop(&m, &mu, k, &cop)),
    }
    match cop.theorem_violations() {
        0 => Ok(()),
        n => Err(CliError::Falsified(n)),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReduceLog<'a> {
    mode: &'static str,
    target_k: f64,
    theta: f64,
    reached: bool,
    initial_k: f64,
    final_k: f64,
    initial_d: f64,
    final_d: f64,
    revisions: &'a [Revision],
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(
    input: &Path,
    format: Option<Format>,
    target: TargetArgs,
    theta: f64,
    max_steps: usize,
    out: &Path,
    log: Option<PathBuf>,
    opts: EigenOptions,
) -> CliResult<()> {
    let m = load(input, format)?;
    let before = analyze(&m, opts)?;
    let k = before
        .koczkodaj
        .ok_or(pcrank_core::Error::KoczkodajUndefined { n: m.n() })?;
    let d = before.discrepancy.global;
    let (mode, target_k) = match target.target_k {
        Some(t) => ("explicit", t),
        None => {
            if k <= CONSISTENT_K {
                return Err(pcrank_core::Error::AlreadyConsistent.into());
            }
            let kappa = kappa_recommendation(k, d)?;
            println!("kappa: {kappa:.5} (reduce K by at least this much)");
            ("kappa", discrepancy_guaranteed_target(d))
        }
    };
    let outcome = reduce(
        &m,
        ReduceParams {
            target_k,
            max_steps,
            theta,
        },
        opts,
    )?;
    let after = analyze(&outcome.matrix, opts)?;
    let log_path = log.unwrap_or_else(|| out.with_extension("log.json"));
    write(out, &outcome.matrix.to_json())?;
    let log = ReduceLog {
        mode,
        target_k,
        theta,
        reached: outcome.reached,
        initial_k: outcome.initial_k,
        final_k: outcome.final_k,
        initial_d: d,
        final_d: after.discrepancy.global,
        revisions: &outcome.revisions,
    };
    write(&log_path, &serde_json::to_string_pretty(&log).expect("log serialisation"))?;

    println!("K: {:.5} -> {:.5} (target {target_k:.5})", outcome.initial_k, outcome.final_k);
    println!("D: {:.5} -> {:.5}", d, after.discrepancy.global);
    println!("steps: {}", outcome.revisions.len());
    for r in &outcome.revisions {
        println!(
            "  {} -> {}: {:.5} -> {:.5} (K {:.5})",
            m.labels()[r.i],
            m.labels()[r.j],
            r.old_value,
            r.new_value,
            r.predicted_k
        );
    }
    println!("wrote {} and {}", out.display(), log_path.display());
    if !outcome.reached {
        return Err(CliError::Unreached {
            target: target_k,
            best: outcome.final_k,
            steps: max_steps,
        });
    }
    Ok(())
}

fn cmd_serve(
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
    snapshot_dir: Option<PathBuf>,
    opts: EigenOptions,
) -> CliResult<()> {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(PathBuf::new(), e))?;
    runtime.block_on(async move {
        let state = pcrank_service::AppState::new(snapshot_dir.clone(), opts)
            .map_err(|e| CliError::Io(snapshot_dir.clone().unwrap_or_default(), e))?;
        let static_dir = match static_dir {
            Some(dir) if dir.is_dir() => Some(dir),
            Some(dir) => {
                eprintln!("static directory {} not found; API-only mode", dir.display());
                None
            }
            None => {
                eprintln!("no --static directory given; API-only mode");
                None
            }
        };
        let router = pcrank_service::router(state, static_dir.as_deref());
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Io(PathBuf::from(addr.to_string()), e))?;
        let local = listener
            .local_addr()
            .map_err(|e| CliError::Io(PathBuf::from(addr.to_string()), e))?;
        println!("listening on http://{local}");
        pcrank_service::serve(listener, router)
            .await
            .map_err(|e| CliError::Io(PathBuf::from(local.to_string()), e))
    })
}
