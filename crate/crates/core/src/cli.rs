//! `laplan` command-line front end.
//!
//! Exit codes: 0 success, 1 infeasible instance / infeasible plan / oracle
//! limit exceeded, 2 usage, parse or I/O error. Results go to stdout,
//! diagnostics to stderr.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::anneal::{self, SAParams};
use crate::constraints::is_feasible;
use crate::cost::total_cost;
use crate::error::{Error, Result};
use crate::model::{self, format_instance, load_instance, load_solution, Instance, Solution, SolutionReport};
use crate::netgen::{self, GenParams};
use crate::oracle::{self, OracleLimits};

#[derive(Debug, Parser)]
#[command(name = "laplan", version, about = "Location Area planning by simulated annealing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Anneal an instance and write the best plan found.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        sa: SaArgs,
        /// Solution report path.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Trace CSV path.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        labels: LabelArgs,
    },
    /// Generate a synthetic hex-grid instance.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Instance path; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a solution report against an instance.
    Check { instance: PathBuf, solution: PathBuf },
    /// Solve a small instance exactly by enumeration.
    Exact {
        instance: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        /// Fix the BS-to-BSC attachment from this report and search LAs only.
        #[arg(long)]
        fixed_from: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        labels: LabelArgs,
    },
    /// Print a `method,cost,time_ms,instance_hash` table for greedy, SA and
    /// optionally the exact oracle.
    Compare {
        instance: PathBuf,
        #[command(flatten)]
        sa: SaArgs,
        #[arg(long)]
        with_exact: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SaArgs {
    #[arg(long, default_value_t = 0.5)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.95)]
    pub alpha: f64,
    /// Neighbours tested per temperature [default: neighbourhood size]
    #[arg(long)]
    pub moves_per_temp: Option<usize>,
    /// Absolute temperature floor [default: 1e-3 x starting temperature]
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub stall_limit: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Audit feasibility and caches after every applied move.
    #[arg(long)]
    pub verify: bool,
}

impl From<&SaArgs> for SAParams {
    fn from(a: &SaArgs) -> Self {
        SAParams {
            p0: a.p0,
            alpha: a.alpha,
            moves_per_temp: a.moves_per_temp,
            t_min: a.t_min,
            stall_limit: a.stall_limit,
            seed: a.seed,
            restarts: a.restarts,
            jobs: a.jobs,
            verify: a.verify,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LabelArgs {
    /// Mobile country code used in LA labels.
    #[arg(long, default_value = "001")]
    pub mcc: String,
    /// Mobile network code used in LA labels.
    #[arg(long, default_value = "01")]
    pub mnc: String,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 10)]
    pub max_bs: usize,
    #[arg(long, default_value_t = 3)]
    pub max_bsc: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 19)]
    pub n_bs: usize,
    #[arg(long, default_value_t = 3)]
    pub n_bsc: usize,
    #[arg(long, default_value_t = 1)]
    pub n_msc: usize,
    #[arg(long, default_value_t = 1.0)]
    pub cell_radius: f64,
    #[arg(long, default_value_t = 2.0)]
    pub traffic_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub traffic_max: f64,
    #[arg(long, default_value_t = 10.0)]
    pub handoff_scale: f64,
    #[arg(long, default_value_t = 0.6)]
    pub tightness: f64,
    #[arg(long, default_value_t = f64::INFINITY)]
    pub proximity_radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl From<&GenArgs> for GenParams {
    fn from(a: &GenArgs) -> Self {
        GenParams {
            n_bs: a.n_bs,
            n_bsc: a.n_bsc,
            n_msc: a.n_msc,
            cell_radius: a.cell_radius,
            traffic_range: (a.traffic_min, a.traffic_max),
            handoff_scale: a.handoff_scale,
            tightness: a.tightness,
            proximity_radius: a.proximity_radius,
            seed: a.seed,
        }
    }
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InfeasibleInstance(_) | Error::LimitExceeded(_) | Error::GenerationFailed(_) => 1,
        Error::EngineInvariant(_) => 1,
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::InvalidSolution(_)
        | Error::Io { .. }
        | Error::InvalidParam(_) => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn out_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// First 16 hex digits of the SHA-256 of the canonical instance text.
pub fn instance_hash(instance: &Instance) -> String {
    let digest = Sha256::digest(format_instance(instance).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn write_report(
    instance: &Instance,
    solution: &Solution,
    seed: Option<u64>,
    labels: &LabelArgs,
    path: &Path,
) -> Result<()> {
    let cost = total_cost(instance, solution);
    let feasibility = is_feasible(instance, solution);
    let report = SolutionReport {
        solution,
        cost: &cost,
        feasibility: &feasibility,
        seed,
        mcc: &labels.mcc,
        mnc: &labels.mnc,
    };
    model::write_solution(instance, &report, path)
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve {
            instance,
            sa,
            out,
            trace,
            labels,
        } => {
            let inst = load_instance(instance)?;
            let params = SAParams::from(sa);
            // reject bad labels before spending time on the search
            model::LocationAreaId::new(&labels.mcc, &labels.mnc, 0)?;
            let result = anneal::run(&inst, &params)?;
            if let Some(path) = out {
                write_report(&inst, &result.best, Some(params.seed), labels, path)?;
            }
            if let Some(path) = trace {
                let file = create(path)?;
                anneal::write_trace(&result.trace, file).map_err(|e| Error::io(path, e))?;
            }
            let feasible = is_feasible(&inst, &result.best).feasible();
            writeln!(
                stdout,
                "best_cost={} las={} feasible={} seed={}",
                result.best_cost.total,
                result.best.num_las(),
                feasible,
                params.seed
            )
            .map_err(out_err)?;
            let s = &result.stats;
            let _ = writeln!(
                stderr,
                "restarts={} best_restart={} proposed={} accepted={} rejected={} no_candidate={} levels={} wall_ms={}",
                params.restarts,
                result.best_restart,
                s.proposed,
                s.accepted,
                s.rejected,
                s.infeasible,
                s.levels,
                s.wall_time.as_millis()
            );
            Ok(0)
        }
        Command::Gen { gen, out } => {
            let inst = netgen::generate(&GenParams::from(gen))?;
            match out {
                Some(path) => model::write_instance(&inst, path)?,
                None => stdout.write_all(format_instance(&inst).as_bytes()).map_err(out_err)?,
            }
            let _ = writeln!(stderr, "generated n_bs={} seed={}", inst.n_bs(), gen.seed);
            Ok(0)
        }
        Command::Check { instance, solution } => {
            let inst = load_instance(instance)?;
            let sol = load_solution(solution)?.into_solution(&inst)?;
            let report = is_feasible(&inst, &sol);
            let cost = total_cost(&inst, &sol);
            writeln!(
                stdout,
                "feasible={} cost={} las={}",
                report.feasible(),
                cost.total,
                sol.num_las()
            )
            .map_err(out_err)?;
            for v in report.violations() {
                writeln!(stdout, "violation {} {} {} {}", v.kind, v.entity, v.load, v.capacity).map_err(out_err)?;
            }
            Ok(if report.feasible() { 0 } else { 1 })
        }
        Command::Exact {
            instance,
            limits,
            fixed_from,
            out,
            labels,
        } => {
            let inst = load_instance(instance)?;
            let fixed = match fixed_from {
                Some(path) => Some(load_solution(path)?.into_solution(&inst)?.bs_to_bsc().to_vec()),
                None => None,
            };
            let lim = OracleLimits {
                max_bs: limits.max_bs,
                max_bsc: limits.max_bsc,
                joint_mode: fixed.is_none(),
            };
            let result = oracle::enumerate_optimal(&inst, &lim, fixed.as_deref())?;
            if let Some(path) = out {
                write_report(&inst, &result.solution, None, labels, path)?;
            }
            writeln!(
                stdout,
                "best_cost={} las={} feasible=true partitions={}",
                result.cost.total,
                result.solution.num_las(),
                result.partitions
            )
            .map_err(out_err)?;
            Ok(0)
        }
        Command::Compare {
            instance,
            sa,
            with_exact,
            limits,
        } => {
            let inst = load_instance(instance)?;
            let hash = instance_hash(&inst);
            let params = SAParams::from(sa);

            let started = Instant::now();
            let greedy = oracle::greedy_baseline(&inst)?;
            let greedy_ms = started.elapsed().as_millis();

            let started = Instant::now();
            let annealed = anneal::run(&inst, &params)?;
            let sa_ms = started.elapsed().as_millis();

            let mut rows = vec![
                ("greedy", greedy.cost.total, greedy_ms),
                ("sa", annealed.best_cost.total, sa_ms),
            ];
            if *with_exact {
                let lim = OracleLimits {
                    max_bs: limits.max_bs,
                    max_bsc: limits.max_bsc,
                    joint_mode: true,
                };
                let started = Instant::now();
                let exact = oracle::enumerate_optimal(&inst, &lim, None)?;
                rows.push(("exact", exact.cost.total, started.elapsed().as_millis()));
            }
            writeln!(stdout, "method,cost,time_ms,instance_hash").map_err(out_err)?;
            for (method, cost, ms) in rows {
                writeln!(stdout, "{method},{cost},{ms},{hash}").map_err(out_err)?;
            }
            let _ = writeln!(stderr, "seed={}", params.seed);
            Ok(0)
        }
    }
}
