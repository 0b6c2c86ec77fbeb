//! Simulated annealing over BS-to-BSC moves with LA repair.
//!
//! One level of the schedule tests `moves_per_temp` neighbours (proposals
//! that find no legal candidate count as tested), applies the accepted ones,
//! then cools geometrically. A run stops when the temperature falls below the
//! floor, when the best cost has not improved for `stall_limit` consecutive
//! levels, or when the best cost reaches zero.
//!
//! Randomness comes from ChaCha8 seeded with `seed ^ k` for restart `k`, so
//! traces are reproducible across platforms and independent of `jobs`.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{bsc_accepts, is_feasible, la_accepts, ConstraintKind};
use crate::cost::{relabel_delta, total_cost, CostBreakdown};
use crate::error::{Error, Result};
use crate::model::{initial_topology, Instance, LaTarget, Solution};

pub type SolverRng = ChaCha8Rng;

/// Temperature floor relative to the starting temperature when no absolute
/// `t_min` is given.
pub const DEFAULT_T_MIN_RATIO: f64 = 1e-3;

/// Generator for restart `k` of a run seeded with `seed`.
pub fn restart_rng(seed: u64, k: usize) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed ^ k as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SAParams {
    /// Acceptance probability the starting temperature is tuned for.
    pub p0: f64,
    /// Cooling factor applied once per level.
    pub alpha: f64,
    /// Neighbours tested per level; `None` uses the neighbourhood size.
    pub moves_per_temp: Option<usize>,
    /// Absolute temperature floor; `None` uses `DEFAULT_T_MIN_RATIO * T0`.
    pub t_min: Option<f64>,
    /// Consecutive levels without a new best before stopping.
    pub stall_limit: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Worker threads for restarts. Results do not depend on it.
    pub jobs: usize,
    /// Audit caches, cost and feasibility after every applied move.
    pub verify: bool,
}

impl Default for SAParams {
    fn default() -> Self {
        SAParams {
            p0: 0.5,
            alpha: 0.95,
            moves_per_temp: None,
            t_min: None,
            stall_limit: 100,
            seed: 0,
            restarts: 1,
            jobs: 1,
            verify: false,
        }
    }
}

impl SAParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.p0 > 0.0 && self.p0 < 1.0) {
            return bad(format!("p0 = {} must lie in (0, 1)", self.p0));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} must lie in (0, 1)", self.alpha));
        }
        if self.moves_per_temp == Some(0) {
            return bad("moves_per_temp must be at least 1".into());
        }
        if let Some(t) = self.t_min {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("t_min = {t} must be positive"));
            }
        }
        if self.stall_limit == 0 {
            return bad("stall_limit must be at least 1".into());
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        Ok(())
    }
}

/// One BS-to-BSC reassignment together with the LA the cell lands in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub bs: usize,
    pub old_bsc: usize,
    pub new_bsc: usize,
    pub old_la: usize,
    pub target: LaTarget,
    /// Cost change of applying the move.
    pub delta: f64,
}

impl Move {
    /// Applies the move; returns the LA index the cell ends up in.
    pub fn apply(&self, instance: &Instance, solution: &mut Solution) -> usize {
        debug_assert_eq!(solution.bsc_of(self.bs), self.old_bsc);
        solution.move_bs(instance, self.bs, self.new_bsc, self.target)
    }
}

/// Why a sampled cell yielded no move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoCandidate {
    /// No other BSC within the proximity radius.
    NoAlternativeBsc,
    /// The drawn BSC lacks room for the cell.
    Capacity(ConstraintKind),
    /// Not even a fresh LA on the drawn BSC is paging-feasible.
    Paging,
}

/// Draws one neighbour of a feasible `solution`.
///
/// A cell and a different reachable BSC are drawn uniformly. If the BSC has
/// room, the LAs it already serves are tried in random order and the first
/// that stays paging- and MSC-feasible with the cell added is taken;
/// otherwise the cell opens a new LA.
pub fn propose_move<R: Rng + ?Sized>(
    instance: &Instance,
    solution: &Solution,
    rng: &mut R,
) -> std::result::Result<Move, NoCandidate> {
    let bs = rng.gen_range(0..instance.n_bs());
    let old_bsc = solution.bsc_of(bs);
    let cands = instance.candidate_bscs(bs);
    let own = cands.binary_search(&old_bsc).ok();
    let n_alt = cands.len() - usize::from(own.is_some());
    if n_alt == 0 {
        return Err(NoCandidate::NoAlternativeBsc);
    }
    let mut k = rng.gen_range(0..n_alt);
    if own.is_some_and(|p| k >= p) {
        k += 1;
    }
    let new_bsc = cands[k];

    if let Some(v) = bsc_accepts(instance, solution, bs, new_bsc) {
        return Err(NoCandidate::Capacity(v.kind));
    }

    let mut hosted: Vec<usize> = solution.bsc_las(new_bsc).collect();
    hosted.shuffle(rng);
    let target = hosted
        .into_iter()
        .map(LaTarget::Existing)
        .find(|&t| la_accepts(instance, solution, bs, new_bsc, t))
        .or_else(|| la_accepts(instance, solution, bs, new_bsc, LaTarget::New).then_some(LaTarget::New))
        .ok_or(NoCandidate::Paging)?;

    Ok(Move {
        bs,
        old_bsc,
        new_bsc,
        old_la: solution.la_of(bs),
        target,
        delta: relabel_delta(instance, solution, bs, target),
    })
}

/// Metropolis rule: non-worsening moves always pass, worse ones with
/// probability `exp(-delta / temperature)` from a single uniform draw.
pub fn accept<R: Rng + ?Sized>(delta: f64, temperature: f64, rng: &mut R) -> bool {
    if delta <= 0.0 {
        return true;
    }
    rng.gen::<f64>() < (-delta / temperature).exp()
}

/// `-initial_cost / ln(p0)`: the temperature at which a move as bad as the
/// whole starting cost is accepted with probability `p0`.
pub fn initial_temperature(initial_cost: f64, p0: f64) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::InvalidParam(format!("p0 = {p0} must lie in (0, 1)")));
    }
    Ok(-initial_cost / p0.ln())
}

pub fn cool(temperature: f64, alpha: f64) -> f64 {
    alpha * temperature
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: u64,
    pub level: u32,
    pub temperature: f64,
    pub current_cost: f64,
    pub best_cost: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub proposed: u64,
    pub accepted: u64,
    /// Legal moves declined by the Metropolis rule.
    pub rejected: u64,
    /// Proposals that produced no legal move.
    pub infeasible: u64,
    pub levels: u64,
    pub verified_steps: u64,
    pub wall_time: Duration,
}

impl SolveStats {
    fn merge(&mut self, other: &SolveStats) {
        self.proposed += other.proposed;
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.infeasible += other.infeasible;
        self.levels += other.levels;
        self.verified_steps += other.verified_steps;
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub best: Solution,
    pub best_cost: CostBreakdown,
    /// Trace of the restart that produced `best`.
    pub trace: Vec<TraceRow>,
    /// Counts summed over restarts; wall time of the whole run.
    pub stats: SolveStats,
    pub best_restart: usize,
    pub initial_cost: f64,
}

struct RestartOutcome {
    best: Solution,
    best_cost: f64,
    initial_cost: f64,
    trace: Vec<TraceRow>,
    stats: SolveStats,
}

/// Runs `params.restarts` independent anneals and returns the best plan
/// found. Ties go to the lowest restart index.
pub fn run(instance: &Instance, params: &SAParams) -> Result<SolveResult> {
    params.validate()?;
    let started = Instant::now();
    let jobs = params.jobs.min(params.restarts);

    let outcomes: Vec<Result<RestartOutcome>> = if jobs <= 1 {
        (0..params.restarts).map(|k| run_restart(instance, params, k)).collect()
    } else {
        let mut slots: Vec<Option<Result<RestartOutcome>>> = (0..params.restarts).map(|_| None).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    scope.spawn(move || {
                        (w..params.restarts)
                            .step_by(jobs)
                            .map(|k| (k, run_restart(instance, params, k)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (k, r) in h.join().expect("restart worker panicked") {
                    slots[k] = Some(r);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every restart ran")).collect()
    };

    let mut stats = SolveStats::default();
    let mut winner: Option<(usize, RestartOutcome)> = None;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        stats.merge(&outcome.stats);
        if winner.as_ref().is_none_or(|(_, w)| outcome.best_cost < w.best_cost) {
            winner = Some((k, outcome));
        }
    }
    let (best_restart, w) = winner.expect("restarts >= 1");
    stats.wall_time = started.elapsed();
    let best_cost = total_cost(instance, &w.best);
    Ok(SolveResult {
        best: w.best,
        best_cost,
        trace: w.trace,
        stats,
        best_restart,
        initial_cost: w.initial_cost,
    })
}

fn verify_step(instance: &Instance, current: &Solution, current_cost: f64) -> Result<()> {
    current.audit_caches(instance).map_err(Error::EngineInvariant)?;
    let report = is_feasible(instance, current);
    if let Some(v) = report.violations().first() {
        return Err(Error::EngineInvariant(format!("infeasible state visited: {v}")));
    }
    let exact = total_cost(instance, current).total;
    if (current_cost - exact).abs() > 1e-9 * exact.abs().max(1.0) {
        return Err(Error::EngineInvariant(format!(
            "incremental cost {current_cost} drifted from recomputed {exact}"
        )));
    }
    Ok(())
}

fn run_restart(instance: &Instance, params: &SAParams, k: usize) -> Result<RestartOutcome> {
    let started = Instant::now();
    let mut rng = restart_rng(params.seed, k);
    let mut current = initial_topology(instance, &mut rng)?;
    let initial_cost = total_cost(instance, &current).total;
    let mut current_cost = initial_cost;
    let mut best = current.clone();
    let mut best_cost = current_cost;
    if params.verify {
        verify_step(instance, &current, current_cost)?;
    }

    let t0 = initial_temperature(initial_cost, params.p0)?;
    let mut floor = params.t_min.unwrap_or(DEFAULT_T_MIN_RATIO * t0);
    if floor <= 0.0 {
        floor = f64::MIN_POSITIVE;
    }
    let mut temperature = t0.max(floor);
    let moves_per_temp = params.moves_per_temp.unwrap_or(instance.neighborhood_size().max(1));

    let mut stats = SolveStats::default();
    let mut trace = Vec::new();
    let mut iteration = 0u64;
    let mut stall = 0usize;
    let mut level = 0u32;
    loop {
        let mut improved = false;
        for _ in 0..moves_per_temp {
            iteration += 1;
            stats.proposed += 1;
            let accepted = match propose_move(instance, &current, &mut rng) {
                Err(_) => {
                    stats.infeasible += 1;
                    false
                }
                Ok(mv) if accept(mv.delta, temperature, &mut rng) => {
                    mv.apply(instance, &mut current);
                    current_cost += mv.delta;
                    stats.accepted += 1;
                    if params.verify {
                        verify_step(instance, &current, current_cost)?;
                        stats.verified_steps += 1;
                    }
                    if current_cost < best_cost - 1e-9 * best_cost.max(1.0) {
                        // resync the running sum before recording a new best
                        current_cost = total_cost(instance, &current).total;
                        if current_cost < best_cost {
                            best_cost = current_cost;
                            best = current.clone();
                            improved = true;
                        }
                    }
                    true
                }
                Ok(_) => {
                    stats.rejected += 1;
                    false
                }
            };
            trace.push(TraceRow {
                iteration,
                level,
                temperature,
                current_cost,
                best_cost,
                accepted,
            });
        }
        stats.levels += 1;
        level += 1;
        stall = if improved { 0 } else { stall + 1 };
        temperature = cool(temperature, params.alpha);
        if temperature < floor || stall >= params.stall_limit || best_cost <= 0.0 {
            break;
        }
    }
    stats.wall_time = started.elapsed();
    Ok(RestartOutcome {
        best,
        best_cost,
        initial_cost,
        trace,
        stats,
    })
}

/// Writes the trace as CSV, flushing after each temperature level.
pub fn write_trace<W: Write>(trace: &[TraceRow], mut out: W) -> io::Result<()> {
    writeln!(out, "iteration,temperature,current_cost,best_cost,accepted")?;
    for (k, row) in trace.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.iteration,
            row.temperature,
            row.current_cost,
            row.best_cost,
            u8::from(row.accepted)
        )?;
        if trace.get(k + 1).is_none_or(|next| next.level != row.level) {
            out.flush()?;
        }
    }
    out.flush()
}
