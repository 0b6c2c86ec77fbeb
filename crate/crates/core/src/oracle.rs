//! Exact and greedy reference solvers for small instances.
//!
//! The exact solver walks every set partition of the cells as a
//! restricted-growth string (`a[0] = 0`, `a[i] <= 1 + max(a[..i])`), which
//! visits each partition once and in lexicographic order. Cost depends only
//! on the partition, so partitions are ranked by `(cost, string)` and the
//! first one that admits a feasible BS-to-BSC attachment wins.

use crate::constraints::{check_la_msc, check_paging, is_feasible};
use crate::cost::{total_cost, CostBreakdown};
use crate::error::{Error, Result};
use crate::model::{construct, Instance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_bs: usize,
    pub max_bsc: usize,
    /// Search the BS-to-BSC attachment too, rather than fixing it.
    pub joint_mode: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_bs: 10,
            max_bsc: 3,
            joint_mode: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub solution: Solution,
    pub cost: CostBreakdown,
    /// Set partitions visited; the Bell number of `n_bs`.
    pub partitions: u64,
    /// Partitions whose attachment feasibility had to be decided.
    pub feasibility_checks: u64,
}

/// Bell number `B(n)` via the Bell triangle; `None` on overflow.
pub fn bell_number(n: usize) -> Option<u64> {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("non-empty row")];
        for &x in &row {
            next.push(next.last()?.checked_add(x)?);
        }
        row = next;
    }
    Some(row[0])
}

/// Visits every restricted-growth string of length `n` in lexicographic order.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut a = vec![0usize; n];
    // prefix maxima: m[i] = max(a[..=i])
    let mut m = vec![0usize; n];
    loop {
        visit(&a);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if a[i] <= m[i - 1] {
                a[i] += 1;
                m[i] = m[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    m[j] = m[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Exhaustive minimum-cost feasible plan.
///
/// With `fixed_assignment` only the partition is searched. Otherwise, in
/// joint mode, every attachment of cells to reachable BSCs is considered as
/// well; among equal-cost partitions the lexicographically smallest string
/// wins, and for it the lexicographically smallest feasible attachment.
pub fn enumerate_optimal(
    instance: &Instance,
    limits: &OracleLimits,
    fixed_assignment: Option<&[usize]>,
) -> Result<OracleResult> {
    let n = instance.n_bs();
    if n > limits.max_bs || n > 64 {
        return Err(Error::LimitExceeded(format!(
            "{n} base stations exceed max_bs = {} ({} partitions)",
            limits.max_bs,
            bell_number(n).map_or_else(|| "overflowing".to_string(), |b| b.to_string())
        )));
    }
    if fixed_assignment.is_none() {
        if !limits.joint_mode {
            return Err(Error::InvalidParam(
                "partition mode needs a fixed BS-to-BSC assignment".into(),
            ));
        }
        if instance.n_bsc() > limits.max_bsc {
            return Err(Error::LimitExceeded(format!(
                "{} BSCs exceed max_bsc = {}",
                instance.n_bsc(),
                limits.max_bsc
            )));
        }
    }
    if let Some(fixed) = fixed_assignment {
        if fixed.len() != n || fixed.iter().any(|&c| c >= instance.n_bsc()) {
            return Err(Error::InvalidSolution(
                "fixed assignment does not match the instance".into(),
            ));
        }
    }

    let bss = instance.bss();
    let entries: Vec<(usize, usize, f64)> = instance.handoff().entries().collect();

    // partition-only screen: every cell must carry its LA's paging vector
    let mut partitions = 0u64;
    let mut strings: Vec<u8> = Vec::new();
    let mut ranked: Vec<(f64, u32)> = Vec::new();
    let mut vector = vec![0.0; n];
    for_each_partition(n, |a| {
        partitions += 1;
        vector.iter_mut().for_each(|v| *v = 0.0);
        for (b, &la) in a.iter().enumerate() {
            vector[la] += bss[b].paging_rate;
        }
        if a.iter().enumerate().any(|(b, &la)| vector[la] > bss[b].paging_capacity) {
            return;
        }
        let cost = entries
            .iter()
            .filter(|(i, j, _)| a[*i] != a[*j])
            .fold(0.0, |acc, e| acc + e.2);
        ranked.push((cost, (strings.len() / n) as u32));
        strings.extend(a.iter().map(|&x| x as u8));
    });
    ranked.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    for (checked, &(_, idx)) in ranked.iter().enumerate() {
        let idx = idx as usize;
        let labels: Vec<usize> = strings[idx * n..(idx + 1) * n]
            .iter()
            .map(|&x| usize::from(x))
            .collect();
        let found = match fixed_assignment {
            Some(fixed) => {
                let sol = Solution::from_assignment(instance, fixed.to_vec(), labels)?;
                is_feasible(instance, &sol).feasible().then_some(sol)
            }
            None => AttachmentSearch::new(instance, &labels).run(),
        };
        if let Some(solution) = found {
            let cost = total_cost(instance, &solution);
            return Ok(OracleResult {
                solution,
                cost,
                partitions,
                feasibility_checks: checked as u64 + 1,
            });
        }
    }
    Err(Error::InfeasibleInstance("no feasible plan exists".into()))
}

/// Depth-first search for a feasible attachment of a fixed partition.
/// Pruning uses running sums with a small tolerance; every leaf is confirmed
/// with the exact feasibility check.
struct AttachmentSearch<'a> {
    instance: &'a Instance,
    labels: &'a [usize],
    vector: Vec<f64>,
    erlang: Vec<f64>,
    bhca: Vec<f64>,
    trx: Vec<u64>,
    paging: Vec<f64>,
    // hosted[c][la] = cells of `la` attached to BSC c
    hosted: Vec<Vec<u32>>,
    la_msc: Vec<Option<usize>>,
    assignment: Vec<usize>,
}

const SLACK: f64 = 1e-9;

fn within(load: f64, cap: f64) -> bool {
    load <= cap + SLACK * cap.abs().max(1.0)
}

impl<'a> AttachmentSearch<'a> {
    fn new(instance: &'a Instance, labels: &'a [usize]) -> Self {
        let n = labels.len();
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut vector = vec![0.0; k];
        for (b, &la) in labels.iter().enumerate() {
            vector[la] += instance.bss()[b].paging_rate;
        }
        let nb = instance.n_bsc();
        AttachmentSearch {
            instance,
            labels,
            vector,
            erlang: vec![0.0; nb],
            bhca: vec![0.0; nb],
            trx: vec![0; nb],
            paging: vec![0.0; nb],
            hosted: vec![vec![0; k]; nb],
            la_msc: vec![None; k],
            assignment: vec![usize::MAX; n],
        }
    }

    fn run(mut self) -> Option<Solution> {
        self.descend(0)
    }

    fn descend(&mut self, b: usize) -> Option<Solution> {
        let inst = self.instance;
        if b == self.labels.len() {
            let sol = Solution::from_assignment(inst, self.assignment.clone(), self.labels.to_vec()).ok()?;
            return is_feasible(inst, &sol).feasible().then_some(sol);
        }
        let bs = &inst.bss()[b];
        let la = self.labels[b];
        for &c in inst.candidate_bscs(b) {
            let cap = &inst.bscs()[c];
            let msc = cap.msc;
            if self.la_msc[la].is_some_and(|m| m != msc) {
                continue;
            }
            if !within(self.erlang[c] + bs.call_traffic, cap.call_capacity)
                || !within(self.bhca[c] + bs.bhca, cap.bhca_capacity)
                || self.trx[c] + u64::from(bs.trx_demand) > u64::from(cap.trx_capacity)
            {
                continue;
            }
            let opens = self.hosted[c][la] == 0;
            if opens && !within(self.paging[c] + self.vector[la], cap.paging_capacity) {
                continue;
            }

            let prev_msc = self.la_msc[la];
            self.la_msc[la] = Some(msc);
            self.erlang[c] += bs.call_traffic;
            self.bhca[c] += bs.bhca;
            self.trx[c] += u64::from(bs.trx_demand);
            if opens {
                self.paging[c] += self.vector[la];
            }
            self.hosted[c][la] += 1;
            self.assignment[b] = c;

            if let Some(sol) = self.descend(b + 1) {
                return Some(sol);
            }

            self.hosted[c][la] -= 1;
            if opens {
                self.paging[c] -= self.vector[la];
            }
            self.trx[c] -= u64::from(bs.trx_demand);
            self.bhca[c] -= bs.bhca;
            self.erlang[c] -= bs.call_traffic;
            self.la_msc[la] = prev_msc;
        }
        self.assignment[b] = usize::MAX;
        None
    }
}

#[derive(Debug, Clone)]
pub struct GreedyResult {
    pub solution: Solution,
    pub cost: CostBreakdown,
    pub merges: usize,
}

/// Deterministic merge heuristic.
///
/// Starts from the nearest-BSC, one-LA-per-BSC plan built in cell-id order,
/// then repeatedly merges the LA pair under a common MSC with the largest
/// mutual handoff flow whose union stays paging-feasible. Stops when no pair
/// with positive flow can merge.
pub fn greedy_baseline(instance: &Instance) -> Result<GreedyResult> {
    let order: Vec<usize> = (0..instance.n_bs()).collect();
    let mut solution =
        construct(instance, &order).map_err(|why| Error::InfeasibleInstance(format!("greedy start plan: {why}")))?;
    let mut cost = total_cost(instance, &solution);
    let mut merges = 0;
    loop {
        let mut pairs = cost.per_la_boundary.clone();
        pairs.sort_by(|x, y| y.2.total_cmp(&x.2).then((x.0, x.1).cmp(&(y.0, y.1))));
        let merged = pairs
            .iter()
            .filter(|&&(a, b, flow)| flow > 0.0 && solution.la_msc(a) == solution.la_msc(b))
            .find_map(|&(a, b, _)| {
                let labels = solution
                    .bs_to_la()
                    .iter()
                    .map(|&l| if l == b { a } else { l })
                    .collect();
                let cand = Solution::from_assignment(instance, solution.bs_to_bsc().to_vec(), labels).ok()?;
                (check_paging(instance, &cand).is_empty() && check_la_msc(instance, &cand).is_empty()).then_some(cand)
            });
        match merged {
            Some(next) => {
                solution = next;
                cost = total_cost(instance, &solution);
                merges += 1;
            }
            None => break,
        }
    }
    Ok(GreedyResult { solution, cost, merges })
}
