use rand::seq::SliceRandom;
use rand::Rng;

use super::instance::Instance;
use super::solution::Solution;
use crate::constraints::{is_feasible, ConstraintKind};
use crate::error::{Error, Result};

/// Shuffled construction attempts before giving up.
pub const CONSTRUCTION_ATTEMPTS: usize = 50;

/// Builds a feasible starting plan.
///
/// Each attempt visits the cells in a random order and attaches each one to
/// the nearest reachable BSC that still has Erlang, BHCA and TRX room. Every
/// BSC in use then gets one LA. LAs whose paging vector exceeds a member's
/// paging capacity shed their highest-paging cell into a new singleton LA
/// until no cell is overloaded.
pub fn initial_topology<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<Solution> {
    initial_topology_with_attempts(instance, rng).map(|(sol, _)| sol)
}

/// As [`initial_topology`], also reporting how many attempts it took.
pub fn initial_topology_with_attempts<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<(Solution, usize)> {
    precheck(instance)?;
    let mut order: Vec<usize> = (0..instance.n_bs()).collect();
    let mut last = String::new();
    for attempt in 1..=CONSTRUCTION_ATTEMPTS {
        order.shuffle(rng);
        match construct(instance, &order) {
            Ok(sol) => return Ok((sol, attempt)),
            Err(why) => last = why,
        }
    }
    Err(Error::InfeasibleInstance(format!(
        "no feasible initial topology after {CONSTRUCTION_ATTEMPTS} attempts (last: {last})"
    )))
}

/// Rejects instances where some cell fits no reachable BSC even on its own.
fn precheck(instance: &Instance) -> Result<()> {
    for (b, bs) in instance.bss().iter().enumerate() {
        let cands = instance.candidate_bscs(b);
        if cands.is_empty() {
            return Err(Error::InfeasibleInstance(format!(
                "bs {b} has no BSC within proximity_radius {}",
                instance.proximity_radius()
            )));
        }
        let bscs = instance.bscs();
        let checks = [
            (
                "trx",
                "trx_demand",
                cands.iter().any(|&c| bs.trx_demand <= bscs[c].trx_capacity),
            ),
            (
                "call_traffic",
                "call_traffic",
                cands.iter().any(|&c| bs.call_traffic <= bscs[c].call_capacity),
            ),
            ("bhca", "bhca", cands.iter().any(|&c| bs.bhca <= bscs[c].bhca_capacity)),
            (
                "bsc_paging",
                "paging_rate",
                cands.iter().any(|&c| bs.paging_rate <= bscs[c].paging_capacity),
            ),
        ];
        for (kind, field, ok) in checks {
            if !ok {
                return Err(Error::InfeasibleInstance(format!(
                    "{kind}: bs {b} {field} exceeds the capacity of every reachable BSC"
                )));
            }
        }
    }
    Ok(())
}

/// One deterministic construction pass over `order`.
pub(crate) fn construct(instance: &Instance, order: &[usize]) -> std::result::Result<Solution, String> {
    let bss = instance.bss();
    let bscs = instance.bscs();
    let n = instance.n_bs();
    let mut erlang = vec![0.0; instance.n_bsc()];
    let mut bhca = vec![0.0; instance.n_bsc()];
    let mut trx = vec![0u64; instance.n_bsc()];
    let mut bs_to_bsc = vec![usize::MAX; n];

    for &b in order {
        let bs = &bss[b];
        let mut cands = instance.candidate_bscs(b).to_vec();
        cands.sort_by(|&x, &y| {
            let dx = bs.position.distance(bscs[x].position);
            let dy = bs.position.distance(bscs[y].position);
            dx.total_cmp(&dy).then(x.cmp(&y))
        });
        let slot = cands.into_iter().find(|&c| {
            erlang[c] + bs.call_traffic <= bscs[c].call_capacity
                && bhca[c] + bs.bhca <= bscs[c].bhca_capacity
                && trx[c] + u64::from(bs.trx_demand) <= u64::from(bscs[c].trx_capacity)
        });
        let Some(c) = slot else {
            return Err(format!("bs {b} fits no reachable BSC"));
        };
        erlang[c] += bs.call_traffic;
        bhca[c] += bs.bhca;
        trx[c] += u64::from(bs.trx_demand);
        bs_to_bsc[b] = c;
    }

    // one LA per BSC in use; labels need not be dense
    let mut bs_to_la = bs_to_bsc.clone();
    let mut next_label = instance.n_bsc();
    loop {
        let mut vector = vec![0.0; next_label];
        for b in 0..n {
            vector[bs_to_la[b]] += bss[b].paging_rate;
        }
        let overloaded = (0..n)
            .filter(|&b| vector[bs_to_la[b]] > bss[b].paging_capacity)
            .map(|b| bs_to_la[b])
            .min();
        let Some(la) = overloaded else { break };
        let shed = (0..n)
            .filter(|&b| bs_to_la[b] == la)
            .max_by(|&x, &y| bss[x].paging_rate.total_cmp(&bss[y].paging_rate).then(y.cmp(&x)))
            .expect("overloaded LA has members");
        bs_to_la[shed] = next_label;
        next_label += 1;
    }

    let sol = Solution::from_assignment(instance, bs_to_bsc, bs_to_la).map_err(|e| e.to_string())?;
    let report = is_feasible(instance, &sol);
    if let Some(v) = report.violations().first() {
        debug_assert!(v.kind != ConstraintKind::BsPaging);
        return Err(v.to_string());
    }
    Ok(sol)
}
