//! Feasibility of a plan: BSC capacities, paging capacities and the rule
//! that an LA never spans more than one MSC.
//!
//! Paging follows broadcast semantics. Every cell of an LA broadcasts all
//! pages of that LA, so each member cell is charged the LA's full paging
//! vector. A BSC dispatches each page once per LA it serves, so its paging
//! load is the sum of the vectors of the distinct LAs it hosts at least one
//! cell of. All comparisons are inclusive: `load <= capacity` is feasible.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{sum_load, sum_paging, BscLoad, Instance, LaTarget, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    CallTraffic,
    Bhca,
    Trx,
    BsPaging,
    BscPaging,
    LaMsc,
    Structure,
}

impl ConstraintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::CallTraffic => "call_traffic",
            ConstraintKind::Bhca => "bhca",
            ConstraintKind::Trx => "trx",
            ConstraintKind::BsPaging => "bs_paging",
            ConstraintKind::BscPaging => "bsc_paging",
            ConstraintKind::LaMsc => "la_msc",
            ConstraintKind::Structure => "structure",
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One violated constraint. `entity` is a BSC id for capacity and BSC paging
/// kinds, a BS id for `bs_paging`, and an LA index for `la_msc` (where
/// `load` is the number of distinct MSCs and `capacity` is 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub kind: ConstraintKind,
    pub entity: usize,
    pub load: f64,
    pub capacity: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: load {} > capacity {}",
            self.kind, self.entity, self.load, self.capacity
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, kind: ConstraintKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Per-LA paging rate: the sum of member paging rates.
#[derive(Debug, Clone, PartialEq)]
pub struct PagingVector(Vec<f64>);

impl PagingVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for PagingVector {
    type Output = f64;
    fn index(&self, la: usize) -> &f64 {
        &self.0[la]
    }
}

/// Per-BSC load, recomputed from the assignment.
pub fn bsc_loads(instance: &Instance, solution: &Solution) -> Vec<BscLoad> {
    let mut loads = vec![BscLoad::default(); instance.n_bsc()];
    for (bs, &c) in solution.bs_to_bsc().iter().enumerate() {
        let b = &instance.bss()[bs];
        loads[c].erlang += b.call_traffic;
        loads[c].bhca += b.bhca;
        loads[c].trx += u64::from(b.trx_demand);
    }
    loads
}

fn capacity_violations(instance: &Instance, bsc: usize, load: BscLoad) -> Vec<Violation> {
    let cap = &instance.bscs()[bsc];
    let mut out = Vec::new();
    if load.erlang > cap.call_capacity {
        out.push(Violation {
            kind: ConstraintKind::CallTraffic,
            entity: bsc,
            load: load.erlang,
            capacity: cap.call_capacity,
        });
    }
    if load.bhca > cap.bhca_capacity {
        out.push(Violation {
            kind: ConstraintKind::Bhca,
            entity: bsc,
            load: load.bhca,
            capacity: cap.bhca_capacity,
        });
    }
    if load.trx > u64::from(cap.trx_capacity) {
        out.push(Violation {
            kind: ConstraintKind::Trx,
            entity: bsc,
            load: load.trx as f64,
            capacity: f64::from(cap.trx_capacity),
        });
    }
    out
}

/// Erlang, BHCA and TRX checks for one BSC; empty means feasible.
pub fn check_bsc_capacity(instance: &Instance, solution: &Solution, bsc: usize) -> Vec<Violation> {
    capacity_violations(instance, bsc, bsc_loads(instance, solution)[bsc])
}

pub fn paging_vector(instance: &Instance, solution: &Solution) -> PagingVector {
    let mut v = vec![0.0; solution.num_las()];
    for (bs, &la) in solution.bs_to_la().iter().enumerate() {
        v[la] += instance.bss()[bs].paging_rate;
    }
    PagingVector(v)
}

/// Paging load on every BSC: the vectors of the distinct LAs it hosts,
/// summed in ascending LA order.
pub fn bsc_paging_loads(instance: &Instance, solution: &Solution, vector: &PagingVector) -> Vec<f64> {
    let mut hosted = vec![BTreeSet::new(); instance.n_bsc()];
    for bs in 0..solution.n_bs() {
        hosted[solution.bsc_of(bs)].insert(solution.la_of(bs));
    }
    hosted
        .iter()
        .map(|las| las.iter().map(|&la| vector[la]).fold(0.0, |acc, v| acc + v))
        .collect()
}

pub fn check_paging(instance: &Instance, solution: &Solution) -> Vec<Violation> {
    let vector = paging_vector(instance, solution);
    let mut out = Vec::new();
    for (bs, b) in instance.bss().iter().enumerate() {
        let load = vector[solution.la_of(bs)];
        if load > b.paging_capacity {
            out.push(Violation {
                kind: ConstraintKind::BsPaging,
                entity: bs,
                load,
                capacity: b.paging_capacity,
            });
        }
    }
    for (c, load) in bsc_paging_loads(instance, solution, &vector).into_iter().enumerate() {
        let capacity = instance.bscs()[c].paging_capacity;
        if load > capacity {
            out.push(Violation {
                kind: ConstraintKind::BscPaging,
                entity: c,
                load,
                capacity,
            });
        }
    }
    out
}

pub fn check_la_msc(instance: &Instance, solution: &Solution) -> Vec<Violation> {
    let mut mscs = vec![BTreeSet::new(); solution.num_las()];
    for bs in 0..solution.n_bs() {
        mscs[solution.la_of(bs)].insert(instance.msc_of_bsc(solution.bsc_of(bs)));
    }
    mscs.iter()
        .enumerate()
        .filter(|(_, m)| m.len() > 1)
        .map(|(la, m)| Violation {
            kind: ConstraintKind::LaMsc,
            entity: la,
            load: m.len() as f64,
            capacity: 1.0,
        })
        .collect()
}

/// Every check, every violation. Never mutates `solution`.
pub fn is_feasible(instance: &Instance, solution: &Solution) -> FeasibilityReport {
    let mut violations = Vec::new();
    let n_las = solution.num_las();
    if n_las > solution.n_bs() {
        violations.push(Violation {
            kind: ConstraintKind::Structure,
            entity: 0,
            load: n_las as f64,
            capacity: solution.n_bs() as f64,
        });
    }
    for la in 0..n_las {
        if solution.la_members(la).is_empty() {
            violations.push(Violation {
                kind: ConstraintKind::Structure,
                entity: la,
                load: 0.0,
                capacity: 1.0,
            });
        }
    }
    for (c, load) in bsc_loads(instance, solution).into_iter().enumerate() {
        violations.extend(capacity_violations(instance, c, load));
    }
    violations.extend(check_paging(instance, solution));
    violations.extend(check_la_msc(instance, solution));
    FeasibilityReport { violations }
}

/// `members` (ascending) with `bs` spliced in at its sorted position.
fn with_inserted(members: &[usize], bs: usize) -> impl Iterator<Item = usize> + '_ {
    let p = members.partition_point(|&m| m < bs);
    let extra = (members.get(p) != Some(&bs)).then_some(bs);
    members[..p]
        .iter()
        .copied()
        .chain(extra)
        .chain(members[p..].iter().copied())
}

fn without(members: &[usize], bs: usize) -> impl Iterator<Item = usize> + '_ {
    members.iter().copied().filter(move |&m| m != bs)
}

/// Capacity check on `new_bsc` with `bs` attached to it; the first violation
/// found, if any.
pub fn bsc_accepts(instance: &Instance, solution: &Solution, bs: usize, new_bsc: usize) -> Option<Violation> {
    let load = sum_load(instance, with_inserted(solution.bsc_members(new_bsc), bs));
    capacity_violations(instance, new_bsc, load).into_iter().next()
}

/// Whether moving `bs` onto `new_bsc` and into `target` keeps the plan
/// paging- and MSC-feasible, assuming it is feasible now and `new_bsc` has
/// room for `bs`. Sums are formed exactly as a recomputation after the move
/// would form them.
pub fn la_accepts(instance: &Instance, solution: &Solution, bs: usize, new_bsc: usize, target: LaTarget) -> bool {
    let old_la = solution.la_of(bs);
    let old_bsc = solution.bsc_of(bs);
    let msc = instance.msc_of_bsc(new_bsc);
    let bss = instance.bss();
    let new_index = solution.num_las();
    let target_la = match target {
        LaTarget::Existing(t) => t,
        LaTarget::New => new_index,
    };

    if target_la < new_index {
        let foreign_msc = solution
            .la_members(target_la)
            .iter()
            .any(|&m| m != bs && instance.msc_of_bsc(solution.bsc_of(m)) != msc);
        if foreign_msc {
            return false;
        }
    }

    // paging vectors after the move
    let (old_vec, target_vec) = if target_la == old_la {
        (solution.la_paging(old_la), solution.la_paging(old_la))
    } else {
        let old_vec = sum_paging(instance, without(solution.la_members(old_la), bs));
        let target_vec = if target_la == new_index {
            bss[bs].paging_rate
        } else {
            sum_paging(instance, with_inserted(solution.la_members(target_la), bs))
        };
        (old_vec, target_vec)
    };
    let vector = |la: usize| {
        if la == target_la {
            target_vec
        } else if la == old_la {
            old_vec
        } else {
            solution.la_paging(la)
        }
    };

    if target_vec > bss[bs].paging_capacity {
        return false;
    }
    if target_la < new_index
        && solution
            .la_members(target_la)
            .iter()
            .any(|&m| target_vec > bss[m].paging_capacity)
    {
        return false;
    }
    if target_la != old_la && without(solution.la_members(old_la), bs).any(|m| old_vec > bss[m].paging_capacity) {
        return false;
    }

    let mut affected: BTreeSet<usize> = BTreeSet::from([old_bsc, new_bsc]);
    for la in [old_la, target_la] {
        if la < new_index {
            affected.extend(solution.la_members(la).iter().map(|&m| solution.bsc_of(m)));
        }
    }
    for c in affected {
        let mut hosted: BTreeSet<usize> = solution.bsc_las(c).collect();
        if c == old_bsc && solution.bsc_la_count(c, old_la) == 1 {
            hosted.remove(&old_la);
        }
        if c == new_bsc {
            hosted.insert(target_la);
        }
        let load = hosted.iter().map(|&la| vector(la)).fold(0.0, |acc, v| acc + v);
        if load > instance.bscs()[c].paging_capacity {
            return false;
        }
    }
    true
}
