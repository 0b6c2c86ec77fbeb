//! The planning objective: handoff flow that crosses LA borders.
//!
//! A pair of cells `(i, j)` is charged `h[i][j]` when the two cells sit in
//! different LAs. Both directions are charged, since every border crossing
//! triggers a location update whichever way the subscriber moves.

use std::collections::BTreeMap;

use crate::anneal::Move;
use crate::model::{Instance, LaTarget, Solution};

/// Objective value of a plan, itemised per LA border.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CostBreakdown {
    /// Handoffs per hour crossing any LA border.
    pub total: f64,
    /// `(la_a, la_b, flow)` with `la_a < la_b`, for every LA pair exchanging
    /// nonzero handoff in either direction. Sorted by `(la_a, la_b)`.
    pub per_la_boundary: Vec<(usize, usize, f64)>,
}

pub fn total_cost(instance: &Instance, solution: &Solution) -> CostBreakdown {
    let la = solution.bs_to_la();
    let mut borders: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (i, j, h) in instance.handoff().entries() {
        if la[i] != la[j] {
            let key = (la[i].min(la[j]), la[i].max(la[j]));
            *borders.entry(key).or_insert(0.0) += h;
        }
    }
    let per_la_boundary: Vec<_> = borders.into_iter().map(|((a, b), f)| (a, b, f)).collect();
    let total = per_la_boundary.iter().fold(0.0, |acc, e| acc + e.2);
    CostBreakdown { total, per_la_boundary }
}

/// Cost change of relabelling `bs` into `target`, touching only the flows
/// incident to `bs`.
pub fn relabel_delta(instance: &Instance, solution: &Solution, bs: usize, target: LaTarget) -> f64 {
    let old = solution.la_of(bs);
    let target = match target {
        LaTarget::Existing(t) if t == old => return 0.0,
        LaTarget::Existing(t) => Some(t),
        LaTarget::New => None,
    };
    let mut delta = 0.0;
    for &(j, w) in instance.flows(bs) {
        let lj = solution.la_of(j);
        if lj == old {
            delta += w;
        } else if Some(lj) == target {
            delta -= w;
        }
    }
    delta
}

/// `total_cost(after) - total_cost(before)` for applying `mv` to `solution`.
pub fn delta_cost(instance: &Instance, solution: &Solution, mv: &Move) -> f64 {
    relabel_delta(instance, solution, mv.bs, mv.target)
}
