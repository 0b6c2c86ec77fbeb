#![allow(dead_code)]

use std::path::PathBuf;

use laplan::constraints::is_feasible;
use laplan::cost::total_cost;
use laplan::model::{load_instance, BaseStation, Bsc, HandoffMatrix, Instance, Solution};
use laplan::netgen::{generate, GenParams};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load_fixture(name: &str) -> Instance {
    load_instance(fixture(name)).unwrap()
}

/// Desk-scale family: 6-10 cells, 2-3 BSCs, 1-2 MSCs, tightness 0.6.
pub fn small_instance(seed: u64) -> Instance {
    let s = seed as usize;
    generate(&GenParams {
        n_bs: 6 + s % 5,
        n_bsc: 2 + s % 2,
        n_msc: 1 + (s / 2) % 2,
        tightness: 0.6,
        seed,
        ..GenParams::default()
    })
    .unwrap()
}

/// 20-40 cells, 3-6 BSCs, 1-2 MSCs.
pub fn medium_instance(seed: u64) -> Instance {
    let s = seed as usize;
    generate(&GenParams {
        n_bs: 20 + (s * 7) % 21,
        n_bsc: 3 + s % 4,
        n_msc: 1 + s % 2,
        tightness: 0.7,
        seed,
        ..GenParams::default()
    })
    .unwrap()
}

/// Copy of `inst` with the given overrides applied to every cell and BSC.
pub fn reshape(
    inst: &Instance,
    cell: impl Fn(usize, &BaseStation) -> BaseStation,
    ctrl: impl Fn(usize, &Bsc) -> Bsc,
    handoff: impl Fn(f64) -> f64,
) -> Instance {
    let n = inst.n_bs();
    let entries = inst.handoff().entries().map(|(i, j, h)| (i, j, handoff(h)));
    Instance::new(
        inst.bss().iter().enumerate().map(|(i, b)| cell(i, b)).collect(),
        inst.bscs().iter().enumerate().map(|(i, c)| ctrl(i, c)).collect(),
        inst.n_msc(),
        HandoffMatrix::from_entries(n, entries).unwrap(),
        inst.proximity_radius(),
    )
    .unwrap()
}

pub fn unbounded(inst: &Instance) -> Instance {
    reshape(
        inst,
        |_, b| BaseStation {
            paging_capacity: f64::INFINITY,
            ..b.clone()
        },
        |_, c| Bsc {
            call_capacity: f64::INFINITY,
            bhca_capacity: f64::INFINITY,
            trx_capacity: u32::MAX,
            paging_capacity: f64::INFINITY,
            msc: 0,
            ..c.clone()
        },
        |h| h,
    )
}

/// Every set partition of `0..n` by plain recursion (block lists).
pub fn partitions_recursive(n: usize) -> Vec<Vec<usize>> {
    fn go(b: usize, n: usize, blocks: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if b == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=blocks {
            cur.push(k);
            go(b + 1, n, blocks.max(k + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Brute-force optimum over every attachment to reachable BSCs and every
/// partition, judged by `is_feasible`.
pub fn brute_force_optimum(inst: &Instance) -> Option<f64> {
    let n = inst.n_bs();
    let parts = partitions_recursive(n);
    let mut best: Option<f64> = None;
    let mut attach = vec![0usize; n];
    loop {
        let reachable = (0..n).all(|b| inst.candidate_bscs(b).contains(&attach[b]));
        if reachable {
            for p in &parts {
                let sol = Solution::from_assignment(inst, attach.clone(), p.clone()).unwrap();
                if is_feasible(inst, &sol).feasible() {
                    let c = total_cost(inst, &sol).total;
                    if best.is_none_or(|b| c < b) {
                        best = Some(c);
                    }
                }
            }
        }
        // odometer over BSC ids
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            attach[i] += 1;
            if attach[i] < inst.n_bsc() {
                break;
            }
            attach[i] = 0;
            i += 1;
        }
    }
}

/// Bell numbers by `B(n+1) = sum_k C(n, k) B(k)`.
pub fn bell(n: usize) -> u64 {
    let mut b = vec![1u64];
    for m in 0..n {
        let mut c = 1u64;
        let mut next = 0u64;
        for (k, bk) in b.iter().enumerate().take(m + 1) {
            next += c * bk;
            c = c * (m - k) as u64 / (k + 1) as u64;
        }
        b.push(next);
    }
    b[n]
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
