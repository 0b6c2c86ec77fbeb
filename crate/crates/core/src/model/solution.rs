use std::collections::{BTreeMap, BTreeSet};

use super::instance::Instance;
use crate::error::{Error, Result};

/// Aggregate load that the cells attached to one BSC put on it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BscLoad {
    pub erlang: f64,
    pub bhca: f64,
    pub trx: u64,
}

/// Where a moved cell ends up: an existing LA or a freshly created one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaTarget {
    Existing(usize),
    New,
}

/// A complete plan: BS-to-BSC attachment plus the BS-to-LA partition, with
/// cached per-BSC loads and per-LA paging vectors.
///
/// LA indices are dense: `0..num_las()`, every one non-empty. Member lists
/// are kept sorted by cell id so that every cached sum is accumulated in the
/// same order as a from-scratch recomputation.
#[derive(Debug, Clone)]
pub struct Solution {
    bs_to_bsc: Vec<usize>,
    bs_to_la: Vec<usize>,
    la_members: Vec<Vec<usize>>,
    la_to_msc: Vec<usize>,
    la_paging: Vec<f64>,
    bsc_members: Vec<Vec<usize>>,
    bsc_loads: Vec<BscLoad>,
    // la -> number of that LA's cells attached to this BSC
    bsc_las: Vec<BTreeMap<usize, usize>>,
}

impl PartialEq for Solution {
    fn eq(&self, other: &Self) -> bool {
        self.bs_to_bsc == other.bs_to_bsc && self.bs_to_la == other.bs_to_la
    }
}

fn sorted_insert(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn sorted_remove(v: &mut Vec<usize>, x: usize) {
    if let Ok(pos) = v.binary_search(&x) {
        v.remove(pos);
    }
}

pub(crate) fn sum_paging(instance: &Instance, members: impl IntoIterator<Item = usize>) -> f64 {
    members
        .into_iter()
        .fold(0.0, |acc, b| acc + instance.bss()[b].paging_rate)
}

pub(crate) fn sum_load(instance: &Instance, members: impl IntoIterator<Item = usize>) -> BscLoad {
    let mut load = BscLoad::default();
    for b in members {
        let bs = &instance.bss()[b];
        load.erlang += bs.call_traffic;
        load.bhca += bs.bhca;
        load.trx += u64::from(bs.trx_demand);
    }
    load
}

impl Solution {
    /// Builds a solution from raw maps. LA labels need not be dense: they are
    /// renumbered by ascending label value, so dense input is kept as is.
    pub fn from_assignment(instance: &Instance, bs_to_bsc: Vec<usize>, bs_to_la: Vec<usize>) -> Result<Self> {
        let n = instance.n_bs();
        if bs_to_bsc.len() != n || bs_to_la.len() != n {
            return Err(Error::InvalidSolution(format!(
                "expected {n} base stations, got {} BSC and {} LA entries",
                bs_to_bsc.len(),
                bs_to_la.len()
            )));
        }
        if let Some((bs, &c)) = bs_to_bsc.iter().enumerate().find(|(_, &c)| c >= instance.n_bsc()) {
            return Err(Error::InvalidSolution(format!("bs {bs} attached to unknown bsc {c}")));
        }
        let labels: BTreeSet<usize> = bs_to_la.iter().copied().collect();
        let rank: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        let bs_to_la = bs_to_la.iter().map(|l| rank[l]).collect();
        Ok(Self::build(instance, bs_to_bsc, bs_to_la, labels.len()))
    }

    fn build(instance: &Instance, bs_to_bsc: Vec<usize>, bs_to_la: Vec<usize>, n_las: usize) -> Self {
        let mut la_members = vec![Vec::new(); n_las];
        let mut bsc_members = vec![Vec::new(); instance.n_bsc()];
        let mut bsc_las = vec![BTreeMap::new(); instance.n_bsc()];
        for b in 0..bs_to_la.len() {
            la_members[bs_to_la[b]].push(b);
            bsc_members[bs_to_bsc[b]].push(b);
            *bsc_las[bs_to_bsc[b]].entry(bs_to_la[b]).or_insert(0) += 1;
        }
        let la_paging = la_members
            .iter()
            .map(|m| sum_paging(instance, m.iter().copied()))
            .collect();
        let la_to_msc = la_members
            .iter()
            .map(|m| instance.msc_of_bsc(bs_to_bsc[m[0]]))
            .collect();
        let bsc_loads = bsc_members
            .iter()
            .map(|m| sum_load(instance, m.iter().copied()))
            .collect();
        Solution {
            bs_to_bsc,
            bs_to_la,
            la_members,
            la_to_msc,
            la_paging,
            bsc_members,
            bsc_loads,
            bsc_las,
        }
    }

    pub fn n_bs(&self) -> usize {
        self.bs_to_la.len()
    }

    pub fn num_las(&self) -> usize {
        self.la_members.len()
    }

    pub fn bs_to_bsc(&self) -> &[usize] {
        &self.bs_to_bsc
    }

    pub fn bs_to_la(&self) -> &[usize] {
        &self.bs_to_la
    }

    pub fn bsc_of(&self, bs: usize) -> usize {
        self.bs_to_bsc[bs]
    }

    pub fn la_of(&self, bs: usize) -> usize {
        self.bs_to_la[bs]
    }

    /// Member cells of `la`, ascending.
    pub fn la_members(&self, la: usize) -> &[usize] {
        &self.la_members[la]
    }

    /// MSC of the lowest-numbered member's BSC.
    pub fn la_msc(&self, la: usize) -> usize {
        self.la_to_msc[la]
    }

    pub fn la_paging(&self, la: usize) -> f64 {
        self.la_paging[la]
    }

    pub fn paging_vector(&self) -> &[f64] {
        &self.la_paging
    }

    /// Cells attached to `bsc`, ascending.
    pub fn bsc_members(&self, bsc: usize) -> &[usize] {
        &self.bsc_members[bsc]
    }

    pub fn bsc_load(&self, bsc: usize) -> BscLoad {
        self.bsc_loads[bsc]
    }

    pub fn bsc_loads(&self) -> &[BscLoad] {
        &self.bsc_loads
    }

    /// LAs with at least one member attached to `bsc`, ascending.
    pub fn bsc_las(&self, bsc: usize) -> impl Iterator<Item = usize> + '_ {
        self.bsc_las[bsc].keys().copied()
    }

    /// Number of members of `la` attached to `bsc`.
    pub fn bsc_la_count(&self, bsc: usize, la: usize) -> usize {
        self.bsc_las[bsc].get(&la).copied().unwrap_or(0)
    }

    /// Reattaches `bs` to `new_bsc` and places it in `target`. An LA emptied by
    /// the move is deleted and higher LA indices shift down by one. Returns the
    /// LA index `bs` ends up in.
    pub fn move_bs(&mut self, instance: &Instance, bs: usize, new_bsc: usize, target: LaTarget) -> usize {
        let old_bsc = self.bs_to_bsc[bs];
        let old_la = self.bs_to_la[bs];
        let target = match target {
            LaTarget::Existing(la) => la,
            LaTarget::New => {
                self.la_members.push(Vec::new());
                self.la_paging.push(0.0);
                self.la_to_msc.push(instance.msc_of_bsc(new_bsc));
                self.la_members.len() - 1
            }
        };

        if old_bsc != new_bsc {
            sorted_remove(&mut self.bsc_members[old_bsc], bs);
            sorted_insert(&mut self.bsc_members[new_bsc], bs);
            self.bsc_loads[old_bsc] = sum_load(instance, self.bsc_members[old_bsc].iter().copied());
            self.bsc_loads[new_bsc] = sum_load(instance, self.bsc_members[new_bsc].iter().copied());
            self.bs_to_bsc[bs] = new_bsc;
        }
        let slot = self.bsc_las[old_bsc]
            .get_mut(&old_la)
            .expect("bsc/la count out of sync");
        *slot -= 1;
        if *slot == 0 {
            self.bsc_las[old_bsc].remove(&old_la);
        }
        *self.bsc_las[new_bsc].entry(target).or_insert(0) += 1;

        if old_la != target {
            sorted_remove(&mut self.la_members[old_la], bs);
            sorted_insert(&mut self.la_members[target], bs);
            self.bs_to_la[bs] = target;
            self.la_paging[old_la] = sum_paging(instance, self.la_members[old_la].iter().copied());
            self.la_paging[target] = sum_paging(instance, self.la_members[target].iter().copied());
        }
        for la in [old_la, target] {
            if let Some(&first) = self.la_members[la].first() {
                self.la_to_msc[la] = instance.msc_of_bsc(self.bs_to_bsc[first]);
            }
        }

        if self.la_members[old_la].is_empty() {
            self.remove_empty_la(old_la);
            if target > old_la {
                return target - 1;
            }
        }
        target
    }

    fn remove_empty_la(&mut self, la: usize) {
        debug_assert!(self.la_members[la].is_empty());
        self.la_members.remove(la);
        self.la_paging.remove(la);
        self.la_to_msc.remove(la);
        for l in self.bs_to_la.iter_mut() {
            if *l > la {
                *l -= 1;
            }
        }
        for map in self.bsc_las.iter_mut() {
            if map.range(la..).next().is_some() {
                *map = std::mem::take(map)
                    .into_iter()
                    .map(|(l, c)| (if l > la { l - 1 } else { l }, c))
                    .collect();
            }
        }
    }

    /// Compares every cache against a from-scratch rebuild. Integer fields
    /// must match exactly, reals within 1e-9 relative.
    pub fn audit_caches(&self, instance: &Instance) -> std::result::Result<(), String> {
        let fresh = Self::build(instance, self.bs_to_bsc.clone(), self.bs_to_la.clone(), self.num_las());
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
        for (la, m) in self.la_members.iter().enumerate() {
            if m.is_empty() {
                return Err(format!("la {la} is empty"));
            }
            if *m != fresh.la_members[la] {
                return Err(format!("la {la} member list out of sync"));
            }
            if !close(self.la_paging[la], fresh.la_paging[la]) {
                return Err(format!(
                    "la {la} paging cache {} != {}",
                    self.la_paging[la], fresh.la_paging[la]
                ));
            }
            if self.la_to_msc[la] != fresh.la_to_msc[la] {
                return Err(format!("la {la} msc cache out of sync"));
            }
        }
        for c in 0..self.bsc_loads.len() {
            let (a, b) = (self.bsc_loads[c], fresh.bsc_loads[c]);
            if a.trx != b.trx || !close(a.erlang, b.erlang) || !close(a.bhca, b.bhca) {
                return Err(format!("bsc {c} load cache {a:?} != {b:?}"));
            }
            if self.bsc_members[c] != fresh.bsc_members[c] || self.bsc_las[c] != fresh.bsc_las[c] {
                return Err(format!("bsc {c} membership cache out of sync"));
            }
        }
        Ok(())
    }
}
