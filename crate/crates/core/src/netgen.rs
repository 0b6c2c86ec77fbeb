//! Synthetic instances: hexagonal cell layouts with gravity-model handoffs.
//!
//! Cells fill a hexagonal lattice ring by ring around the origin. BSCs sit at
//! the centroids of a k-means clustering of the cells and MSCs at the
//! centroids of a clustering of the BSCs; each BSC is homed on the nearest
//! MSC. Lattice neighbours exchange `scale * t_i * t_j / d^2` handoffs per
//! hour, each direction jittered by up to 10%.
//!
//! Capacities are fitted to the plan that attaches every cell to its nearest
//! BSC with one LA per BSC: each capacity is that plan's load divided by
//! `tightness`, so the plan is feasible by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{bsc_loads, is_feasible};
use crate::error::{Error, Result};
use crate::model::{BaseStation, Bsc, HandoffMatrix, Instance, Point, Solution};

const GENERATION_ATTEMPTS: usize = 20;
const BHCA_PER_ERLANG: f64 = 40.0;
const PAGING_SHARE: f64 = 0.5;
const ERLANG_PER_TRX: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n_bs: usize,
    pub n_bsc: usize,
    pub n_msc: usize,
    /// Hexagon circumradius in km.
    pub cell_radius: f64,
    /// Offered Erlangs per cell, drawn uniformly from `[min, max)`.
    pub traffic_range: (f64, f64),
    pub handoff_scale: f64,
    /// Load-to-capacity ratio of the fitted capacities, in (0, 1].
    pub tightness: f64,
    pub proximity_radius: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_bs: 19,
            n_bsc: 3,
            n_msc: 1,
            cell_radius: 1.0,
            traffic_range: (2.0, 10.0),
            handoff_scale: 10.0,
            tightness: 0.6,
            proximity_radius: f64::INFINITY,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.n_bs >= self.n_bsc && self.n_bsc >= self.n_msc && self.n_msc >= 1) {
            return bad(format!(
                "need n_bs >= n_bsc >= n_msc >= 1, got {} / {} / {}",
                self.n_bs, self.n_bsc, self.n_msc
            ));
        }
        if !(self.tightness > 0.0 && self.tightness <= 1.0) {
            return bad(format!("tightness = {} must lie in (0, 1]", self.tightness));
        }
        let (lo, hi) = self.traffic_range;
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
            return bad(format!("traffic_range ({lo}, {hi}) must satisfy 0 <= min < max"));
        }
        if !(self.cell_radius > 0.0 && self.cell_radius.is_finite()) {
            return bad(format!("cell_radius = {} must be positive", self.cell_radius));
        }
        if !(self.handoff_scale >= 0.0 && self.handoff_scale.is_finite()) {
            return bad(format!("handoff_scale = {} must be non-negative", self.handoff_scale));
        }
        if self.proximity_radius.is_nan() || self.proximity_radius < 0.0 {
            return bad(format!(
                "proximity_radius = {} must be non-negative",
                self.proximity_radius
            ));
        }
        Ok(())
    }
}

const HEX_DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// First `n` axial hex coordinates in spiral order around the origin.
pub fn hex_spiral(n: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push((0, 0));
    let mut ring = 1i64;
    while out.len() < n {
        let (mut q, mut r) = (HEX_DIRS[4].0 * ring, HEX_DIRS[4].1 * ring);
        for &(dq, dr) in &HEX_DIRS {
            for _ in 0..ring {
                if out.len() == n {
                    return out;
                }
                out.push((q, r));
                q += dq;
                r += dr;
            }
        }
        ring += 1;
    }
    out
}

pub fn hex_adjacent(a: (i64, i64), b: (i64, i64)) -> bool {
    let (dq, dr) = (a.0 - b.0, a.1 - b.1);
    dq.abs().max(dr.abs()).max((dq + dr).abs()) == 1
}

fn hex_center(cell: (i64, i64), radius: f64) -> Point {
    let (q, r) = (cell.0 as f64, cell.1 as f64);
    Point::new(3f64.sqrt() * radius * (q + r / 2.0), 1.5 * radius * r)
}

fn nearest(p: Point, centers: &[Point]) -> usize {
    (0..centers.len())
        .min_by(|&a, &b| {
            p.distance(centers[a])
                .total_cmp(&p.distance(centers[b]))
                .then(a.cmp(&b))
        })
        .expect("at least one center")
}

/// Lloyd's k-means with farthest-point seeding from a random first point.
/// Returns the centres and each point's nearest centre.
fn kmeans<R: Rng + ?Sized>(points: &[Point], k: usize, rng: &mut R) -> (Vec<Point>, Vec<usize>) {
    let mut centers = vec![points[rng.gen_range(0..points.len())]];
    while centers.len() < k {
        let far = (0..points.len())
            .max_by(|&a, &b| {
                let da = points[a].distance(centers[nearest(points[a], &centers)]);
                let db = points[b].distance(centers[nearest(points[b], &centers)]);
                da.total_cmp(&db).then(b.cmp(&a))
            })
            .expect("non-empty");
        centers.push(points[far]);
    }
    let mut assign: Vec<usize> = points.iter().map(|&p| nearest(p, &centers)).collect();
    for _ in 0..100 {
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<Point> = points
                .iter()
                .zip(&assign)
                .filter(|(_, &a)| a == c)
                .map(|(p, _)| *p)
                .collect();
            if !members.is_empty() {
                let m = members.len() as f64;
                *center = Point::new(
                    members.iter().map(|p| p.x).sum::<f64>() / m,
                    members.iter().map(|p| p.y).sum::<f64>() / m,
                );
            }
        }
        let next: Vec<usize> = points.iter().map(|&p| nearest(p, &centers)).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    (centers, assign)
}

pub fn generate(params: &GenParams) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut last = String::new();
    for _ in 0..GENERATION_ATTEMPTS {
        match attempt(params, &mut rng) {
            Ok(inst) => return Ok(inst),
            Err(why) => last = why,
        }
    }
    Err(Error::GenerationFailed(format!(
        "{GENERATION_ATTEMPTS} attempts failed (last: {last})"
    )))
}

fn attempt(params: &GenParams, rng: &mut ChaCha8Rng) -> std::result::Result<Instance, String> {
    let n = params.n_bs;
    let cells = hex_spiral(n);
    let positions: Vec<Point> = cells.iter().map(|&c| hex_center(c, params.cell_radius)).collect();
    let (lo, hi) = params.traffic_range;
    let traffic: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();

    let mut handoff = HandoffMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && hex_adjacent(cells[i], cells[j]) {
                let d = positions[i].distance(positions[j]);
                let jitter = rng.gen_range(0.9..1.1);
                handoff.set(i, j, params.handoff_scale * traffic[i] * traffic[j] / (d * d) * jitter);
            }
        }
    }

    let (bsc_pos, home) = kmeans(&positions, params.n_bsc, rng);
    let (msc_pos, _) = kmeans(&bsc_pos, params.n_msc, rng);

    let mut bss: Vec<BaseStation> = (0..n)
        .map(|i| {
            let bhca = traffic[i] * BHCA_PER_ERLANG;
            BaseStation {
                position: positions[i],
                call_traffic: traffic[i],
                bhca,
                trx_demand: ((traffic[i] / ERLANG_PER_TRX).ceil() as u32).max(1),
                paging_rate: bhca * PAGING_SHARE * rng.gen_range(0.8..1.2),
                paging_capacity: f64::INFINITY,
            }
        })
        .collect();
    let unbounded: Vec<Bsc> = bsc_pos
        .iter()
        .map(|&p| Bsc {
            position: p,
            call_capacity: f64::INFINITY,
            bhca_capacity: f64::INFINITY,
            trx_capacity: u32::MAX,
            paging_capacity: f64::INFINITY,
            msc: nearest(p, &msc_pos),
        })
        .collect();

    // loads of the nearest-BSC, one-LA-per-BSC plan
    let draft = Instance::new(
        bss.clone(),
        unbounded.clone(),
        params.n_msc,
        handoff.clone(),
        params.proximity_radius,
    )
    .map_err(|e| e.to_string())?;
    let plan = Solution::from_assignment(&draft, home.clone(), home.clone()).map_err(|e| e.to_string())?;
    let loads = bsc_loads(&draft, &plan);
    let las_of_bsc: Vec<Option<usize>> = (0..params.n_bsc).map(|c| plan.bsc_las(c).next()).collect();
    let t = params.tightness;
    let used: Vec<usize> = (0..params.n_bsc).filter(|&c| las_of_bsc[c].is_some()).collect();
    let mean = |f: &dyn Fn(usize) -> f64| used.iter().map(|&c| f(c)).sum::<f64>() / used.len() as f64;

    let bscs: Vec<Bsc> = unbounded
        .into_iter()
        .enumerate()
        .map(|(c, mut b)| {
            let erl = |c: usize| loads[c].erlang / t;
            let bh = |c: usize| loads[c].bhca / t;
            let tr = |c: usize| (loads[c].trx as f64 / t).ceil();
            let pg = |c: usize| plan.la_paging(las_of_bsc[c].expect("used bsc")) / t;
            if las_of_bsc[c].is_some() {
                b.call_capacity = erl(c);
                b.bhca_capacity = bh(c);
                b.trx_capacity = tr(c) as u32;
                b.paging_capacity = pg(c);
            } else {
                b.call_capacity = mean(&erl);
                b.bhca_capacity = mean(&bh);
                b.trx_capacity = mean(&tr).ceil() as u32;
                b.paging_capacity = mean(&pg);
            }
            b
        })
        .collect();
    for (i, bs) in bss.iter_mut().enumerate() {
        bs.paging_capacity = plan.la_paging(plan.la_of(i)) / t;
    }

    let inst = Instance::new(bss, bscs, params.n_msc, handoff, params.proximity_radius).map_err(|e| e.to_string())?;
    let check = Solution::from_assignment(&inst, home.clone(), home).map_err(|e| e.to_string())?;
    match is_feasible(&inst, &check).violations().first() {
        Some(v) => Err(v.to_string()),
        None => Ok(inst),
    }
}
