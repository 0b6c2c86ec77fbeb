use crate::error::{Error, Result};

/// Planar position in kilometres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One cell site. Its id is its index in [`Instance::bss`].
#[derive(Debug, Clone, PartialEq)]
pub struct BaseStation {
    pub position: Point,
    /// Offered traffic in Erlangs.
    pub call_traffic: f64,
    /// Busy-hour call attempts per hour.
    pub bhca: f64,
    pub trx_demand: u32,
    /// Pages per hour generated for subscribers camped in this cell.
    pub paging_rate: f64,
    /// Pages per hour this cell can broadcast.
    pub paging_capacity: f64,
}

/// Base station controller. Its id is its index in [`Instance::bscs`].
#[derive(Debug, Clone, PartialEq)]
pub struct Bsc {
    pub position: Point,
    pub call_capacity: f64,
    pub bhca_capacity: f64,
    pub trx_capacity: u32,
    pub paging_capacity: f64,
    /// Parent MSC. Fixed for the lifetime of the instance.
    pub msc: usize,
}

/// Dense handoff intensities, `h[i][j]` handoffs per hour from cell `i` to cell `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HandoffMatrix {
    n: usize,
    data: Vec<f64>,
}

impl HandoffMatrix {
    pub fn zeros(n: usize) -> Self {
        HandoffMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds an `n × n` matrix from `(i, j, h_ij)` triples; unlisted pairs are zero.
    /// Repeated pairs overwrite earlier values.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut m = HandoffMatrix::zeros(n);
        for (i, j, h) in entries {
            if i >= n || j >= n {
                return Err(Error::Validation(format!(
                    "handoff entry ({i}, {j}) out of range for {n} base stations"
                )));
            }
            m.data[i * n + j] = h;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, h: f64) {
        self.data[i * self.n + j] = h;
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, h)| **h != 0.0)
            .map(move |(k, h)| (k / self.n, k % self.n, *h))
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                let h = self.get(i, j);
                if !h.is_finite() || h < 0.0 {
                    return Err(Error::Validation(format!(
                        "handoff h[{i}][{j}] = {h} must be finite and non-negative"
                    )));
                }
                if i == j && h != 0.0 {
                    return Err(Error::Validation(format!("nonzero diagonal: h[{i}][{i}] = {h}")));
                }
            }
        }
        Ok(())
    }
}

/// An immutable, validated network description.
#[derive(Debug, Clone)]
pub struct Instance {
    bss: Vec<BaseStation>,
    bscs: Vec<Bsc>,
    n_msc: usize,
    handoff: HandoffMatrix,
    proximity_radius: f64,
    candidates: Vec<Vec<usize>>,
    flows: Vec<Vec<(usize, f64)>>,
}

impl Instance {
    pub fn new(
        bss: Vec<BaseStation>,
        bscs: Vec<Bsc>,
        n_msc: usize,
        handoff: HandoffMatrix,
        proximity_radius: f64,
    ) -> Result<Self> {
        if bss.is_empty() {
            return Err(Error::Validation("at least one base station is required".into()));
        }
        if bscs.is_empty() {
            return Err(Error::Validation("at least one BSC is required".into()));
        }
        if n_msc == 0 {
            return Err(Error::Validation("at least one MSC is required".into()));
        }
        if handoff.n() != bss.len() {
            return Err(Error::Validation(format!(
                "dimension mismatch: handoff matrix is {}x{} but there are {} base stations",
                handoff.n(),
                handoff.n(),
                bss.len()
            )));
        }
        if proximity_radius.is_nan() || proximity_radius < 0.0 {
            return Err(Error::Validation(format!(
                "proximity_radius = {proximity_radius} must be non-negative"
            )));
        }
        for (id, bs) in bss.iter().enumerate() {
            let fields = [
                ("call_traffic", bs.call_traffic),
                ("bhca", bs.bhca),
                ("paging_rate", bs.paging_rate),
            ];
            for (name, v) in fields {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Validation(format!("bs {id}: {name} = {v} is invalid")));
                }
            }
            if !bs.position.x.is_finite() || !bs.position.y.is_finite() {
                return Err(Error::Validation(format!("bs {id}: position is not finite")));
            }
            // capacities may be +inf (unconstrained)
            if bs.paging_capacity.is_nan() {
                return Err(Error::Validation(format!("bs {id}: paging_capacity is NaN")));
            }
            if bs.trx_demand < 1 {
                return Err(Error::Validation(format!("bs {id}: trx_demand must be at least 1")));
            }
            if bs.paging_capacity < bs.paging_rate {
                return Err(Error::Validation(format!(
                    "bs {id}: paging_capacity {} is below its own paging_rate {}",
                    bs.paging_capacity, bs.paging_rate
                )));
            }
        }
        for (id, bsc) in bscs.iter().enumerate() {
            let fields = [
                ("call_capacity", bsc.call_capacity),
                ("bhca_capacity", bsc.bhca_capacity),
                ("paging_capacity", bsc.paging_capacity),
            ];
            for (name, v) in fields {
                if v.is_nan() || v < 0.0 {
                    return Err(Error::Validation(format!("bsc {id}: {name} = {v} is invalid")));
                }
            }
            if !bsc.position.x.is_finite() || !bsc.position.y.is_finite() {
                return Err(Error::Validation(format!("bsc {id}: position is not finite")));
            }
            if bsc.msc >= n_msc {
                return Err(Error::Validation(format!(
                    "bsc {id}: msc {} does not exist (n_msc = {n_msc})",
                    bsc.msc
                )));
            }
        }
        handoff.validate()?;

        let candidates = bss
            .iter()
            .map(|bs| {
                bscs.iter()
                    .enumerate()
                    .filter(|(_, c)| bs.position.distance(c.position) <= proximity_radius)
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();

        let n = bss.len();
        let flows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (j, handoff.get(i, j) + handoff.get(j, i)))
                    .filter(|&(_, w)| w != 0.0)
                    .collect()
            })
            .collect();

        Ok(Instance {
            bss,
            bscs,
            n_msc,
            handoff,
            proximity_radius,
            candidates,
            flows,
        })
    }

    pub fn bss(&self) -> &[BaseStation] {
        &self.bss
    }

    pub fn bscs(&self) -> &[Bsc] {
        &self.bscs
    }

    pub fn n_bs(&self) -> usize {
        self.bss.len()
    }

    pub fn n_bsc(&self) -> usize {
        self.bscs.len()
    }

    pub fn n_msc(&self) -> usize {
        self.n_msc
    }

    pub fn handoff(&self) -> &HandoffMatrix {
        &self.handoff
    }

    pub fn proximity_radius(&self) -> f64 {
        self.proximity_radius
    }

    /// BSCs within `proximity_radius` of `bs`, ascending by id.
    pub fn candidate_bscs(&self, bs: usize) -> &[usize] {
        &self.candidates[bs]
    }

    /// `(j, h[bs][j] + h[j][bs])` for every cell `j` with nonzero flow to or from `bs`.
    pub fn flows(&self, bs: usize) -> &[(usize, f64)] {
        &self.flows[bs]
    }

    pub fn msc_of_bsc(&self, bsc: usize) -> usize {
        self.bscs[bsc].msc
    }

    /// Sum of all off-diagonal handoffs; the cost of the one-LA-per-cell plan.
    pub fn total_handoff(&self) -> f64 {
        self.handoff.entries().fold(0.0, |acc, (_, _, h)| acc + h)
    }

    /// Size of the BS-to-BSC move neighbourhood: for every cell, the number of
    /// reachable BSCs besides the one it is attached to.
    pub fn neighborhood_size(&self) -> usize {
        self.candidates.iter().map(|c| c.len().saturating_sub(1)).sum()
    }
}
