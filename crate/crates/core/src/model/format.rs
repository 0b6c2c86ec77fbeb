//! Line-oriented text formats for instances and solution reports.
//!
//! Both formats are UTF-8, `#` starts a comment, blank lines are ignored and
//! `[name]` opens a section. Numbers use `.` as the decimal separator and
//! `inf` for an unbounded radius. Reals are written with the shortest
//! representation that parses back to the same value.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::instance::{BaseStation, Bsc, HandoffMatrix, Instance, Point};
use super::solution::Solution;
use super::LocationAreaId;
use crate::constraints::FeasibilityReport;
use crate::cost::CostBreakdown;
use crate::error::{Error, Result};

struct Line<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

/// Splits `text` into `(section, lines)` groups.
fn sections<'a>(text: &'a str, origin: &str) -> Result<Vec<(&'a str, Vec<Line<'a>>)>> {
    let mut out: Vec<(&str, Vec<Line>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let number = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| Error::Parse {
                path: origin.to_owned(),
                line: number,
                message: format!("malformed section header {line:?}"),
            })?;
            out.push((name.trim(), Vec::new()));
            continue;
        }
        let Some((_, lines)) = out.last_mut() else {
            return Err(Error::Parse {
                path: origin.to_owned(),
                line: number,
                message: "content before the first section header".into(),
            });
        };
        let fields = line
            .split(|c: char| c.is_whitespace() || c == '=')
            .filter(|f| !f.is_empty())
            .collect();
        lines.push(Line { number, fields });
    }
    Ok(out)
}

struct Cursor<'a> {
    origin: &'a str,
}

impl Cursor<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.origin.to_owned(),
            line,
            message: message.into(),
        }
    }

    fn arity(&self, line: &Line, n: usize, what: &str) -> Result<()> {
        if line.fields.len() != n {
            return Err(self.err(
                line.number,
                format!("{what} row needs {n} fields, found {}", line.fields.len()),
            ));
        }
        Ok(())
    }

    fn num<T: std::str::FromStr>(&self, line: &Line, idx: usize, name: &str) -> Result<T> {
        let raw = line.fields[idx];
        raw.parse()
            .map_err(|_| self.err(line.number, format!("field `{name}`: cannot parse {raw:?}")))
    }
}

/// Parses an instance document. `origin` only labels diagnostics.
pub fn parse_instance(text: &str, origin: &str) -> Result<Instance> {
    let cur = Cursor { origin };
    let mut n_bs = None;
    let mut n_bsc = None;
    let mut n_msc = None;
    let mut radius = f64::INFINITY;
    let mut bs_rows: Vec<(usize, usize, BaseStation)> = Vec::new();
    let mut bsc_rows: Vec<(usize, usize, Bsc)> = Vec::new();
    let mut handoff_rows: Vec<(usize, usize, usize, f64)> = Vec::new();

    for (name, lines) in sections(text, origin)? {
        match name {
            "network" => {
                for line in &lines {
                    cur.arity(line, 2, "network")?;
                    match line.fields[0] {
                        "n_bs" => n_bs = Some(cur.num::<usize>(line, 1, "n_bs")?),
                        "n_bsc" => n_bsc = Some(cur.num::<usize>(line, 1, "n_bsc")?),
                        "n_msc" => n_msc = Some(cur.num::<usize>(line, 1, "n_msc")?),
                        "proximity_radius" => radius = cur.num(line, 1, "proximity_radius")?,
                        other => return Err(cur.err(line.number, format!("unknown network key `{other}`"))),
                    }
                }
            }
            "bs" => {
                for line in &lines {
                    cur.arity(line, 8, "bs")?;
                    let bs = BaseStation {
                        position: Point::new(cur.num(line, 1, "x")?, cur.num(line, 2, "y")?),
                        call_traffic: cur.num(line, 3, "call_traffic")?,
                        bhca: cur.num(line, 4, "bhca")?,
                        trx_demand: cur.num(line, 5, "trx_demand")?,
                        paging_rate: cur.num(line, 6, "paging_rate")?,
                        paging_capacity: cur.num(line, 7, "paging_capacity")?,
                    };
                    bs_rows.push((line.number, cur.num(line, 0, "id")?, bs));
                }
            }
            "bsc" => {
                for line in &lines {
                    cur.arity(line, 8, "bsc")?;
                    let bsc = Bsc {
                        position: Point::new(cur.num(line, 1, "x")?, cur.num(line, 2, "y")?),
                        call_capacity: cur.num(line, 3, "call_capacity")?,
                        bhca_capacity: cur.num(line, 4, "bhca_capacity")?,
                        trx_capacity: cur.num(line, 5, "trx_capacity")?,
                        paging_capacity: cur.num(line, 6, "paging_capacity")?,
                        msc: cur.num(line, 7, "msc")?,
                    };
                    bsc_rows.push((line.number, cur.num(line, 0, "id")?, bsc));
                }
            }
            "handoff" => {
                for line in &lines {
                    cur.arity(line, 3, "handoff")?;
                    handoff_rows.push((
                        line.number,
                        cur.num(line, 0, "i")?,
                        cur.num(line, 1, "j")?,
                        cur.num(line, 2, "h_ij")?,
                    ));
                }
            }
            other => return Err(cur.err(0, format!("unknown section [{other}]"))),
        }
    }

    let missing = |k: &str| Error::Parse {
        path: origin.to_owned(),
        line: 0,
        message: format!("[network] is missing `{k}`"),
    };
    let n_bs = n_bs.ok_or_else(|| missing("n_bs"))?;
    let n_bsc = n_bsc.ok_or_else(|| missing("n_bsc"))?;
    let n_msc = n_msc.ok_or_else(|| missing("n_msc"))?;

    let bss = dense_rows(&cur, bs_rows, n_bs, "bs")?;
    let bscs = dense_rows(&cur, bsc_rows, n_bsc, "bsc")?;
    let mut handoff = HandoffMatrix::zeros(n_bs);
    for (number, i, j, h) in handoff_rows {
        if i >= n_bs || j >= n_bs {
            return Err(cur.err(number, format!("handoff pair ({i}, {j}) references an unknown bs")));
        }
        handoff.set(i, j, h);
    }
    Instance::new(bss, bscs, n_msc, handoff, radius)
}

fn dense_rows<T>(cur: &Cursor, rows: Vec<(usize, usize, T)>, n: usize, what: &str) -> Result<Vec<T>> {
    if rows.len() != n {
        return Err(Error::Validation(format!(
            "dimension mismatch: n_{what} = {n} but {} [{what}] rows",
            rows.len()
        )));
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    for (number, id, row) in rows {
        if id >= n {
            return Err(cur.err(number, format!("{what} id {id} out of range 0..{n}")));
        }
        if slots[id].replace(row).is_some() {
            return Err(cur.err(number, format!("duplicate {what} id {id}")));
        }
    }
    Ok(slots.into_iter().map(|s| s.expect("all ids present")).collect())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text, &path.display().to_string())
}

pub fn format_instance(instance: &Instance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[network]");
    let _ = writeln!(s, "n_bs = {}", instance.n_bs());
    let _ = writeln!(s, "n_bsc = {}", instance.n_bsc());
    let _ = writeln!(s, "n_msc = {}", instance.n_msc());
    let _ = writeln!(s, "proximity_radius = {}", instance.proximity_radius());
    let _ = writeln!(
        s,
        "\n[bs]\n# id x y call_traffic bhca trx_demand paging_rate paging_capacity"
    );
    for (id, b) in instance.bss().iter().enumerate() {
        let _ = writeln!(
            s,
            "{id} {} {} {} {} {} {} {}",
            b.position.x, b.position.y, b.call_traffic, b.bhca, b.trx_demand, b.paging_rate, b.paging_capacity
        );
    }
    let _ = writeln!(
        s,
        "\n[bsc]\n# id x y call_capacity bhca_capacity trx_capacity paging_capacity msc"
    );
    for (id, c) in instance.bscs().iter().enumerate() {
        let _ = writeln!(
            s,
            "{id} {} {} {} {} {} {} {}",
            c.position.x, c.position.y, c.call_capacity, c.bhca_capacity, c.trx_capacity, c.paging_capacity, c.msc
        );
    }
    let _ = writeln!(s, "\n[handoff]\n# i j h_ij");
    for (i, j, h) in instance.handoff().entries() {
        let _ = writeln!(s, "{i} {j} {h}");
    }
    s
}

pub fn write_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_instance(instance)).map_err(|e| Error::io(path, e))
}

/// Everything that goes into a solution report.
#[derive(Debug, Clone)]
pub struct SolutionReport<'a> {
    pub solution: &'a Solution,
    pub cost: &'a CostBreakdown,
    pub feasibility: &'a FeasibilityReport,
    /// Seed line reproduced in the summary, when the plan came from a seeded run.
    pub seed: Option<u64>,
    pub mcc: &'a str,
    pub mnc: &'a str,
}

/// Renders a solution report:
///
/// ```text
/// [summary]      cost, las, feasible, n_bs and optionally seed, as `key = value`
/// [assignment]   one `bs bsc la` row per cell
/// [la]           one `la mcc mnc lac msc members paging` row per LA
/// [boundary]     one `la_a la_b flow` row per LA pair with nonzero handoff
/// [violations]   one `kind entity load capacity` row per violated constraint
/// ```
pub fn format_solution(instance: &Instance, report: &SolutionReport) -> Result<String> {
    let sol = report.solution;
    let mut s = String::new();
    let _ = writeln!(s, "[summary]");
    let _ = writeln!(s, "cost = {}", report.cost.total);
    let _ = writeln!(s, "las = {}", sol.num_las());
    let _ = writeln!(s, "feasible = {}", report.feasibility.feasible());
    let _ = writeln!(s, "n_bs = {}", instance.n_bs());
    if let Some(seed) = report.seed {
        let _ = writeln!(s, "seed = {seed}");
    }
    let _ = writeln!(s, "\n[assignment]\n# bs bsc la");
    for bs in 0..sol.n_bs() {
        let _ = writeln!(s, "{bs} {} {}", sol.bsc_of(bs), sol.la_of(bs));
    }
    let _ = writeln!(s, "\n[la]\n# la mcc mnc lac msc members paging");
    for la in 0..sol.num_las() {
        let id = LocationAreaId::new(report.mcc, report.mnc, la)?;
        let _ = writeln!(
            s,
            "{la} {} {} {} {} {} {}",
            id.mcc(),
            id.mnc(),
            id.lac(),
            sol.la_msc(la),
            sol.la_members(la).len(),
            sol.la_paging(la)
        );
    }
    let _ = writeln!(s, "\n[boundary]\n# la_a la_b flow");
    for &(a, b, flow) in &report.cost.per_la_boundary {
        let _ = writeln!(s, "{a} {b} {flow}");
    }
    let _ = writeln!(s, "\n[violations]\n# kind entity load capacity");
    for v in report.feasibility.violations() {
        let _ = writeln!(s, "{} {} {} {}", v.kind, v.entity, v.load, v.capacity);
    }
    Ok(s)
}

pub fn write_solution(instance: &Instance, report: &SolutionReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_solution(instance, report)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// The maps recovered from a solution report's `[assignment]` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSolution {
    pub bs_to_bsc: Vec<usize>,
    pub bs_to_la: Vec<usize>,
}

impl ParsedSolution {
    pub fn into_solution(self, instance: &Instance) -> Result<Solution> {
        if self.bs_to_bsc.len() != instance.n_bs() {
            return Err(Error::InvalidSolution(format!(
                "report covers {} base stations, instance has {}",
                self.bs_to_bsc.len(),
                instance.n_bs()
            )));
        }
        Solution::from_assignment(instance, self.bs_to_bsc, self.bs_to_la)
    }
}

/// Parses a solution report. Only `[assignment]` is interpreted; the other
/// blocks are derived data and are skipped.
pub fn parse_solution(text: &str, origin: &str) -> Result<ParsedSolution> {
    let cur = Cursor { origin };
    let mut rows: Vec<(usize, usize, (usize, usize))> = Vec::new();
    let mut seen_assignment = false;
    for (name, lines) in sections(text, origin)? {
        if name != "assignment" {
            continue;
        }
        seen_assignment = true;
        for line in &lines {
            cur.arity(line, 3, "assignment")?;
            let bs = cur.num(line, 0, "bs")?;
            rows.push((line.number, bs, (cur.num(line, 1, "bsc")?, cur.num(line, 2, "la")?)));
        }
    }
    if !seen_assignment {
        return Err(cur.err(0, "missing [assignment] section"));
    }
    let n = rows.len();
    for &(number, bs, _) in &rows {
        if bs >= n {
            return Err(Error::InvalidSolution(format!(
                "{origin}:{number}: unknown bs id {bs} (report has {n} rows)"
            )));
        }
    }
    let pairs = dense_rows(&cur, rows, n, "assignment").map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::InvalidSolution(other.to_string()),
    })?;
    let (bs_to_bsc, bs_to_la) = pairs.into_iter().unzip();
    Ok(ParsedSolution { bs_to_bsc, bs_to_la })
}

pub fn load_solution(path: impl AsRef<Path>) -> Result<ParsedSolution> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_solution(&text, &path.display().to_string())
}
