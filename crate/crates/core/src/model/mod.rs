//! Network instances, plans, and their text formats.

mod format;
mod initial;
mod instance;
mod solution;

pub use format::{
    format_instance, format_solution, load_instance, load_solution, parse_instance, parse_solution, write_instance,
    write_solution, ParsedSolution, SolutionReport,
};
pub(crate) use initial::construct;
pub use initial::{initial_topology, initial_topology_with_attempts, CONSTRUCTION_ATTEMPTS};
pub use instance::{BaseStation, Bsc, HandoffMatrix, Instance, Point};
pub(crate) use solution::{sum_load, sum_paging};
pub use solution::{BscLoad, LaTarget, Solution};

use std::fmt;

use crate::error::{Error, Result};

/// GSM Location Area Identifier: MCC, MNC and a two-octet LAC.
///
/// Labels are cosmetic; the solver itself keys LAs by dense index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocationAreaId {
    mcc: String,
    mnc: String,
    lac: u16,
}

impl LocationAreaId {
    pub fn new(mcc: &str, mnc: &str, lac: usize) -> Result<Self> {
        let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if mcc.len() != 3 || !digits(mcc) {
            return Err(Error::InvalidParam(format!("mcc {mcc:?} must be 3 digits")));
        }
        if !(2..=3).contains(&mnc.len()) || !digits(mnc) {
            return Err(Error::InvalidParam(format!("mnc {mnc:?} must be 2 or 3 digits")));
        }
        let lac =
            u16::try_from(lac).map_err(|_| Error::InvalidParam(format!("lac {lac} does not fit in two octets")))?;
        Ok(LocationAreaId {
            mcc: mcc.to_owned(),
            mnc: mnc.to_owned(),
            lac,
        })
    }

    pub fn mcc(&self) -> &str {
        &self.mcc
    }

    pub fn mnc(&self) -> &str {
        &self.mnc
    }

    pub fn lac(&self) -> u16 {
        self.lac
    }
}

impl fmt::Display for LocationAreaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.mcc, self.mnc, self.lac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lai_accepts_two_octet_range() {
        let id = LocationAreaId::new("001", "01", 65535).unwrap();
        assert_eq!(id.lac(), 65535);
        assert_eq!(id.to_string(), "001-01-65535");
        assert!(LocationAreaId::new("001", "001", 0).is_ok());
    }

    #[test]
    fn lai_rejects_bad_fields() {
        assert!(LocationAreaId::new("001", "01", 65536).is_err());
        assert!(LocationAreaId::new("01", "01", 1).is_err());
        assert!(LocationAreaId::new("001", "1", 1).is_err());
        assert!(LocationAreaId::new("0a1", "01", 1).is_err());
    }
}
