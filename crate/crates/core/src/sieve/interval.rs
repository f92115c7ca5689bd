use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SieveError;

/// Endpoint convention for an integer interval between two bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    OpenOpen,
    OpenClosed,
    ClosedOpen,
    ClosedClosed,
}

impl Boundary {
    pub const ALL: [Boundary; 4] = [
        Boundary::OpenOpen,
        Boundary::OpenClosed,
        Boundary::ClosedOpen,
        Boundary::ClosedClosed,
    ];

    pub fn lo_open(self) -> bool {
        matches!(self, Boundary::OpenOpen | Boundary::OpenClosed)
    }

    pub fn hi_open(self) -> bool {
        matches!(self, Boundary::OpenOpen | Boundary::ClosedOpen)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::OpenOpen => "open-open",
            Boundary::OpenClosed => "open-closed",
            Boundary::ClosedOpen => "closed-open",
            Boundary::ClosedClosed => "closed-closed",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Boundary::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| {
                format!("unknown boundary mode `{s}` (expected open-open, open-closed, closed-open or closed-closed)")
            })
    }
}

/// An integer interval whose endpoints are individually open or closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: u64,
    hi: u64,
    lo_open: bool,
    hi_open: bool,
}

impl Interval {
    pub fn new(lo: u64, hi: u64, lo_open: bool, hi_open: bool) -> Result<Self, SieveError> {
        if lo > hi {
            return Err(SieveError::InvalidRange { lo, hi });
        }
        Ok(Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    pub fn with_boundary(lo: u64, hi: u64, boundary: Boundary) -> Result<Self, SieveError> {
        Interval::new(lo, hi, boundary.lo_open(), boundary.hi_open())
    }

    pub fn closed(lo: u64, hi: u64) -> Result<Self, SieveError> {
        Interval::new(lo, hi, false, false)
    }

    pub fn open(lo: u64, hi: u64) -> Result<Self, SieveError> {
        Interval::new(lo, hi, true, true)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn lo_open(&self) -> bool {
        self.lo_open
    }

    pub fn hi_open(&self) -> bool {
        self.hi_open
    }

    /// The same integer set written as `[a, b]`, or `None` when empty.
    pub fn effective_closed(&self) -> Option<(u64, u64)> {
        let a = if self.lo_open {
            self.lo.checked_add(1)?
        } else {
            self.lo
        };
        let b = if self.hi_open {
            self.hi.checked_sub(1)?
        } else {
            self.hi
        };
        (a <= b).then_some((a, b))
    }

    pub fn is_empty(&self) -> bool {
        self.effective_closed().is_none()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.effective_closed()
            .is_some_and(|(a, b)| a <= x && x <= b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}
