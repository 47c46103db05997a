//! Machine-readable outcome of an identity check.

use std::fmt;

use serde::Serialize;

use crate::coeff::RingMode;
use crate::dga::Nilpotency;

/// The pair of relations an expression is computed under.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Modes {
    pub ring: RingMode,
    pub nil: Nilpotency,
}

impl Modes {
    pub fn free() -> Self {
        Modes::default()
    }

    /// `d^k = 0` together with `q` a primitive `k`-th root of unity.
    pub fn paired(k: u32) -> Self {
        Modes {
            ring: RingMode::primitive_root(k).expect("paired order is at least 2"),
            nil: Nilpotency::Order(k),
        }
    }

    pub fn new(ring: RingMode, nil: Nilpotency) -> Self {
        Modes { ring, nil }
    }
}

impl fmt::Display for Modes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ring={} nil={}", self.ring, self.nil)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub modes: String,
    pub residual_term_count: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, modes: impl fmt::Display, residual_term_count: usize, pass: bool) -> Self {
        CheckReport {
            check: check.into(),
            modes: modes.to_string(),
            residual_term_count,
            pass,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {} [{}] residual_terms={}", self.check, self.modes, self.residual_term_count)?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}
