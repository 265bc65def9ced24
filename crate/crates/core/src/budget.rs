//! Enumeration limits shared by every exhaustive routine.

use std::env;

/// Environment variable that overrides every limit at once.
pub const BUDGET_ENV: &str = "AXCOUNT_BUDGET";

pub const DEFAULT_EVALUATIONS: u64 = 1_000_000_000;
pub const DEFAULT_INDEX_COMBINATIONS: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Point evaluations allowed for zero counting, census sweeps and brute
    /// root counting.
    pub evaluations: u64,
    /// Limit on (plane assignments)^m when enumerating index sets.
    pub index_combinations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            evaluations: DEFAULT_EVALUATIONS,
            index_combinations: DEFAULT_INDEX_COMBINATIONS,
        }
    }
}

impl Budget {
    pub fn uniform(limit: u64) -> Self {
        Budget {
            evaluations: limit,
            index_combinations: limit,
        }
    }

    /// Defaults, unless `AXCOUNT_BUDGET` holds an integer.
    pub fn from_env() -> Self {
        env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse::<u64>().ok())
            .map(Budget::uniform)
            .unwrap_or_default()
    }

    pub fn with_evaluations(mut self, limit: u64) -> Self {
        self.evaluations = limit;
        self
    }
}

/// `base^exp`, saturating at `u64::MAX`.
pub fn saturating_pow(base: u64, exp: u64) -> u64 {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u64::MAX {
            break;
        }
    }
    acc
}
