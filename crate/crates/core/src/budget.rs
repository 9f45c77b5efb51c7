use crate::error::{Error, Result};

/// Default operation budget for exhaustive scans (roughly a few seconds of work).
pub const DEFAULT_BUDGET_OPS: u64 = 200_000_000;

/// Cooperative work limit. Expensive operations estimate their cost up front
/// and refuse to start when it exceeds the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_ops: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_ops: DEFAULT_BUDGET_OPS,
        }
    }
}

impl Budget {
    pub fn new(max_ops: u64) -> Self {
        Budget { max_ops }
    }

    pub fn unlimited() -> Self {
        Budget { max_ops: u64::MAX }
    }

    pub fn check(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_ops as u128 {
            Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed,
                budget: self.max_ops,
            })
        } else {
            Ok(())
        }
    }
}
