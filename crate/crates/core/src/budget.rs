//! Wall-clock guard for exhaustive searches.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Deadline shared by all workers of a search. Cloning keeps the same
/// deadline and the same tripped flag, so one worker timing out stops all.
#[derive(Clone, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    tripped: Arc<AtomicBool>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            deadline: None,
            tripped: Arc::new(AtomicBool::new(false)),
        }
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + timeout),
            tripped: Arc::new(AtomicBool::new(false)),
        }
    }

    /// Reads `TDL_BUDGET_SECS`; unset or unparseable means unlimited.
    pub fn from_env() -> Self {
        match std::env::var("TDL_BUDGET_SECS")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            Some(secs) => Self::with_timeout(Duration::from_secs(secs)),
            None => Self::unlimited(),
        }
    }

    /// Cheap check meant to be called every few thousand search nodes.
    pub fn check(&self, what: &str) -> Result<()> {
        if self.tripped.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded(format!("{what}: deadline reached")));
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                self.tripped.store(true, Ordering::Relaxed);
                return Err(Error::BudgetExceeded(format!("{what}: deadline reached")));
            }
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}

/// Counter that amortizes `Budget::check` to every 2^14 ticks.
pub struct Ticker<'a> {
    budget: &'a Budget,
    count: u64,
    what: &'a str,
}

impl<'a> Ticker<'a> {
    pub fn new(budget: &'a Budget, what: &'a str) -> Self {
        Ticker {
            budget,
            count: 0,
            what,
        }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.count += 1;
        if self.count & 0x3fff == 0 {
            self.budget.check(self.what)?;
        }
        Ok(())
    }
}
