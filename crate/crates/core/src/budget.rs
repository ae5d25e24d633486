use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Wall-clock allowance checked at cooperative checkpoints.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn seconds(s: u64) -> Self {
        Budget { deadline: Some(Instant::now() + Duration::from_secs(s)) }
    }

    pub fn check(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(t) if Instant::now() > t => Err(Error::BudgetExceeded(what.to_string())),
            _ => Ok(()),
        }
    }
}
