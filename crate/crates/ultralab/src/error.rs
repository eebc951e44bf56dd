use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("step budget of {limit} exhausted: {context}")]
    Budget { limit: u64, context: String },
    #[error("search failed: {0}")]
    Search(String),
    #[error("size limit exceeded: {0}")]
    Limit(String),
}

impl Error {
    pub fn input(msg: impl fmt::Display) -> Self {
        Error::Input(msg.to_string())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::Budget { .. } | Error::Search(_) | Error::Limit(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A step counter shared by a single search.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn tick(&mut self, context: &str) -> Result<()> {
        self.spend(1, context)
    }

    pub fn spend(&mut self, steps: u64, context: &str) -> Result<()> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            return Err(Error::Budget { limit: self.limit, context: context.to_string() });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
