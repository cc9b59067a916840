use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed code: {0}")]
    MalformedCode(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("machine version mismatch: expected {expected}, found {found}")]
    VersionMismatch { expected: String, found: String },
    #[error("resume table does not match: {0}")]
    ResumeMismatch(String),
    #[error("resume budget L={old_len} J={old_steps} is not smaller than L={new_len} J={new_steps}")]
    BudgetNotLarger {
        old_len: usize,
        old_steps: u64,
        new_len: usize,
        new_steps: u64,
    },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("length {n} exceeds the table's max length {max_len}")]
    OutOfBudget { n: usize, max_len: usize },
    #[error("no enumerated program runs {steps} steps or longer (value is at least {lower_bound})")]
    NotWitnessed { steps: u64, lower_bound: usize },
    #[error("{requested} bits requested but only {certified} bits of the sum are certified")]
    NotStabilized { requested: usize, certified: usize },
    #[error("the dovetail never matched the given prefix within the budget")]
    PrefixNotReached,
    #[error("fewer than {expected} programs halted within the budget")]
    CountNeverReached { expected: usize },
    #[error("profile is empty")]
    EmptyProfile,
    #[error("{x} (given {z}) is not produced by any program within the budget")]
    NotProducible { x: String, z: String },
    #[error("no model is within slack {c} of a shortest description")]
    NoSufficientModel { c: u32 },
    #[error("{x} is not an element of the model")]
    NotMember { x: String },
    #[error("needs {needed} bits of the certified prefix but only {available} are available")]
    PrefixTooShort { needed: usize, available: usize },
    #[error("table is not exact: {0}")]
    NotExact(String),
    #[error("tables were built with different budgets")]
    BudgetMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that come from a finite budget rather than from bad
    /// input.
    pub fn is_budget_insufficiency(&self) -> bool {
        matches!(
            self,
            Error::NotWitnessed { .. }
                | Error::NotStabilized { .. }
                | Error::PrefixNotReached
                | Error::CountNeverReached { .. }
                | Error::NotProducible { .. }
                | Error::NoSufficientModel { .. }
                | Error::PrefixTooShort { .. }
                | Error::NotExact(_)
                | Error::OutOfBudget { .. }
        )
    }
}
