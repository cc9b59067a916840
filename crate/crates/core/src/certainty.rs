use std::fmt;

use serde::{Deserialize, Serialize};

/// How far a reported value can be trusted under a finite enumeration budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Exact,
    LowerBound,
    UpperBound,
}

impl Certainty {
    pub fn is_exact(self) -> bool {
        self == Certainty::Exact
    }

    /// Certainty of a value computed from two inputs: exact only if both are.
    pub fn and(self, other: Certainty) -> Certainty {
        match (self, other) {
            (Certainty::Exact, c) | (c, Certainty::Exact) => c,
            (a, b) if a == b => a,
            // mixed bounds give no one-sided guarantee; report the weaker side
            _ => Certainty::LowerBound,
        }
    }

    pub fn exact_if(cond: bool, otherwise: Certainty) -> Certainty {
        if cond {
            Certainty::Exact
        } else {
            otherwise
        }
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Exact => "exact",
            Certainty::LowerBound => "lower_bound",
            Certainty::UpperBound => "upper_bound",
        })
    }
}

/// A value together with its certainty flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Measured<T> {
    pub value: T,
    pub certainty: Certainty,
}

impl<T> Measured<T> {
    pub fn new(value: T, certainty: Certainty) -> Self {
        Measured { value, certainty }
    }

    pub fn exact(value: T) -> Self {
        Measured { value, certainty: Certainty::Exact }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Measured<U> {
        Measured { value: f(self.value), certainty: self.certainty }
    }
}

impl<T: fmt::Display> fmt::Display for Measured<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.certainty)
    }
}
