//! Exhaustive-enumeration laboratory for algorithmic information theory on
//! the small prefix machine U0.
//!
//! Every quantity (K, Ω, busy beaver, depth, sophistication, Θ-profiles,
//! reach curves) is read off budgeted halting tables and carries a
//! [`Certainty`] flag saying whether the finite budget makes it exact or only
//! a bound.

pub mod algostats;
pub mod certainty;
pub mod complexity;
pub mod encoding;
pub mod enumeration;
pub mod error;
pub mod halting_info;
pub mod lab;
pub mod machine;
pub mod profile;
pub mod report;

pub use certainty::{Certainty, Measured};
pub use encoding::{BitString, Dyadic};
pub use error::{Error, Result};
