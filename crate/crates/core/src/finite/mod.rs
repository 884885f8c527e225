//! Classical brute-force ground truth on explicit finite posets.

pub mod oracle;
pub mod poset;
pub mod suite;

pub use oracle::{apart_oracle, monotone_maps, scott_opens, way_below_oracle, FiniteOracle, DEFAULT_SIZE_CAP};
pub use poset::{FinitePoset, Mask};
pub use suite::{theorem_suite, CheckOutcome, SuiteReport};
