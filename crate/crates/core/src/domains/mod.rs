//! Concrete bases and elements: finite domains, Cantor and Baire sequences,
//! interval reals and lower reals.

pub mod expr;
pub mod finite;
pub mod interval;
pub mod lower;
pub mod seq;

pub use finite::{sierpinski_and_powerset, FiniteDomain};
pub use interval::{iota_real, Interval, IntervalBasis, RealPoint};
pub use lower::{locate, lower_flagged, lower_rational, lower_real_sharp_oracle, lower_sqrt, sharp_from_locator, upper_from_lower, Located, RationalBasis, Side};
pub use seq::{iota_seq, seq_apart_native, SeqBasis, SeqPoint, Word};
