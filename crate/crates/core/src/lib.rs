//! Computable continuous domains.
//!
//! Bases with decidability data ([`order`]), rounded ideals as approximant
//! chains ([`ideal`]), certificate-producing searches for apartness,
//! sharpness and strong maximality ([`separation`]), products and
//! exponentials ([`constructions`]), concrete domains ([`domains`]) and a
//! classical brute-force oracle on finite posets ([`finite`]).

pub mod cert;
pub mod cli;
pub mod constructions;
pub mod domains;
pub mod error;
pub mod finite;
pub mod ideal;
pub mod order;
pub mod separation;

pub use error::{Error, Result};
pub use ideal::ApproxElement;
pub use order::{BasisDescriptor, Fuel, Semi};
