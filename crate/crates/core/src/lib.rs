//! Exact computations in the kappa rings of moduli spaces of curves of
//! compact type: relation generation, lambda_g socle evaluation, boundary
//! strata pairings, ranks, Betti numbers and canonical bases.

pub mod error;
pub mod exactnum;
pub mod hodgeeval;
pub mod partitions;
pub mod powerseries;
pub mod ringan;
pub mod sqcalc;

pub use error::{Error, Result};
pub use exactnum::{Integer, Rational};
pub use partitions::{Partition, SetPartition};
pub use sqcalc::KappaPoly;
