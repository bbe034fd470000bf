//! Exact computation of supersingular polynomials of rank-2 Drinfeld modules
//! over F_q[T], with independent verification oracles and certification of
//! the asymptotically optimal recursive tower they give rise to.

pub mod drinfeld;
pub mod error;
pub mod field;
pub mod mpoly;
pub mod partition;
pub mod report;
pub mod ssformula;
pub mod tower_cert;
pub mod twisted;

pub use error::{Error, Result};
pub use field::upoly::UPoly;
pub use field::{FFElement, FqPoly, Level, PrimeIdeal, PrimePower, Tower};

/// Default cap on exhaustive element scans.
pub const DEFAULT_SCAN_CAP: u64 = 1 << 24;
