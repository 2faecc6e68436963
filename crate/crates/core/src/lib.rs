//! Exact section bounds for globally generated sheaves on polarized
//! varieties, stability certificates for their syzygy (Lazarsfeld-Mukai)
//! sheaves, and effective twist thresholds.
//!
//! All arithmetic is exact over the rationals.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod stability;
pub mod twist;
pub mod varieties;
pub mod verify;

pub use bounds::{sections_bound, BoundReport, Branch, Form};
pub use error::{Error, Result};
pub use exactnum::{genbinom, Rational};
pub use stability::{check_stability, StabilityReport, Verdict};
pub use twist::{minimal_stable_twist, HilbertPoly, Poly, TwistCertificate};
pub use varieties::{catalog, catalog_lookup, Variety};
