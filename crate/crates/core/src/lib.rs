//! Enumeration schemes for permutations avoiding vincular patterns.

pub mod deletion;
pub mod error;
pub mod eval;
pub mod gap;
pub mod oracle;
pub mod pattern;
pub mod perm;
pub mod qpoly;
pub mod scheme;
pub mod survey;

pub use deletion::{ScenarioWord, Session};
pub use error::{Error, Result};
pub use gap::{GapBasis, GapVector};
pub use oracle::Oracle;
pub use pattern::{PatternSet, VincularPattern, NULL};
pub use perm::Permutation;
pub use qpoly::QPolynomial;
pub use scheme::{discover, DiscoveryParams, NoScheme, Scheme, SchemeTriple};
