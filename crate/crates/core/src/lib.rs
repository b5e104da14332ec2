//! Finite racks and quandles, the Hurwitz braid action on tuples over them,
//! stabilizer-image monodromy groups, structure-semigroup stabilization,
//! Nielsen tuple enumeration, and the finite-field factorization statistics
//! they predict.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! rack ──> braid orbits ──> stabilizer image in S_n ──> classification
//!                                     │
//!                                     └──> Chebotarev-style frequencies
//! ```
//!
//! with exact arithmetic throughout: group orders are big integers and
//! frequencies are big rationals.

pub mod braid;
pub mod error;
pub mod ffstats;
pub mod group;
pub mod nielsen;
pub mod perm;
pub mod rack;
pub mod semigroup;


pub use braid::{BraidWord, MonodromyReport, OrbitGraph, Tuple};
pub use error::{Error, Result};

pub use group::FiniteGroupTable;
pub use perm::{BlockStructure, Classification, Perm, PermGroup};
pub use rack::{BraidedSet, ComponentLabeling, Rack, ValidationReport};
