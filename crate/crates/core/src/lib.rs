//! Exact line geometry and incidence counting over prime fields.
//!
//! The crate implements the Klein correspondence between lines of P³ and
//! points of the Klein quadric in P⁵, the reduction of point-plane incidence
//! problems in P³ to line-line incidences inside a three-dimensional
//! quadric, and exact counters for the incidence, sum-product and
//! distance-set quantities built on top of it.

pub mod applications;
pub mod budget;
pub mod complexes;
pub mod constructions;
pub mod error;
pub mod ffield;
pub mod incidence;
pub mod klein;
pub mod linalg;
pub mod projspace;

pub use budget::Budget;
pub use error::{Error, Result};
pub use ffield::{PrimeField, Scalar};
