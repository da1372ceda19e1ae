//! Fifth-order finite-volume WENO reconstruction with mapped and locally
//! order-preserving (LOP) nonlinear weights, plus 1D and 2D solvers for
//! linear advection and the compressible Euler equations.

pub mod error;
pub mod euler;
pub mod harness;
pub mod lop;
pub mod mapping;
pub mod metrics;
pub mod problems;
pub mod scheme;
pub mod solver1d;
pub mod solver2d;
pub mod time;
pub mod weno;

pub use error::{Error, Result};
pub use lop::{Membership, TraceSink};
pub use mapping::{AcmParams, MappingKind};
pub use scheme::{Scheme, Weighting};
