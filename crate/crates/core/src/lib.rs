//! Exact service capacity regions of erasure-coded storage systems.
//!
//! A system stores `K` files on `N` unit-capacity nodes through a linear code.
//! Requests for a file are split across its minimal recovering sets, and the
//! capacity region is the set of request-rate vectors for which some split
//! keeps every node's load at most `μ`. Every computation is exact.


pub mod closed_form;
pub mod code_model;
pub mod error;
pub mod exactlp;
pub mod field;
pub mod piecewise;
pub mod recovery;
pub mod region;
pub mod scalar;
pub mod schedulers;
pub mod verify;



pub use code_model::{make_hybrid, make_mds_systematic, make_replication, make_simplex, CodeFamily, CodeSpec, HybridSpec};
pub use error::{Error, Result};
pub use piecewise::PiecewiseBoundary;
pub use recovery::{enumerate_recovery_sets, RecoverySetIndex};
pub use region::{
    max_rate, max_weighted_sum, membership, project_fm, trace_boundary_2d, trace_slice_2d, Allocation,
    DemandVector, SystemConfig,
};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
pub type Config = SystemConfig<Rational>;
pub type Boundary = PiecewiseBoundary<Rational>;
pub type Demand = DemandVector<Rational>;
pub type Alloc = Allocation<Rational>;
