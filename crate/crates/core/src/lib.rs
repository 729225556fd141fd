//! Bayesian optimization of expensive constrained single- and multi-objective
//! problems.
//!
//! Gaussian-process models of every objective and constraint feed an expected
//! improvement criterion built on an extended domination rule. The criterion
//! integral is estimated with a subset-simulation particle system in the output
//! space, and candidates are drawn from a sequential Monte Carlo population in
//! the search domain.

pub mod error;
pub mod normal;
pub mod rng;

pub mod bounds;
pub mod criterion;
pub mod domination;
pub mod driver;
pub mod gp;
pub mod hypervolume;
pub mod problems;
pub mod smc_x;
pub mod smc_y;

pub use error::{BmooError, Result};
