//! Continuous cutting-plane optimization for mixed-integer linear programs.
//!
//! Cuts are produced by a stack of generalized Gomory mixed-integer layers
//! (a subadditive "network"). Instead of adding rounds of cuts, the layer
//! weights are tuned by alternating LP solves with gradient steps that push
//! the current LP optimum out of the enlarged relaxation.
//!
//! The crate is organised as:
//!
//! * [`milp`]: instance model, file format, generators, brute-force oracle, gap metric.
//! * [`simplex`]: dense revised simplex with warm starts and basis-inverse access.
//! * [`net`]: generalized GMI layers, forward evaluation, analytic gradients, initializers.
//! * [`cutopt`]: the outer LP / inner gradient loop and its trace.
//! * [`exact`]: a small branch-and-bound used to get reference optima.

pub mod cutopt;
pub mod error;
pub mod exact;
pub mod milp;
pub mod net;
pub mod simplex;

pub use error::{Error, Result};
pub use milp::MilpInstance;
pub use net::{GmiLayer, SubadditiveNet, Variant};
pub use simplex::{Basis, LpProblem, LpSolution, LpStatus};
