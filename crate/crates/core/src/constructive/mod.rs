//! Executable form of the density argument: cover the operator image with an
//! ε-net, blend the centers with a partition of unity, replace each partition
//! function by a scalar ridge network, and sum the pieces into one
//! vector-valued network whose error stays inside an explicit budget.

mod assemble;
mod epsilon_net;
mod partition;
mod ridge;

pub use assemble::{
    assemble_vector_network, dual_uniform_error, uniform_error, Assembly, AssemblyReport,
    CoefficientFit, ErrorBudget,
};
pub use epsilon_net::{build_epsilon_net, EpsilonNet};
pub use partition::{build_partition, finite_rank_apply, PartitionOfUnity};
pub use ridge::{fit_scalar_ridge, fit_with_features, FitConfig, ScalarRidgeNet};

/// Relative slack applied to strict inequalities checked in floating point.
pub const STRICT_SLACK: f64 = 1e-9;
