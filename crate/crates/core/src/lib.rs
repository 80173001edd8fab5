//! Shallow vector-valued ridge networks `s ↦ Σ_j η(ℓ_j(s) − θ_j) v_j` with
//! inputs in a discretized topological vector space and coefficients in a
//! discretized locally convex space, together with a constructive pipeline
//! that builds such a network for a sampled operator under any one of the
//! target seminorms.
//!
//! Everything is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the experiment runner uses.

pub mod constructive;
pub mod error;
pub mod grid;
pub mod input_space;
pub mod linalg;
pub mod network;
pub mod operators;
pub mod rng;
pub mod scalar;
pub mod target_space;

pub use constructive::{
    assemble_vector_network, build_epsilon_net, build_partition, dual_uniform_error,
    finite_rank_apply, fit_scalar_ridge, fit_with_features, uniform_error, Assembly,
    AssemblyReport, EpsilonNet, ErrorBudget, FitConfig, PartitionOfUnity, ScalarRidgeNet,
};
pub use error::{Error, Result};
pub use grid::GridMeta;
pub use input_space::{
    random_functional, sample_ensemble, CompactEnsemble, EnsembleFamily, EnsembleSpec,
    FunctionalSpec, InputPoint, InputShape, LinearFunctional,
};
pub use linalg::{least_squares_solve, LeastSquares};
pub use network::{
    deserialize_network, serialize_network, Activation, Neuron, ShallowVectorNetwork,
};
pub use operators::{
    integral_operator_apply, matrix_map_apply, poisson_solve_1d, superposition_apply, Kernel,
    MatrixMap, OperatorSpec, PointwiseMap,
};
pub use scalar::Scalar;
pub use target_space::{family_sup_error, Seminorm, SeminormFamily, TargetElement, TargetShape};

pub type Grid = GridMeta<f64>;
pub type Target = TargetElement<f64>;
pub type Input = InputPoint<f64>;
pub type Functional = LinearFunctional<f64>;
pub type Ensemble = CompactEnsemble<f64>;
pub type Network = ShallowVectorNetwork<f64>;
pub type RidgeNet = ScalarRidgeNet<f64>;
pub type Rho = Seminorm<f64>;
pub type Family = SeminormFamily<f64>;

pub type Grid32 = GridMeta<f32>;
pub type Target32 = TargetElement<f32>;
pub type Input32 = InputPoint<f32>;
pub type Network32 = ShallowVectorNetwork<f32>;
