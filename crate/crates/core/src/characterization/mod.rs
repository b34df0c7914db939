//! Computation trees, tree oracles, d-regular constants and closed-form error predictions.

pub mod constants;
pub mod cycle;
pub mod regular;
pub mod sensitivity;
pub mod tree;

use thiserror::Error;

use crate::exact::ExactError;
use crate::graph::GraphError;
use crate::walks::WalkError;

pub use constants::{
    delta_sequence, epsilon_bound, h_term, network_constants, regular_constants, Problem,
    ReducedNetwork, RegularConstants,
};
pub use cycle::{
    cycle_error_energy, cycle_prediction, error_characterization_cycle, CyclePrediction,
};
pub use regular::{
    error_characterization_regular, regular_prediction, ConstantSource, RegularPrediction,
};
pub use sensitivity::{path_hitting_probabilities, tree_flow_error, tree_voltage_error};
pub use tree::{
    build_tree, solve_tree_flow, solve_tree_voltage, ComputationTree, TreeEdge, TreeRoot,
    TREE_VERTEX_CAP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharacterizationError {
    #[error("vertex {0} has fewer than two neighbours")]
    HasLeaves(usize),
    #[error("invalid depth {0}")]
    InvalidDepth(usize),
    #[error("computation tree exceeds {cap} vertices")]
    TreeTooLarge { cap: usize },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("graph is not a cycle labelled 0..n in order")]
    NotCycle,
    #[error("graph is not regular")]
    NotRegular,
    #[error("edge weights are not all equal")]
    UnequalWeights,
    #[error("singular linear system")]
    SingularSystem,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
