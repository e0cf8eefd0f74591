//! Detection pairs in graphs: verification, brute-force oracles, a greedy
//! set-cover approximation for general graphs, and exact / approximate /
//! parameterized algorithms on trees.

pub mod detection;
pub mod error;
pub mod graph;
pub mod instances;
pub mod io;
pub mod setcover;
pub mod tree_approx;
pub mod tree_exact;
pub mod tree_fpt;

pub use detection::{
    dp_oracle, dp_oracle_with_ceiling, gamma_oracle, md_oracle, verify, DetectionPair,
    OracleResult, SetOracleResult, VerifyOutcome,
};
pub use error::{Error, Result};
pub use graph::{analyze_tree, Graph, TreeStructure, Vertex};
pub use instances::InstanceSpec;
pub use setcover::{approx_detection_pair, build_instance, greedy_set_cover};
pub use tree_approx::approx2_detection_pair;
pub use tree_exact::{min_dominating_set_tree, slater_resolving_set};
pub use tree_fpt::{fpt_decide, FptConfig, FptOutcome};
