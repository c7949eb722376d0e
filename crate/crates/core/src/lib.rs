//! Heterogeneous network analysis on N-mode matrices.
//!
//! Networks mixing several entity types (people and events, teams and
//! conferences, users and groups) are modelled as layered graphs and lowered
//! to a single square adjacency matrix blocked by layer. On top of that
//! representation the crate provides:
//!
//! - pairwise Bonacich centrality, exactly (linear solve) or via a truncated
//!   path series, with the spectral-radius admissibility bound on alpha
//!   ([`centrality`]);
//! - community detection by maximizing a path-count generalization of
//!   modularity with recursive leading-eigenvector bisection ([`community`]);
//! - within-community node ranking across an alpha sweep, classifying
//!   community leaders and cross-community bridges ([`ranking`]);
//! - partition scoring against ground truth with normalized mutual
//!   information ([`evaluation`]);
//! - dataset loading/saving and bundled reference data ([`io`]).
//!
//! ```
//! use hetnet::prelude::*;
//!
//! let graph = hetnet::io::load_builtin("southern_women").unwrap();
//! let matrix = build_nmode(&graph).unwrap();
//! let result = detect_communities_with(
//!     &matrix,
//!     0.16,
//!     1.0,
//!     DetectOptions { method: CentralityMethod::Series { terms: 3 }, rounding: false },
//! )
//! .unwrap();
//! assert_eq!(result.partition.community_count(), 2);
//! ```

pub mod centrality;
pub mod community;
mod eigen;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod ranking;

pub use error::{Error, ErrorKind, Result};

pub mod prelude {
    pub use crate::centrality::{
        bonacich_exact, bonacich_series, max_alpha, node_scores, spectral_radius,
        spectral_radius_with, CentralityMatrix, CentralityParams, MaxAlpha, SpectralInfo,
    };
    pub use crate::community::{
        build_null_model, detect_communities, detect_communities_with, modularity,
        modularity_matrix, round_centrality, spectral_bisect, Bisection, CentralityMethod,
        CommunityResult, DetectOptions, NullModel, Partition, RoundedCentrality,
    };
    pub use crate::error::{Error, ErrorKind, Result};
    pub use crate::evaluation::{confusion, nmi, ConfusionCounts, Labeling};
    pub use crate::graph::{
        apply_layer_weights, build_nmode, project_unipartite_binary, project_unipartite_weighted,
        Layer, LayerWeights, LayeredGraph, NModeMatrix, NodeRef,
    };
    pub use crate::ranking::{
        alpha_sweep, alpha_sweep_within, classify_roles, rank_within_groups, RankTable, Role,
        RoleLabel, ScoreTable,
    };
}
