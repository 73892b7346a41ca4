//! Signed clique tilings: extremal constructions, exact discrepancy search,
//! and uniform-coverage clique templates.

pub mod bitset;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod io;
pub mod solver;
pub mod templates;

pub use error::{Error, Result};
pub use graph::{
    classify_clique, complete_multipartite, swap_identity_holds, Clique, CliqueKind, EdgeLabeling,
    Graph,
};
pub use solver::{
    discrepancy_extremes, enumerate_perfect_tilings, exists_perfect_tiling, sample_tiling,
    DiscrepancyExtremes, SearchMode, Tiling,
};
