//! Budgeted degree-preserving rewiring for raising network degree
//! correlation.
//!
//! A rewiring replaces two node-disjoint edges `(i,j),(k,l)` with `(i,k),(j,l)`
//! or `(i,l),(j,k)`, leaving every degree unchanged. Under such moves the
//! assortativity coefficient changes only through the s-metric `Σ d_u·d_v`,
//! so each candidate move carries an exact integer value and choosing at most
//! `k` compatible moves becomes a budgeted selection problem.
//!
//! - [`graph`]: simple undirected graphs, edge-list I/O, the swap primitive
//! - [`correlation`]: assortativity, s-metric, Spearman degree correlation
//! - [`candidates`]: the positive-value candidate set and conflicts
//! - [`strategies`]: GA, EDA, TA, PEA and the RA/PA baselines
//! - [`exact`]: branch-and-bound optimum for small instances
//! - [`robustness`]: spectral radius, natural connectivity, centralities, SC
//! - [`generators`]: seeded ER/WS/BA models
//! - [`experiment`]: sweeps and ratio studies written as CSV

pub mod candidates;
pub mod correlation;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod robustness;
pub mod strategies;

pub use candidates::{
    admissible, conflicts, enumerate_ep, ConflictGraph, EpStream, RewireCandidate,
};
pub use correlation::{
    assortativity, candidate_value, s_metric, spearman_degree_correlation, spearman_rank_corr,
    AssortativityParts, Orientation,
};
pub use error::{Error, Result};
pub use exact::{approximation_ratio, solve_exact, ExactSolution};
pub use graph::{parse_edge_list, EdgeRef, Graph, NodeId};
pub use strategies::{Budget, Method, RewirePlan, StrategyConfig};
