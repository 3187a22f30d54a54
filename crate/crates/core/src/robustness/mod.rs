//! Spectral robustness measures and centrality rank stability.

mod centrality;
mod spectrum;

pub use centrality::{
    betweenness, centrality, centrality_sc, closeness, core_numbers, eigenvector, sc_scores,
    CentralityKind, CentralityVector,
};
pub use spectrum::{
    adjacency_eigenvalues, adjacency_matrix, check_sandwich, default_method, natural_connectivity,
    natural_connectivity_from, spectral_radius, spectral_radius_with, spectrum_report,
    SpectrumMethod, SpectrumReport, DEFAULT_TOLERANCE, DENSE_LIMIT,
};

/// Relative change `(after − before) / before`.
pub fn change_rate(before: f64, after: f64) -> f64 {
    (after - before) / before
}
