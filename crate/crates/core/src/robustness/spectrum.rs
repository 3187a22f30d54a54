use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Above this node count the spectral radius is found iteratively.
pub const DENSE_LIMIT: usize = 2000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumMethod {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub spectral_radius: f64,
    pub natural_connectivity: f64,
    pub method: SpectrumMethod,
    /// `‖A x − λ₁ x‖` for the returned dominant pair.
    pub residual: f64,
}

pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for e in g.edges() {
        a[(e.u, e.v)] = 1.0;
        a[(e.v, e.u)] = 1.0;
    }
    a
}

/// All adjacency eigenvalues, ascending.
pub fn adjacency_eigenvalues(g: &Graph) -> Vec<f64> {
    let mut eig: Vec<f64> = adjacency_matrix(g)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    eig.sort_by(f64::total_cmp);
    eig
}

fn multiply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, slot) in out.iter_mut().enumerate() {
        *slot = g.neighbors(v).iter().map(|&w| x[w]).sum();
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Dominant eigenpair by power iteration on `A + I`.
///
/// The shift keeps the iteration from oscillating on bipartite graphs,
/// where `λ₁` and `−λ₁` are both eigenvalues.
fn power_iteration(g: &Graph, tol: f64) -> Result<(f64, f64)> {
    let n = g.node_count();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        multiply(g, &x, &mut ax);
        let lambda: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, yi)| (yi - lambda * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            return Ok((lambda, residual));
        }
        for (xi, yi) in x.iter_mut().zip(&ax) {
            *xi += yi;
        }
        let s = norm(&x);
        x.iter_mut().for_each(|v| *v /= s);
    }
    Err(Error::Convergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

fn dense_dominant(g: &Graph) -> (f64, f64) {
    let a = adjacency_matrix(g);
    let eig = SymmetricEigen::new(a.clone());
    let (idx, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let v: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
    let residual = (&a * &v - &v * lambda).norm();
    (lambda, residual)
}

/// Largest adjacency eigenvalue and the residual of its eigenpair.
pub fn spectral_radius_with(g: &Graph, tol: f64, method: SpectrumMethod) -> Result<(f64, f64)> {
    if g.node_count() == 0 {
        return Err(Error::UndefinedMetric("spectrum of an empty graph".into()));
    }
    if g.edge_count() == 0 {
        return Ok((0.0, 0.0));
    }
    match method {
        SpectrumMethod::Dense => Ok(dense_dominant(g)),
        SpectrumMethod::Iterative => power_iteration(g, tol),
    }
}

pub fn default_method(g: &Graph) -> SpectrumMethod {
    if g.node_count() <= DENSE_LIMIT {
        SpectrumMethod::Dense
    } else {
        SpectrumMethod::Iterative
    }
}

pub fn spectral_radius(g: &Graph, tol: f64) -> Result<f64> {
    spectral_radius_with(g, tol, default_method(g)).map(|(l, _)| l)
}

/// `ln((1/n) Σ e^{λᵢ})`, evaluated as `λmax + ln((1/n) Σ e^{λᵢ − λmax})`.
pub fn natural_connectivity_from(eigenvalues: &[f64]) -> f64 {
    let top = eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let n = eigenvalues.len() as f64;
    let mean = eigenvalues.iter().map(|l| (l - top).exp()).sum::<f64>() / n;
    top + mean.ln()
}

pub fn natural_connectivity(g: &Graph) -> Result<f64> {
    if g.node_count() == 0 {
        return Err(Error::UndefinedMetric("spectrum of an empty graph".into()));
    }
    let eig = adjacency_eigenvalues(g);
    if eig.iter().any(|l| !l.is_finite()) {
        return Err(Error::UndefinedMetric("eigendecomposition failed".into()));
    }
    Ok(natural_connectivity_from(&eig))
}

/// Checks `λ₁ − ln n ≤ λ̄ ≤ λ₁`, which any correct spectrum satisfies.
pub fn check_sandwich(spectral_radius: f64, natural_connectivity: f64, n: usize) -> Result<()> {
    let slack = 1e-9 * (1.0 + spectral_radius.abs());
    let low = spectral_radius - (n as f64).ln() - slack;
    if natural_connectivity > spectral_radius + slack || natural_connectivity < low {
        return Err(Error::UndefinedMetric(format!(
            "natural connectivity {natural_connectivity} inconsistent with spectral radius {spectral_radius}"
        )));
    }
    Ok(())
}

pub fn spectrum_report(g: &Graph, tol: f64) -> Result<SpectrumReport> {
    let method = default_method(g);
    let (spectral_radius, residual) = spectral_radius_with(g, tol, method)?;
    let natural_connectivity = natural_connectivity(g)?;
    check_sandwich(spectral_radius, natural_connectivity, g.node_count())?;
    Ok(SpectrumReport {
        spectral_radius,
        natural_connectivity,
        method,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn closed_forms() {
        for method in [SpectrumMethod::Dense, SpectrumMethod::Iterative] {
            let r = |g: &Graph| spectral_radius_with(g, 1e-12, method).unwrap().0;
            assert!((r(&complete(4)) - 3.0).abs() < 1e-9);
            assert!((r(&star(4)) - 2.0).abs() < 1e-9);
            assert!((r(&cycle(4)) - 2.0).abs() < 1e-9);
        }
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!((natural_connectivity(&k2).unwrap() - 1f64.cosh().ln()).abs() < 1e-12);
        let e = std::f64::consts::E;
        let k3 = ((e * e + 2.0 / e) / 3.0).ln();
        assert!((natural_connectivity(&complete(3)).unwrap() - k3).abs() < 1e-12);
        assert_eq!(natural_connectivity(&Graph::new(4)).unwrap(), 0.0);
    }

    #[test]
    fn empty_graph_errors() {
        assert!(spectral_radius(&Graph::new(0), 1e-9).is_err());
        assert!(natural_connectivity(&Graph::new(0)).is_err());
        assert_eq!(spectral_radius(&Graph::new(3), 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn report_is_consistent() {
        let g = crate::generators::barabasi_albert(60, 2, 3).unwrap();
        let rep = spectrum_report(&g, 1e-10).unwrap();
        assert!(rep.residual < 1e-8);
        let n = g.node_count() as f64;
        assert!(rep.natural_connectivity <= rep.spectral_radius + 1e-12);
        assert!(rep.natural_connectivity >= rep.spectral_radius - n.ln() - 1e-12);
        assert!(check_sandwich(2.0, 2.5, 10).is_err());
        assert!(check_sandwich(2.0, -1.0, 10).is_err());
    }
}
