//! Numerical and exact spectral data of symmetric integer matrices.

mod charpoly;
mod eigen;
mod rank;
mod roots;

pub use charpoly::{
    characteristic_polynomial, characteristic_polynomial_with_cap, CharPoly,
    DEFAULT_CHARPOLY_CAP,
};
pub use eigen::{symmetric_eigen, EigenDecomposition, EigenMethod};
pub use rank::{exact_zero_multiplicity, integer_rank};
pub use roots::real_roots_with_multiplicity;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::level_matrix::{IntMatrix, LevelMatrix};

/// Default relative clustering tolerance, scaled by `max(1, rho)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// A group of numerically equal eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues sorted descending plus derived quantities.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub rho: f64,
    pub energy: f64,
    /// Unit eigenvector of the top eigenvalue, sign-normalized so its
    /// largest-magnitude entry is positive.
    #[serde(skip)]
    pub top_vector: Option<Vec<f64>>,
    #[serde(skip)]
    pub tol: f64,
}

impl Spectrum {
    pub fn from_decomposition(dec: EigenDecomposition, tol: f64) -> Self {
        let values = dec.values;
        let rho = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let energy = values.iter().map(|v| v.abs()).sum();
        let top_vector = dec.vectors.into_iter().next().map(|mut v| {
            let pivot = v
                .iter()
                .copied()
                .max_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap_or(1.0);
            if pivot < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        });
        let clusters = cluster_values(&values, tol * rho.max(1.0));
        Spectrum {
            values,
            clusters,
            rho,
            energy,
            top_vector,
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Absolute clustering window, `tol * max(1, rho)`.
    pub fn window(&self) -> f64 {
        self.tol * self.rho.max(1.0)
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues above the clustering window.
    pub fn positive_count(&self) -> usize {
        let w = self.window();
        self.values.iter().filter(|&&v| v > w).count()
    }

    pub fn negative_count(&self) -> usize {
        let w = self.window();
        self.values.iter().filter(|&&v| v < -w).count()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Strictly positive Perron vector, when the top eigenvector is one.
    pub fn perron(&self) -> Option<&[f64]> {
        self.top_vector
            .as_deref()
            .filter(|v| v.len() >= 2 && v.iter().all(|&x| x > 0.0))
    }
}

fn cluster_values(sorted_desc: &[f64], window: f64) -> Vec<Cluster> {
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut prev: Option<f64> = None;
    for &v in sorted_desc {
        match (prev, clusters.last_mut()) {
            (Some(p), Some(last)) if p - v <= window => {
                last.0 += v;
                last.1 += 1;
            }
            _ => clusters.push((v, 1)),
        }
        prev = Some(v);
    }
    clusters
        .into_iter()
        .map(|(sum, m)| Cluster {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Spectrum of a symmetric integer matrix using the default solver.
pub fn symmetric_eigenvalues(matrix: &IntMatrix, tol: f64) -> Result<Spectrum> {
    symmetric_eigenvalues_with(matrix, tol, EigenMethod::default())
}

pub fn symmetric_eigenvalues_with(
    matrix: &IntMatrix,
    tol: f64,
    method: EigenMethod,
) -> Result<Spectrum> {
    let dec = symmetric_eigen(&matrix.to_f64(), matrix.dim(), method)?;
    Ok(Spectrum::from_decomposition(dec, tol))
}

/// Spectral radius and positive unit Perron vector of a level matrix.
pub fn perron_vector(matrix: &LevelMatrix) -> Result<(f64, Vec<f64>)> {
    if matrix.dim() < 2 {
        return Err(Error::TooSmall(
            "the Perron vector needs at least two vertices".into(),
        ));
    }
    let spectrum = symmetric_eigenvalues(matrix.entries(), DEFAULT_CLUSTER_TOL)?;
    perron_from_spectrum(&spectrum)
}

pub fn perron_from_spectrum(spectrum: &Spectrum) -> Result<(f64, Vec<f64>)> {
    let v = spectrum
        .top_vector
        .as_ref()
        .filter(|v| v.len() >= 2)
        .ok_or_else(|| Error::TooSmall("the Perron vector needs at least two vertices".into()))?;
    let min_entry = v.iter().copied().fold(f64::INFINITY, f64::min);
    if min_entry <= 0.0 {
        return Err(Error::NotPositive { min_entry });
    }
    Ok((spectrum.largest(), v.clone()))
}

/// Level energy: the sum of absolute eigenvalues.
pub fn level_energy(spectrum: &Spectrum) -> f64 {
    spectrum.energy
}

/// Number of eigenvalues within `tol * max(1, rho)` of `lambda`.
///
/// Fails with [`Error::AmbiguousCluster`] when the window cuts through a
/// cluster or touches more than one.
pub fn clustered_multiplicity(spectrum: &Spectrum, lambda: f64, tol: f64) -> Result<usize> {
    let window = tol * spectrum.rho.max(1.0);
    let inside = spectrum
        .values
        .iter()
        .filter(|&&v| (v - lambda).abs() <= window)
        .count();
    let near = spectrum
        .values
        .iter()
        .filter(|&&v| (v - lambda).abs() <= 2.0 * window)
        .count();
    if near != inside {
        return Err(Error::AmbiguousCluster { lambda, tol });
    }
    Ok(inside)
}
