use crate::error::Result;
use crate::level_matrix::LevelMatrix;
use crate::spectra::{symmetric_eigenvalues_with, EigenMethod, Spectrum, DEFAULT_CLUSTER_TOL};
use crate::tree::RootedTree;

/// A tree with its level matrix and spectrum computed once, shared by every
/// bound and verification check.
#[derive(Debug, Clone)]
pub struct AnalyzedTree {
    pub tree: RootedTree,
    pub matrix: LevelMatrix,
    pub spectrum: Spectrum,
}

impl AnalyzedTree {
    pub fn new(tree: RootedTree) -> Result<Self> {
        Self::with_options(tree, DEFAULT_CLUSTER_TOL, EigenMethod::default())
    }

    pub fn with_options(tree: RootedTree, tol: f64, method: EigenMethod) -> Result<Self> {
        let matrix = LevelMatrix::new(&tree);
        let spectrum = symmetric_eigenvalues_with(matrix.entries(), tol, method)?;
        Ok(AnalyzedTree {
            tree,
            matrix,
            spectrum,
        })
    }

    pub fn n(&self) -> usize {
        self.tree.len()
    }

    pub fn rho(&self) -> f64 {
        self.spectrum.rho
    }

    pub fn max_level(&self) -> usize {
        self.matrix.max_level()
    }
}
