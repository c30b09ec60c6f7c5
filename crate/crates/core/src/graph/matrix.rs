use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Dense real symmetric matrix.
///
/// Symmetry is checked on construction and preserved by every operation that
/// hands out a new matrix, so consumers may rely on `get(i, j) == get(j, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    inner: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Wraps a square matrix, rejecting anything that is not exactly symmetric.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyGraph);
        }
        for i in 0..m.nrows() {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::invalid(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { inner: m })
    }

    pub(crate) fn from_dmatrix_unchecked(m: DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { inner: m }
    }

    pub fn identity(order: usize) -> Self {
        Self {
            inner: DMatrix::identity(order, order),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.inner.row_iter().map(|r| r.sum()).collect()
    }

    /// `y = self * x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| (0..n).map(|j| self.inner[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Full spectrum in ascending order (dense symmetric QR).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.inner.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenpairs sorted by ascending eigenvalue; column `m` of the returned
    /// matrix is the unit eigenvector of the `m`-th eigenvalue.
    pub fn eigen_decomposition(&self) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.inner.clone());
        let mut order: Vec<usize> = (0..self.order()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&m| eig.eigenvalues[m]).collect();
        let vectors = DMatrix::from_fn(self.order(), self.order(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        (values, vectors)
    }
}
