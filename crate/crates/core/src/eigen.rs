//! Dense symmetric eigensolver with a fixed output convention.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 4000;
const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues ascending; column k of `vectors` belongs to `values[k]` and
/// has its largest-magnitude component positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn symmetric_eigensolve(matrix: &DMatrix<f64>) -> Result<Eigensystem> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::InvalidInput(format!("matrix is {}x{}, not square", n, matrix.ncols())));
    }
    if n > MAX_DIMENSION {
        return Err(Error::InvalidInput(format!("dimension {n} exceeds {MAX_DIMENSION}")));
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let scale = matrix.amax();
    let asym = (matrix - matrix.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::InvalidInput(format!("matrix is not symmetric (max |A - A^T| = {asym:e})")));
    }
    if n == 0 {
        return Ok(Eigensystem { values: DVector::zeros(0), vectors: DMatrix::zeros(0, 0) });
    }

    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, MAX_SWEEPS).ok_or_else(|| {
        Error::NonConvergence { what: format!("symmetric eigensolve of dimension {n}"), iterations: MAX_SWEEPS }
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        let imax = col.iamax();
        if col[imax] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    Ok(Eigensystem { values, vectors })
}

impl Eigensystem {
    /// max_k ‖A v_k − λ_k v_k‖.
    pub fn max_residual(&self, matrix: &DMatrix<f64>) -> f64 {
        let av = matrix * &self.vectors;
        let mut worst = 0.0f64;
        for k in 0..self.values.len() {
            let r = av.column(k) - self.vectors.column(k) * self.values[k];
            worst = worst.max(r.norm());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let e = symmetric_eigensolve(&DMatrix::identity(5, 5)).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn two_by_two() {
        let (a, b) = (3.0, 0.7);
        let m = DMatrix::from_row_slice(2, 2, &[a, b, b, a]);
        let e = symmetric_eigensolve(&m).unwrap();
        assert!((e.values[0] - (a - b)).abs() < 1e-14);
        assert!((e.values[1] - (a + b)).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(symmetric_eigensolve(&m), Err(Error::InvalidInput(_))));
    }
}
