//! Dense symmetric eigenproblems (thin wrapper over faer) and small helpers.

use faer::{Mat, Side};
use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Eigenvalues and eigenvectors of a real symmetric matrix, ascending.
pub struct Eigh {
    pub values: Array1<f64>,
    /// Column k is the eigenvector of `values[k]`.
    pub vectors: Array2<f64>,
}

pub fn eigh(a: &Array2<f64>) -> Result<Eigh> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidInput("eigh: matrix not square".into()));
    }
    let m = Mat::from_fn(n, n, |i, j| a[[i, j]]);
    let evd = m.selfadjoint_eigendecomposition(Side::Lower);
    let mut values = Array1::zeros(n);
    let mut vectors = Array2::zeros((n, n));
    let s = evd.s();
    let u = evd.u();
    for k in 0..n {
        values[k] = s.column_vector()[k];
        for i in 0..n {
            vectors[[i, k]] = u[(i, k)];
        }
    }
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    Ok(Eigh { values, vectors })
}

pub fn eigvalsh(a: &Array2<f64>) -> Result<Array1<f64>> {
    let n = a.nrows();
    let m = Mat::from_fn(n, n, |i, j| a[[i, j]]);
    let vals = m.selfadjoint_eigenvalues(Side::Lower);
    if !vals.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    Ok(Array1::from_vec(vals))
}

/// Solve the dense linear system `a x = b` in place via faer's partial-pivot LU.
pub fn solve(a: &Array2<f64>, b: &Array1<f64>) -> Result<Array1<f64>> {
    use faer::prelude::SpSolver;
    let n = a.nrows();
    let m = Mat::from_fn(n, n, |i, j| a[[i, j]]);
    let rhs = Mat::from_fn(n, 1, |i, _| b[i]);
    let lu = m.partial_piv_lu();
    let x = lu.solve(&rhs);
    let out = Array1::from_iter((0..n).map(|i| x[(i, 0)]));
    if !out.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical("linear solve produced non-finite values".into()));
    }
    Ok(out)
}
