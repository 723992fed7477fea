//! Small dense linear algebra for checking the two-scalar covariance
//! arithmetic: explicit `n x n` matrices, Gauss-Jordan inversion, and the
//! textbook precision-weighted fusion.

use charkit::bayes::StructuredCov;

pub type DenseMatrix = Vec<Vec<f64>>;

/// Materialize `alpha I + beta J` as a dense matrix.
pub fn dense_from_scalars(dim: usize, alpha: f64, beta: f64) -> DenseMatrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { alpha + beta } else { beta })
                .collect()
        })
        .collect()
}

pub fn dense_from_structured(m: &StructuredCov) -> DenseMatrix {
    dense_from_scalars(m.dim(), m.alpha(), m.beta())
}

pub fn dense_matvec(m: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dense_add(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Gauss-Jordan elimination with partial pivoting; panics on a singular
/// matrix (the tested inputs are positive definite by construction).
pub fn dense_inverse(m: &DenseMatrix) -> DenseMatrix {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext = row.clone();
            ext.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            ext
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        assert!(a[pivot][col].abs() > 1e-300, "singular matrix");
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let factor = a[row][col];
                if factor != 0.0 {
                    let (src, dst) = if row < col {
                        let (lo, hi) = a.split_at_mut(col);
                        (&hi[0], &mut lo[row])
                    } else {
                        let (lo, hi) = a.split_at_mut(row);
                        (&lo[col], &mut hi[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d -= factor * s;
                    }
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Textbook Bayesian fusion on dense matrices:
/// mean `(Q^-1 + R^-1)^-1 (Q^-1 w + R^-1 m)`, covariance `(Q^-1 + R^-1)^-1`.
pub fn dense_fusion(
    prior_mean: &[f64],
    prior_cov: &DenseMatrix,
    measurement: &[f64],
    meas_cov: &DenseMatrix,
) -> (Vec<f64>, DenseMatrix) {
    let q_inv = dense_inverse(prior_cov);
    let r_inv = dense_inverse(meas_cov);
    let posterior_cov = dense_inverse(&dense_add(&q_inv, &r_inv));
    let mut rhs = dense_matvec(&q_inv, prior_mean);
    for (acc, v) in rhs.iter_mut().zip(dense_matvec(&r_inv, measurement)) {
        *acc += v;
    }
    let mean = dense_matvec(&posterior_cov, &rhs);
    (mean, posterior_cov)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_matrix(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| max_abs_diff(ra, rb))
        .fold(0.0, f64::max)
}
