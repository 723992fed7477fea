//! Two-scalar covariance matrices `alpha * I + beta * J` (`J` all ones).
//!
//! The class covers the covariances the initializer needs: a constant
//! diagonal with one constant off-diagonal value. It is closed under
//! addition, and under inversion by the rank-one (Sherman-Morrison) identity
//! `(alpha I + beta J)^-1 = (1/alpha) I - beta / (alpha (alpha + n beta)) J`,
//! so the Bayesian fusion never touches an `n x n` matrix.

use crate::error::{Error, Result};

/// Symmetric positive definite matrix `alpha * I + beta * J` in two-scalar
/// form. Eigenvalues are `alpha` (multiplicity `n - 1`) and `alpha + n beta`
/// (ones direction); positive definiteness is `alpha > 0` and
/// `alpha + n beta > 0`, enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuredCov {
    dim: usize,
    alpha: f64,
    beta: f64,
}

impl StructuredCov {
    pub fn new(dim: usize, alpha: f64, beta: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("covariance dim must be positive".into()));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::NotPositiveDefinite { alpha, beta, dim });
        }
        if !(alpha > 0.0 && alpha + dim as f64 * beta > 0.0) {
            return Err(Error::NotPositiveDefinite { alpha, beta, dim });
        }
        Ok(StructuredCov { dim, alpha, beta })
    }

    pub fn identity(dim: usize) -> Self {
        StructuredCov {
            dim,
            alpha: 1.0,
            beta: 0.0,
        }
    }

    /// Diagonal matrix `variance * I`.
    pub fn isotropic(dim: usize, variance: f64) -> Result<Self> {
        Self::new(dim, variance, 0.0)
    }

    /// Matrix with diagonal entries `diag` and all off-diagonal entries
    /// `off`: `alpha = diag - off`, `beta = off`.
    pub fn from_diag_off_diag(dim: usize, diag: f64, off: f64) -> Result<Self> {
        Self::new(dim, diag - off, off)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Value of every diagonal entry.
    pub fn diag(&self) -> f64 {
        self.alpha + self.beta
    }

    /// `(bulk, ones)` eigenvalues: `alpha` with multiplicity `n - 1` and
    /// `alpha + n beta` on the all-ones direction.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.alpha, self.alpha + self.dim as f64 * self.beta)
    }

    /// `M v = alpha v + beta * sum(v) * ones`, O(n).
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "structured matvec",
                expected: self.dim,
                got: v.len(),
            });
        }
        let shift = self.beta * v.iter().sum::<f64>();
        Ok(v.iter().map(|&x| self.alpha * x + shift).collect())
    }

    /// Closed-form inverse; stays in the class and stays positive definite.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim as f64;
        let alpha_inv = 1.0 / self.alpha;
        let beta_inv = -self.beta / (self.alpha * (self.alpha + n * self.beta));
        Self::new(self.dim, alpha_inv, beta_inv)
    }

    /// Componentwise sum; the class is closed under addition.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                context: "structured add",
                expected: self.dim,
                got: other.dim,
            });
        }
        Self::new(self.dim, self.alpha + other.alpha, self.beta + other.beta)
    }

    /// Materialize the dense matrix (intended for display and debugging).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| if i == j { self.diag() } else { self.beta })
                    .collect()
            })
            .collect()
    }
}
