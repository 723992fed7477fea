//! Reference oracles for the charkit test suites.
//!
//! Everything here recomputes results along an independent route: the
//! network math is written straight from the formulas, the covariance
//! algebra runs on explicit dense matrices, and the fuzzy scorer is a
//! second full pipeline with a much finer centroid grid. Test code compares
//! the library against these at tight tolerances.

pub mod bayes_loop;
pub mod dense;
pub mod mamdani;
pub mod naive_mlp;

pub use bayes_loop::dense_bayes_initialize;
pub use dense::{
    dense_add, dense_from_scalars, dense_from_structured, dense_fusion, dense_inverse,
    dense_matvec, max_abs_diff, max_abs_diff_matrix, DenseMatrix,
};
pub use mamdani::{
    brute_infer, brute_score_columns, documented_default_partitions, BrutePartitions,
    BRUTE_GRID_POINTS,
};
pub use naive_mlp::{
    fd_bias_gradient, fd_weight_gradient, naive_deltas, naive_forward, naive_loss, rel_error,
};
