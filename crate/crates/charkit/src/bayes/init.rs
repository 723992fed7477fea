//! Weight initialization by iterated Bayesian fusion.
//!
//! Each connection's flattened weight vector is treated as an unknown
//! constant process. A fresh uniform sample plays the prior, further uniform
//! samples play measurements, and each iteration fuses the two with
//! precision weights:
//!
//! ```text
//! m_t   = Rnd(-h, h)                           (fresh for every weight)
//! R_ii  = 1/(N(k) N(k-1)) * sum_x ||d(k,x)||^2,   R_lm = off_diag
//! mean  = (Q^-1 + R^-1)^-1 (Q^-1 w_prior + R^-1 m_t)
//! Q     <- (Q^-1 + R^-1)^-1,   w_prior <- mean
//! ```
//!
//! where `d(k,x)` are the backpropagated delta errors of the destination
//! layer when the current measurement weights are installed. After a small
//! number of iterations (two by default) the posterior means become the
//! initial weights.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bayes::StructuredCov;
use crate::error::{Error, Result};
use crate::mlp::{sample_symmetric, Activation, Mlp};
use crate::train::{Scratch, TrainingSet};

/// Settings for [`bayes_initialize`].
#[derive(Debug, Clone, PartialEq)]
pub struct InitConfig {
    /// Half-width `h` of the sampling interval `(-h, h)`.
    pub half_width: f64,
    /// Fusion iterations `T` (at least 1).
    pub iterations: usize,
    /// Constant off-diagonal entry of the measurement covariance.
    pub off_diag: f64,
    /// Prior variance; `None` means `max(h^2/3, pd_floor)`, the variance of
    /// `Uniform(-h, h)` kept positive for degenerate `h`.
    pub prior_var: Option<f64>,
    /// Number of training inputs averaged by the delta-norm measurement.
    pub subset_size: usize,
    /// Floor keeping covariances positive definite when the measured noise
    /// collapses.
    pub pd_floor: f64,
    pub seed: u64,
}

impl InitConfig {
    pub fn new(half_width: f64, seed: u64) -> Self {
        InitConfig {
            half_width,
            iterations: 2,
            off_diag: 0.7,
            prior_var: None,
            subset_size: 200,
            pd_floor: 1e-6,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width >= 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "half_width must be finite and non-negative, got {}",
                self.half_width
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if !(self.pd_floor > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "pd_floor must be positive, got {}",
                self.pd_floor
            )));
        }
        if let Some(q0) = self.prior_var {
            if !(q0 > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "prior_var must be positive, got {q0}"
                )));
            }
        }
        if self.subset_size == 0 {
            return Err(Error::InvalidConfig("subset_size must be at least 1".into()));
        }
        Ok(())
    }

    /// Effective prior variance.
    pub fn prior_variance(&self) -> f64 {
        self.prior_var
            .unwrap_or((self.half_width * self.half_width / 3.0).max(self.pd_floor))
    }
}

/// Prior and measurement of one connection's flattened weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionState {
    pub prior_mean: Vec<f64>,
    pub prior_cov: StructuredCov,
    pub measurement: Vec<f64>,
    pub meas_cov: StructuredCov,
}

impl FusionState {
    pub fn validate(&self) -> Result<()> {
        let n = self.prior_cov.dim();
        for (len, context) in [
            (self.prior_mean.len(), "fusion prior mean"),
            (self.measurement.len(), "fusion measurement"),
        ] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: n,
                    got: len,
                });
            }
        }
        if self.meas_cov.dim() != n {
            return Err(Error::DimensionMismatch {
                context: "fusion measurement covariance",
                expected: n,
                got: self.meas_cov.dim(),
            });
        }
        Ok(())
    }
}

/// Precision-weighted fusion of prior and measurement:
/// mean `(Q^-1 + R^-1)^-1 (Q^-1 w + R^-1 m)`, covariance `(Q^-1 + R^-1)^-1`.
pub fn fuse(state: &FusionState) -> Result<(Vec<f64>, StructuredCov)> {
    state.validate()?;
    let q_inv = state.prior_cov.inverse()?;
    let r_inv = state.meas_cov.inverse()?;
    let posterior_cov = q_inv.add(&r_inv)?.inverse()?;
    let mut rhs = q_inv.matvec(&state.prior_mean)?;
    for (acc, m) in rhs.iter_mut().zip(r_inv.matvec(&state.measurement)?) {
        *acc += m;
    }
    let posterior_mean = posterior_cov.matvec(&rhs)?;
    Ok((posterior_mean, posterior_cov))
}

/// Average squared delta norm of connection `c`'s destination layer over the
/// given samples, normalized by the weight count:
/// `1/(N(k) N(k-1)) * sum_x ||d(k,x)||^2`.
pub fn measure_noise_variance(net: &Mlp, subset: &TrainingSet, c: usize) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if c >= net.connection_count() {
        return Err(Error::DimensionMismatch {
            context: "connection index",
            expected: net.connection_count(),
            got: c,
        });
    }
    if subset.input_len() != Some(net.input_len()) {
        return Err(Error::DimensionMismatch {
            context: "noise measurement input width",
            expected: net.input_len(),
            got: subset.input_len().unwrap_or(0),
        });
    }
    if subset.target_len() != Some(net.output_len()) {
        return Err(Error::DimensionMismatch {
            context: "noise measurement target width",
            expected: net.output_len(),
            got: subset.target_len().unwrap_or(0),
        });
    }
    let mut scratch = Scratch::new(net);
    let mut sum = 0.0;
    for i in 0..subset.len() {
        scratch.forward(net, subset.input(i));
        scratch.backward(net, subset.target(i));
        sum += scratch.delta(c).iter().map(|d| d * d).sum::<f64>();
    }
    let conn = net.connection(c);
    Ok(sum / (conn.rows() * conn.cols()) as f64)
}

/// Build an initialized network by running the fusion loop independently for
/// every connection.
///
/// Deterministic given the seed. Draw order from one ChaCha8 stream seeded
/// with `cfg.seed`: the prior means connection by connection (row-major),
/// then per iteration all connections' measurements (same order), then —
/// when bias is enabled — the bias vectors, sampled uniformly like plain
/// random initialization since bias units sit outside the fused weight
/// vectors. The delta measurement installs the current measurements of all
/// connections into a bias-free scratch net before each backward pass, and
/// the measured diagonal is floored at `off_diag + pd_floor` to keep the
/// measurement covariance positive definite.
pub fn bayes_initialize(
    layer_sizes: &[usize],
    activation: Activation,
    bias: bool,
    data: &TrainingSet,
    cfg: &InitConfig,
) -> Result<Mlp> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptySubset);
    }
    let subset = data.truncated(cfg.subset_size);
    let mut scratch_net = Mlp::zeros(layer_sizes, activation, false)?;
    if subset.input_len() != Some(scratch_net.input_len()) {
        return Err(Error::DimensionMismatch {
            context: "initialization data input width",
            expected: scratch_net.input_len(),
            got: subset.input_len().unwrap_or(0),
        });
    }
    if subset.target_len() != Some(scratch_net.output_len()) {
        return Err(Error::DimensionMismatch {
            context: "initialization data target width",
            expected: scratch_net.output_len(),
            got: subset.target_len().unwrap_or(0),
        });
    }

    let h = cfg.half_width;
    let n_conn = scratch_net.connection_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut means: Vec<Vec<f64>> = Vec::with_capacity(n_conn);
    let mut covs: Vec<StructuredCov> = Vec::with_capacity(n_conn);
    for c in 0..n_conn {
        let conn = scratch_net.connection(c);
        let dim = conn.rows() * conn.cols();
        means.push((0..dim).map(|_| sample_symmetric(&mut rng, h)).collect());
        covs.push(StructuredCov::isotropic(dim, cfg.prior_variance())?);
    }

    for _ in 0..cfg.iterations {
        let measurements: Vec<Vec<f64>> = (0..n_conn)
            .map(|c| {
                let conn = scratch_net.connection(c);
                (0..conn.rows() * conn.cols())
                    .map(|_| sample_symmetric(&mut rng, h))
                    .collect()
            })
            .collect();
        for (c, m) in measurements.iter().enumerate() {
            scratch_net.connection_mut(c).weights_mut().copy_from_slice(m);
        }
        for c in 0..n_conn {
            let r_diag = measure_noise_variance(&scratch_net, &subset, c)?
                .max(cfg.off_diag + cfg.pd_floor);
            let dim = means[c].len();
            let state = FusionState {
                prior_mean: std::mem::take(&mut means[c]),
                prior_cov: covs[c],
                measurement: measurements[c].clone(),
                meas_cov: StructuredCov::from_diag_off_diag(dim, r_diag, cfg.off_diag)?,
            };
            let (mean, cov) = fuse(&state)?;
            means[c] = mean;
            covs[c] = cov;
        }
    }

    let mut net = Mlp::zeros(layer_sizes, activation, bias)?;
    for (c, mean) in means.iter().enumerate() {
        net.connection_mut(c).weights_mut().copy_from_slice(mean);
    }
    if bias {
        for c in 0..n_conn {
            for b in net.connection_mut(c).bias_mut() {
                *b = sample_symmetric(&mut rng, h);
            }
        }
    }
    net.validate()?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_data() -> TrainingSet {
        let mut data = TrainingSet::new();
        data.push(vec![0.6, -0.4], vec![0.5], 0).unwrap();
        data.push(vec![-0.2, 0.9], vec![-0.5], 1).unwrap();
        data.push(vec![0.1, 0.3], vec![0.0], 0).unwrap();
        data
    }

    #[test]
    fn fuse_with_equal_covariances_averages() {
        let cov = StructuredCov::new(3, 0.8, 0.1).unwrap();
        let state = FusionState {
            prior_mean: vec![1.0, -2.0, 0.5],
            prior_cov: cov,
            measurement: vec![0.0, 2.0, 1.5],
            meas_cov: cov,
        };
        let (mean, post) = fuse(&state).unwrap();
        for (got, want) in mean.iter().zip([0.5, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        // covariance is halved in every eigenvalue
        assert!((post.alpha() - 0.4).abs() < 1e-12);
        assert!((post.beta() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn fuse_follows_the_sharper_prior() {
        let state = FusionState {
            prior_mean: vec![1.0, 1.0],
            prior_cov: StructuredCov::isotropic(2, 1e-9).unwrap(),
            measurement: vec![-1.0, 3.0],
            meas_cov: StructuredCov::isotropic(2, 1.0).unwrap(),
        };
        let (mean, _) = fuse(&state).unwrap();
        for m in mean {
            assert!((m - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn fuse_rejects_mismatched_lengths() {
        let state = FusionState {
            prior_mean: vec![1.0, 1.0, 1.0],
            prior_cov: StructuredCov::identity(2),
            measurement: vec![0.0, 0.0],
            meas_cov: StructuredCov::identity(2),
        };
        assert!(fuse(&state).is_err());
    }

    #[test]
    fn zero_residual_measures_zero_noise() {
        // zero tanh net and zero targets: a_out = y, deltas vanish
        let net = Mlp::zeros(&[2, 2, 1], Activation::Tanh, false).unwrap();
        let mut data = TrainingSet::new();
        data.push(vec![0.7, -0.1], vec![0.0], 0).unwrap();
        assert_eq!(measure_noise_variance(&net, &data, 0).unwrap(), 0.0);
        assert_eq!(measure_noise_variance(&net, &data, 1).unwrap(), 0.0);
    }

    #[test]
    fn noise_measurement_matches_hand_computed_deltas() {
        // 2-2-1 tanh net with fixed weights and one sample
        let net = Mlp::from_weights(
            &[2, 2, 1],
            Activation::Tanh,
            false,
            &[vec![0.3, -0.2, 0.1, 0.4], vec![0.5, -0.6]],
        )
        .unwrap();
        let x = [0.8, -0.3];
        let y = [0.2];
        let mut data = TrainingSet::new();
        data.push(x.to_vec(), y.to_vec(), 0).unwrap();

        let a1: Vec<f64> = x.iter().map(|v| v.tanh()).collect();
        let z2 = [
            0.3 * a1[0] - 0.2 * a1[1],
            0.1 * a1[0] + 0.4 * a1[1],
        ];
        let a2: Vec<f64> = z2.iter().map(|v| v.tanh()).collect();
        let a3 = (0.5 * a2[0] - 0.6 * a2[1]).tanh();
        let d3 = (a3 - y[0]) * (1.0 - a3 * a3);
        let d2 = [
            0.5 * d3 * (1.0 - a2[0] * a2[0]),
            -0.6 * d3 * (1.0 - a2[1] * a2[1]),
        ];

        let want_out = d3 * d3 / 2.0; // N(3) * N(2) = 1 * 2
        let got_out = measure_noise_variance(&net, &data, 1).unwrap();
        assert!((got_out - want_out).abs() < 1e-14);

        let want_hidden = (d2[0] * d2[0] + d2[1] * d2[1]) / 4.0;
        let got_hidden = measure_noise_variance(&net, &data, 0).unwrap();
        assert!((got_hidden - want_hidden).abs() < 1e-14);
    }

    #[test]
    fn noise_measurement_rejects_empty_subset() {
        let net = Mlp::zeros(&[2, 2, 1], Activation::Tanh, false).unwrap();
        assert!(matches!(
            measure_noise_variance(&net, &TrainingSet::new(), 0),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn degenerate_interval_gives_all_zero_weights() {
        let cfg = InitConfig::new(0.0, 3);
        let net = bayes_initialize(&[2, 3, 1], Activation::Tanh, true, &small_data(), &cfg)
            .unwrap();
        for conn in net.connections() {
            assert!(conn.weights().iter().all(|&w| w == 0.0));
            assert!(conn.bias().iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn initialization_is_seed_deterministic() {
        let cfg = InitConfig::new(1.0, 17);
        let a = bayes_initialize(&[2, 3, 1], Activation::Tanh, true, &small_data(), &cfg)
            .unwrap();
        let b = bayes_initialize(&[2, 3, 1], Activation::Tanh, true, &small_data(), &cfg)
            .unwrap();
        assert_eq!(a, b);

        let mut other = cfg.clone();
        other.seed = 18;
        let c = bayes_initialize(&[2, 3, 1], Activation::Tanh, true, &small_data(), &other)
            .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_iteration_diagonal_weights_stay_inside_interval() {
        // With diagonal covariances the posterior mean is a convex
        // combination of prior and measurement, both inside (-h, h).
        let mut cfg = InitConfig::new(0.9, 5);
        cfg.iterations = 1;
        cfg.off_diag = 0.0;
        let net = bayes_initialize(&[3, 4, 2], Activation::Tanh, false, &small_data_3in(), &cfg)
            .unwrap();
        for conn in net.connections() {
            assert!(conn.weights().iter().all(|w| w.abs() <= 0.9));
        }
    }

    fn small_data_3in() -> TrainingSet {
        let mut data = TrainingSet::new();
        data.push(vec![0.6, -0.4, 0.2], vec![0.5, -0.1], 0).unwrap();
        data.push(vec![-0.2, 0.9, 0.0], vec![-0.5, 0.3], 1).unwrap();
        data
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = InitConfig::new(1.0, 0);
        cfg.iterations = 0;
        assert!(bayes_initialize(&[2, 2, 1], Activation::Tanh, true, &small_data(), &cfg).is_err());

        let cfg = InitConfig::new(f64::NAN, 0);
        assert!(cfg.validate().is_err());
    }
}
