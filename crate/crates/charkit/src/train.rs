//! Online backpropagation training.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mlp::{Activation, Mlp};

/// A labeled set of (input, target) pairs with uniform dimensions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingSet {
    inputs: Vec<Vec<f64>>,
    targets: Vec<Vec<f64>>,
    labels: Vec<u32>,
}

impl TrainingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, input: Vec<f64>, target: Vec<f64>, label: u32) -> Result<()> {
        if let Some(first) = self.inputs.first() {
            if input.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    context: "training input",
                    expected: first.len(),
                    got: input.len(),
                });
            }
        }
        if let Some(first) = self.targets.first() {
            if target.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    context: "training target",
                    expected: first.len(),
                    got: target.len(),
                });
            }
        }
        self.inputs.push(input);
        self.targets.push(target);
        self.labels.push(label);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i]
    }

    pub fn target(&self, i: usize) -> &[f64] {
        &self.targets[i]
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn input_len(&self) -> Option<usize> {
        self.inputs.first().map(Vec::len)
    }

    pub fn target_len(&self) -> Option<usize> {
        self.targets.first().map(Vec::len)
    }

    /// New set holding clones of the first `n` items (or all, if fewer).
    pub fn truncated(&self, n: usize) -> TrainingSet {
        let n = n.min(self.len());
        TrainingSet {
            inputs: self.inputs[..n].to_vec(),
            targets: self.targets[..n].to_vec(),
            labels: self.labels[..n].to_vec(),
        }
    }

    /// Check that targets fit the closed range of the activation.
    pub fn check_targets(&self, activation: Activation) -> Result<()> {
        let (lo, hi) = activation.range();
        for t in &self.targets {
            for &v in t {
                if !(v >= lo && v <= hi) {
                    return Err(Error::InvalidConfig(format!(
                        "target value {v} outside [{lo}, {hi}] for {} activation",
                        activation.name()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Settings for one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Learning rate.
    pub eta: f64,
    /// Hard cap on epochs.
    pub max_epochs: usize,
    /// Convergence threshold on the dataset mean squared error.
    pub epsilon: f64,
    /// Seed for the per-epoch sample shuffle.
    pub shuffle_seed: u64,
    /// Seed used by callers to build the initial weights; recorded here so a
    /// run is fully described by its config. `train` itself does not read it.
    pub weight_seed: u64,
}

impl TrainConfig {
    pub fn new(eta: f64, max_epochs: usize, epsilon: f64) -> Self {
        TrainConfig {
            eta,
            max_epochs,
            epsilon,
            shuffle_seed: 0,
            weight_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidConfig("max_epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Epochs performed; the epoch that observed convergence counts.
    pub steps: usize,
    pub converged: bool,
    /// Dataset MSE observed at the start of each performed epoch.
    pub mse_trajectory: Vec<f64>,
}

/// Dataset mean squared error `1/(|X| N_out) sum_x ||a_out(x) - y(x)||^2`.
pub fn mean_squared_error(net: &Mlp, data: &TrainingSet) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut scratch = Scratch::new(net);
    let mut sum = 0.0;
    for i in 0..data.len() {
        scratch.forward(net, data.input(i));
        let out = scratch.output();
        sum += out
            .iter()
            .zip(data.target(i))
            .map(|(a, y)| (a - y) * (a - y))
            .sum::<f64>();
    }
    Ok(sum / (data.len() as f64 * net.output_len() as f64))
}

/// Online backpropagation.
///
/// Each step (= epoch) first measures the dataset MSE with the weights at
/// hand, then performs one full pass of per-sample updates
/// `w <- w - eta * grad` in a seeded shuffle order. Training stops once the
/// measured MSE reaches `epsilon` — the measuring epoch still performs its
/// updates — or after `max_epochs` steps. A non-finite measured MSE aborts
/// with [`Error::Divergence`].
pub fn train(net: &mut Mlp, data: &TrainingSet, cfg: &TrainConfig) -> Result<TrainReport> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptySubset);
    }
    if data.input_len() != Some(net.input_len()) {
        return Err(Error::DimensionMismatch {
            context: "training set input width",
            expected: net.input_len(),
            got: data.input_len().unwrap_or(0),
        });
    }
    if data.target_len() != Some(net.output_len()) {
        return Err(Error::DimensionMismatch {
            context: "training set target width",
            expected: net.output_len(),
            got: data.target_len().unwrap_or(0),
        });
    }
    data.check_targets(net.activation())?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.shuffle_seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut scratch = Scratch::new(net);
    let mut trajectory = Vec::new();

    for epoch in 1..=cfg.max_epochs {
        let mse = mean_squared_error(net, data)?;
        if !mse.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        trajectory.push(mse);

        order.shuffle(&mut rng);
        for &i in &order {
            scratch.forward(net, data.input(i));
            scratch.backward(net, data.target(i));
            scratch.apply_update(net, cfg.eta);
        }

        if mse <= cfg.epsilon {
            return Ok(TrainReport {
                steps: epoch,
                converged: true,
                mse_trajectory: trajectory,
            });
        }
    }
    Ok(TrainReport {
        steps: cfg.max_epochs,
        converged: false,
        mse_trajectory: trajectory,
    })
}

/// Reusable forward/backward buffers so the per-sample hot loop is
/// allocation-free.
pub(crate) struct Scratch {
    activations: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl Scratch {
    pub(crate) fn new(net: &Mlp) -> Self {
        Scratch {
            activations: net.layer_sizes().iter().map(|&n| vec![0.0; n]).collect(),
            deltas: net.layer_sizes()[1..]
                .iter()
                .map(|&n| vec![0.0; n])
                .collect(),
        }
    }

    pub(crate) fn output(&self) -> &[f64] {
        self.activations.last().unwrap()
    }

    pub(crate) fn delta(&self, c: usize) -> &[f64] {
        &self.deltas[c]
    }

    pub(crate) fn forward(&mut self, net: &Mlp, input: &[f64]) {
        let act = net.activation();
        for (a, &x) in self.activations[0].iter_mut().zip(input) {
            *a = act.apply(x);
        }
        for c in 0..net.connection_count() {
            let conn = net.connection(c);
            let (prev_slice, rest) = self.activations.split_at_mut(c + 1);
            let prev = &prev_slice[c];
            let out = &mut rest[0];
            for i in 0..conn.rows() {
                let mut z = if conn.bias().is_empty() {
                    0.0
                } else {
                    conn.bias()[i]
                };
                for (w, a) in conn.row(i).iter().zip(prev.iter()) {
                    z += w * a;
                }
                out[i] = act.apply(z);
            }
        }
    }

    /// Fills the delta buffers; requires a preceding `forward`.
    pub(crate) fn backward(&mut self, net: &Mlp, target: &[f64]) {
        let act = net.activation();
        let n_conn = net.connection_count();
        let out = self.activations.last().unwrap();
        for ((d, &a), &y) in self.deltas[n_conn - 1].iter_mut().zip(out).zip(target) {
            *d = (a - y) * act.derivative_from_output(a);
        }
        for c in (0..n_conn - 1).rev() {
            let conn = net.connection(c + 1);
            let (lower, upper) = self.deltas.split_at_mut(c + 1);
            let dst = &mut lower[c];
            let src = &upper[0];
            dst.iter_mut().for_each(|d| *d = 0.0);
            for (i, &d) in src.iter().enumerate() {
                for (acc, w) in dst.iter_mut().zip(conn.row(i)) {
                    *acc += w * d;
                }
            }
            for (d, &a) in dst.iter_mut().zip(&self.activations[c + 1]) {
                *d *= act.derivative_from_output(a);
            }
        }
    }

    /// In-place gradient step `w -= eta * d_i * a_prev_j`, `b -= eta * d_i`.
    pub(crate) fn apply_update(&self, net: &mut Mlp, eta: f64) {
        for c in 0..net.connection_count() {
            let prev = &self.activations[c];
            let d = &self.deltas[c];
            let conn = net.connection_mut(c);
            let cols = conn.cols();
            let has_bias = !conn.bias().is_empty();
            for (i, &di) in d.iter().enumerate() {
                let scale = eta * di;
                if scale == 0.0 {
                    continue;
                }
                let row = &mut conn.weights_mut()[i * cols..(i + 1) * cols];
                for (w, &a) in row.iter_mut().zip(prev) {
                    *w -= scale * a;
                }
                if has_bias {
                    conn.bias_mut()[i] -= scale;
                }
            }
        }
    }
}
