//! Multilayer perceptron with the per-layer quantities online backpropagation
//! needs: activations, delta errors and weight gradients.
//!
//! Layers are numbered `0..layer_count()`, with layer 0 the input layer.
//! *Connection* `c` is the weight matrix feeding layer `c + 1` from layer `c`,
//! stored row-major with one row per destination neuron. The input layer
//! applies the activation function directly to the raw input, so every layer
//! (including layer 0) produces values in the activation's range.

use std::io::{Read, Write};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Neuron activation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Sigmoid,
    Tanh,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation value `a = f(z)`:
    /// `a (1 - a)` for the sigmoid, `1 - a^2` for tanh.
    pub fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Tanh => 1.0 - a * a,
        }
    }

    /// Closed output range of the activation.
    pub fn range(self) -> (f64, f64) {
        match self {
            Activation::Sigmoid => (0.0, 1.0),
            Activation::Tanh => (-1.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            other => Err(Error::InvalidConfig(format!(
                "unknown activation `{other}` (expected sigmoid or tanh)"
            ))),
        }
    }
}

/// One weight matrix plus the optional bias vector of its destination layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
    /// Empty when the network runs without bias units.
    bias: Vec<f64>,
}

impl Connection {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Flat row-major weights, length `rows * cols`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.cols..(i + 1) * self.cols]
    }
}

/// Per-layer backpropagated errors, one vector per non-input layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerDeltas {
    deltas: Vec<Vec<f64>>,
}

impl LayerDeltas {
    /// Delta vector of the destination layer of connection `c`.
    pub fn delta(&self, c: usize) -> &[f64] {
        &self.deltas[c]
    }

    /// Sum of squared entries over the destination layer of connection `c`.
    pub fn squared_norm(&self, c: usize) -> f64 {
        self.deltas[c].iter().map(|d| d * d).sum()
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// Loss gradient with the same shape as the network weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    /// Flat row-major weight gradient per connection.
    pub weights: Vec<Vec<f64>>,
    /// Bias gradient per connection; empty vectors when bias is disabled.
    pub bias: Vec<Vec<f64>>,
}

/// A dense feed-forward network.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layer_sizes: Vec<usize>,
    activation: Activation,
    connections: Vec<Connection>,
    bias_enabled: bool,
}

impl Mlp {
    /// All-zero network. Bias units (enabled by default in the toolkit) add a
    /// constant input to every non-input layer; pass `bias = false` for a
    /// pure weight-matrix network.
    pub fn zeros(layer_sizes: &[usize], activation: Activation, bias: bool) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 layers, got {}",
                layer_sizes.len()
            )));
        }
        if layer_sizes.iter().any(|&n| n == 0) {
            return Err(Error::InvalidConfig("layer sizes must be positive".into()));
        }
        let connections = layer_sizes
            .windows(2)
            .map(|w| Connection {
                rows: w[1],
                cols: w[0],
                weights: vec![0.0; w[0] * w[1]],
                bias: if bias { vec![0.0; w[1]] } else { Vec::new() },
            })
            .collect();
        Ok(Mlp {
            layer_sizes: layer_sizes.to_vec(),
            activation,
            connections,
            bias_enabled: bias,
        })
    }

    /// Classical random initialization: every weight (and bias, when enabled)
    /// sampled uniformly from `(-half_width, half_width)`. Deterministic
    /// given the seed; weights are drawn connection by connection in row-major
    /// order, then biases.
    pub fn random(
        layer_sizes: &[usize],
        activation: Activation,
        bias: bool,
        half_width: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(half_width >= 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "half_width must be finite and non-negative, got {half_width}"
            )));
        }
        let mut net = Self::zeros(layer_sizes, activation, bias)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for conn in &mut net.connections {
            for w in conn.weights.iter_mut() {
                *w = sample_symmetric(&mut rng, half_width);
            }
        }
        for conn in &mut net.connections {
            for b in conn.bias.iter_mut() {
                *b = sample_symmetric(&mut rng, half_width);
            }
        }
        Ok(net)
    }

    /// Build a network from explicit per-connection weight matrices
    /// (row-major, destination-major). Bias starts at zero when enabled.
    pub fn from_weights(
        layer_sizes: &[usize],
        activation: Activation,
        bias: bool,
        weights: &[Vec<f64>],
    ) -> Result<Self> {
        let mut net = Self::zeros(layer_sizes, activation, bias)?;
        if weights.len() != net.connections.len() {
            return Err(Error::DimensionMismatch {
                context: "from_weights connection count",
                expected: net.connections.len(),
                got: weights.len(),
            });
        }
        for (conn, w) in net.connections.iter_mut().zip(weights) {
            if w.len() != conn.weights.len() {
                return Err(Error::DimensionMismatch {
                    context: "from_weights matrix size",
                    expected: conn.weights.len(),
                    got: w.len(),
                });
            }
            conn.weights.copy_from_slice(w);
        }
        net.validate()?;
        Ok(net)
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn layer_count(&self) -> usize {
        self.layer_sizes.len()
    }

    pub fn input_len(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_len(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn bias_enabled(&self) -> bool {
        self.bias_enabled
    }

    pub fn connection_count(&self) -> usize {
        self.connections.len()
    }

    pub fn connection(&self, c: usize) -> &Connection {
        &self.connections[c]
    }

    pub fn connection_mut(&mut self, c: usize) -> &mut Connection {
        &mut self.connections[c]
    }

    pub fn connections(&self) -> &[Connection] {
        &self.connections
    }

    /// Total number of weights, excluding bias entries.
    pub fn weight_count(&self) -> usize {
        self.connections.iter().map(|c| c.weights.len()).sum()
    }

    /// Checks the structural invariants: matching matrix shapes and finite
    /// values everywhere. Constructors run this; the `*_mut` accessors do
    /// not, so callers that poke values directly can re-check here.
    pub fn validate(&self) -> Result<()> {
        for (c, conn) in self.connections.iter().enumerate() {
            let expected = self.layer_sizes[c] * self.layer_sizes[c + 1];
            if conn.weights.len() != expected {
                return Err(Error::DimensionMismatch {
                    context: "connection weight count",
                    expected,
                    got: conn.weights.len(),
                });
            }
            if conn.weights.iter().any(|w| !w.is_finite())
                || conn.bias.iter().any(|b| !b.is_finite())
            {
                return Err(Error::InvalidConfig(format!(
                    "non-finite weight in connection {c}"
                )));
            }
        }
        Ok(())
    }

    /// Forward pass returning every layer's activation vector.
    ///
    /// `out[0][i] = f(x[i])` and `out[k][i] = f(sum_j w[k][i][j] out[k-1][j] + b[k][i])`.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<Vec<f64>>> {
        if input.len() != self.input_len() {
            return Err(Error::DimensionMismatch {
                context: "forward input",
                expected: self.input_len(),
                got: input.len(),
            });
        }
        let mut activations = Vec::with_capacity(self.layer_count());
        activations.push(input.iter().map(|&x| self.activation.apply(x)).collect());
        for conn in &self.connections {
            let prev: &Vec<f64> = activations.last().unwrap();
            let layer = self.apply_connection(conn, prev);
            activations.push(layer);
        }
        Ok(activations)
    }

    fn apply_connection(&self, conn: &Connection, prev: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(conn.rows);
        for i in 0..conn.rows {
            let mut z = if conn.bias.is_empty() { 0.0 } else { conn.bias[i] };
            for (w, a) in conn.row(i).iter().zip(prev) {
                z += w * a;
            }
            out.push(self.activation.apply(z));
        }
        out
    }

    /// Backward pass for a single sample under the squared-error loss
    /// `E = 1/2 ||a_out - y||^2`.
    ///
    /// Output layer: `d[i] = (a[i] - y[i]) f'(z[i])`; hidden layers:
    /// `d = (W_next^T d_next) * f'(z)` elementwise; weight gradient
    /// `dE/dw[i][j] = d[i] a_prev[j]`, bias gradient `dE/db[i] = d[i]`.
    pub fn backward(&self, input: &[f64], target: &[f64]) -> Result<(LayerDeltas, Gradient)> {
        if target.len() != self.output_len() {
            return Err(Error::DimensionMismatch {
                context: "backward target",
                expected: self.output_len(),
                got: target.len(),
            });
        }
        let activations = self.forward(input)?;
        let deltas = self.deltas_from_activations(&activations, target);
        let gradient = self.gradient_from_deltas(&activations, &deltas);
        Ok((deltas, gradient))
    }

    pub(crate) fn deltas_from_activations(
        &self,
        activations: &[Vec<f64>],
        target: &[f64],
    ) -> LayerDeltas {
        let n_conn = self.connections.len();
        let mut deltas: Vec<Vec<f64>> = vec![Vec::new(); n_conn];
        let out = activations.last().unwrap();
        deltas[n_conn - 1] = out
            .iter()
            .zip(target)
            .map(|(&a, &y)| (a - y) * self.activation.derivative_from_output(a))
            .collect();
        for c in (0..n_conn - 1).rev() {
            let next_conn = &self.connections[c + 1];
            let next_delta = std::mem::take(&mut deltas[c + 1]);
            let mut acc = vec![0.0; next_conn.cols];
            for (i, &d) in next_delta.iter().enumerate() {
                for (a, w) in acc.iter_mut().zip(next_conn.row(i)) {
                    *a += w * d;
                }
            }
            let layer = &activations[c + 1];
            for (a, &act) in acc.iter_mut().zip(layer) {
                *a *= self.activation.derivative_from_output(act);
            }
            deltas[c + 1] = next_delta;
            deltas[c] = acc;
        }
        LayerDeltas { deltas }
    }

    fn gradient_from_deltas(&self, activations: &[Vec<f64>], deltas: &LayerDeltas) -> Gradient {
        let mut weights = Vec::with_capacity(self.connections.len());
        let mut bias = Vec::with_capacity(self.connections.len());
        for (c, conn) in self.connections.iter().enumerate() {
            let d = &deltas.deltas[c];
            let prev = &activations[c];
            let mut g = Vec::with_capacity(conn.rows * conn.cols);
            for &di in d {
                for &aj in prev {
                    g.push(di * aj);
                }
            }
            weights.push(g);
            bias.push(if conn.bias.is_empty() {
                Vec::new()
            } else {
                d.clone()
            });
        }
        Gradient { weights, bias }
    }

    /// Versioned flat binary serialization: magic `CKM1`, little-endian
    /// `u32` layer count and layer sizes, one byte activation tag
    /// (0 = sigmoid, 1 = tanh), one byte bias flag, then per connection the
    /// row-major `f64` weights, then (when bias is enabled) per connection
    /// the `f64` bias vector.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(b"CKM1")?;
        w.write_all(&(self.layer_count() as u32).to_le_bytes())?;
        for &n in &self.layer_sizes {
            w.write_all(&(n as u32).to_le_bytes())?;
        }
        w.write_all(&[match self.activation {
            Activation::Sigmoid => 0u8,
            Activation::Tanh => 1u8,
        }])?;
        w.write_all(&[self.bias_enabled as u8])?;
        for conn in &self.connections {
            for v in &conn.weights {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        if self.bias_enabled {
            for conn in &self.connections {
                for v in &conn.bias {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        let mut off = 0usize;
        let magic = take(&buf, &mut off, 4, "magic")?;
        if magic != b"CKM1" {
            return Err(Error::Parse {
                offset: 0,
                message: format!("bad magic {magic:?}, expected `CKM1`"),
            });
        }
        let layers = read_u32_le(&buf, &mut off, "layer count")? as usize;
        if layers < 2 || layers > 1024 {
            return Err(Error::Parse {
                offset: 4,
                message: format!("implausible layer count {layers}"),
            });
        }
        let mut sizes = Vec::with_capacity(layers);
        for _ in 0..layers {
            sizes.push(read_u32_le(&buf, &mut off, "layer size")? as usize);
        }
        let activation = match take(&buf, &mut off, 1, "activation tag")?[0] {
            0 => Activation::Sigmoid,
            1 => Activation::Tanh,
            t => {
                return Err(Error::Parse {
                    offset: off - 1,
                    message: format!("unknown activation tag {t}"),
                })
            }
        };
        let bias = match take(&buf, &mut off, 1, "bias flag")?[0] {
            0 => false,
            1 => true,
            t => {
                return Err(Error::Parse {
                    offset: off - 1,
                    message: format!("bad bias flag {t}"),
                })
            }
        };
        let mut net = Self::zeros(&sizes, activation, bias)?;
        for conn in &mut net.connections {
            for v in conn.weights.iter_mut() {
                *v = read_f64_le(&buf, &mut off)?;
            }
        }
        if bias {
            for conn in &mut net.connections {
                for v in conn.bias.iter_mut() {
                    *v = read_f64_le(&buf, &mut off)?;
                }
            }
        }
        if off != buf.len() {
            return Err(Error::Parse {
                offset: off,
                message: format!("{} trailing bytes", buf.len() - off),
            });
        }
        net.validate()?;
        Ok(net)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

/// Uniform sample from `(-h, h)`; a degenerate interval yields 0.
pub(crate) fn sample_symmetric(rng: &mut impl Rng, h: f64) -> f64 {
    if h > 0.0 {
        rng.gen_range(-h..h)
    } else {
        0.0
    }
}

fn take<'a>(buf: &'a [u8], off: &mut usize, n: usize, what: &str) -> Result<&'a [u8]> {
    if *off + n > buf.len() {
        return Err(Error::Parse {
            offset: *off,
            message: format!("truncated file while reading {what}"),
        });
    }
    let s = &buf[*off..*off + n];
    *off += n;
    Ok(s)
}

fn read_u32_le(buf: &[u8], off: &mut usize, what: &str) -> Result<u32> {
    let b = take(buf, off, 4, what)?;
    Ok(u32::from_le_bytes(b.try_into().unwrap()))
}

fn read_f64_le(buf: &[u8], off: &mut usize) -> Result<f64> {
    let b = take(buf, off, 8, "weight value")?;
    Ok(f64::from_le_bytes(b.try_into().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_tanh_gives_zero_everywhere() {
        let net = Mlp::zeros(&[3, 4, 2], Activation::Tanh, false).unwrap();
        let acts = net.forward(&[0.0, 0.0, 0.0]).unwrap();
        for layer in &acts {
            assert!(layer.iter().all(|&a| a == 0.0));
        }
    }

    #[test]
    fn hand_evaluated_2_2_1_tanh() {
        let net = Mlp::from_weights(
            &[2, 2, 1],
            Activation::Tanh,
            false,
            &[vec![1.0, 0.0, 0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let acts = net.forward(&[0.5, -0.5]).unwrap();
        let expect = 0.5f64.tanh().tanh();
        assert!((acts[1][0] - expect).abs() < 1e-15);
        assert!((acts[1][1] + expect).abs() < 1e-15);
        // symmetry forces the output to tanh(0) = 0
        assert!(acts[2][0].abs() < 1e-15);
    }

    #[test]
    fn forward_rejects_wrong_input_len() {
        let net = Mlp::zeros(&[3, 2], Activation::Sigmoid, true).unwrap();
        assert!(matches!(
            net.forward(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_residual_gives_zero_gradient() {
        let net = Mlp::random(&[2, 3, 2], Activation::Tanh, true, 0.5, 7).unwrap();
        let x = [0.3, -0.2];
        let acts = net.forward(&x).unwrap();
        let y = acts.last().unwrap().clone();
        let (deltas, grad) = net.backward(&x, &y).unwrap();
        for c in 0..net.connection_count() {
            assert!(deltas.delta(c).iter().all(|&d| d == 0.0));
            assert!(grad.weights[c].iter().all(|&g| g == 0.0));
            assert!(grad.bias[c].iter().all(|&g| g == 0.0));
        }
    }

    #[test]
    fn sigmoid_zero_net_with_half_targets_has_zero_output_delta() {
        let net = Mlp::zeros(&[2, 2, 2], Activation::Sigmoid, false).unwrap();
        let (deltas, _) = net.backward(&[0.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!(deltas.delta(1).iter().all(|&d| d == 0.0));
    }

    #[test]
    fn forward_is_deterministic() {
        let net = Mlp::random(&[4, 5, 3], Activation::Sigmoid, true, 1.0, 99).unwrap();
        let x = [0.1, -0.7, 0.3, 0.9];
        assert_eq!(net.forward(&x).unwrap(), net.forward(&x).unwrap());
    }

    #[test]
    fn random_is_seed_deterministic_and_bounded() {
        let a = Mlp::random(&[3, 4, 2], Activation::Tanh, true, 0.8, 5).unwrap();
        let b = Mlp::random(&[3, 4, 2], Activation::Tanh, true, 0.8, 5).unwrap();
        assert_eq!(a, b);
        for conn in a.connections() {
            assert!(conn.weights().iter().all(|w| w.abs() < 0.8));
            assert!(conn.bias().iter().all(|b| b.abs() < 0.8));
        }
        let c = Mlp::random(&[3, 4, 2], Activation::Tanh, true, 0.8, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn serialization_round_trips() {
        let net = Mlp::random(&[5, 4, 3], Activation::Sigmoid, true, 1.2, 11).unwrap();
        let mut buf = Vec::new();
        net.write_to(&mut buf).unwrap();
        let back = Mlp::read_from(buf.as_slice()).unwrap();
        assert_eq!(net, back);

        let nobias = Mlp::random(&[5, 4], Activation::Tanh, false, 0.3, 1).unwrap();
        let mut buf = Vec::new();
        nobias.write_to(&mut buf).unwrap();
        assert_eq!(Mlp::read_from(buf.as_slice()).unwrap(), nobias);
    }

    #[test]
    fn serialization_rejects_bad_magic_and_truncation() {
        let net = Mlp::random(&[2, 2], Activation::Tanh, false, 0.5, 3).unwrap();
        let mut buf = Vec::new();
        net.write_to(&mut buf).unwrap();

        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(
            Mlp::read_from(bad.as_slice()),
            Err(Error::Parse { offset: 0, .. })
        ));

        let truncated = &buf[..buf.len() - 3];
        assert!(matches!(
            Mlp::read_from(truncated),
            Err(Error::Parse { .. })
        ));
    }
}
