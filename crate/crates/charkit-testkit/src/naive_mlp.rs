//! Straight-line network math, written from the formulas with no shared
//! code path with the library's forward/backward implementation.

use charkit::mlp::Mlp;

/// Relative error with an absolute floor for near-zero pairs.
pub fn rel_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-4)
}

/// Forward pass computed literally: `a[0][i] = f(x[i])`,
/// `a[k][i] = f(sum_j w[k][i][j] a[k-1][j] + b[k][i])`.
pub fn naive_forward(net: &Mlp, x: &[f64]) -> Vec<Vec<f64>> {
    let f = net.activation();
    let mut layers: Vec<Vec<f64>> = Vec::new();
    let mut current: Vec<f64> = x.iter().map(|&v| f.apply(v)).collect();
    layers.push(current.clone());
    for c in 0..net.connection_count() {
        let conn = net.connection(c);
        let mut next = Vec::new();
        for i in 0..conn.rows() {
            let mut z = 0.0;
            for j in 0..conn.cols() {
                z += conn.weights()[i * conn.cols() + j] * current[j];
            }
            if !conn.bias().is_empty() {
                z += conn.bias()[i];
            }
            next.push(f.apply(z));
        }
        layers.push(next.clone());
        current = next;
    }
    layers
}

/// Half squared error `1/2 ||a_out - y||^2` through the naive forward pass.
pub fn naive_loss(net: &Mlp, x: &[f64], y: &[f64]) -> f64 {
    let out = naive_forward(net, x).pop().unwrap();
    out.iter().zip(y).map(|(a, t)| (a - t) * (a - t)).sum::<f64>() / 2.0
}

/// Delta errors per non-input layer, from the recursion
/// `d_out = (a - y) f'(z)`, `d_k = (W_{k+1}^T d_{k+1}) f'(z_k)`.
pub fn naive_deltas(net: &Mlp, x: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    let f = net.activation();
    let layers = naive_forward(net, x);
    let n_conn = net.connection_count();
    let mut deltas: Vec<Vec<f64>> = vec![Vec::new(); n_conn];
    let out = &layers[n_conn];
    deltas[n_conn - 1] = out
        .iter()
        .zip(y)
        .map(|(&a, &t)| (a - t) * f.derivative_from_output(a))
        .collect();
    for c in (0..n_conn.saturating_sub(1)).rev() {
        let conn = net.connection(c + 1);
        let mut d = vec![0.0; conn.cols()];
        for j in 0..conn.cols() {
            for i in 0..conn.rows() {
                d[j] += conn.weights()[i * conn.cols() + j] * deltas[c + 1][i];
            }
            d[j] *= f.derivative_from_output(layers[c + 1][j]);
        }
        deltas[c] = d;
    }
    deltas
}

/// Central finite difference of the naive loss with respect to one weight.
pub fn fd_weight_gradient(net: &Mlp, x: &[f64], y: &[f64], c: usize, idx: usize, step: f64) -> f64 {
    let mut plus = net.clone();
    plus.connection_mut(c).weights_mut()[idx] += step;
    let mut minus = net.clone();
    minus.connection_mut(c).weights_mut()[idx] -= step;
    (naive_loss(&plus, x, y) - naive_loss(&minus, x, y)) / (2.0 * step)
}

/// Central finite difference of the naive loss with respect to one bias.
pub fn fd_bias_gradient(net: &Mlp, x: &[f64], y: &[f64], c: usize, i: usize, step: f64) -> f64 {
    let mut plus = net.clone();
    plus.connection_mut(c).bias_mut()[i] += step;
    let mut minus = net.clone();
    minus.connection_mut(c).bias_mut()[i] -= step;
    (naive_loss(&plus, x, y) - naive_loss(&minus, x, y)) / (2.0 * step)
}
