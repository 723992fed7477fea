//! Dense reimplementation of the whole fusion-initialization loop. Follows
//! the same documented seed-stream draw order as the library so results are
//! comparable, but every covariance is an explicit dense matrix, every
//! inverse is Gauss-Jordan, and the delta measurement runs through the
//! straight-line network math.

use charkit::bayes::InitConfig;
use charkit::mlp::{Activation, Mlp};
use charkit::train::TrainingSet;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::{dense_from_scalars, dense_fusion, DenseMatrix};
use crate::naive_mlp::naive_deltas;

fn draw(rng: &mut impl Rng, h: f64) -> f64 {
    if h > 0.0 {
        rng.gen_range(-h..h)
    } else {
        0.0
    }
}

/// Final per-connection weight vectors (and bias vectors when `bias`) of the
/// dense fusion loop.
pub fn dense_bayes_initialize(
    layer_sizes: &[usize],
    activation: Activation,
    bias: bool,
    data: &TrainingSet,
    cfg: &InitConfig,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let subset = data.truncated(cfg.subset_size);
    let h = cfg.half_width;
    let dims: Vec<usize> = layer_sizes.windows(2).map(|w| w[0] * w[1]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut means: Vec<Vec<f64>> = dims
        .iter()
        .map(|&d| (0..d).map(|_| draw(&mut rng, h)).collect())
        .collect();
    let mut covs: Vec<DenseMatrix> = dims
        .iter()
        .map(|&d| dense_from_scalars(d, cfg.prior_variance(), 0.0))
        .collect();

    let mut scratch = Mlp::zeros(layer_sizes, activation, false).unwrap();
    for _ in 0..cfg.iterations {
        let measurements: Vec<Vec<f64>> = dims
            .iter()
            .map(|&d| (0..d).map(|_| draw(&mut rng, h)).collect())
            .collect();
        for (c, m) in measurements.iter().enumerate() {
            scratch.connection_mut(c).weights_mut().copy_from_slice(m);
        }
        for c in 0..dims.len() {
            let mut sum = 0.0;
            for s in 0..subset.len() {
                let deltas = naive_deltas(&scratch, subset.input(s), subset.target(s));
                sum += deltas[c].iter().map(|d| d * d).sum::<f64>();
            }
            let r_diag = (sum / dims[c] as f64).max(cfg.off_diag + cfg.pd_floor);
            let r = dense_from_scalars(dims[c], r_diag - cfg.off_diag, cfg.off_diag);
            let (mean, cov) = dense_fusion(&means[c], &covs[c], &measurements[c], &r);
            means[c] = mean;
            covs[c] = cov;
        }
    }

    let mut biases: Vec<Vec<f64>> = Vec::new();
    if bias {
        for w in layer_sizes.windows(2) {
            biases.push((0..w[1]).map(|_| draw(&mut rng, h)).collect());
        }
    }
    (means, biases)
}
