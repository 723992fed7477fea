//! Glyphs to network vectors and back.

use crate::error::{Error, Result};
use crate::glyph::GlyphImage;
use crate::mlp::Activation;

/// Input levels for the two pixel values: `{0, 1}` for sigmoid networks,
/// `{-1, +1}` for tanh networks.
pub fn pixel_levels(activation: Activation) -> (f64, f64) {
    match activation {
        Activation::Sigmoid => (0.0, 1.0),
        Activation::Tanh => (-1.0, 1.0),
    }
}

/// Soft one-hot levels `(cold, hot)`; soft targets keep the gradients alive
/// near activation saturation.
pub fn target_levels(activation: Activation) -> (f64, f64) {
    match activation {
        Activation::Sigmoid => (0.1, 0.9),
        Activation::Tanh => (-0.9, 0.9),
    }
}

/// Nearest-neighbor resample to `target_rows x target_cols`, flattened
/// row-major with pixels mapped to the activation's input levels.
pub fn encode_glyph(
    img: &GlyphImage,
    target_rows: usize,
    target_cols: usize,
    activation: Activation,
) -> Result<Vec<f64>> {
    if target_rows == 0 || target_cols == 0 {
        return Err(Error::InvalidConfig(
            "encode_glyph target dimensions must be positive".into(),
        ));
    }
    let (white, ink) = pixel_levels(activation);
    let mut out = Vec::with_capacity(target_rows * target_cols);
    for r in 0..target_rows {
        let src_r = r * img.rows() / target_rows;
        for c in 0..target_cols {
            let src_c = c * img.cols() / target_cols;
            out.push(if img.get(src_r, src_c) == 1 { ink } else { white });
        }
    }
    Ok(out)
}

/// Soft one-hot target vector for `label` out of `class_count` classes.
pub fn one_hot(label: usize, class_count: usize, activation: Activation) -> Result<Vec<f64>> {
    if label >= class_count {
        return Err(Error::InvalidConfig(format!(
            "label {label} out of range for {class_count} classes"
        )));
    }
    let (cold, hot) = target_levels(activation);
    let mut v = vec![cold; class_count];
    v[label] = hot;
    Ok(v)
}

/// Argmax decoding of a network output back to a class index.
pub fn decode_one_hot(output: &[f64]) -> usize {
    output
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
        .unwrap_or(0)
}
