//! Per-column projection and geometry features.
//!
//! For a binarized `m x n` pattern the cut scorer combines, per column `i`:
//! the vertical projection `V(i)` (ink count), the normalized distance from
//! the pattern center `d(i) = |c - i| / c`, the crossing count `f(i)`
//! (white/black transitions scanning the column), the peak-to-valley
//! function `g(i) = (V(l) - 2 V(i) + V(r)) / (V(i) + 1)` with `l`, `r` the
//! peak positions flanking `i`, and the second difference
//! `h(i) = (V(i-1) - 2 V(i) + V(i+1)) / V(i)`. `g` and `h` enter the
//! inference min-max normalized and complemented, so that 1 marks a strong
//! valley.

use crate::error::{Error, Result};
use crate::glyph::GlyphImage;

/// How the flanking peaks of the peak-to-valley function are located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeakMode {
    /// Global maximum of the projection on each side, leftmost on ties.
    #[default]
    Global,
    /// Nearest local maximum on each side, falling back to the global one.
    Local,
}

/// Fuzzified inputs of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnFeatures {
    /// Vertical projection `V(i)`.
    pub projection: usize,
    /// Normalized distance from the center column, in `[0, 1]`.
    pub distance: f64,
    /// White/black transition count, at most `rows`.
    pub crossings: usize,
    /// Complemented normalized peak-to-valley value, in `[0, 1]`.
    pub g_tilde: f64,
    /// Complemented normalized second difference, in `[0, 1]`.
    pub h_tilde: f64,
}

/// Ink count per column.
pub fn vertical_projection(img: &GlyphImage) -> Vec<usize> {
    (0..img.cols()).map(|c| img.column_ink(c)).collect()
}

/// Peak-to-valley value of interior column `i`; `None` on the boundary
/// columns, which have no flanking peak on one side.
pub fn peak_to_valley(projection: &[usize], i: usize, mode: PeakMode) -> Option<f64> {
    let n = projection.len();
    if i == 0 || i + 1 >= n {
        return None;
    }
    let left = peak_index(projection, 0..i, mode);
    let right = peak_index(projection, i + 1..n, mode);
    let num = projection[left] as f64 - 2.0 * projection[i] as f64 + projection[right] as f64;
    Some(num / (projection[i] as f64 + 1.0))
}

fn peak_index(projection: &[usize], range: std::ops::Range<usize>, mode: PeakMode) -> usize {
    if mode == PeakMode::Local {
        if let Some(i) = nearest_local_max(projection, range.clone()) {
            return i;
        }
    }
    // leftmost global maximum
    let mut best = range.start;
    for i in range {
        if projection[i] > projection[best] {
            best = i;
        }
    }
    best
}

/// Local maximum nearest to the excluded center: the range sits entirely on
/// one side, so on the left side we scan from the high end, on the right
/// side from the low end.
fn nearest_local_max(projection: &[usize], range: std::ops::Range<usize>) -> Option<usize> {
    let n = projection.len();
    let is_local_max = |i: usize| {
        (i == 0 || projection[i] >= projection[i - 1])
            && (i + 1 == n || projection[i] >= projection[i + 1])
    };
    if range.end < n {
        // left flank: walk toward the start
        range.rev().find(|&i| is_local_max(i))
    } else {
        range.into_iter().find(|&i| is_local_max(i))
    }
}

/// Second difference of the projection at interior column `i`; `None` on
/// boundaries and on blank columns (`V(i) = 0`), which are direct cuts
/// handled upstream.
pub fn second_difference(projection: &[usize], i: usize) -> Option<f64> {
    let n = projection.len();
    if i == 0 || i + 1 >= n || projection[i] == 0 {
        return None;
    }
    let num = projection[i - 1] as f64 - 2.0 * projection[i] as f64 + projection[i + 1] as f64;
    Some(num / projection[i] as f64)
}

/// Min-max normalize over the valid entries, then complement: high raw
/// values map to 0, low raw values to 1. A constant profile normalizes to
/// all zeros before the complement, so every valid entry becomes 1. Entries
/// flagged invalid are written as 0 and must be skipped by the caller.
pub fn normalize_complement(values: &[f64], valid: &[bool]) -> Result<Vec<f64>> {
    if values.len() != valid.len() {
        return Err(Error::DimensionMismatch {
            context: "normalize_complement validity",
            expected: values.len(),
            got: valid.len(),
        });
    }
    let mut mn = f64::INFINITY;
    let mut mx = f64::NEG_INFINITY;
    for (&v, &ok) in values.iter().zip(valid) {
        if ok {
            mn = mn.min(v);
            mx = mx.max(v);
        }
    }
    if mn > mx {
        return Err(Error::NoValidColumns);
    }
    let span = mx - mn;
    Ok(values
        .iter()
        .zip(valid)
        .map(|(&v, &ok)| {
            if !ok {
                0.0
            } else if span == 0.0 {
                1.0
            } else {
                1.0 - (v - mn) / span
            }
        })
        .collect())
}

/// Number of transitions between white and black scanning column `i` top to
/// bottom.
pub fn crossing_count(img: &GlyphImage, col: usize) -> usize {
    (1..img.rows())
        .filter(|&r| img.get(r, col) != img.get(r - 1, col))
        .count()
}

/// Normalized distance of column `i` from the center column
/// `c = (n - 1) / 2` (a real value, so even widths get a fractional center),
/// clamped to `[0, 1]`.
pub fn center_distance(i: usize, n: usize) -> f64 {
    debug_assert!(n >= 2 && i < n);
    let c = (n - 1) as f64 / 2.0;
    ((c - i as f64).abs() / c).clamp(0.0, 1.0)
}
