//! Digit sources for the harness: an IDX directory on disk, or the built-in
//! synthetic generator when no real data is available.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use charkit::data::{encode_glyph, load_idx_images, load_idx_labels, one_hot, synthetic_digits};
use charkit::glyph::GlyphImage;
use charkit::mlp::Activation;
use charkit::train::TrainingSet;

pub const DEFAULT_SYNTHETIC_COUNT: usize = 2000;
pub const SYNTHETIC_SEED: u64 = 42;

/// Where the digit glyphs come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    /// Directory holding `train-images-idx3-ubyte` and
    /// `train-labels-idx1-ubyte` (dotted spellings accepted).
    IdxDir(PathBuf),
    /// Deterministic stroke-rendered digits.
    Synthetic { count: usize },
}

impl FromStr for DataSource {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "synthetic" {
            return Ok(DataSource::Synthetic {
                count: DEFAULT_SYNTHETIC_COUNT,
            });
        }
        if let Some(count) = s.strip_prefix("synthetic:") {
            return Ok(DataSource::Synthetic {
                count: count.parse().context("bad synthetic count")?,
            });
        }
        Ok(DataSource::IdxDir(PathBuf::from(s)))
    }
}

impl std::fmt::Display for DataSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DataSource::IdxDir(path) => write!(f, "{}", path.display()),
            DataSource::Synthetic { count } => write!(f, "synthetic:{count}"),
        }
    }
}

/// Loaded labeled glyphs.
pub struct DigitSet {
    pub images: Vec<GlyphImage>,
    pub labels: Vec<u8>,
    pub class_count: usize,
}

fn find_idx_file(dir: &Path, stem: &str, kind: &str) -> anyhow::Result<PathBuf> {
    for name in [
        format!("{stem}-{kind}-ubyte"),
        format!("{stem}.{kind}-ubyte"),
    ] {
        let path = dir.join(&name);
        if path.is_file() {
            return Ok(path);
        }
    }
    bail!(
        "no `{stem}-{kind}-ubyte` (or dotted spelling) in {}",
        dir.display()
    )
}

/// Load the training split of an IDX directory, or generate the synthetic
/// set.
pub fn load_digits(source: &DataSource) -> anyhow::Result<DigitSet> {
    match source {
        DataSource::IdxDir(dir) => {
            let images_path = find_idx_file(dir, "train-images", "idx3")?;
            let labels_path = find_idx_file(dir, "train-labels", "idx1")?;
            let (images, _) = load_idx_images(&images_path)
                .with_context(|| format!("reading {}", images_path.display()))?;
            let labels = load_idx_labels(&labels_path)
                .with_context(|| format!("reading {}", labels_path.display()))?;
            if images.len() != labels.len() {
                bail!(
                    "image/label count mismatch: {} vs {}",
                    images.len(),
                    labels.len()
                );
            }
            Ok(DigitSet {
                images,
                labels,
                class_count: 10,
            })
        }
        DataSource::Synthetic { count } => {
            let (images, labels) = synthetic_digits(*count, 28, 28, SYNTHETIC_SEED)?;
            Ok(DigitSet {
                images,
                labels,
                class_count: 10,
            })
        }
    }
}

/// Encode selected glyphs as a training set on a `rows x cols` input grid.
pub fn to_training_set(
    set: &DigitSet,
    indices: &[usize],
    rows: usize,
    cols: usize,
    activation: Activation,
) -> anyhow::Result<TrainingSet> {
    let mut data = TrainingSet::new();
    for &i in indices {
        let input = encode_glyph(&set.images[i], rows, cols, activation)?;
        let target = one_hot(set.labels[i] as usize, set.class_count, activation)?;
        data.push(input, target, set.labels[i] as u32)?;
    }
    Ok(data)
}

/// Factor a layer-0 size into an input grid: an explicit `RxC` wins,
/// otherwise the size must be a perfect square.
pub fn input_grid(input_len: usize, explicit: Option<(usize, usize)>) -> anyhow::Result<(usize, usize)> {
    if let Some((r, c)) = explicit {
        if r * c != input_len {
            bail!("grid {r}x{c} does not match the input layer size {input_len}");
        }
        return Ok((r, c));
    }
    let side = (input_len as f64).sqrt().round() as usize;
    if side * side == input_len {
        Ok((side, side))
    } else {
        bail!("input layer size {input_len} is not square; pass --grid RxC")
    }
}
