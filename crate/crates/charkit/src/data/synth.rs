//! Synthetic data: touching-pair composition with ground truth, a
//! stroke-rendered digit generator, and corpus files.

use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::pnm::{load_pbm, write_pbm};
use crate::error::{Error, Result};
use crate::glyph::GlyphImage;

/// Two glyphs composed into one pattern, with the inclusive column interval
/// of acceptable cut positions.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchingPair {
    pub image: GlyphImage,
    pub truth_lo: usize,
    pub truth_hi: usize,
    pub left_label: u8,
    pub right_label: u8,
}

/// Compose `a` and `b` into a touching pattern: `b` starts at column
/// `width(a) - overlap`, pixels combine by OR, the shorter glyph is padded
/// with white rows so both sit bottom-aligned. Acceptable cuts are
/// `[width(a) - overlap, width(a)]` clipped to interior columns.
pub fn synth_touching(
    a: &GlyphImage,
    b: &GlyphImage,
    overlap: usize,
    left_label: u8,
    right_label: u8,
) -> Result<TouchingPair> {
    if overlap >= a.cols().min(b.cols()) {
        return Err(Error::InvalidConfig(format!(
            "overlap {overlap} too large for glyph widths {} and {}",
            a.cols(),
            b.cols()
        )));
    }
    let rows = a.rows().max(b.rows());
    let cols = a.cols() + b.cols() - overlap;
    let b_start = a.cols() - overlap;
    let mut image = GlyphImage::blank(rows, cols)?;
    stamp_bottom_aligned(&mut image, a, 0, rows);
    stamp_bottom_aligned(&mut image, b, b_start, rows);

    let lo = b_start.max(1);
    let hi = a.cols().min(cols.saturating_sub(2));
    if lo > hi {
        return Err(Error::InvalidConfig(format!(
            "composition leaves no interior cut column (widths {} + {} - {overlap})",
            a.cols(),
            b.cols()
        )));
    }
    Ok(TouchingPair {
        image,
        truth_lo: lo,
        truth_hi: hi,
        left_label,
        right_label,
    })
}

fn stamp_bottom_aligned(dst: &mut GlyphImage, src: &GlyphImage, col0: usize, rows: usize) {
    let pad = rows - src.rows();
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            if src.get(r, c) == 1 {
                dst.set(pad + r, col0 + c, 1);
            }
        }
    }
}

/// Build a reproducible corpus of touching pairs from labeled glyphs.
///
/// Glyphs are cropped to their ink bounding box before composition so the
/// requested overlaps produce genuinely touching patterns. Partners and
/// overlaps (inclusive range) are drawn from a seeded stream; candidates
/// whose composition fails (degenerate crop or width) are skipped.
pub fn build_touching_corpus(
    glyphs: &[(GlyphImage, u8)],
    pairs: usize,
    overlap_range: (usize, usize),
    seed: u64,
) -> Result<Vec<TouchingPair>> {
    if glyphs.is_empty() {
        return Err(Error::EmptySubset);
    }
    if overlap_range.0 > overlap_range.1 {
        return Err(Error::InvalidConfig(format!(
            "bad overlap range {}..={}",
            overlap_range.0, overlap_range.1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(pairs);
    let mut attempts = 0usize;
    while out.len() < pairs {
        attempts += 1;
        if attempts > pairs.saturating_mul(100) + 1000 {
            return Err(Error::InvalidConfig(
                "could not assemble the requested corpus from these glyphs".into(),
            ));
        }
        let ia = rng.gen_range(0..glyphs.len());
        let ib = rng.gen_range(0..glyphs.len());
        let overlap = rng.gen_range(overlap_range.0..=overlap_range.1);
        let (Some(a), Some(b)) = (glyphs[ia].0.crop_to_ink(), glyphs[ib].0.crop_to_ink()) else {
            continue;
        };
        if a.cols() < 3 || b.cols() < 3 {
            continue;
        }
        match synth_touching(&a, &b, overlap, glyphs[ia].1, glyphs[ib].1) {
            // one white row above and below, like the line box around
            // rendered text: ink runs never sit flush with the frame, so
            // crossing counts see every run boundary
            Ok(mut pair) => {
                pair.image = pair.image.pad_rows(1, 1);
                out.push(pair);
            }
            Err(_) => continue,
        }
    }
    Ok(out)
}

/// Write a corpus directory: one `pair_NNNN.pbm` per sample plus a
/// `manifest.csv` with header `file,lo,hi,left_label,right_label`.
pub fn write_corpus(dir: impl AsRef<Path>, pairs: &[TouchingPair]) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut manifest = String::from("file,lo,hi,left_label,right_label\n");
    for (i, pair) in pairs.iter().enumerate() {
        let name = format!("pair_{i:04}.pbm");
        write_pbm(dir.join(&name), &pair.image)?;
        manifest.push_str(&format!(
            "{name},{},{},{},{}\n",
            pair.truth_lo, pair.truth_hi, pair.left_label, pair.right_label
        ));
    }
    std::fs::write(dir.join("manifest.csv"), manifest)?;
    Ok(())
}

/// Read a corpus directory written by [`write_corpus`] (or any directory of
/// PBM files with a matching manifest).
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<(String, TouchingPair)>> {
    let dir = dir.as_ref();
    let manifest = std::fs::read_to_string(dir.join("manifest.csv"))?;
    let mut out = Vec::new();
    for (lineno, line) in manifest.lines().enumerate() {
        if lineno == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::InvalidConfig(format!(
                "manifest line {}: expected 5 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |s: &str, what: &str| -> Result<usize> {
            s.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("manifest line {}: bad {what} `{s}`", lineno + 1))
            })
        };
        let image = load_pbm(dir.join(fields[0]))?;
        out.push((
            fields[0].to_string(),
            TouchingPair {
                image,
                truth_lo: parse(fields[1], "lo")?,
                truth_hi: parse(fields[2], "hi")?,
                left_label: parse(fields[3], "left_label")? as u8,
                right_label: parse(fields[4], "right_label")? as u8,
            },
        ));
    }
    Ok(out)
}

/// Pick `n` sample indices stratified by label: per-class quotas filled in
/// scan order, any shortfall topped up with the earliest unused samples.
pub fn stratified_subset(labels: &[u8], n: usize, class_count: usize) -> Vec<usize> {
    let n = n.min(labels.len());
    if class_count == 0 {
        return (0..n).collect();
    }
    let base = n / class_count;
    let extra = n % class_count;
    let mut quota: Vec<usize> = (0..class_count)
        .map(|c| base + usize::from(c < extra))
        .collect();
    let mut chosen = vec![false; labels.len()];
    let mut out = Vec::with_capacity(n);
    for (i, &label) in labels.iter().enumerate() {
        let class = label as usize;
        if class < class_count && quota[class] > 0 {
            quota[class] -= 1;
            chosen[i] = true;
            out.push(i);
            if out.len() == n {
                return out;
            }
        }
    }
    for i in 0..labels.len() {
        if !chosen[i] {
            out.push(i);
            if out.len() == n {
                break;
            }
        }
    }
    out
}

use std::f64::consts::PI;

fn push_arc(points: &mut Vec<(f64, f64)>, cx: f64, cy: f64, rx: f64, ry: f64, t0: f64, t1: f64) {
    let steps = 28;
    for s in 0..=steps {
        let t = t0 + (t1 - t0) * s as f64 / steps as f64;
        points.push((cx + rx * t.cos(), cy + ry * t.sin()));
    }
}

// Round stroke skeletons on a unit box (x right, y down). Curved outlines
// keep the extreme columns of each glyph thin, the way rendered characters
// meet at tangent contacts rather than full-stem merges.
fn digit_skeleton(digit: u8) -> Vec<Vec<(f64, f64)>> {
    let mut polylines: Vec<Vec<(f64, f64)>> = Vec::new();
    let arc = |cx, cy, rx, ry, t0: f64, t1: f64| {
        let mut p = Vec::new();
        push_arc(&mut p, cx, cy, rx, ry, t0, t1);
        p
    };
    match digit {
        0 => polylines.push(arc(0.5, 0.5, 0.27, 0.37, -0.5 * PI, 1.5 * PI)),
        1 => {
            polylines.push(vec![(0.34, 0.26), (0.56, 0.11), (0.56, 0.89)]);
            polylines.push(vec![(0.38, 0.89), (0.74, 0.89)]);
        }
        2 => {
            let mut p = arc(0.5, 0.29, 0.24, 0.17, PI, 2.0 * PI);
            p.push((0.26, 0.87));
            p.push((0.77, 0.87));
            polylines.push(p);
        }
        3 => {
            polylines.push(arc(0.46, 0.3, 0.25, 0.18, -0.9 * PI, 0.5 * PI));
            polylines.push(arc(0.46, 0.67, 0.27, 0.2, -0.5 * PI, 0.9 * PI));
        }
        4 => {
            polylines.push(vec![(0.6, 0.12), (0.23, 0.6), (0.8, 0.6)]);
            polylines.push(vec![(0.63, 0.34), (0.63, 0.88)]);
        }
        5 => {
            let mut p = vec![(0.73, 0.13), (0.3, 0.13), (0.28, 0.44)];
            push_arc(&mut p, 0.45, 0.65, 0.28, 0.22, -0.55 * PI, 0.8 * PI);
            polylines.push(p);
        }
        6 => {
            polylines.push(vec![(0.64, 0.11), (0.4, 0.44)]);
            polylines.push(arc(0.48, 0.66, 0.23, 0.21, -0.5 * PI, 1.5 * PI));
        }
        7 => polylines.push(vec![(0.26, 0.13), (0.78, 0.13), (0.34, 0.88)]),
        8 => {
            polylines.push(arc(0.5, 0.3, 0.21, 0.18, -0.5 * PI, 1.5 * PI));
            polylines.push(arc(0.5, 0.68, 0.25, 0.2, -0.5 * PI, 1.5 * PI));
        }
        _ => {
            polylines.push(arc(0.5, 0.34, 0.23, 0.22, -0.5 * PI, 1.5 * PI));
            polylines.push(vec![(0.72, 0.38), (0.59, 0.88)]);
        }
    }
    polylines
}

/// Render one digit glyph with seeded jitter.
pub fn render_digit(digit: u8, rows: usize, cols: usize, rng: &mut impl Rng) -> Result<GlyphImage> {
    if digit > 9 {
        return Err(Error::InvalidConfig(format!("digit {digit} out of range")));
    }
    if rows < 8 || cols < 8 {
        return Err(Error::InvalidConfig(format!(
            "digit canvas {rows}x{cols} too small (need at least 8x8)"
        )));
    }
    let mut img = GlyphImage::blank(rows, cols)?;
    let shear = rng.gen_range(-0.06..0.06);
    let scale_x = rng.gen_range(0.82..0.92);
    let scale_y = rng.gen_range(0.86..0.95);
    let off_x = rng.gen_range(0.0..(1.0 - scale_x));
    let off_y = rng.gen_range(0.0..(1.0 - scale_y));
    let thickness = rng.gen_range(2.4..3.0) * rows as f64 / 28.0;

    for polyline in digit_skeleton(digit) {
        let mapped: Vec<(f64, f64)> = polyline
            .iter()
            .map(|&(px, py)| {
                let jx = rng.gen_range(-0.008..0.008);
                let jy = rng.gen_range(-0.008..0.008);
                let y = (py + jy).clamp(0.0, 1.0);
                let x = (px + jx + shear * (0.5 - y)).clamp(0.0, 1.0);
                (
                    (off_x + x * scale_x) * (cols - 1) as f64,
                    (off_y + y * scale_y) * (rows - 1) as f64,
                )
            })
            .collect();
        for pair in mapped.windows(2) {
            let (x0, y0) = pair[0];
            let (x1, y1) = pair[1];
            draw_segment(&mut img, x0, y0, x1, y1, thickness);
        }
    }
    Ok(img)
}

fn draw_segment(img: &mut GlyphImage, x0: f64, y0: f64, x1: f64, y1: f64, thickness: f64) {
    let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
    let steps = (len / 0.3).ceil().max(1.0) as usize;
    let radius = (thickness / 2.0).max(0.5);
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let cx = x0 + t * (x1 - x0);
        let cy = y0 + t * (y1 - y0);
        let r0 = ((cy - radius).floor().max(0.0)) as usize;
        let r1 = ((cy + radius).ceil() as usize).min(img.rows() - 1);
        let c0 = ((cx - radius).floor().max(0.0)) as usize;
        let c1 = ((cx + radius).ceil() as usize).min(img.cols() - 1);
        for r in r0..=r1 {
            for c in c0..=c1 {
                let dr = r as f64 - cy;
                let dc = c as f64 - cx;
                if dr * dr + dc * dc <= radius * radius {
                    img.set(r, c, 1);
                }
            }
        }
    }
}

/// A deterministic labeled digit set: `count` glyphs with labels cycling
/// `0..=9`, rendered with seeded jitter. Stands in for a real handwriting
/// corpus when none is on disk.
pub fn synthetic_digits(
    count: usize,
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<(Vec<GlyphImage>, Vec<u8>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let digit = (i % 10) as u8;
        images.push(render_digit(digit, rows, cols, &mut rng)?);
        labels.push(digit);
    }
    Ok((images, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_overlap_concatenates() {
        let a = GlyphImage::from_text("##\n##\n").unwrap();
        let b = GlyphImage::from_text("###\n###\n").unwrap();
        let pair = synth_touching(&a, &b, 0, 1, 2).unwrap();
        assert_eq!(pair.image.cols(), 5);
        assert_eq!((pair.truth_lo, pair.truth_hi), (2, 2));
        assert_eq!(pair.image.ink_count(), a.ink_count() + b.ink_count());
    }

    #[test]
    fn overlap_composes_by_or() {
        // two 5-wide glyphs, overlap 1: width 9, truth range [4, 5]
        let a = GlyphImage::from_text("#####\n").unwrap();
        let b = GlyphImage::from_text("#####\n").unwrap();
        let pair = synth_touching(&a, &b, 1, 0, 0).unwrap();
        assert_eq!(pair.image.cols(), 9);
        assert_eq!((pair.truth_lo, pair.truth_hi), (4, 5));
        // the shared column had ink from both: OR keeps the total at 9
        assert_eq!(pair.image.ink_count(), 9);
        assert!(pair.image.ink_count() <= a.ink_count() + b.ink_count());
    }

    #[test]
    fn shorter_glyph_is_bottom_aligned() {
        let tall = GlyphImage::from_text("##\n##\n##\n").unwrap();
        let short = GlyphImage::from_text("##\n").unwrap();
        let pair = synth_touching(&tall, &short, 0, 0, 1).unwrap();
        assert_eq!(pair.image.rows(), 3);
        // the short glyph's ink sits on the bottom row of columns 2..4
        assert_eq!(pair.image.get(0, 2), 0);
        assert_eq!(pair.image.get(1, 2), 0);
        assert_eq!(pair.image.get(2, 2), 1);
        assert_eq!(pair.image.get(2, 3), 1);
    }

    #[test]
    fn excessive_overlap_is_rejected() {
        let a = GlyphImage::from_text("##\n").unwrap();
        let b = GlyphImage::from_text("###\n").unwrap();
        assert!(synth_touching(&a, &b, 2, 0, 0).is_err());
    }

    #[test]
    fn truth_range_is_interior() {
        let a = GlyphImage::from_text("####\n").unwrap();
        let b = GlyphImage::from_text("####\n").unwrap();
        for overlap in 0..3 {
            let pair = synth_touching(&a, &b, overlap, 0, 0).unwrap();
            assert!(pair.truth_lo >= 1);
            assert!(pair.truth_hi <= pair.image.cols() - 2);
            assert!(pair.truth_lo <= pair.truth_hi);
        }
    }

    #[test]
    fn corpus_generation_is_deterministic() {
        let (images, labels) = synthetic_digits(30, 20, 16, 9).unwrap();
        let glyphs: Vec<(GlyphImage, u8)> = images.into_iter().zip(labels).collect();
        let a = build_touching_corpus(&glyphs, 12, (1, 2), 5).unwrap();
        let b = build_touching_corpus(&glyphs, 12, (1, 2), 5).unwrap();
        assert_eq!(a, b);
        let c = build_touching_corpus(&glyphs, 12, (1, 2), 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn corpus_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (images, labels) = synthetic_digits(20, 20, 16, 1).unwrap();
        let glyphs: Vec<(GlyphImage, u8)> = images.into_iter().zip(labels).collect();
        let pairs = build_touching_corpus(&glyphs, 5, (0, 2), 3).unwrap();
        write_corpus(dir.path(), &pairs).unwrap();
        let loaded = load_corpus(dir.path()).unwrap();
        assert_eq!(loaded.len(), 5);
        for ((_, got), want) in loaded.iter().zip(&pairs) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn synthetic_digits_are_deterministic_and_labeled() {
        let (a_imgs, a_labels) = synthetic_digits(25, 28, 28, 7).unwrap();
        let (b_imgs, _) = synthetic_digits(25, 28, 28, 7).unwrap();
        assert_eq!(a_imgs, b_imgs);
        assert_eq!(a_labels[3], 3);
        assert_eq!(a_labels[13], 3);
        // same class, different seed position: jitter differs
        assert_ne!(a_imgs[3], a_imgs[13]);
        for img in &a_imgs {
            assert!(img.ink_count() > 10);
        }
    }

    #[test]
    fn stratified_subset_balances_classes() {
        let labels: Vec<u8> = (0..100).map(|i| (i % 10) as u8).collect();
        let idx = stratified_subset(&labels, 30, 10);
        assert_eq!(idx.len(), 30);
        for class in 0..10u8 {
            let count = idx.iter().filter(|&&i| labels[i] == class).count();
            assert_eq!(count, 3);
        }
        // shortfall: only class 0 present, quota tops up from scan order
        let skewed = vec![0u8; 10];
        let idx = stratified_subset(&skewed, 5, 10);
        assert_eq!(idx.len(), 5);
    }
}
