//! Turning cut scores into cuts.

use crate::error::{Error, Result};
use crate::fuzzy::config::FuzzyConfig;
use crate::fuzzy::features::{
    center_distance, peak_to_valley, second_difference, vertical_projection,
};
use crate::fuzzy::infer::{score_columns, CutScore};
use crate::glyph::GlyphImage;

/// How equal-score candidates are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smaller distance from the center column wins, then the lower index.
    #[default]
    CenterThenIndex,
    /// The lower index wins outright.
    IndexOnly,
}

/// Single-feature baselines: cut at the maximum of the raw peak-to-valley
/// function, or of the raw second difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    GOnly,
    HOnly,
}

/// Index of the lowest-score valid column; ties resolve per `tie`.
pub fn select_cut(scores: &CutScore, tie: TieBreak) -> Result<usize> {
    let n = scores.rho.len();
    let mut best: Option<usize> = None;
    for i in 0..n {
        if !scores.valid[i] {
            continue;
        }
        best = Some(match best {
            None => i,
            Some(b) => {
                if scores.rho[i] < scores.rho[b] {
                    i
                } else if scores.rho[i] == scores.rho[b]
                    && tie == TieBreak::CenterThenIndex
                    && center_distance(i, n) < center_distance(b, n)
                {
                    i
                } else {
                    b
                }
            }
        });
    }
    best.ok_or(Error::NoValidColumns)
}

/// The middle of the widest all-white column run that has ink on both sides,
/// if any. Such a column separates two glyphs outright, no scoring needed.
pub fn blank_separator(img: &GlyphImage) -> Option<usize> {
    let projection = vertical_projection(img);
    let n = projection.len();
    let mut best: Option<(usize, usize)> = None; // (start, len)
    let mut i = 0;
    while i < n {
        if projection[i] == 0 {
            let start = i;
            while i < n && projection[i] == 0 {
                i += 1;
            }
            let len = i - start;
            let ink_before = start > 0;
            let ink_after = i < n;
            if ink_before && ink_after {
                match best {
                    Some((_, blen)) if blen >= len => {}
                    _ => best = Some((start, len)),
                }
            }
        } else {
            i += 1;
        }
    }
    best.map(|(start, len)| start + len / 2)
}

/// The single cut position the scorer proposes: a blank separator when one
/// exists, otherwise the lowest-score column.
pub fn fuzzy_cut(img: &GlyphImage, cfg: &FuzzyConfig) -> Result<usize> {
    if let Some(cut) = blank_separator(img) {
        return Ok(cut);
    }
    let scores = score_columns(img, cfg)?;
    select_cut(&scores, cfg.tie_break)
}

/// Split the pattern into at most `max_chars` pieces.
///
/// Repeatedly splits the widest still-splittable piece (leftmost on width
/// ties): at the blank separator when one exists, otherwise at the fuzzy
/// cut. Pieces narrower than 3 columns or without scorable columns stay
/// whole. Every piece keeps the original row count.
pub fn segment(img: &GlyphImage, max_chars: usize, cfg: &FuzzyConfig) -> Result<Vec<GlyphImage>> {
    if max_chars == 0 {
        return Err(Error::InvalidConfig("max_chars must be at least 1".into()));
    }
    let mut pieces = vec![img.clone()];
    while pieces.len() < max_chars {
        // widest splittable piece first, leftmost on ties
        let mut order: Vec<usize> = (0..pieces.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(pieces[i].cols()), i));
        let mut split_at: Option<(usize, usize)> = None;
        for &idx in &order {
            if pieces[idx].cols() < 3 {
                continue;
            }
            if let Some(cut) = try_cut(&pieces[idx], cfg) {
                split_at = Some((idx, cut));
                break;
            }
        }
        let Some((idx, cut)) = split_at else { break };
        let piece = pieces.remove(idx);
        let left = piece.column_slice(0, cut)?;
        let right = piece.column_slice(cut, piece.cols())?;
        pieces.insert(idx, right);
        pieces.insert(idx, left);
    }
    Ok(pieces)
}

fn try_cut(piece: &GlyphImage, cfg: &FuzzyConfig) -> Option<usize> {
    if let Some(cut) = blank_separator(piece) {
        return Some(cut);
    }
    let scores = score_columns(piece, cfg).ok()?;
    select_cut(&scores, cfg.tie_break).ok()
}

/// Cut position proposed by one raw feature alone: the argmax of `g` (over
/// interior columns) or of `h` (over interior non-blank columns), ties to
/// the center-closest column, then the lower index.
pub fn baseline_cut(img: &GlyphImage, method: BaselineMethod, cfg: &FuzzyConfig) -> Result<usize> {
    let n = img.cols();
    if n < 3 {
        return Err(Error::TooNarrow { width: n, min: 3 });
    }
    let projection = vertical_projection(img);
    let values: Vec<Option<f64>> = (0..n)
        .map(|i| match method {
            BaselineMethod::GOnly => peak_to_valley(&projection, i, cfg.peak_mode),
            BaselineMethod::HOnly => second_difference(&projection, i),
        })
        .collect();
    let mut best: Option<usize> = None;
    for i in 0..n {
        let Some(v) = values[i] else { continue };
        best = Some(match best {
            None => i,
            Some(b) => {
                let bv = values[b].unwrap();
                if v > bv {
                    i
                } else if v == bv
                    && cfg.tie_break == TieBreak::CenterThenIndex
                    && center_distance(i, n) < center_distance(b, n)
                {
                    i
                } else {
                    b
                }
            }
        });
    }
    best.ok_or(Error::NoValidColumns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_cut_picks_unique_minimum() {
        let scores = CutScore {
            rho: vec![0.9, 0.2, 0.9],
            valid: vec![true, true, true],
        };
        assert_eq!(select_cut(&scores, TieBreak::CenterThenIndex).unwrap(), 1);
    }

    #[test]
    fn select_cut_breaks_ties_toward_center_then_index() {
        let scores = CutScore {
            rho: vec![0.2, 0.9, 0.2],
            valid: vec![true, true, true],
        };
        // width 3, center 1: columns 0 and 2 are equally distant -> index
        assert_eq!(select_cut(&scores, TieBreak::CenterThenIndex).unwrap(), 0);

        let scores = CutScore {
            rho: vec![0.5, 0.9, 0.5, 0.5, 0.9],
            valid: vec![true, true, true, true, true],
        };
        // center 2: column 2 is closest among the tied {0, 2, 3}
        assert_eq!(select_cut(&scores, TieBreak::CenterThenIndex).unwrap(), 2);
        assert_eq!(select_cut(&scores, TieBreak::IndexOnly).unwrap(), 0);
    }

    #[test]
    fn select_cut_skips_invalid_and_errors_when_none() {
        let scores = CutScore {
            rho: vec![0.1, 0.9, 0.9],
            valid: vec![false, false, true],
        };
        assert_eq!(select_cut(&scores, TieBreak::CenterThenIndex).unwrap(), 2);
        let none = CutScore {
            rho: vec![1.0, 1.0],
            valid: vec![false, false],
        };
        assert!(matches!(
            select_cut(&none, TieBreak::CenterThenIndex),
            Err(Error::NoValidColumns)
        ));
    }

    #[test]
    fn blank_separator_finds_the_gap() {
        let img = GlyphImage::from_text("##.##\n##.##\n").unwrap();
        assert_eq!(blank_separator(&img), Some(2));
        // margins do not count: no ink on the left of the run
        let margins = GlyphImage::from_text("..##.\n..##.\n").unwrap();
        assert_eq!(blank_separator(&margins), None);
        // widest run wins; middle of [4, 6] is 5
        let wide = GlyphImage::from_text("##.#...##\n##.#...##\n").unwrap();
        assert_eq!(blank_separator(&wide), Some(5));
    }

    #[test]
    fn segment_is_identity_for_one_char() {
        let img = GlyphImage::from_text("#.#\n###\n").unwrap();
        let pieces = segment(&img, 1, &FuzzyConfig::default()).unwrap();
        assert_eq!(pieces, vec![img]);
    }

    #[test]
    fn segment_splits_at_the_blank_column() {
        let img = GlyphImage::from_text(
            "##.##\n\
             ##.##\n\
             ##.##\n",
        )
        .unwrap();
        let pieces = segment(&img, 2, &FuzzyConfig::default()).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].to_text(), "##\n##\n##\n");
        assert_eq!(pieces[1].to_text(), ".##\n.##\n.##\n");
        assert_eq!(pieces[0].rows(), img.rows());
        assert_eq!(pieces[1].rows(), img.rows());
    }

    #[test]
    fn segment_recurses_up_to_max_chars() {
        let img = GlyphImage::from_text(
            "##.##.##\n\
             ##.##.##\n",
        )
        .unwrap();
        let pieces = segment(&img, 3, &FuzzyConfig::default()).unwrap();
        assert_eq!(pieces.len(), 3);
        let total: usize = pieces.iter().map(|p| p.cols()).sum();
        assert_eq!(total, img.cols());
    }

    #[test]
    fn segment_stops_when_nothing_is_splittable() {
        let img = GlyphImage::from_text("##\n##\n").unwrap();
        let pieces = segment(&img, 4, &FuzzyConfig::default()).unwrap();
        assert_eq!(pieces.len(), 1);
    }

    #[test]
    fn baseline_g_picks_the_deep_valley() {
        // projection [5, 0, 5]: g(1) = (5 - 0 + 5) / 1 = 10 is the maximum
        let img = GlyphImage::from_text(
            "#.#\n#.#\n#.#\n#.#\n#.#\n",
        )
        .unwrap();
        assert_eq!(
            baseline_cut(&img, BaselineMethod::GOnly, &FuzzyConfig::default()).unwrap(),
            1
        );
        // h is invalid on the blank column and there is no other interior one
        assert!(baseline_cut(&img, BaselineMethod::HOnly, &FuzzyConfig::default()).is_err());
    }

    #[test]
    fn baseline_flat_profile_ties_to_center() {
        let img = GlyphImage::from_text("#####\n#####\n").unwrap();
        // g = 0 everywhere interior; center column 2 wins the tie
        assert_eq!(
            baseline_cut(&img, BaselineMethod::GOnly, &FuzzyConfig::default()).unwrap(),
            2
        );
        assert_eq!(
            baseline_cut(&img, BaselineMethod::HOnly, &FuzzyConfig::default()).unwrap(),
            2
        );
    }
}
