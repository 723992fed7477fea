//! Binarized pixel matrices.

use crate::error::{Error, Result};

/// A binary image: `rows x cols` entries in {0, 1}, 1 = black ink, stored
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlyphImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GlyphImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if pixels.len() != rows * cols {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels for {rows}x{cols}, got {}",
                rows * cols,
                pixels.len()
            )));
        }
        if let Some(pos) = pixels.iter().position(|&p| p > 1) {
            return Err(Error::InvalidImage(format!(
                "pixel {pos} has value {}, entries must be 0 or 1",
                pixels[pos]
            )));
        }
        Ok(GlyphImage { rows, cols, pixels })
    }

    /// All-white image.
    pub fn blank(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0; rows * cols])
    }

    /// Parse ASCII art: `#` or `1` is ink, `.`, `0` or space is white; one
    /// line per row, all lines equally long.
    pub fn from_text(art: &str) -> Result<Self> {
        let lines: Vec<&str> = art.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.is_empty() {
            return Err(Error::InvalidImage("empty text image".into()));
        }
        let cols = lines[0].chars().count();
        let mut pixels = Vec::with_capacity(lines.len() * cols);
        for line in &lines {
            if line.chars().count() != cols {
                return Err(Error::InvalidImage(format!(
                    "ragged text image: expected {cols} columns, got {}",
                    line.chars().count()
                )));
            }
            for ch in line.chars() {
                pixels.push(match ch {
                    '#' | '1' => 1,
                    '.' | '0' | ' ' => 0,
                    other => {
                        return Err(Error::InvalidImage(format!(
                            "unexpected character {other:?} in text image"
                        )))
                    }
                });
            }
        }
        Self::new(lines.len(), cols, pixels)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.get(r, c) == 1 { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Alias of [`cols`](Self::cols): the width along the cut axis.
    pub fn width(&self) -> usize {
        self.cols
    }

    pub fn height(&self) -> usize {
        self.rows
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        debug_assert!(value <= 1);
        self.pixels[row * self.cols + col] = value;
    }

    pub fn ink_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    pub fn column_ink(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col) == 1).count()
    }

    pub fn is_column_blank(&self, col: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, col) == 0)
    }

    /// Rows and columns swapped; lets the column pipeline cut along rows.
    pub fn transpose(&self) -> GlyphImage {
        let mut pixels = vec![0u8; self.pixels.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                pixels[c * self.rows + r] = self.get(r, c);
            }
        }
        GlyphImage {
            rows: self.cols,
            cols: self.rows,
            pixels,
        }
    }

    /// Mirror left-right.
    pub fn flip_horizontal(&self) -> GlyphImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for r in 0..self.rows {
            for c in (0..self.cols).rev() {
                pixels.push(self.get(r, c));
            }
        }
        GlyphImage {
            rows: self.rows,
            cols: self.cols,
            pixels,
        }
    }

    /// Copy of the column range `[from, to)`, keeping every row.
    pub fn column_slice(&self, from: usize, to: usize) -> Result<GlyphImage> {
        if from >= to || to > self.cols {
            return Err(Error::InvalidImage(format!(
                "bad column slice [{from}, {to}) of width {}",
                self.cols
            )));
        }
        let mut pixels = Vec::with_capacity(self.rows * (to - from));
        for r in 0..self.rows {
            pixels.extend_from_slice(&self.pixels[r * self.cols + from..r * self.cols + to]);
        }
        GlyphImage::new(self.rows, to - from, pixels)
    }

    /// Copy with white rows added above and below.
    pub fn pad_rows(&self, top: usize, bottom: usize) -> GlyphImage {
        let rows = self.rows + top + bottom;
        let mut pixels = vec![0u8; rows * self.cols];
        pixels[top * self.cols..(top + self.rows) * self.cols].copy_from_slice(&self.pixels);
        GlyphImage {
            rows,
            cols: self.cols,
            pixels,
        }
    }

    /// Tight bounding box of the ink, or `None` for an all-white image.
    pub fn crop_to_ink(&self) -> Option<GlyphImage> {
        let mut r0 = self.rows;
        let mut r1 = 0;
        let mut c0 = self.cols;
        let mut c1 = 0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) == 1 {
                    r0 = r0.min(r);
                    r1 = r1.max(r);
                    c0 = c0.min(c);
                    c1 = c1.max(c);
                }
            }
        }
        if r0 > r1 {
            return None;
        }
        let mut pixels = Vec::with_capacity((r1 - r0 + 1) * (c1 - c0 + 1));
        for r in r0..=r1 {
            pixels.extend_from_slice(&self.pixels[r * self.cols + c0..r * self.cols + c1 + 1]);
        }
        Some(GlyphImage {
            rows: r1 - r0 + 1,
            cols: c1 - c0 + 1,
            pixels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let img = GlyphImage::from_text("#.#\n.#.\n#.#\n").unwrap();
        assert_eq!(img.rows(), 3);
        assert_eq!(img.cols(), 3);
        assert_eq!(img.to_text(), "#.#\n.#.\n#.#\n");
        assert_eq!(img.ink_count(), 5);
    }

    #[test]
    fn rejects_non_binary_and_ragged() {
        assert!(GlyphImage::new(1, 2, vec![0, 2]).is_err());
        assert!(GlyphImage::new(2, 2, vec![0, 1, 1]).is_err());
        assert!(GlyphImage::from_text("##\n#\n").is_err());
    }

    #[test]
    fn transpose_swaps_axes() {
        let img = GlyphImage::from_text("##.\n...\n").unwrap();
        let t = img.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.cols(), 2);
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.get(1, 0), 1);
        assert_eq!(t.get(2, 0), 0);
        assert_eq!(img.transpose().transpose(), img);
    }

    #[test]
    fn flip_mirrors_columns() {
        let img = GlyphImage::from_text("#..\n.#.\n").unwrap();
        let f = img.flip_horizontal();
        assert_eq!(f.to_text(), "..#\n.#.\n");
        assert_eq!(f.flip_horizontal(), img);
    }

    #[test]
    fn column_slice_keeps_rows() {
        let img = GlyphImage::from_text("#.##\n..#.\n").unwrap();
        let left = img.column_slice(0, 2).unwrap();
        let right = img.column_slice(2, 4).unwrap();
        assert_eq!(left.to_text(), "#.\n..\n");
        assert_eq!(right.to_text(), "##\n#.\n");
        assert!(img.column_slice(2, 2).is_err());
        assert!(img.column_slice(3, 5).is_err());
    }

    #[test]
    fn crop_finds_bounding_box() {
        let img = GlyphImage::from_text("....\n.##.\n..#.\n....\n").unwrap();
        let cropped = img.crop_to_ink().unwrap();
        assert_eq!(cropped.to_text(), "##\n.#\n");
        assert!(GlyphImage::blank(3, 3).unwrap().crop_to_ink().is_none());
    }
}
