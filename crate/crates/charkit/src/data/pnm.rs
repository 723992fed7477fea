//! Portable bitmap / graymap decoding and encoding.
//!
//! Formats per the netpbm conventions: P1 (ASCII bitmap), P4 (packed-bit
//! bitmap, rows padded to whole bytes, most significant bit first), P2
//! (ASCII graymap) and P5 (binary graymap, single-byte samples). Bitmaps
//! store 1 = black = ink directly; graymaps binarize at a threshold
//! (default `maxval / 2`) with dark pixels becoming ink.

use std::path::Path;

use crate::error::{Error, Result};
use crate::glyph::GlyphImage;

/// Decode a PBM (P1 or P4) file.
pub fn load_pbm(path: impl AsRef<Path>) -> Result<GlyphImage> {
    parse_pbm(&std::fs::read(path)?)
}

/// Decode a PGM (P2 or P5) file; `threshold = None` means `maxval / 2`.
pub fn load_pgm(path: impl AsRef<Path>, threshold: Option<u16>) -> Result<GlyphImage> {
    parse_pgm(&std::fs::read(path)?, threshold)
}

pub fn parse_pbm(bytes: &[u8]) -> Result<GlyphImage> {
    let mut cur = Cursor::new(bytes);
    let magic = cur.magic()?;
    match magic {
        b'1' => {
            let cols = cur.number("width")?;
            let rows = cur.number("height")?;
            check_dims(rows, cols, cur.pos)?;
            let mut pixels = Vec::with_capacity(rows * cols);
            while pixels.len() < rows * cols {
                match cur.next_token_byte()? {
                    b'0' => pixels.push(0u8),
                    b'1' => pixels.push(1u8),
                    other => {
                        return Err(Error::Parse {
                            offset: cur.pos - 1,
                            message: format!("expected 0 or 1, got {:?}", other as char),
                        })
                    }
                }
            }
            GlyphImage::new(rows, cols, pixels)
        }
        b'4' => {
            let cols = cur.number("width")?;
            let rows = cur.number("height")?;
            check_dims(rows, cols, cur.pos)?;
            cur.single_whitespace()?;
            let stride = cols.div_ceil(8);
            let need = stride * rows;
            if cur.remaining() < need {
                return Err(Error::Parse {
                    offset: cur.pos,
                    message: format!(
                        "truncated raster: need {need} bytes, have {}",
                        cur.remaining()
                    ),
                });
            }
            let mut pixels = Vec::with_capacity(rows * cols);
            for r in 0..rows {
                let row = &bytes[cur.pos + r * stride..cur.pos + (r + 1) * stride];
                for c in 0..cols {
                    let bit = (row[c / 8] >> (7 - c % 8)) & 1;
                    pixels.push(bit);
                }
            }
            GlyphImage::new(rows, cols, pixels)
        }
        other => Err(Error::Parse {
            offset: 0,
            message: format!("bad bitmap magic P{:?}", other as char),
        }),
    }
}

pub fn parse_pgm(bytes: &[u8], threshold: Option<u16>) -> Result<GlyphImage> {
    let mut cur = Cursor::new(bytes);
    let magic = cur.magic()?;
    if magic != b'2' && magic != b'5' {
        return Err(Error::Parse {
            offset: 0,
            message: format!("bad graymap magic P{:?}", magic as char),
        });
    }
    let cols = cur.number("width")?;
    let rows = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    check_dims(rows, cols, cur.pos)?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Parse {
            offset: cur.pos,
            message: format!("unsupported maxval {maxval} (expected 1..=255)"),
        });
    }
    let threshold = threshold.unwrap_or((maxval / 2) as u16);
    let mut samples = Vec::with_capacity(rows * cols);
    if magic == b'2' {
        while samples.len() < rows * cols {
            let v = cur.number("sample")?;
            if v > maxval {
                return Err(Error::Parse {
                    offset: cur.pos,
                    message: format!("sample {v} exceeds maxval {maxval}"),
                });
            }
            samples.push(v as u16);
        }
    } else {
        cur.single_whitespace()?;
        if cur.remaining() < rows * cols {
            return Err(Error::Parse {
                offset: cur.pos,
                message: format!(
                    "truncated raster: need {} bytes, have {}",
                    rows * cols,
                    cur.remaining()
                ),
            });
        }
        samples.extend(bytes[cur.pos..cur.pos + rows * cols].iter().map(|&b| b as u16));
    }
    // dark = ink
    let pixels = samples.iter().map(|&v| (v <= threshold) as u8).collect();
    GlyphImage::new(rows, cols, pixels)
}

/// Encode as ASCII PBM (P1).
pub fn encode_pbm_p1(img: &GlyphImage) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", img.cols(), img.rows()).into_bytes();
    for r in 0..img.rows() {
        let line: Vec<&str> = (0..img.cols())
            .map(|c| if img.get(r, c) == 1 { "1" } else { "0" })
            .collect();
        out.extend_from_slice(line.join(" ").as_bytes());
        out.push(b'\n');
    }
    out
}

/// Encode as packed binary PBM (P4).
pub fn encode_pbm_p4(img: &GlyphImage) -> Vec<u8> {
    let mut out = format!("P4\n{} {}\n", img.cols(), img.rows()).into_bytes();
    let stride = img.cols().div_ceil(8);
    for r in 0..img.rows() {
        let mut row = vec![0u8; stride];
        for c in 0..img.cols() {
            if img.get(r, c) == 1 {
                row[c / 8] |= 1 << (7 - c % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}

pub fn write_pbm(path: impl AsRef<Path>, img: &GlyphImage) -> Result<()> {
    Ok(std::fs::write(path, encode_pbm_p1(img))?)
}

fn check_dims(rows: usize, cols: usize, offset: usize) -> Result<()> {
    if rows == 0 || cols == 0 || rows.checked_mul(cols).is_none() {
        return Err(Error::Parse {
            offset,
            message: format!("bad dimensions {cols}x{rows}"),
        });
    }
    Ok(())
}

/// Byte cursor with netpbm token rules: whitespace separates tokens and `#`
/// comments run to end of line.
struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Cursor { bytes, pos: 0 }
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn magic(&mut self) -> Result<u8> {
        if self.bytes.len() < 2 || self.bytes[0] != b'P' {
            return Err(Error::Parse {
                offset: 0,
                message: "missing P* magic".into(),
            });
        }
        self.pos = 2;
        Ok(self.bytes[1])
    }

    fn skip_separators(&mut self) -> Result<()> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while let Some(&b) = self.bytes.get(self.pos) {
                        self.pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next_token_byte(&mut self) -> Result<u8> {
        self.skip_separators()?;
        let b = *self.bytes.get(self.pos).ok_or(Error::Parse {
            offset: self.pos,
            message: "unexpected end of file".into(),
        })?;
        self.pos += 1;
        Ok(b)
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_separators()?;
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse {
                offset: start,
                message: format!("expected {what}"),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: format!("{what} out of range"),
            })
    }

    /// The single whitespace byte that separates a binary header from its
    /// raster.
    fn single_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Parse {
                offset: self.pos,
                message: "expected whitespace before raster".into(),
            }),
        }
    }
}
