//! IDX container decoding and encoding (the MNIST file format).
//!
//! Big-endian layout: magic (`0x00000803` for image files, `0x00000801` for
//! label files), one `u32` per dimension, then the raw bytes. Grayscale
//! images binarize at a byte threshold of 128 with ink stored high, so
//! `byte >= 128` becomes ink.

use std::path::Path;

use crate::error::{Error, Result};
use crate::glyph::GlyphImage;

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

/// Binarization threshold applied to grayscale rasters.
pub const INK_THRESHOLD: u8 = 128;

/// Shape information of a decoded image file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdxMeta {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Decode an IDX image file into binarized glyphs.
pub fn load_idx_images(path: impl AsRef<Path>) -> Result<(Vec<GlyphImage>, IdxMeta)> {
    parse_idx_images(&std::fs::read(path)?)
}

pub fn parse_idx_images(bytes: &[u8]) -> Result<(Vec<GlyphImage>, IdxMeta)> {
    let mut off = 0usize;
    let magic = read_u32_be(bytes, &mut off, "magic")?;
    if magic != IMAGE_MAGIC {
        return Err(Error::Parse {
            offset: 0,
            message: format!("bad image magic {magic:#010x}, expected {IMAGE_MAGIC:#010x}"),
        });
    }
    let count = read_u32_be(bytes, &mut off, "image count")? as usize;
    let rows = read_u32_be(bytes, &mut off, "row count")? as usize;
    let cols = read_u32_be(bytes, &mut off, "column count")? as usize;
    let per_image = rows
        .checked_mul(cols)
        .ok_or_else(|| overflow_at(8, rows, cols))?;
    let total = count
        .checked_mul(per_image)
        .ok_or_else(|| overflow_at(4, count, per_image))?;
    if bytes.len() - off != total {
        return Err(Error::Parse {
            offset: off,
            message: format!(
                "raster length mismatch: header implies {total} bytes, file has {}",
                bytes.len() - off
            ),
        });
    }
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            offset: 8,
            message: format!("degenerate image dimensions {rows}x{cols}"),
        });
    }
    let mut images = Vec::with_capacity(count);
    for _ in 0..count {
        let raster = &bytes[off..off + per_image];
        off += per_image;
        let pixels = raster
            .iter()
            .map(|&b| (b >= INK_THRESHOLD) as u8)
            .collect();
        images.push(GlyphImage::new(rows, cols, pixels)?);
    }
    Ok((images, IdxMeta { count, rows, cols }))
}

/// Decode an IDX label file.
pub fn load_idx_labels(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    parse_idx_labels(&std::fs::read(path)?)
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let mut off = 0usize;
    let magic = read_u32_be(bytes, &mut off, "magic")?;
    if magic != LABEL_MAGIC {
        return Err(Error::Parse {
            offset: 0,
            message: format!("bad label magic {magic:#010x}, expected {LABEL_MAGIC:#010x}"),
        });
    }
    let count = read_u32_be(bytes, &mut off, "label count")? as usize;
    if bytes.len() - off != count {
        return Err(Error::Parse {
            offset: off,
            message: format!(
                "label data mismatch: header implies {count} bytes, file has {}",
                bytes.len() - off
            ),
        });
    }
    Ok(bytes[off..].to_vec())
}

/// Encode binary glyphs as an IDX image file; ink writes as 255, so a
/// write-read round trip reproduces the glyphs exactly.
pub fn encode_idx_images(images: &[GlyphImage]) -> Result<Vec<u8>> {
    let (rows, cols) = match images.first() {
        Some(img) => (img.rows(), img.cols()),
        None => (0, 0),
    };
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    out.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
    out.extend_from_slice(&(images.len() as u32).to_be_bytes());
    out.extend_from_slice(&(rows as u32).to_be_bytes());
    out.extend_from_slice(&(cols as u32).to_be_bytes());
    for img in images {
        if img.rows() != rows || img.cols() != cols {
            return Err(Error::InvalidImage(format!(
                "all images must share dimensions {rows}x{cols}, found {}x{}",
                img.rows(),
                img.cols()
            )));
        }
        out.extend(img.pixels().iter().map(|&p| if p == 1 { 255u8 } else { 0 }));
    }
    Ok(out)
}

pub fn write_idx_images(path: impl AsRef<Path>, images: &[GlyphImage]) -> Result<()> {
    Ok(std::fs::write(path, encode_idx_images(images)?)?)
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

pub fn write_idx_labels(path: impl AsRef<Path>, labels: &[u8]) -> Result<()> {
    Ok(std::fs::write(path, encode_idx_labels(labels))?)
}

fn read_u32_be(bytes: &[u8], off: &mut usize, what: &str) -> Result<u32> {
    if *off + 4 > bytes.len() {
        return Err(Error::Parse {
            offset: *off,
            message: format!("truncated file while reading {what}"),
        });
    }
    let v = u32::from_be_bytes(bytes[*off..*off + 4].try_into().unwrap());
    *off += 4;
    Ok(v)
}

fn overflow_at(offset: usize, a: usize, b: usize) -> Error {
    Error::Parse {
        offset,
        message: format!("dimension overflow: {a} * {b} exceeds the address space"),
    }
}
