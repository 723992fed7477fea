//! Dataset ingestion and synthesis: IDX and portable-bitmap files, glyph
//! encoding, and touching-pair corpora with ground truth.

mod encode;
mod idx;
mod pnm;
mod synth;

pub use encode::{decode_one_hot, encode_glyph, one_hot, pixel_levels, target_levels};
pub use idx::{
    encode_idx_images, encode_idx_labels, load_idx_images, load_idx_labels, parse_idx_images,
    parse_idx_labels, write_idx_images, write_idx_labels, IdxMeta, IMAGE_MAGIC, INK_THRESHOLD,
    LABEL_MAGIC,
};
pub use pnm::{encode_pbm_p1, encode_pbm_p4, load_pbm, load_pgm, parse_pbm, parse_pgm, write_pbm};
pub use synth::{
    build_touching_corpus, load_corpus, render_digit, stratified_subset, synth_touching,
    synthetic_digits, write_corpus, TouchingPair,
};
