//! Benchmark machinery behind the `charkit` binary: the initializer
//! comparison sweep, the segmentation comparison, dataset sources, and the
//! deterministic CSV reports.

pub mod dataset;
pub mod grid;
pub mod init_bench;
pub mod report;
pub mod seg_bench;

pub use dataset::{load_digits, to_training_set, DataSource, DigitSet};
pub use init_bench::{
    run_init_compare, InitCompareConfig, InitCompareReport, Initializer, RunRecord, SummaryRow,
    DEEP_LAYERS,
};
pub use report::{fmt_sig6, median};
pub use seg_bench::{
    cut_is_correct, run_segment_compare, MethodAccuracy, SegRow, SegmentCompareConfig,
    SegmentCompareReport,
};
