//! Fuzzy-logic cut scoring for touching characters.
//!
//! Four per-column features (center distance, crossing count and the two
//! normalized projection-profile functions) feed a fixed nine-rule Mamdani
//! system whose centroid output `rho(i)` qualifies column `i` as a cut
//! position — low scores mark good cuts. Rows are handled by transposing the
//! image and reusing the column pipeline.

mod config;
mod features;
mod infer;
mod membership;
mod rules;
mod segment;

pub use config::FuzzyConfig;
pub use features::{
    center_distance, crossing_count, normalize_complement, peak_to_valley, second_difference,
    vertical_projection, ColumnFeatures, PeakMode,
};
pub use infer::{
    infer, score_columns, score_columns_report, ColumnReport, CutScore, ScoringPartitions,
    SCORE_GRID_POINTS,
};
pub use membership::{CrossingPoint, CrossingSets, FuzzyPartitions, Level, Partition, Trapezoid};
pub use rules::{Antecedent, FeatureKind, Rule, RuleBase};
pub use segment::{
    baseline_cut, blank_separator, fuzzy_cut, segment, select_cut, BaselineMethod, TieBreak,
};
