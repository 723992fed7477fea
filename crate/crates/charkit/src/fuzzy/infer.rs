//! The Mamdani inference step: fuzzify the four features, fire the rules,
//! aggregate the clipped consequents by sum, defuzzify by centroid.

use crate::error::{Error, Result};
use crate::fuzzy::config::FuzzyConfig;
use crate::fuzzy::features::{
    center_distance, crossing_count, normalize_complement, peak_to_valley, second_difference,
    vertical_projection, ColumnFeatures,
};
use crate::fuzzy::membership::{Level, Partition};
use crate::fuzzy::rules::{FeatureKind, RuleBase};
use crate::glyph::GlyphImage;

/// Number of points discretizing the `[0, 1]` output universe for the
/// centroid; fine enough that the quadrature error is far below the test
/// tolerances.
pub const SCORE_GRID_POINTS: usize = 201;

/// Per-column cut scores; `valid[i]` is false on boundary columns and blank
/// (zero-projection) columns, whose `rho` is pinned to the worst score 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CutScore {
    pub rho: Vec<f64>,
    pub valid: Vec<bool>,
}

impl CutScore {
    pub fn width(&self) -> usize {
        self.rho.len()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }
}

/// Everything computed for one column; `None` entries were not computable
/// (boundary or blank column).
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnReport {
    pub projection: usize,
    pub distance: f64,
    pub crossings: usize,
    pub g_tilde: Option<f64>,
    pub h_tilde: Option<f64>,
    pub rho: Option<f64>,
    pub valid: bool,
}

/// The input partitions with the crossing sets resolved against one image
/// height, ready for [`infer`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringPartitions<'a> {
    pub distance: &'a Partition,
    pub shape: &'a Partition,
    pub crossings: Partition,
}

impl<'a> ScoringPartitions<'a> {
    pub fn new(cfg: &'a FuzzyConfig, rows: usize) -> Result<Self> {
        Ok(ScoringPartitions {
            distance: &cfg.partitions.distance,
            shape: &cfg.partitions.shape,
            crossings: cfg.partitions.crossings.resolve(rows)?,
        })
    }

    fn membership(&self, features: &ColumnFeatures, ant_feature: FeatureKind, level: Level) -> Result<f64> {
        match ant_feature {
            FeatureKind::Distance => self.distance.membership(level, features.distance),
            FeatureKind::GTilde => self.shape.membership(level, features.g_tilde),
            FeatureKind::GBar => self.shape.membership(level, 1.0 - features.g_tilde),
            FeatureKind::HTilde => self.shape.membership(level, features.h_tilde),
            FeatureKind::Crossings => self
                .crossings
                .membership(level, features.crossings as f64),
        }
    }
}

/// Score one column's features through the rule base.
///
/// Antecedents fuzzify as `mu(value)` (or `1 - mu` when negated) and combine
/// by minimum; the residual rule fires with `max(0, 1 - max(explicit
/// strengths))`. Every rule clips its consequent set at its strength, the
/// clipped sets aggregate by pointwise sum over [`SCORE_GRID_POINTS`] points
/// of `[0, 1]`, and the score is the aggregate centroid. An identically zero
/// aggregate (possible only with degenerate custom partitions) scores 1, the
/// worst value.
pub fn infer(
    features: &ColumnFeatures,
    parts: &ScoringPartitions<'_>,
    rules: &RuleBase,
) -> Result<f64> {
    let mut strengths = Vec::with_capacity(rules.explicit_rules().len() + 1);
    for rule in rules.explicit_rules() {
        let mut s = 1.0f64;
        for ant in &rule.antecedents {
            let mu = parts.membership(features, ant.feature, ant.level)?;
            let v = if ant.negated { 1.0 - mu } else { mu };
            s = s.min(v);
        }
        strengths.push((s, rule.consequent));
    }
    let strongest = strengths.iter().map(|(s, _)| *s).fold(0.0, f64::max);
    strengths.push(((1.0 - strongest).max(0.0), rules.residual_consequent()));

    // Trapezoid-weighted sums: endpoints count half. The aggregate is
    // piecewise linear, so this keeps the centroid within a few 1e-6 of the
    // exact value even when a single clipped set carries all the mass.
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..SCORE_GRID_POINTS {
        let u = k as f64 / (SCORE_GRID_POINTS - 1) as f64;
        let w = if k == 0 || k == SCORE_GRID_POINTS - 1 {
            0.5
        } else {
            1.0
        };
        let mut agg = 0.0;
        for &(s, consequent) in &strengths {
            agg += s.min(parts.shape.membership(consequent, u)?);
        }
        num += w * u * agg;
        den += w * agg;
    }
    Ok(if den == 0.0 { 1.0 } else { num / den })
}

/// Compute every column's features and score.
pub fn score_columns_report(img: &GlyphImage, cfg: &FuzzyConfig) -> Result<Vec<ColumnReport>> {
    let n = img.cols();
    if n < 3 {
        return Err(Error::TooNarrow { width: n, min: 3 });
    }
    let projection = vertical_projection(img);
    let g_raw: Vec<Option<f64>> = (0..n)
        .map(|i| peak_to_valley(&projection, i, cfg.peak_mode))
        .collect();
    let h_raw: Vec<Option<f64>> = (0..n)
        .map(|i| second_difference(&projection, i))
        .collect();
    let valid: Vec<bool> = (0..n)
        .map(|i| g_raw[i].is_some() && h_raw[i].is_some())
        .collect();
    if !valid.iter().any(|&v| v) {
        return Err(Error::NoValidColumns);
    }
    let g_vals: Vec<f64> = g_raw.iter().map(|v| v.unwrap_or(0.0)).collect();
    let h_vals: Vec<f64> = h_raw.iter().map(|v| v.unwrap_or(0.0)).collect();
    let g_tilde = normalize_complement(&g_vals, &valid)?;
    let h_tilde = normalize_complement(&h_vals, &valid)?;

    let parts = ScoringPartitions::new(cfg, img.rows())?;
    let rules = cfg.rule_base();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let features = ColumnFeatures {
            projection: projection[i],
            distance: center_distance(i, n),
            crossings: crossing_count(img, i),
            g_tilde: g_tilde[i],
            h_tilde: h_tilde[i],
        };
        let rho = if valid[i] {
            Some(infer(&features, &parts, &rules)?)
        } else {
            None
        };
        out.push(ColumnReport {
            projection: projection[i],
            distance: features.distance,
            crossings: features.crossings,
            g_tilde: valid[i].then_some(g_tilde[i]),
            h_tilde: valid[i].then_some(h_tilde[i]),
            rho,
            valid: valid[i],
        });
    }
    Ok(out)
}

/// Compute the per-column cut scores; invalid columns carry `rho = 1`.
pub fn score_columns(img: &GlyphImage, cfg: &FuzzyConfig) -> Result<CutScore> {
    let report = score_columns_report(img, cfg)?;
    Ok(CutScore {
        rho: report.iter().map(|c| c.rho.unwrap_or(1.0)).collect(),
        valid: report.iter().map(|c| c.valid).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn features(distance: f64, crossings: usize, g_tilde: f64, h_tilde: f64) -> ColumnFeatures {
        ColumnFeatures {
            projection: 5,
            distance,
            crossings,
            g_tilde,
            h_tilde,
        }
    }

    #[test]
    fn full_rule1_activation_scores_low() {
        // d fully Low, g~ and h~ far from High, crossings fully Low:
        // rule 1 fires at strength 1, so Low dominates the aggregate.
        let cfg = FuzzyConfig::default();
        let parts = ScoringPartitions::new(&cfg, 10).unwrap();
        let rho = infer(&features(0.0, 0, 0.1, 0.1), &parts, &cfg.rule_base()).unwrap();
        assert!(rho < 0.4, "rho = {rho}");
    }

    #[test]
    fn residual_rule_alone_scores_high() {
        // d fully High kills rules 1-8 (each needs d Low/Medium/not-High),
        // g~/h~ High kill the rest; only the residual fires, at strength 1.
        let cfg = FuzzyConfig::default();
        let parts = ScoringPartitions::new(&cfg, 10).unwrap();
        let rho = infer(&features(1.0, 0, 0.9, 0.9), &parts, &cfg.rule_base()).unwrap();
        assert!(rho > 0.6, "rho = {rho}");
        // centroid of the full High set (0.6, 0.8, 1, 1) over [0,1]
        let expected = 0.85;
        assert!((rho - expected).abs() < 0.01, "rho = {rho}");
    }

    #[test]
    fn score_is_always_inside_unit_interval() {
        let cfg = FuzzyConfig::default();
        let parts = ScoringPartitions::new(&cfg, 10).unwrap();
        let rules = cfg.rule_base();
        for d in [0.0, 0.3, 0.5, 0.8, 1.0] {
            for f in [0usize, 2, 5, 9] {
                for g in [0.0, 0.4, 1.0] {
                    for h in [0.0, 0.6, 1.0] {
                        let rho = infer(&features(d, f, g, h), &parts, &rules).unwrap();
                        assert!((0.0..=1.0).contains(&rho));
                    }
                }
            }
        }
    }

    #[test]
    fn score_columns_flags_boundaries_and_blanks() {
        let img = GlyphImage::from_text("#.#.#\n#.#.#\n#.#.#\n").unwrap();
        let scores = score_columns(&img, &FuzzyConfig::default()).unwrap();
        assert_eq!(scores.valid, vec![false, false, true, false, false]);
        assert_eq!(scores.rho[0], 1.0);
        assert_eq!(scores.rho[1], 1.0); // blank interior column
        assert!(scores.rho[2] < 1.0);
    }

    #[test]
    fn score_columns_rejects_narrow_images() {
        let img = GlyphImage::from_text("##\n##\n").unwrap();
        assert!(matches!(
            score_columns(&img, &FuzzyConfig::default()),
            Err(Error::TooNarrow { .. })
        ));
    }

    #[test]
    fn score_columns_errors_when_no_column_is_scorable() {
        // every interior column blank
        let img = GlyphImage::from_text("#...#\n#...#\n").unwrap();
        assert!(matches!(
            score_columns(&img, &FuzzyConfig::default()),
            Err(Error::NoValidColumns)
        ));
    }

    #[test]
    fn symmetric_image_scores_symmetrically() {
        let img = GlyphImage::from_text(
            "##.##\n\
             ##.##\n\
             #####\n\
             ##.##\n",
        )
        .unwrap();
        let scores = score_columns(&img, &FuzzyConfig::default()).unwrap();
        let n = scores.rho.len();
        for i in 0..n {
            assert_eq!(scores.valid[i], scores.valid[n - 1 - i]);
            assert!((scores.rho[i] - scores.rho[n - 1 - i]).abs() < 1e-12);
        }
    }
}
