//! The fuzzy pipeline against the brute-force second implementation, plus
//! the symmetry, dominance and ordering properties.

use charkit::data::{build_touching_corpus, synthetic_digits};
use charkit::fuzzy::{
    fuzzy_cut, infer, score_columns, segment, select_cut, ColumnFeatures, CutScore, FuzzyConfig,
    ScoringPartitions, TieBreak,
};
use charkit::glyph::GlyphImage;
use charkit_testkit::{brute_infer, brute_score_columns, BrutePartitions};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_image(rng: &mut impl Rng, min_side: usize) -> GlyphImage {
    let rows = rng.gen_range(min_side..18);
    let cols = rng.gen_range(min_side.max(4)..14);
    let pixels = (0..rows * cols)
        .map(|_| u8::from(rng.gen_bool(0.45)))
        .collect();
    GlyphImage::new(rows, cols, pixels).unwrap()
}

#[test]
fn per_column_scores_match_the_brute_force_pipeline() {
    let cfg = FuzzyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked_columns = 0usize;
    let mut images = 0usize;
    while images < 150 {
        let img = random_image(&mut rng, 4);
        let Ok(scores) = score_columns(&img, &cfg) else {
            continue;
        };
        images += 1;
        let brute = brute_score_columns(&img, &cfg);
        for i in 0..img.cols() {
            match brute[i] {
                Some(b) => {
                    assert!(scores.valid[i]);
                    assert!(
                        (scores.rho[i] - b).abs() < 1e-3,
                        "column {i}: {} vs brute {b}",
                        scores.rho[i]
                    );
                    checked_columns += 1;
                }
                None => assert!(!scores.valid[i]),
            }
        }
    }
    assert!(checked_columns > 400);
}

#[test]
fn infer_matches_brute_infer_on_random_features() {
    let cfg = FuzzyConfig::default();
    let rows = 12;
    let parts = ScoringPartitions::new(&cfg, rows).unwrap();
    let rules = cfg.rule_base();
    let brute_parts = BrutePartitions::from_config(&cfg, rows);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let features = ColumnFeatures {
            projection: rng.gen_range(0..12),
            distance: rng.gen_range(0.0..1.0),
            crossings: rng.gen_range(0..12),
            g_tilde: rng.gen_range(0.0..1.0),
            h_tilde: rng.gen_range(0.0..1.0),
        };
        let ours = infer(&features, &parts, &rules).unwrap();
        let brute = brute_infer(
            features.distance,
            features.crossings,
            features.g_tilde,
            features.h_tilde,
            &brute_parts,
            cfg.rule7_on_complement,
        );
        assert!((ours - brute).abs() < 1e-3, "{ours} vs {brute}");
    }
}

#[test]
fn raw_rule7_variant_also_matches_the_oracle() {
    let mut cfg = FuzzyConfig::default();
    cfg.rule7_on_complement = false;
    let parts = ScoringPartitions::new(&cfg, 10).unwrap();
    let rules = cfg.rule_base();
    let brute_parts = BrutePartitions::from_config(&cfg, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let features = ColumnFeatures {
            projection: 5,
            distance: rng.gen_range(0.0..1.0),
            crossings: rng.gen_range(0..10),
            g_tilde: rng.gen_range(0.0..1.0),
            h_tilde: rng.gen_range(0.0..1.0),
        };
        let ours = infer(&features, &parts, &rules).unwrap();
        let brute = brute_infer(
            features.distance,
            features.crossings,
            features.g_tilde,
            features.h_tilde,
            &brute_parts,
            false,
        );
        assert!((ours - brute).abs() < 1e-3);
    }
}

#[test]
fn crossing_regimes_order_the_score() {
    // Between the fully-Low and fully-High crossing regimes the score never
    // drops: rules 1-3 (concluding Low) demand few crossings, their
    // many-crossing twins 4-6 conclude Medium. Intermediate crossing counts
    // sit between the regimes but are not themselves monotone.
    let cfg = FuzzyConfig::default();
    let parts = ScoringPartitions::new(&cfg, 12).unwrap();
    let rules = cfg.rule_base();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..400 {
        let mut features = ColumnFeatures {
            projection: 6,
            distance: rng.gen_range(0.0..1.0),
            crossings: 0,
            g_tilde: rng.gen_range(0.0..1.0),
            h_tilde: rng.gen_range(0.0..1.0),
        };
        let low = infer(&features, &parts, &rules).unwrap();
        features.crossings = 12;
        let high = infer(&features, &parts, &rules).unwrap();
        assert!(high >= low - 1e-9, "low-f {low} > high-f {high}");
    }
}

#[test]
fn select_cut_matches_a_linear_scan_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..400 {
        let n = rng.gen_range(3..20);
        let rho: Vec<f64> = (0..n)
            .map(|_| (rng.gen_range(0..8) as f64) / 8.0) // coarse grid forces ties
            .collect();
        let valid: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.8)).collect();
        let scores = CutScore {
            rho: rho.clone(),
            valid: valid.clone(),
        };
        // oracle: stable sort of candidate indices by the full tie-break key
        let center = (n - 1) as f64 / 2.0;
        let mut candidates: Vec<usize> = (0..n).filter(|&i| valid[i]).collect();
        candidates.sort_by(|&a, &b| {
            rho[a]
                .partial_cmp(&rho[b])
                .unwrap()
                .then(
                    (center - a as f64)
                        .abs()
                        .partial_cmp(&(center - b as f64).abs())
                        .unwrap(),
                )
                .then(a.cmp(&b))
        });
        match (candidates.first(), select_cut(&scores, TieBreak::CenterThenIndex)) {
            (Some(&want), Ok(got)) => assert_eq!(got, want),
            (None, Err(_)) => {}
            (want, got) => panic!("oracle {want:?} vs {got:?}"),
        }
    }
}

#[test]
fn segmenting_generated_pairs_lands_near_the_seam() {
    let (images, labels) = synthetic_digits(60, 24, 20, 11).unwrap();
    let glyphs: Vec<(GlyphImage, u8)> = images.into_iter().zip(labels).collect();
    let pairs = build_touching_corpus(&glyphs, 100, (1, 2), 77).unwrap();
    let cfg = FuzzyConfig::default();
    let mut hits = 0usize;
    for pair in &pairs {
        let pieces = segment(&pair.image, 2, &cfg).unwrap();
        if pieces.len() != 2 {
            continue;
        }
        let cut = pieces[0].cols();
        if cut + 1 >= pair.truth_lo && cut <= pair.truth_hi + 1 {
            hits += 1;
        }
    }
    assert!(hits >= 90, "only {hits}/100 cuts within tolerance");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn mirroring_the_image_mirrors_the_scores(
        rows in 3usize..12,
        cols in 4usize..12,
        seed in 0u64..10_000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels: Vec<u8> = (0..rows * cols).map(|_| u8::from(rng.gen_bool(0.5))).collect();
        let img = GlyphImage::new(rows, cols, pixels).unwrap();
        let cfg = FuzzyConfig::default();
        let ours = score_columns(&img, &cfg);
        let mirrored = score_columns(&img.flip_horizontal(), &cfg);
        match (ours, mirrored) {
            (Ok(a), Ok(b)) => {
                for i in 0..cols {
                    prop_assert_eq!(a.valid[i], b.valid[cols - 1 - i]);
                    prop_assert!((a.rho[i] - b.rho[cols - 1 - i]).abs() < 1e-12);
                }
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric outcome: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn interior_blank_columns_always_win(
        rows in 2usize..10,
        left_cols in 1usize..6,
        right_cols in 1usize..6,
        gap in 1usize..3,
        seed in 0u64..10_000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols = left_cols + gap + right_cols;
        let mut img = GlyphImage::blank(rows, cols).unwrap();
        // guarantee ink on both sides of the gap
        for c in 0..left_cols {
            for r in 0..rows {
                if rng.gen_bool(0.6) { img.set(r, c, 1); }
            }
            img.set(rng.gen_range(0..rows), c, 1);
        }
        for c in (left_cols + gap)..cols {
            for r in 0..rows {
                if rng.gen_bool(0.6) { img.set(r, c, 1); }
            }
            img.set(rng.gen_range(0..rows), c, 1);
        }
        let cut = fuzzy_cut(&img, &FuzzyConfig::default()).unwrap();
        prop_assert!(cut >= left_cols && cut < left_cols + gap,
            "cut {} outside blank run [{}, {})", cut, left_cols, left_cols + gap);
        // and the two-piece segmentation splits inside the gap as well
        let pieces = segment(&img, 2, &FuzzyConfig::default()).unwrap();
        prop_assert_eq!(pieces.len(), 2);
    }
}
