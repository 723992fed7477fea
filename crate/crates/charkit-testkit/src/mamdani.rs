//! Brute-force Mamdani scorer: an independent second implementation of the
//! whole per-column pipeline, from the projection features through a
//! 10001-point centroid. Used to cross-check the library's 201-point engine.

use charkit::fuzzy::{FuzzyConfig, Level};
use charkit::glyph::GlyphImage;

pub const BRUTE_GRID_POINTS: usize = 10_001;

/// Partition data as plain quadruples, with the crossing sets already
/// resolved for one image height.
#[derive(Debug, Clone)]
pub struct BrutePartitions {
    pub d: Vec<(Level, [f64; 4])>,
    pub shape: Vec<(Level, [f64; 4])>,
    pub f: Vec<(Level, [f64; 4])>,
}

impl BrutePartitions {
    /// Extract the quadruples from a library config. Only the numbers move
    /// across; all evaluation happens in this module.
    pub fn from_config(cfg: &FuzzyConfig, rows: usize) -> Self {
        let quads = |p: &charkit::fuzzy::Partition| {
            p.sets()
                .iter()
                .map(|(l, t)| (*l, [t.a, t.b, t.c, t.d]))
                .collect()
        };
        let mut top = rows as f64;
        for (_, q) in cfg.partitions.crossings.sets() {
            for p in q {
                if let charkit::fuzzy::CrossingPoint::Value(v) = p {
                    top = top.max(*v);
                }
            }
        }
        let f = cfg
            .partitions
            .crossings
            .sets()
            .iter()
            .map(|(l, q)| {
                let mut out = [0.0; 4];
                for (slot, p) in out.iter_mut().zip(q) {
                    *slot = match p {
                        charkit::fuzzy::CrossingPoint::Value(v) => *v,
                        charkit::fuzzy::CrossingPoint::Max => top,
                    };
                }
                (*l, out)
            })
            .collect();
        BrutePartitions {
            d: quads(&cfg.partitions.distance),
            shape: quads(&cfg.partitions.shape),
            f,
        }
    }

    fn mu(&self, family: &[(Level, [f64; 4])], level: Level, x: f64) -> f64 {
        family
            .iter()
            .find(|(l, _)| *l == level)
            .map(|(_, q)| brute_mu(*q, x))
            .unwrap_or(0.0)
    }
}

fn brute_mu(q: [f64; 4], x: f64) -> f64 {
    let [a, b, c, d] = q;
    if x < a || x > d {
        return 0.0;
    }
    let up = if x < b { (x - a) / (b - a) } else { 1.0 };
    let down = if x > c { (d - x) / (d - c) } else { 1.0 };
    up.min(down).clamp(0.0, 1.0)
}

/// Score one column's features with the nine rules and a fine-grained
/// centroid.
pub fn brute_infer(
    d: f64,
    f: usize,
    g_t: f64,
    h_t: f64,
    parts: &BrutePartitions,
    rule7_on_complement: bool,
) -> f64 {
    use Level::{High, Low, Medium};
    let f = f as f64;
    let mu_d = |l| parts.mu(&parts.d, l, d);
    let mu_f = |l| parts.mu(&parts.f, l, f);
    let mu_g = |l| parts.mu(&parts.shape, l, g_t);
    let mu_h = |l| parts.mu(&parts.shape, l, h_t);
    let g7 = if rule7_on_complement { g_t } else { 1.0 - g_t };
    let mu_g7_low = parts.mu(&parts.shape, Low, g7);

    let min4 = |a: f64, b: f64, c: f64, d: f64| a.min(b).min(c).min(d);
    let strengths = [
        min4(mu_d(Low), 1.0 - mu_g(High), 1.0 - mu_h(High), mu_f(Low)),
        min4(mu_g(Low), mu_h(Low), mu_d(Medium), mu_f(Low)),
        min4(mu_g(Low), 1.0 - mu_d(High), 1.0 - mu_h(Low), mu_f(Low)),
        min4(mu_d(Low), 1.0 - mu_g(High), 1.0 - mu_h(High), mu_f(High)),
        min4(mu_g(Low), mu_h(Low), mu_d(Medium), mu_f(High)),
        min4(mu_g(Low), 1.0 - mu_d(High), 1.0 - mu_h(Low), mu_f(High)),
        min4(mu_h(Low), 1.0 - mu_d(High), 1.0 - mu_g7_low, mu_f(Low)),
        min4(mu_d(Medium), mu_g(Medium), mu_h(Medium), mu_f(Low)),
    ];
    let consequents = [Low, Low, Low, Medium, Medium, Medium, Medium, Medium];
    let s9 = (1.0 - strengths.iter().copied().fold(0.0, f64::max)).max(0.0);

    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..BRUTE_GRID_POINTS {
        let u = k as f64 / (BRUTE_GRID_POINTS - 1) as f64;
        let mut agg = 0.0;
        for (s, cons) in strengths.iter().zip(consequents) {
            agg += s.min(parts.mu(&parts.shape, cons, u));
        }
        agg += s9.min(parts.mu(&parts.shape, High, u));
        num += u * agg;
        den += agg;
    }
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Independent per-column pipeline: own projection, peak scans,
/// normalization and feature math. `None` marks boundary or blank columns.
/// Assumes the default global peak mode.
pub fn brute_score_columns(img: &GlyphImage, cfg: &FuzzyConfig) -> Vec<Option<f64>> {
    let rows = img.rows();
    let n = img.cols();
    // projection by explicit row-major scan
    let mut projection = vec![0usize; n];
    for r in 0..rows {
        for (c, p) in projection.iter_mut().enumerate() {
            if img.get(r, c) == 1 {
                *p += 1;
            }
        }
    }

    let raw_g: Vec<Option<f64>> = (0..n)
        .map(|i| {
            if i == 0 || i + 1 >= n {
                return None;
            }
            let vl = side_max(&projection[..i]);
            let vr = side_max(&projection[i + 1..]);
            Some((vl + vr - 2.0 * projection[i] as f64) / (projection[i] as f64 + 1.0))
        })
        .collect();
    let raw_h: Vec<Option<f64>> = (0..n)
        .map(|i| {
            if i == 0 || i + 1 >= n || projection[i] == 0 {
                return None;
            }
            Some(
                (projection[i - 1] as f64 + projection[i + 1] as f64
                    - 2.0 * projection[i] as f64)
                    / projection[i] as f64,
            )
        })
        .collect();
    let valid: Vec<bool> = (0..n)
        .map(|i| raw_g[i].is_some() && raw_h[i].is_some())
        .collect();

    // sort-based min/max recomputation for the normalization
    let tilde = |raw: &[Option<f64>]| -> Vec<f64> {
        let mut sorted: Vec<f64> = raw
            .iter()
            .zip(&valid)
            .filter_map(|(v, &ok)| if ok { *v } else { None })
            .collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (mn, mx) = (sorted[0], sorted[sorted.len() - 1]);
        raw.iter()
            .map(|v| match v {
                Some(v) if mx > mn => 1.0 - (v - mn) / (mx - mn),
                Some(_) => 1.0,
                None => 0.0,
            })
            .collect()
    };
    if !valid.iter().any(|&v| v) {
        return vec![None; n];
    }
    let g_t = tilde(&raw_g);
    let h_t = tilde(&raw_h);

    let parts = BrutePartitions::from_config(cfg, rows);
    let center = (n - 1) as f64 / 2.0;
    (0..n)
        .map(|i| {
            if !valid[i] {
                return None;
            }
            let d = ((center - i as f64).abs() / center).clamp(0.0, 1.0);
            let mut crossings = 0usize;
            for r in 1..rows {
                if img.get(r, i) != img.get(r - 1, i) {
                    crossings += 1;
                }
            }
            Some(brute_infer(
                d,
                crossings,
                g_t[i],
                h_t[i],
                &parts,
                cfg.rule7_on_complement,
            ))
        })
        .collect()
}

fn side_max(side: &[usize]) -> f64 {
    *side.iter().max().unwrap() as f64
}

/// The documented default partitions, hard-coded as numbers. Cross-checks
/// that the library defaults stay what the book says they are.
pub fn documented_default_partitions(rows: usize) -> BrutePartitions {
    use Level::{High, Low, Medium};
    let top = (rows as f64).max(4.0);
    BrutePartitions {
        d: vec![
            (Low, [0.0, 0.0, 0.15, 0.35]),
            (Medium, [0.2, 0.4, 0.4, 0.6]),
            (High, [0.5, 0.7, 1.0, 1.0]),
        ],
        shape: vec![
            (Low, [0.0, 0.0, 0.2, 0.4]),
            (Medium, [0.3, 0.5, 0.5, 0.7]),
            (High, [0.6, 0.8, 1.0, 1.0]),
        ],
        f: vec![
            (Low, [0.0, 0.0, 2.0, 4.0]),
            (High, [2.0, 4.0, top, top]),
        ],
    }
}
