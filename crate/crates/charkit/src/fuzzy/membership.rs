//! Trapezoidal fuzzy sets and the partitions over the four input features.

use crate::error::{Error, Result};

/// Linguistic labels used by the rule base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Low => "low",
            Level::Medium => "medium",
            Level::High => "high",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "low" => Ok(Level::Low),
            "medium" => Ok(Level::Medium),
            "high" => Ok(Level::High),
            other => Err(Error::InvalidConfig(format!(
                "unknown fuzzy set label `{other}`"
            ))),
        }
    }
}

/// Trapezoidal membership function `(a, b, c, d)`: linear rise on `[a, b]`,
/// plateau at 1 on `[b, c]`, linear fall on `[c, d]`. Triangles have
/// `b == c`; `a == b` or `c == d` make the corresponding edge vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Trapezoid {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a <= b && b <= c && c <= d) || !d.is_finite() || !a.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "trapezoid points must satisfy a <= b <= c <= d, got ({a}, {b}, {c}, {d})"
            )));
        }
        Ok(Trapezoid { a, b, c, d })
    }

    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            return 0.0;
        }
        let rise = if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else {
            1.0
        };
        let fall = if x > self.c {
            (self.d - x) / (self.d - self.c)
        } else {
            1.0
        };
        rise.min(fall)
    }
}

/// A named family of fuzzy sets over one universe.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    sets: Vec<(Level, Trapezoid)>,
}

impl Partition {
    pub fn new(sets: Vec<(Level, Trapezoid)>) -> Self {
        Partition { sets }
    }

    pub fn set(&self, level: Level) -> Option<&Trapezoid> {
        self.sets
            .iter()
            .find(|(l, _)| *l == level)
            .map(|(_, t)| t)
    }

    pub fn sets(&self) -> &[(Level, Trapezoid)] {
        &self.sets
    }

    pub fn membership(&self, level: Level, x: f64) -> Result<f64> {
        self.set(level)
            .map(|t| t.membership(x))
            .ok_or_else(|| {
                Error::InvalidConfig(format!("partition has no `{}` set", level.name()))
            })
    }

    /// True when every sampled universe point activates at least one set.
    pub fn covers(&self, lo: f64, hi: f64, samples: usize) -> bool {
        (0..samples).all(|k| {
            let x = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            self.sets.iter().any(|(_, t)| t.membership(x) > 0.0)
        })
    }
}

/// One point of a crossing-count trapezoid: a number, or the image-dependent
/// universe maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingPoint {
    Value(f64),
    Max,
}

/// Fuzzy sets over the crossing count, with `Max` points resolved against a
/// concrete image height.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingSets {
    sets: Vec<(Level, [CrossingPoint; 4])>,
}

impl CrossingSets {
    pub fn new(sets: Vec<(Level, [CrossingPoint; 4])>) -> Self {
        CrossingSets { sets }
    }

    pub fn sets(&self) -> &[(Level, [CrossingPoint; 4])] {
        &self.sets
    }

    fn max_finite_point(&self) -> f64 {
        self.sets
            .iter()
            .flat_map(|(_, q)| q.iter())
            .filter_map(|p| match p {
                CrossingPoint::Value(v) => Some(*v),
                CrossingPoint::Max => None,
            })
            .fold(0.0, f64::max)
    }

    /// Substitute `Max` with the universe top for an image of `rows` rows.
    /// The top never drops below the largest finite point, so short images
    /// still get well-formed trapezoids.
    pub fn resolve(&self, rows: usize) -> Result<Partition> {
        let top = (rows as f64).max(self.max_finite_point());
        let sets = self
            .sets
            .iter()
            .map(|(level, q)| {
                let p: Vec<f64> = q
                    .iter()
                    .map(|p| match p {
                        CrossingPoint::Value(v) => *v,
                        CrossingPoint::Max => top,
                    })
                    .collect();
                Trapezoid::new(p[0], p[1], p[2], p[3]).map(|t| (*level, t))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition::new(sets))
    }
}

/// The partitions the inference system fuzzifies against. The `shape`
/// partition is shared by the two normalized profile features and by the
/// output score, mirroring their common `[0, 1]` universe.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPartitions {
    pub distance: Partition,
    pub shape: Partition,
    pub crossings: CrossingSets,
}

impl Default for FuzzyPartitions {
    fn default() -> Self {
        let t = |a, b, c, d| Trapezoid::new(a, b, c, d).unwrap();
        FuzzyPartitions {
            distance: Partition::new(vec![
                (Level::Low, t(0.0, 0.0, 0.15, 0.35)),
                (Level::Medium, t(0.2, 0.4, 0.4, 0.6)),
                (Level::High, t(0.5, 0.7, 1.0, 1.0)),
            ]),
            shape: Partition::new(vec![
                (Level::Low, t(0.0, 0.0, 0.2, 0.4)),
                (Level::Medium, t(0.3, 0.5, 0.5, 0.7)),
                (Level::High, t(0.6, 0.8, 1.0, 1.0)),
            ]),
            crossings: CrossingSets::new(vec![
                (
                    Level::Low,
                    [
                        CrossingPoint::Value(0.0),
                        CrossingPoint::Value(0.0),
                        CrossingPoint::Value(2.0),
                        CrossingPoint::Value(4.0),
                    ],
                ),
                (
                    Level::High,
                    [
                        CrossingPoint::Value(2.0),
                        CrossingPoint::Value(4.0),
                        CrossingPoint::Max,
                        CrossingPoint::Max,
                    ],
                ),
            ]),
        }
    }
}

impl FuzzyPartitions {
    /// Structural checks: unit-interval partitions cover their universe and
    /// the crossing sets cover `[0, rows]` for a representative height.
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("d", &self.distance), ("shape", &self.shape)] {
            if !p.covers(0.0, 1.0, 201) {
                return Err(Error::InvalidConfig(format!(
                    "`{name}` partition leaves part of [0, 1] uncovered"
                )));
            }
        }
        for rows in [1usize, 8, 64] {
            let resolved = self.crossings.resolve(rows)?;
            if !resolved.covers(0.0, rows as f64, 4 * rows + 1) {
                return Err(Error::InvalidConfig(format!(
                    "`f` partition leaves part of [0, {rows}] uncovered"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_shape() {
        let t = Trapezoid::new(0.2, 0.4, 0.6, 0.8).unwrap();
        assert_eq!(t.membership(0.1), 0.0);
        assert!((t.membership(0.3) - 0.5).abs() < 1e-15);
        assert_eq!(t.membership(0.5), 1.0);
        assert!((t.membership(0.7) - 0.5).abs() < 1e-15);
        assert_eq!(t.membership(0.9), 0.0);
    }

    #[test]
    fn vertical_edges_and_triangles() {
        let left = Trapezoid::new(0.0, 0.0, 0.2, 0.4).unwrap();
        assert_eq!(left.membership(0.0), 1.0);
        let tri = Trapezoid::new(0.3, 0.5, 0.5, 0.7).unwrap();
        assert_eq!(tri.membership(0.5), 1.0);
        assert!((tri.membership(0.4) - 0.5).abs() < 1e-15);
        let right = Trapezoid::new(0.6, 0.8, 1.0, 1.0).unwrap();
        assert_eq!(right.membership(1.0), 1.0);
    }

    #[test]
    fn rejects_unsorted_points() {
        assert!(Trapezoid::new(0.5, 0.4, 0.6, 0.8).is_err());
        assert!(Trapezoid::new(0.0, 0.1, 0.2, f64::NAN).is_err());
    }

    #[test]
    fn default_partitions_cover_their_universes() {
        FuzzyPartitions::default().validate().unwrap();
    }

    #[test]
    fn crossing_sets_resolve_against_short_images() {
        let parts = FuzzyPartitions::default();
        // even a 1-row image resolves: the top is floored at the largest
        // finite point of the spec quadruples
        let p = parts.crossings.resolve(1).unwrap();
        assert!(p.membership(Level::Low, 0.0).unwrap() > 0.0);
        let p = parts.crossings.resolve(30).unwrap();
        assert_eq!(p.membership(Level::High, 30.0).unwrap(), 1.0);
        assert_eq!(p.membership(Level::Low, 0.0).unwrap(), 1.0);
        assert_eq!(p.membership(Level::Low, 3.0).unwrap(), 0.5);
        assert_eq!(p.membership(Level::High, 3.0).unwrap(), 0.5);
    }

    #[test]
    fn partition_lookup_reports_missing_set() {
        let parts = FuzzyPartitions::default();
        let crossings = parts.crossings.resolve(10).unwrap();
        assert!(crossings.membership(Level::Medium, 1.0).is_err());
    }
}
