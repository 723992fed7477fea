//! Plain-text configuration for the segmenter.
//!
//! Grammar: one `key = value` pair per line, `#` starts a comment, blank
//! lines are ignored, unspecified keys keep their defaults.
//!
//! ```text
//! # fuzzy set quadruples a b c d (rise a..b, plateau b..c, fall c..d)
//! d.low       = 0 0 0.15 0.35
//! d.medium    = 0.2 0.4 0.4 0.6
//! d.high      = 0.5 0.7 1 1
//! shape.low   = 0 0 0.2 0.4      # shared by g~, h~ and the output score
//! shape.medium= 0.3 0.5 0.5 0.7
//! shape.high  = 0.6 0.8 1 1
//! f.low       = 0 0 2 4          # crossing count; `max` = image height
//! f.high      = 2 4 max max
//! peak_mode   = global           # or: local
//! tie_break   = center           # or: index
//! rule7_input = complement       # or: raw
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::fuzzy::features::PeakMode;
use crate::fuzzy::membership::{CrossingPoint, CrossingSets, FuzzyPartitions, Level, Partition, Trapezoid};
use crate::fuzzy::rules::RuleBase;
use crate::fuzzy::segment::TieBreak;

/// Everything the segmenter can be tuned with.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyConfig {
    pub partitions: FuzzyPartitions,
    pub peak_mode: PeakMode,
    pub tie_break: TieBreak,
    /// Rule 7 reads the peak-to-valley feature complemented (`g_tilde`,
    /// default) or raw-normalized (`g_bar`).
    pub rule7_on_complement: bool,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig {
            partitions: FuzzyPartitions::default(),
            peak_mode: PeakMode::Global,
            tie_break: TieBreak::CenterThenIndex,
            rule7_on_complement: true,
        }
    }
}

impl FuzzyConfig {
    pub fn rule_base(&self) -> RuleBase {
        RuleBase::standard(self.rule7_on_complement)
    }

    pub fn validate(&self) -> Result<()> {
        self.partitions.validate()?;
        self.rule_base().validate()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = FuzzyConfig::default();
        let mut d_sets: Vec<(Level, Trapezoid)> = cfg.partitions.distance.sets().to_vec();
        let mut shape_sets: Vec<(Level, Trapezoid)> = cfg.partitions.shape.sets().to_vec();
        let mut f_sets: Vec<(Level, [CrossingPoint; 4])> =
            cfg.partitions.crossings.sets().to_vec();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            match key.as_str() {
                "peak_mode" => {
                    cfg.peak_mode = match value {
                        "global" => PeakMode::Global,
                        "local" => PeakMode::Local,
                        other => {
                            return Err(Error::InvalidConfig(format!(
                                "line {}: unknown peak_mode `{other}`",
                                lineno + 1
                            )))
                        }
                    }
                }
                "tie_break" => {
                    cfg.tie_break = match value {
                        "center" => TieBreak::CenterThenIndex,
                        "index" => TieBreak::IndexOnly,
                        other => {
                            return Err(Error::InvalidConfig(format!(
                                "line {}: unknown tie_break `{other}`",
                                lineno + 1
                            )))
                        }
                    }
                }
                "rule7_input" => {
                    cfg.rule7_on_complement = match value {
                        "complement" => true,
                        "raw" => false,
                        other => {
                            return Err(Error::InvalidConfig(format!(
                                "line {}: unknown rule7_input `{other}`",
                                lineno + 1
                            )))
                        }
                    }
                }
                _ => {
                    let (family, level) = key.split_once('.').ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "line {}: unknown key `{key}`",
                            lineno + 1
                        ))
                    })?;
                    let level = Level::from_name(level)?;
                    match family {
                        "d" => set_trapezoid(&mut d_sets, level, parse_quad(value, lineno)?)?,
                        "shape" => {
                            set_trapezoid(&mut shape_sets, level, parse_quad(value, lineno)?)?
                        }
                        "f" => set_crossing(&mut f_sets, level, parse_crossing_quad(value, lineno)?),
                        other => {
                            return Err(Error::InvalidConfig(format!(
                                "line {}: unknown feature `{other}` (expected d, shape or f)",
                                lineno + 1
                            )))
                        }
                    }
                }
            }
        }

        cfg.partitions = FuzzyPartitions {
            distance: Partition::new(d_sets),
            shape: Partition::new(shape_sets),
            crossings: CrossingSets::new(f_sets),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (family, partition) in [("d", &self.partitions.distance), ("shape", &self.partitions.shape)] {
            for (level, t) in partition.sets() {
                out.push_str(&format!(
                    "{family}.{} = {} {} {} {}\n",
                    level.name(),
                    t.a,
                    t.b,
                    t.c,
                    t.d
                ));
            }
        }
        for (level, q) in self.partitions.crossings.sets() {
            let pts: Vec<String> = q
                .iter()
                .map(|p| match p {
                    CrossingPoint::Value(v) => v.to_string(),
                    CrossingPoint::Max => "max".to_string(),
                })
                .collect();
            out.push_str(&format!("f.{} = {}\n", level.name(), pts.join(" ")));
        }
        out.push_str(&format!(
            "peak_mode = {}\n",
            match self.peak_mode {
                PeakMode::Global => "global",
                PeakMode::Local => "local",
            }
        ));
        out.push_str(&format!(
            "tie_break = {}\n",
            match self.tie_break {
                TieBreak::CenterThenIndex => "center",
                TieBreak::IndexOnly => "index",
            }
        ));
        out.push_str(&format!(
            "rule7_input = {}\n",
            if self.rule7_on_complement {
                "complement"
            } else {
                "raw"
            }
        ));
        out
    }
}

fn parse_quad(value: &str, lineno: usize) -> Result<Trapezoid> {
    let pts: Vec<f64> = value
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>().map_err(|_| {
                Error::InvalidConfig(format!("line {}: bad number `{t}`", lineno + 1))
            })
        })
        .collect::<Result<_>>()?;
    if pts.len() != 4 {
        return Err(Error::InvalidConfig(format!(
            "line {}: expected 4 points, got {}",
            lineno + 1,
            pts.len()
        )));
    }
    Trapezoid::new(pts[0], pts[1], pts[2], pts[3])
}

fn parse_crossing_quad(value: &str, lineno: usize) -> Result<[CrossingPoint; 4]> {
    let pts: Vec<CrossingPoint> = value
        .split_whitespace()
        .map(|t| {
            if t.eq_ignore_ascii_case("max") {
                Ok(CrossingPoint::Max)
            } else {
                t.parse::<f64>().map(CrossingPoint::Value).map_err(|_| {
                    Error::InvalidConfig(format!("line {}: bad number `{t}`", lineno + 1))
                })
            }
        })
        .collect::<Result<_>>()?;
    pts.try_into().map_err(|_| {
        Error::InvalidConfig(format!("line {}: expected 4 points", lineno + 1))
    })
}

fn set_trapezoid(sets: &mut Vec<(Level, Trapezoid)>, level: Level, t: Trapezoid) -> Result<()> {
    if let Some(slot) = sets.iter_mut().find(|(l, _)| *l == level) {
        slot.1 = t;
    } else {
        sets.push((level, t));
    }
    Ok(())
}

fn set_crossing(sets: &mut Vec<(Level, [CrossingPoint; 4])>, level: Level, q: [CrossingPoint; 4]) {
    if let Some(slot) = sets.iter_mut().find(|(l, _)| *l == level) {
        slot.1 = q;
    } else {
        sets.push((level, q));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_text() {
        let cfg = FuzzyConfig::default();
        let parsed = FuzzyConfig::from_text(&cfg.to_text()).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn partial_override_keeps_defaults() {
        let cfg = FuzzyConfig::from_text("peak_mode = local\n# comment\n").unwrap();
        assert_eq!(cfg.peak_mode, PeakMode::Local);
        assert_eq!(cfg.tie_break, TieBreak::CenterThenIndex);
        assert_eq!(cfg.partitions, FuzzyPartitions::default().clone());
    }

    #[test]
    fn override_one_set() {
        let cfg = FuzzyConfig::from_text("shape.low = 0 0 0.25 0.45\n").unwrap();
        let t = cfg.partitions.shape.set(Level::Low).unwrap();
        assert_eq!((t.a, t.b, t.c, t.d), (0.0, 0.0, 0.25, 0.45));
    }

    #[test]
    fn rejects_garbage() {
        assert!(FuzzyConfig::from_text("nonsense\n").is_err());
        assert!(FuzzyConfig::from_text("d.low = 1 2 3\n").is_err());
        assert!(FuzzyConfig::from_text("d.low = a b c d\n").is_err());
        assert!(FuzzyConfig::from_text("peak_mode = sideways\n").is_err());
        assert!(FuzzyConfig::from_text("q.low = 0 0 1 1\n").is_err());
        // coverage validation: shrink low until a hole opens between low and medium
        assert!(FuzzyConfig::from_text("shape.low = 0 0 0.05 0.1\n").is_err());
    }
}
