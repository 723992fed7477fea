//! The initializer comparison sweep: random against Bayesian-fusion
//! starting weights, over an `h` grid and a set of seeds.

use std::io::Write;
use std::time::Instant;

use anyhow::Context;
use charkit::bayes::{bayes_initialize, InitConfig};
use charkit::data::stratified_subset;
use charkit::mlp::{Activation, Mlp};
use charkit::train::{train, TrainConfig, TrainReport};
use charkit::Error;
use rayon::prelude::*;

use crate::dataset::{input_grid, load_digits, to_training_set, DataSource};
use crate::report::{fmt_sig6, median};

/// Hidden sizes used when a five-layer network is requested without
/// explicit sizes. A harness default, not a reference topology.
pub const DEEP_LAYERS: [usize; 5] = [784, 200, 100, 50, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initializer {
    Random,
    Bayes,
}

impl Initializer {
    pub fn name(self) -> &'static str {
        match self {
            Initializer::Random => "random",
            Initializer::Bayes => "bayes",
        }
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct InitCompareConfig {
    pub source: DataSource,
    pub h_grid: Vec<f64>,
    pub seeds: Vec<u64>,
    pub layers: Vec<usize>,
    /// Set when `layers` came from [`DEEP_LAYERS`] rather than the user.
    pub layers_defaulted: bool,
    pub grid_dims: Option<(usize, usize)>,
    pub activation: Activation,
    pub bias: bool,
    pub eta: f64,
    pub epsilon: f64,
    pub max_epochs: usize,
    /// Fusion iterations for the Bayesian initializer.
    pub iterations: usize,
    /// Stratified subset of the training images used by every run.
    pub subset: usize,
}

impl InitCompareConfig {
    pub fn desk_scale(source: DataSource) -> Self {
        InitCompareConfig {
            source,
            h_grid: vec![0.9, 1.0, 1.1],
            seeds: (0..10).collect(),
            layers: vec![784, 50, 10],
            layers_defaulted: false,
            grid_dims: None,
            activation: Activation::Tanh,
            bias: true,
            eta: 3.0,
            epsilon: 0.05,
            max_epochs: 300,
            iterations: 2,
            subset: 1000,
        }
    }
}

/// One sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub h: f64,
    pub seed: u64,
    pub init: Initializer,
    pub steps: usize,
    pub converged: bool,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub h: f64,
    pub init: Initializer,
    pub median_steps: f64,
    pub converged_runs: usize,
    pub runs: usize,
}

#[derive(Debug, Clone)]
pub struct InitCompareReport {
    pub config_lines: Vec<String>,
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Run every (h, seed, initializer) cell on a bounded worker pool and
/// collect the records in deterministic sweep order. Divergence is recorded
/// per row (`converged = false`, `steps = max_epochs`), never aborts the
/// sweep.
pub fn run_init_compare(cfg: &InitCompareConfig) -> anyhow::Result<InitCompareReport> {
    let set = load_digits(&cfg.source)?;
    let (rows, cols) = input_grid(cfg.layers[0], cfg.grid_dims)?;
    let indices = stratified_subset(&set.labels, cfg.subset, set.class_count);
    let data = to_training_set(&set, &indices, rows, cols, cfg.activation)?;

    let jobs: Vec<(f64, u64, Initializer)> = cfg
        .h_grid
        .iter()
        .flat_map(|&h| {
            cfg.seeds.iter().flat_map(move |&seed| {
                [Initializer::Random, Initializer::Bayes]
                    .into_iter()
                    .map(move |init| (h, seed, init))
            })
        })
        .collect();

    let pool = worker_pool()?;
    let results: Vec<anyhow::Result<RunRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(h, seed, init)| {
                let start = Instant::now();
                let mut net = match init {
                    Initializer::Random => {
                        Mlp::random(&cfg.layers, cfg.activation, cfg.bias, h, seed)?
                    }
                    Initializer::Bayes => {
                        let mut init_cfg = InitConfig::new(h, seed);
                        init_cfg.iterations = cfg.iterations;
                        bayes_initialize(&cfg.layers, cfg.activation, cfg.bias, &data, &init_cfg)?
                    }
                };
                let train_cfg = TrainConfig {
                    eta: cfg.eta,
                    max_epochs: cfg.max_epochs,
                    epsilon: cfg.epsilon,
                    shuffle_seed: seed,
                    weight_seed: seed,
                };
                let report = match train(&mut net, &data, &train_cfg) {
                    Ok(report) => report,
                    Err(Error::Divergence { .. }) => TrainReport {
                        steps: cfg.max_epochs,
                        converged: false,
                        mse_trajectory: Vec::new(),
                    },
                    Err(e) => return Err(e.into()),
                };
                Ok(RunRecord {
                    h,
                    seed,
                    init,
                    steps: report.steps,
                    converged: report.converged,
                    wall_ms: start.elapsed().as_millis() as u64,
                })
            })
            .collect()
    });
    let records: Vec<RunRecord> = results.into_iter().collect::<anyhow::Result<_>>()?;

    let mut summary = Vec::new();
    for &h in &cfg.h_grid {
        for init in [Initializer::Random, Initializer::Bayes] {
            let steps: Vec<usize> = records
                .iter()
                .filter(|r| r.h == h && r.init == init)
                .map(|r| r.steps)
                .collect();
            let converged_runs = records
                .iter()
                .filter(|r| r.h == h && r.init == init && r.converged)
                .count();
            summary.push(SummaryRow {
                h,
                init,
                median_steps: median(&steps),
                converged_runs,
                runs: steps.len(),
            });
        }
    }

    let mut config_lines = vec![
        "# charkit init-compare v1".to_string(),
        format!(
            "# layers={} activation={} bias={} eta={} epsilon={} max_epochs={} iterations={} subset={} data={}",
            cfg.layers.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            cfg.activation.name(),
            cfg.bias,
            fmt_sig6(cfg.eta),
            fmt_sig6(cfg.epsilon),
            cfg.max_epochs,
            cfg.iterations,
            cfg.subset,
            cfg.source,
        ),
    ];
    if cfg.layers_defaulted {
        config_lines
            .push("# note=hidden layer sizes are harness defaults, not reference values".into());
    }

    Ok(InitCompareReport {
        config_lines,
        records,
        summary,
    })
}

pub fn worker_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(workers) = std::env::var("CHARKIT_WORKERS") {
        let n: usize = workers
            .parse()
            .context("CHARKIT_WORKERS must be a positive integer")?;
        builder = builder.num_threads(n.max(1));
    }
    Ok(builder.build()?)
}

impl InitCompareReport {
    /// `h,seed,init,steps,converged,wall_ms` rows, a blank line, then the
    /// per-(h, init) medians.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        for line in &self.config_lines {
            writeln!(w, "{line}")?;
        }
        writeln!(w, "h,seed,init,steps,converged,wall_ms")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_sig6(r.h),
                r.seed,
                r.init.name(),
                r.steps,
                r.converged,
                r.wall_ms
            )?;
        }
        writeln!(w)?;
        writeln!(w, "h,init,median_steps,converged_runs,runs")?;
        for s in &self.summary {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_sig6(s.h),
                s.init.name(),
                fmt_sig6(s.median_steps),
                s.converged_runs,
                s.runs
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> InitCompareConfig {
        let mut cfg = InitCompareConfig::desk_scale(DataSource::Synthetic { count: 120 });
        cfg.h_grid = vec![1.0];
        cfg.seeds = vec![0, 1];
        cfg.layers = vec![784, 8, 10];
        cfg.subset = 60;
        cfg.max_epochs = 3;
        cfg.epsilon = 1e-9;
        cfg
    }

    #[test]
    fn sweep_covers_every_cell_once() {
        let report = run_init_compare(&tiny_config()).unwrap();
        assert_eq!(report.records.len(), 4);
        for seed in [0u64, 1] {
            for init in [Initializer::Random, Initializer::Bayes] {
                assert_eq!(
                    report
                        .records
                        .iter()
                        .filter(|r| r.seed == seed && r.init == init)
                        .count(),
                    1
                );
            }
        }
    }

    #[test]
    fn summary_medians_match_the_rows() {
        let report = run_init_compare(&tiny_config()).unwrap();
        for s in &report.summary {
            let steps: Vec<usize> = report
                .records
                .iter()
                .filter(|r| r.h == s.h && r.init == s.init)
                .map(|r| r.steps)
                .collect();
            assert_eq!(s.runs, steps.len());
            assert_eq!(s.median_steps, median(&steps));
        }
    }

    #[test]
    fn csv_body_is_deterministic_modulo_timing() {
        let a = run_init_compare(&tiny_config()).unwrap().to_csv();
        let b = run_init_compare(&tiny_config()).unwrap().to_csv();
        assert_eq!(strip_wall_ms(&a), strip_wall_ms(&b));
    }

    fn strip_wall_ms(csv: &str) -> String {
        csv.lines()
            .map(|line| {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() == 6 {
                    fields[..5].join(",")
                } else {
                    line.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}
