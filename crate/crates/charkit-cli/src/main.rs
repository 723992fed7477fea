use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use charkit::bayes::{bayes_initialize, InitConfig};
use charkit::data::{build_touching_corpus, load_pbm, write_corpus, write_pbm};
use charkit::fuzzy::{score_columns_report, segment, FuzzyConfig};
use charkit::mlp::{Activation, Mlp};
use charkit::train::{train, TrainConfig};
use charkit_cli::dataset::{input_grid, load_digits, to_training_set, DataSource};
use charkit_cli::grid::{parse_grid_dims, parse_layers, parse_range, parse_seeds, parse_value_grid};
use charkit_cli::report::fmt_sig6;
use charkit_cli::{
    run_init_compare, run_segment_compare, InitCompareConfig, SegmentCompareConfig, DEEP_LAYERS,
};

/// Character recognition toolkit: network training with Bayesian-fusion
/// initialization, fuzzy segmentation of touching characters, and the
/// benchmark harness comparing both against their baselines.
#[derive(Parser)]
#[command(name = "charkit", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a network on a digit dataset and report steps to convergence.
    Train(TrainArgs),
    /// Benchmark sweeps with CSV reports.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Segment a touching-character bitmap.
    Segment(SegmentArgs),
    /// Generate synthetic datasets.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Compare random against Bayesian-fusion initialization over an h grid.
    InitCompare(InitCompareArgs),
    /// Compare the fuzzy cut against the single-feature baselines.
    SegmentCompare(SegmentCompareArgs),
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Build a touching-pair corpus with ground-truth cut ranges.
    Touching(SynthTouchingArgs),
}

#[derive(Args)]
struct NetOpts {
    /// Comma-separated layer sizes, input first.
    #[arg(long)]
    layers: Option<String>,
    /// Use the five-layer harness default topology.
    #[arg(long, conflicts_with = "layers")]
    deep: bool,
    /// Input grid RxC when the input layer size is not a perfect square.
    #[arg(long)]
    grid: Option<String>,
    /// Activation function (tanh or sigmoid).
    #[arg(long, default_value = "tanh")]
    activation: String,
    /// Disable the always-on bias units.
    #[arg(long)]
    no_bias: bool,
}

impl NetOpts {
    fn layers(&self) -> anyhow::Result<(Vec<usize>, bool)> {
        match (&self.layers, self.deep) {
            (Some(s), _) => Ok((parse_layers(s)?, false)),
            (None, true) => Ok((DEEP_LAYERS.to_vec(), true)),
            (None, false) => Ok((vec![784, 50, 10], false)),
        }
    }

    fn activation(&self) -> anyhow::Result<Activation> {
        Ok(Activation::from_name(&self.activation)?)
    }

    fn grid_dims(&self) -> anyhow::Result<Option<(usize, usize)>> {
        self.grid.as_deref().map(parse_grid_dims).transpose()
    }
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    net: NetOpts,
    /// Digit source: an IDX directory, `synthetic`, or `synthetic:N`.
    #[arg(long, default_value = "synthetic")]
    data: String,
    /// Initializer: random or bayes.
    #[arg(long, default_value = "random")]
    init: String,
    /// Sampling half-width h.
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Weight and shuffle seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fusion iterations for the Bayesian initializer.
    #[arg(long, default_value_t = 2)]
    iterations: usize,
    #[arg(long, default_value_t = 3.0)]
    eta: f64,
    /// Convergence threshold on the dataset MSE.
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 300)]
    max_epochs: usize,
    /// Stratified training subset size.
    #[arg(long, default_value_t = 1000)]
    subset: usize,
    /// Write the trained model here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InitCompareArgs {
    #[command(flatten)]
    net: NetOpts,
    #[arg(long, default_value = "synthetic")]
    data: String,
    /// h grid: `start:end:step` or a comma list.
    #[arg(long, default_value = "0.9:1.1:0.1")]
    h_grid: String,
    /// Seed count N (seeds 0..N) or a comma list.
    #[arg(long, default_value = "10")]
    seeds: String,
    #[arg(long, default_value_t = 3.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 300)]
    max_epochs: usize,
    #[arg(long, default_value_t = 2)]
    iterations: usize,
    #[arg(long, default_value_t = 1000)]
    subset: usize,
    /// Report path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SegmentCompareArgs {
    /// Corpus directory with PBM files and a manifest.csv.
    #[arg(long)]
    data: PathBuf,
    /// Fuzzy configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SegmentArgs {
    /// Input bitmap (PBM).
    #[arg(long)]
    input: PathBuf,
    /// Fuzzy configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Maximum number of pieces.
    #[arg(long, default_value_t = 2)]
    max_chars: usize,
    /// Cut along rows instead of columns (the image is transposed through
    /// the column pipeline).
    #[arg(long)]
    rows: bool,
    /// Write per-column scores here as CSV.
    #[arg(long)]
    emit_scores: Option<PathBuf>,
    /// Write the pieces here as PBM files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SynthTouchingArgs {
    /// Number of pairs.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// Overlap columns, `lo:hi` inclusive or a single value.
    #[arg(long, default_value = "1:2")]
    overlap: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Digit source the glyphs are drawn from.
    #[arg(long, default_value = "synthetic")]
    data: String,
    /// Corpus output directory.
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Bench(BenchCommand::InitCompare(args)) => cmd_init_compare(args),
        Command::Bench(BenchCommand::SegmentCompare(args)) => cmd_segment_compare(args),
        Command::Segment(args) => cmd_segment(args),
        Command::Synth(SynthCommand::Touching(args)) => cmd_synth_touching(args),
    }
}

fn cmd_train(args: TrainArgs) -> anyhow::Result<()> {
    let (layers, _) = args.net.layers()?;
    let activation = args.net.activation()?;
    let bias = !args.net.no_bias;
    let source: DataSource = args.data.parse()?;
    let set = load_digits(&source)?;
    let (rows, cols) = input_grid(layers[0], args.net.grid_dims()?)?;
    let indices = charkit::data::stratified_subset(&set.labels, args.subset, set.class_count);
    let data = to_training_set(&set, &indices, rows, cols, activation)?;

    let mut net = match args.init.as_str() {
        "random" => Mlp::random(&layers, activation, bias, args.h, args.seed)?,
        "bayes" => {
            let mut cfg = InitConfig::new(args.h, args.seed);
            cfg.iterations = args.iterations;
            bayes_initialize(&layers, activation, bias, &data, &cfg)?
        }
        other => bail!("unknown initializer `{other}` (expected random or bayes)"),
    };
    let cfg = TrainConfig {
        eta: args.eta,
        max_epochs: args.max_epochs,
        epsilon: args.eps,
        shuffle_seed: args.seed,
        weight_seed: args.seed,
    };
    let report = train(&mut net, &data, &cfg)?;
    println!(
        "init={} h={} seed={} samples={} steps={} converged={} first_mse={} last_mse={}",
        args.init,
        fmt_sig6(args.h),
        args.seed,
        data.len(),
        report.steps,
        report.converged,
        fmt_sig6(*report.mse_trajectory.first().unwrap()),
        fmt_sig6(*report.mse_trajectory.last().unwrap()),
    );
    if let Some(path) = args.out {
        net.save(&path)?;
        println!("model written to {}", path.display());
    }
    Ok(())
}

fn cmd_init_compare(args: InitCompareArgs) -> anyhow::Result<()> {
    let (layers, layers_defaulted) = args.net.layers()?;
    let cfg = InitCompareConfig {
        source: args.data.parse()?,
        h_grid: parse_value_grid(&args.h_grid)?,
        seeds: parse_seeds(&args.seeds)?,
        layers,
        layers_defaulted,
        grid_dims: args.net.grid_dims()?,
        activation: args.net.activation()?,
        bias: !args.net.no_bias,
        eta: args.eta,
        epsilon: args.eps,
        max_epochs: args.max_epochs,
        iterations: args.iterations,
        subset: args.subset,
    };
    let report = run_init_compare(&cfg)?;
    write_report(&args.out, &report.to_csv())?;
    for s in &report.summary {
        println!(
            "h={} {:6} median_steps={} ({}/{} converged)",
            fmt_sig6(s.h),
            s.init.name(),
            fmt_sig6(s.median_steps),
            s.converged_runs,
            s.runs
        );
    }
    println!("report written to {}", args.out.display());
    Ok(())
}

fn load_fuzzy_config(path: &Option<PathBuf>) -> anyhow::Result<(FuzzyConfig, String)> {
    match path {
        Some(p) => Ok((
            FuzzyConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
            p.display().to_string(),
        )),
        None => Ok((FuzzyConfig::default(), "default".to_string())),
    }
}

fn cmd_segment_compare(args: SegmentCompareArgs) -> anyhow::Result<()> {
    let (fuzzy, config_label) = load_fuzzy_config(&args.config)?;
    let report = run_segment_compare(&SegmentCompareConfig {
        corpus_dir: args.data,
        fuzzy,
        config_label,
    })?;
    write_report(&args.out, &report.to_csv())?;
    for m in &report.summary {
        println!(
            "{:6} {}/{} correct = {}",
            m.method,
            m.correct,
            m.total,
            fmt_sig6(m.accuracy())
        );
    }
    println!("report written to {}", args.out.display());
    Ok(())
}

fn cmd_segment(args: SegmentArgs) -> anyhow::Result<()> {
    let (fuzzy, _) = load_fuzzy_config(&args.config)?;
    let mut img =
        load_pbm(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    if args.rows {
        img = img.transpose();
    }

    if let Some(path) = &args.emit_scores {
        let report = score_columns_report(&img, &fuzzy)?;
        let mut csv = String::from("i,d,f,g_t,h_t,rho,valid\n");
        for (i, c) in report.iter().enumerate() {
            let opt = |v: Option<f64>| v.map(fmt_sig6).unwrap_or_default();
            csv.push_str(&format!(
                "{i},{},{},{},{},{},{}\n",
                fmt_sig6(c.distance),
                c.crossings,
                opt(c.g_tilde),
                opt(c.h_tilde),
                opt(c.rho),
                c.valid
            ));
        }
        write_report(path, &csv)?;
        println!("scores written to {}", path.display());
    }

    let pieces = segment(&img, args.max_chars, &fuzzy)?;
    let mut cuts = Vec::new();
    let mut offset = 0usize;
    for piece in &pieces[..pieces.len() - 1] {
        offset += piece.cols();
        cuts.push(offset);
    }
    println!(
        "pieces={} cuts={:?} axis={}",
        pieces.len(),
        cuts,
        if args.rows { "rows" } else { "columns" }
    );

    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        for (i, piece) in pieces.iter().enumerate() {
            let out = if args.rows {
                piece.transpose()
            } else {
                piece.clone()
            };
            write_pbm(dir.join(format!("piece_{i:02}.pbm")), &out)?;
        }
        println!("pieces written to {}", dir.display());
    }
    Ok(())
}

fn cmd_synth_touching(args: SynthTouchingArgs) -> anyhow::Result<()> {
    let source: DataSource = args.data.parse()?;
    let overlap = parse_range(&args.overlap)?;
    let set = load_digits(&source)?;
    let glyphs: Vec<(charkit::glyph::GlyphImage, u8)> =
        set.images.into_iter().zip(set.labels).collect();
    let pairs = build_touching_corpus(&glyphs, args.pairs, overlap, args.seed)?;
    write_corpus(&args.out, &pairs)?;
    println!(
        "{} pairs (overlap {}..={}, seed {}) written to {}",
        pairs.len(),
        overlap.0,
        overlap.1,
        args.seed,
        args.out.display()
    );
    Ok(())
}

fn write_report(path: &PathBuf, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
