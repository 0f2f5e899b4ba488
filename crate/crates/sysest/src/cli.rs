//! Command-line interface: argument types, config merging, and dispatch.
//!
//! Four subcommands share a source-resolution step (`--pop` file,
//! `--builtin` summary set, or `--synthetic` generator spec) and an output
//! step (`--format text|csv`, `--out PATH`). Every option can also come from
//! a `key=value` file via `--config`; explicit flags win over file values.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sysest_core::mc::{self, Labeling, McConfig};
use sysest_core::num;
use sysest_core::popmodel::{Population, Summary};
use sysest_core::theory::{self, NonResponse, T2Shape, WeightMode};

use crate::builtin;
use crate::config::FileConfig;
use crate::error::{AppError, Result};
use crate::io;
use crate::render;
use crate::synth::{self, SynthSpec};

/// Design-based estimation of a finite-population mean under systematic
/// sampling with sub-sampling of non-respondents.
#[derive(Debug, Parser)]
#[command(name = "sysest", version, about, propagate_version = true)]
pub struct Cli {
    /// Subcommand to run.
    #[command(subcommand)]
    pub command: Command,
}

/// The available subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print summary statistics of a population source
    Summarize(SummarizeArgs),
    /// Tabulate first-order efficiencies over a (K, L) grid
    TheoryTable(TheoryTableArgs),
    /// Monte Carlo check of the first-order theory on unit data
    Simulate(SimulateArgs),
    /// Recompute the built-in reference efficiency table and compare
    #[command(name = "audit-table31")]
    AuditTable31(AuditArgs),
}

/// Where the population comes from.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Population CSV file with a header row naming columns y and x
    #[arg(long, value_name = "FILE")]
    pub pop: Option<PathBuf>,
    /// Built-in summary parameter set (available: murthy1967-summary)
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
    /// Deterministic synthetic population, e.g. "N=240,n=12,rho=0.8,rho_y=0.6"
    #[arg(long, value_name = "SPEC")]
    pub synthetic: Option<String>,
    /// Systematic sample size n (required with --pop)
    #[arg(short = 'n', long = "sample-size", value_name = "N")]
    pub sample_size: Option<usize>,
}

/// Where and how results are written.
#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, value_name = "FORMAT")]
    pub format: Option<FormatArg>,
    /// Write results to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Arguments of `summarize`.
#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Plain key=value configuration file; flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

/// Arguments of `theory-table`.
#[derive(Debug, Args)]
pub struct TheoryTableArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated non-response fractions, e.g. 0.1,0.2,0.3,0.4
    #[arg(long = "k-grid", value_name = "LIST")]
    k_grid: Option<String>,
    /// Comma-separated inverse sub-sampling rates, e.g. 2.0,2.5,3.0,3.5
    #[arg(long = "l-grid", value_name = "LIST")]
    l_grid: Option<String>,
    /// Mixing constant of the adjusted estimator family [default: 0]
    #[arg(long, value_name = "A")]
    alpha: Option<f64>,
    /// Exponent of the adjusted estimator family [default: 1]
    #[arg(long, value_name = "D", allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Non-response stratum mean square as a fraction of the population's
    /// [default: 0.75, or the synthetic spec's ratio]
    #[arg(long = "s2-ratio", value_name = "R")]
    s2_ratio: Option<f64>,
    /// Optimum constants recomputed per cell, or frozen at (--ref-k, --ref-l)
    #[arg(long = "weight-mode", value_enum, value_name = "MODE")]
    weight_mode: Option<WeightModeArg>,
    /// Reference non-response fraction for --weight-mode reference
    #[arg(long = "ref-k", value_name = "K")]
    ref_k: Option<f64>,
    /// Reference inverse rate for --weight-mode reference
    #[arg(long = "ref-l", value_name = "L")]
    ref_l: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
    /// Plain key=value configuration file; flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

/// Arguments of `simulate`.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of replications
    #[arg(long, value_name = "R")]
    reps: Option<u32>,
    /// Master seed; replications derive independent streams from it
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Inverse sub-sampling rate L >= 1
    #[arg(long = "L", value_name = "VALUE")]
    l_factor: Option<f64>,
    /// Non-response fraction K in [0, 1)
    #[arg(long = "K", value_name = "FRAC")]
    k_frac: Option<f64>,
    /// How non-respondents are labeled [default: stratum_tail]
    #[arg(long, value_enum, value_name = "RULE")]
    labeling: Option<LabelingArg>,
    /// Mixing constant of the adjusted estimator family [default: 0]
    #[arg(long, value_name = "A")]
    alpha: Option<f64>,
    /// Exponent of the adjusted estimator family [default: 1]
    #[arg(long, value_name = "D", allow_negative_numbers = true)]
    delta: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
    /// Plain key=value configuration file; flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

/// Arguments of `audit-table31`.
#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    output: OutputArgs,
    /// Plain key=value configuration file; flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    /// Aligned human-readable text.
    Text,
    /// Machine-readable CSV at full precision.
    Csv,
}

impl FromStr for FormatArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(FormatArg::Text),
            "csv" => Ok(FormatArg::Csv),
            other => Err(format!("unknown format `{other}` (expected text or csv)")),
        }
    }
}

/// Non-respondent labeling rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelingArg {
    /// The last floor(K N) frame units never respond.
    #[value(name = "stratum_tail")]
    StratumTail,
    /// Each unit independently fails to respond with probability K.
    Bernoulli,
}

impl FromStr for LabelingArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "stratum_tail" => Ok(LabelingArg::StratumTail),
            "bernoulli" => Ok(LabelingArg::Bernoulli),
            other => Err(format!(
                "unknown labeling `{other}` (expected stratum_tail or bernoulli)"
            )),
        }
    }
}

/// Weight-mode selector for tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightModeArg {
    /// Recompute the optimum constants at every grid cell.
    PerCell,
    /// Freeze the constants at the optimum of one reference cell.
    Reference,
}

impl FromStr for WeightModeArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "per_cell" => Ok(WeightModeArg::PerCell),
            "reference" => Ok(WeightModeArg::Reference),
            other => Err(format!(
                "unknown weight mode `{other}` (expected per-cell or reference)"
            )),
        }
    }
}

/// A resolved population source.
enum Source {
    /// Unit data from a file, with the chosen sample size.
    File(Population, usize),
    /// The built-in summary-only parameter set.
    Builtin,
    /// Generated unit data, with the sample size and the generating spec.
    Synthetic(Population, usize, SynthSpec),
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::empty()),
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| AppError::Usage(format!("{flag} is required")))
}

fn resolve_source(src: &SourceArgs, cfg: &FileConfig) -> Result<Source> {
    let pop: Option<PathBuf> = cfg.resolve(src.pop.clone(), "pop")?;
    let builtin_name: Option<String> = cfg.resolve(src.builtin.clone(), "builtin")?;
    let synthetic: Option<String> = cfg.resolve(src.synthetic.clone(), "synthetic")?;
    let n_flag: Option<usize> = cfg.resolve(src.sample_size, "sample_size")?;

    let given = [pop.is_some(), builtin_name.is_some(), synthetic.is_some()]
        .into_iter()
        .filter(|&b| b)
        .count();
    if given != 1 {
        return Err(AppError::Usage(
            "exactly one of --pop, --builtin, --synthetic must be given".into(),
        ));
    }

    if let Some(path) = pop {
        let n = required(n_flag, "--sample-size (-n)")?;
        let p = io::read_population(&path)?;
        Ok(Source::File(p, n))
    } else if let Some(name) = builtin_name {
        if name != builtin::BUILTIN_NAME {
            return Err(AppError::Usage(format!(
                "unknown builtin parameter set `{name}` (available: {})",
                builtin::BUILTIN_NAME
            )));
        }
        if let Some(n) = n_flag {
            if n != builtin::SAMPLE_SIZE {
                return Err(AppError::Usage(format!(
                    "the built-in set is defined at sample size {}, not {n}",
                    builtin::SAMPLE_SIZE
                )));
            }
        }
        Ok(Source::Builtin)
    } else {
        let spec: SynthSpec = synthetic.expect("counted above").parse()?;
        let pop = synth::generate(&spec)?;
        let n = n_flag.unwrap_or(spec.sample_size);
        Ok(Source::Synthetic(pop, n, spec))
    }
}

fn summary_of(source: &Source) -> Result<Summary> {
    match source {
        Source::File(p, n) | Source::Synthetic(p, n, _) => {
            Summary::compute(p, *n).map_err(AppError::from)
        }
        Source::Builtin => Ok(builtin::summary()),
    }
}

fn parse_grid(raw: &str, flag: &str) -> Result<Vec<f64>> {
    let mut vals = Vec::new();
    for tok in raw.split(',') {
        let tok = tok.trim();
        let v: f64 = tok.parse().map_err(|_| {
            AppError::Usage(format!("--{flag}: `{tok}` is not a number"))
        })?;
        vals.push(v);
    }
    Ok(vals)
}

/// Execute a parsed command line; the returned value is the process exit
/// code for successful runs (the audit uses it for its verdict).
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Summarize(a) => cmd_summarize(a),
        Command::TheoryTable(a) => cmd_theory_table(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::AuditTable31(a) => cmd_audit(a),
    }
}

fn cmd_summarize(a: SummarizeArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let source = resolve_source(&a.source, &cfg)?;
    cfg.warn_unused();
    let s = summary_of(&source)?;
    io::emit(None, &render::summary_text(&s))?;
    Ok(0)
}

fn cmd_theory_table(a: TheoryTableArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let source = resolve_source(&a.source, &cfg)?;
    let k_grid = parse_grid(
        &required(cfg.resolve(a.k_grid, "k_grid")?, "--k-grid")?,
        "k-grid",
    )?;
    let l_grid = parse_grid(
        &required(cfg.resolve(a.l_grid, "l_grid")?, "--l-grid")?,
        "l-grid",
    )?;
    let alpha = cfg.resolve(a.alpha, "alpha")?.unwrap_or(0.0);
    let delta = cfg.resolve(a.delta, "delta")?.unwrap_or(1.0);
    let default_ratio = match &source {
        Source::Synthetic(_, _, spec) => spec.ratio,
        _ => builtin::S2_RATIO,
    };
    let ratio = cfg.resolve(a.s2_ratio, "s2_ratio")?.unwrap_or(default_ratio);
    let mode = match cfg
        .resolve(a.weight_mode, "weight_mode")?
        .unwrap_or(WeightModeArg::PerCell)
    {
        WeightModeArg::PerCell => WeightMode::PerCell,
        WeightModeArg::Reference => WeightMode::Reference {
            k_frac: required(cfg.resolve(a.ref_k, "ref_k")?, "--ref-k")?,
            l_factor: required(cfg.resolve(a.ref_l, "ref_l")?, "--ref-l")?,
        },
    };
    let format = cfg
        .resolve(a.output.format, "format")?
        .unwrap_or(FormatArg::Text);
    let out: Option<PathBuf> = cfg.resolve(a.output.out.clone(), "out")?;
    cfg.warn_unused();

    let s = summary_of(&source)?;
    let shape = T2Shape { alpha, delta };
    let cells =
        theory::pre_table(&s, ratio, &k_grid, &l_grid, shape, mode).map_err(AppError::from)?;
    let rendered = match format {
        FormatArg::Text => render::theory_text(&cells),
        FormatArg::Csv => render::theory_csv(&cells),
    };
    io::emit(out.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_simulate(a: SimulateArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let source = resolve_source(&a.source, &cfg)?;
    let (pop, n) = match source {
        Source::File(p, n) => (p, n),
        Source::Synthetic(p, n, _) => (p, n),
        Source::Builtin => {
            return Err(AppError::Usage(
                "the built-in set is summary-only; simulate needs unit data (--pop or --synthetic)"
                    .into(),
            ))
        }
    };
    let reps = required(cfg.resolve(a.reps, "reps")?, "--reps")?;
    let seed = required(cfg.resolve(a.seed, "seed")?, "--seed")?;
    let l_factor = required(cfg.resolve(a.l_factor, "l")?, "--L")?;
    let k_frac = required(cfg.resolve(a.k_frac, "k")?, "--K")?;
    let labeling = match cfg
        .resolve(a.labeling, "labeling")?
        .unwrap_or(LabelingArg::StratumTail)
    {
        LabelingArg::StratumTail => Labeling::StratumTail { k_frac },
        LabelingArg::Bernoulli => Labeling::Bernoulli { k_frac },
    };
    let alpha = cfg.resolve(a.alpha, "alpha")?.unwrap_or(0.0);
    let delta = cfg.resolve(a.delta, "delta")?.unwrap_or(1.0);
    let format = cfg
        .resolve(a.output.format, "format")?
        .unwrap_or(FormatArg::Text);
    let out: Option<PathBuf> = cfg.resolve(a.output.out.clone(), "out")?;
    cfg.warn_unused();

    // Optimum constants from the same labels the run itself will derive:
    // materialization is deterministic in (rule, N, seed), so the theory side
    // of the report refers to the sampling process actually simulated.
    let summary = Summary::compute(&pop, n).map_err(AppError::from)?;
    let labels = labeling.materialize(pop.len(), seed).map_err(AppError::from)?;
    let labeled: Vec<f64> = pop
        .y()
        .iter()
        .zip(&labels)
        .filter_map(|(&y, &m)| m.then_some(y))
        .collect();
    let k_real = labeled.len() as f64 / pop.len() as f64;
    let s2_y2 = num::variance(&labeled).unwrap_or(0.0);
    let shape = T2Shape { alpha, delta };
    let moments = theory::Moments::new(
        &summary,
        NonResponse {
            k_frac: k_real,
            l_factor,
            s2_y2,
        },
    )
    .map_err(AppError::from)?;
    let constants = theory::constants_at(&moments, shape).map_err(AppError::from)?;

    let mc_cfg = McConfig {
        replications: reps,
        seed,
        l_factor,
        labeling,
        estimators: theory::specs_from_constants(&constants, shape),
    };
    let report = mc::run(&pop, n, &mc_cfg).map_err(AppError::from)?;
    if report.l_mismatch {
        if let Some(lr) = report.realized_l {
            eprintln!(
                "warning: realized sub-sampling rate L'={lr:.4} deviates more than 10% \
                 from declared L={l_factor}"
            );
        }
    }
    let rendered = match format {
        FormatArg::Text => render::simulate_text(&report),
        FormatArg::Csv => render::simulate_csv(&report),
    };
    io::emit(out.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_audit(a: AuditArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let format = cfg
        .resolve(a.output.format, "format")?
        .unwrap_or(FormatArg::Text);
    let out: Option<PathBuf> = cfg.resolve(a.output.out.clone(), "out")?;
    cfg.warn_unused();
    let (rows, all_ok) = builtin::audit()?;
    let rendered = match format {
        FormatArg::Text => render::audit_text(&rows),
        FormatArg::Csv => render::audit_csv(&rows),
    };
    io::emit(out.as_deref(), &rendered)?;
    if all_ok {
        Ok(0)
    } else {
        eprintln!("audit: at least one unflagged cell deviates beyond 0.05%");
        Ok(2)
    }
}
