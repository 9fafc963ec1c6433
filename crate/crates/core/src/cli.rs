//! `docrel` command line: annotate, evaluate, stats, export, validate.
//!
//! Exit status: 0 success, 1 validation failure or undefined metric,
//! 2 I/O or parse failure, 3 usage error. Results go to stdout, diagnostics
//! to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::completion::{annotate, AnnotateConfig, ReferencePatterns};
use crate::eval::{evaluate, DlaParams, EvalError, EvalParams, MetricReport};
use crate::io::{
    compute_stats, export_dataset_dot, export_dataset_graphml, load_dataset, load_predictions, read_dataset, to_json_string,
    validate_dataset, Dataset, DatasetError, ExportOptions, Loaded,
};
use crate::model::RelationFilter;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "docrel", version, about = "Relation graphs over document layout annotations")]
struct Cli {
    /// Worker threads for per-page work (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build spatial and logical relations for every page of a layout file.
    Annotate(AnnotateArgs),
    /// Score predicted graphs against ground truth (mR_g, mAP_g, DLA mAP).
    Evaluate(EvaluateArgs),
    /// Relation and instance statistics of a dataset.
    Stats(StatsArgs),
    /// Export relation graphs as DOT or GraphML.
    Export(ExportArgs),
    /// Check page invariants and list every violation.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct AnnotateArgs {
    /// Layout file (relations, if any, are replaced).
    input: PathBuf,
    /// Output graph file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Minimum whitespace width in pixels for an X-Y cut.
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    xy_min_gap: f64,
    /// Reference pattern file, one "kind<TAB>pattern" per line.
    #[arg(long)]
    ref_patterns: Option<PathBuf>,
    /// Emit only Up/Down/Left/Right edges.
    #[arg(long, conflicts_with = "logical_only")]
    spatial_only: bool,
    /// Emit only Parent/Child/Sequence/Reference edges.
    #[arg(long)]
    logical_only: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Ground-truth graph file.
    #[arg(long)]
    gt: PathBuf,
    /// Predicted graph file (scores on instances and relations).
    #[arg(long)]
    pred: PathBuf,
    /// IoU must be strictly above this for an instance match.
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    iou_threshold: f64,
    /// Relation confidence thresholds, comma separated; one report each.
    #[arg(long, alias = "rel-threshold", value_delimiter = ',', default_value = "0.5", value_parser = unit_interval)]
    rel_thresholds: Vec<f64>,
    /// Multiply relation scores by their "existence" values first.
    #[arg(long)]
    fuse_existence: bool,
    /// Detections per page and class kept for DLA mAP.
    #[arg(long, default_value_t = 300)]
    max_dets: usize,
    /// Skip DLA mAP.
    #[arg(long)]
    no_dla: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Debug, Args)]
struct StatsArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Graphml,
}

#[derive(Debug, Args)]
struct ExportArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
    /// "all", "spatial", "logical", or a comma list of relation types.
    #[arg(long, default_value = "all")]
    types: RelationFilter,
    /// Export only this page.
    #[arg(long)]
    page: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be a finite non-negative number"))
    }
}

/// Failure of a subcommand, mapped onto an exit status.
enum Failure {
    Invalid(String),
    Io(String),
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Invalid(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Streams<'_> {
    fn emit(&mut self, target: Option<&Path>, text: &str) -> Result<(), Failure> {
        match target {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => self.out.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("stdout: {e}"))),
        }
    }

    fn warn_all(&mut self, loaded: &Loaded) {
        for w in &loaded.warnings {
            let _ = writeln!(self.err, "warning: {w}");
        }
    }
}

/// Run with the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Run with explicit output streams; returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    let mut streams = Streams { out, err };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        builder = builder.num_threads(jobs);
    }
    let result = match builder.build() {
        Ok(pool) => dispatch(cli.command, &pool, &mut streams),
        Err(e) => Err(Failure::Io(format!("thread pool: {e}"))),
    };

    match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(streams.err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(streams.err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn dispatch(command: Command, pool: &ThreadPool, s: &mut Streams<'_>) -> Result<i32, Failure> {
    match command {
        Command::Annotate(a) => cmd_annotate(a, pool, s),
        Command::Evaluate(a) => cmd_evaluate(a, pool, s),
        Command::Stats(a) => cmd_stats(a, pool, s),
        Command::Export(a) => cmd_export(a, s),
        Command::Validate(a) => cmd_validate(a, s),
    }
}

fn load(path: &Path, s: &mut Streams<'_>) -> Result<Dataset, Failure> {
    let loaded = load_dataset(path)?;
    s.warn_all(&loaded);
    Ok(loaded.dataset)
}

fn load_pred(path: &Path, s: &mut Streams<'_>) -> Result<Dataset, Failure> {
    let loaded = load_predictions(path)?;
    s.warn_all(&loaded);
    Ok(loaded.dataset)
}

fn cmd_annotate(args: AnnotateArgs, pool: &ThreadPool, s: &mut Streams<'_>) -> Result<i32, Failure> {
    let patterns = match &args.ref_patterns {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            ReferencePatterns::parse(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
        }
        None => ReferencePatterns::default(),
    };
    let output = if args.spatial_only {
        RelationFilter::Spatial
    } else if args.logical_only {
        RelationFilter::Logical
    } else {
        RelationFilter::All
    };
    let config = AnnotateConfig { min_gap: args.xy_min_gap, patterns, output };

    let mut dataset = load(&args.input, s)?;
    let pages = pool.install(|| {
        dataset
            .pages
            .par_iter()
            .map(|p| {
                annotate(p, &config)
                    .map(|g| g.into_page())
                    .map_err(|report| Failure::Invalid(format!("page {}: {report}", p.id)))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    dataset.pages = pages;
    s.emit(args.output.as_deref(), &to_json_string(&dataset))?;
    Ok(EXIT_OK)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_owned(), |v| format!("{v:.6}"))
}

fn report_text(r: &MetricReport) -> String {
    let mut out = format!(
        "T_IoU={} T_R={}  mR_g={}  mAP_g={}",
        r.t_iou,
        r.t_r,
        fmt_opt(r.mr_g),
        fmt_opt(r.map_g)
    );
    if let Some(d) = &r.dla {
        out.push_str(&format!("  DLA mAP={}", fmt_opt(d.map)));
    }
    out.push('\n');
    for (rel, recall) in &r.recall {
        out.push_str(&format!("  {:<10} R={:.6} AP={:.6}\n", rel.as_str(), recall, r.ap.get(rel).copied().unwrap_or(0.0)));
    }
    out
}

fn cmd_evaluate(args: EvaluateArgs, pool: &ThreadPool, s: &mut Streams<'_>) -> Result<i32, Failure> {
    let gt = load(&args.gt, s)?;
    let pred = load_pred(&args.pred, s)?;
    let params = EvalParams {
        t_iou: args.iou_threshold,
        rel_thresholds: args.rel_thresholds,
        fuse_existence: args.fuse_existence,
        dla: (!args.no_dla).then(|| DlaParams { max_dets: args.max_dets, ..DlaParams::default() }),
    };
    let reports = pool.install(|| evaluate(&gt.pages, &pred.pages, &params))?;
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string_pretty(&reports).expect("report serializes") + "\n",
        ReportFormat::Text => reports.iter().map(report_text).collect(),
    };
    s.emit(None, &text)?;
    if reports.iter().any(MetricReport::is_undefined) {
        let _ = writeln!(s.err, "warning: some metrics are undefined (no ground-truth support)");
        return Ok(EXIT_INVALID);
    }
    Ok(EXIT_OK)
}

fn cmd_stats(args: StatsArgs, pool: &ThreadPool, s: &mut Streams<'_>) -> Result<i32, Failure> {
    let dataset = load(&args.input, s)?;
    let report = pool.install(|| compute_stats(&dataset));
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string_pretty(&report).expect("stats serialize") + "\n",
        ReportFormat::Text => report.to_text(),
    };
    s.emit(None, &text)?;
    Ok(EXIT_OK)
}

fn cmd_export(args: ExportArgs, s: &mut Streams<'_>) -> Result<i32, Failure> {
    let mut dataset = load(&args.input, s)?;
    if let Some(id) = args.page {
        dataset.pages.retain(|p| p.id == id);
        if dataset.pages.is_empty() {
            return Err(Failure::Invalid(format!("no page with id {id}")));
        }
    }
    let options = ExportOptions { filter: args.types };
    let text = match args.format {
        GraphFormat::Dot => export_dataset_dot(&dataset, &options),
        GraphFormat::Graphml => export_dataset_graphml(&dataset, &options),
    };
    s.emit(args.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_validate(args: ValidateArgs, s: &mut Streams<'_>) -> Result<i32, Failure> {
    let loaded = read_dataset(&args.input)?;
    s.warn_all(&loaded);
    let validation = validate_dataset(&loaded.dataset);
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string_pretty(&validation).expect("report serializes") + "\n",
        ReportFormat::Text if validation.is_empty() => "ok\n".to_owned(),
        ReportFormat::Text => validation.to_string(),
    };
    s.emit(None, &text)?;
    Ok(if validation.is_empty() { EXIT_OK } else { EXIT_INVALID })
}
