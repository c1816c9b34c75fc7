use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use gradekit::client::{
    compare::{Comparator, StubComparator, TransportComparator},
    compare_images, tally_wins, ClientError, HttpClient, HttpTransport, ModelClient, StubModel,
    Winner,
};
use gradekit::config::{self, Overrides};
use gradekit::dataset::{
    self, completion_rate, curate, dataset_stats, export_sft, normalize_intent, split, CuratedRow,
};
use gradekit::engine::{apply_plan_with, load_image, save_image, PresetRegistry, ToolMask};
use gradekit::eval::{evaluate, render_table, EvalSample, FilterQualityMode};
use gradekit::tool_schema::{parse_plan, EditPlan};

/// Exit codes: 0 success, 1 runtime error, 2 invalid input, 3 endpoint failure.
const EXIT_RUNTIME: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_ENDPOINT: u8 = 3;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn runtime(message: impl ToString) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            message: message.to_string(),
        }
    }
    fn invalid(message: impl ToString) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
    fn endpoint(message: impl ToString) -> Self {
        CliError {
            code: EXIT_ENDPOINT,
            message: message.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::runtime(e)
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        CliError::endpoint(e)
    }
}

#[derive(Parser)]
#[command(name = "gradekit", version, about = "Color grading pipeline toolkit")]
struct Cli {
    /// Optional TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    show_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an edit-plan JSON file.
    Validate { plan: PathBuf },
    /// Apply an edit plan to an image.
    Apply(ApplyArgs),
    /// Dataset operations.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Export supervised fine-tuning records from a training set.
    SftExport {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score predictions against ground truth.
    Eval(EvalArgs),
    /// One mistake-driven augmentation iteration.
    Augment(AugmentArgs),
    /// Ask a judge model which of two gradings better matches an intent.
    CompareImages(CompareArgs),
    /// Completion rate from a project event log.
    CompletionRate {
        #[arg(long)]
        events: PathBuf,
    },
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated subset of adjust,selective,filter.
    #[arg(long, value_delimiter = ',')]
    tools: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Ingest logs, curate, split, and write train/test files.
    Build {
        #[arg(long)]
        logs: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        test_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Descriptive statistics over a curated dataset.
    Stats {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QualityModeArg {
    BothUsed,
    All,
}

#[derive(Args)]
struct EvalArgs {
    /// Ground-truth rows: JSONL {intent, calls, plan}.
    #[arg(long)]
    truth: PathBuf,
    /// Predictions: JSONL {intent, plan}.
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = 1)]
    min_calls: u64,
    #[arg(long, value_enum, default_value = "both-used")]
    filter_quality_mode: QualityModeArg,
}

#[derive(Args)]
struct AugmentArgs {
    /// Curated training rows (JSONL).
    #[arg(long)]
    train: PathBuf,
    /// Student predictions: JSONL EvalSample {intent, calls, truth, prediction}.
    #[arg(long)]
    pred: PathBuf,
    /// Baseline means: JSON {adjust, selective}.
    #[arg(long)]
    baselines: PathBuf,
    #[arg(long, default_value_t = 1000)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
    /// Generator endpoint URL (overrides config).
    #[arg(long)]
    endpoint: Option<String>,
    /// Stub generator script (JSONL {pattern, response}).
    #[arg(long)]
    stub: Option<PathBuf>,
    /// Disable the tool-selection-mismatch mistake rule.
    #[arg(long)]
    no_selection_mistakes: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    intent: Option<String>,
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long)]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
    /// Batch manifest: JSONL {intent, source, a, b}; prints a tally.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    stub: Option<PathBuf>,
}

/// One line of a truth file for `eval`.
#[derive(Deserialize)]
struct TruthRow {
    intent: String,
    #[serde(default = "default_calls")]
    calls: u64,
    plan: EditPlan,
}

fn default_calls() -> u64 {
    1
}

#[derive(Deserialize)]
struct PredRow {
    intent: String,
    plan: EditPlan,
}

#[derive(Deserialize)]
struct ManifestRow {
    intent: String,
    source: PathBuf,
    a: PathBuf,
    b: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Machine-readable error line.
            eprintln!(
                "{}",
                serde_json::json!({"error": e.message, "exit_code": e.code})
            );
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides::default();
    let cfg = config::load(cli.config.as_deref(), &overrides)
        .map_err(|e| CliError::invalid(e))?;
    if cli.show_config {
        print!("{}", config::show(&cfg));
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(CliError::invalid("no subcommand given; see --help"));
    };
    match command {
        Command::Validate { plan } => cmd_validate(&plan),
        Command::Apply(args) => cmd_apply(args),
        Command::Dataset(DatasetCommand::Build {
            logs,
            out_dir,
            test_size,
            seed,
        }) => cmd_dataset_build(&logs, &out_dir, test_size, seed),
        Command::Dataset(DatasetCommand::Stats { data, report }) => {
            cmd_dataset_stats(&data, &report)
        }
        Command::SftExport { train, out } => cmd_sft_export(&train, &out),
        Command::Eval(args) => cmd_eval(args),
        Command::Augment(args) => cmd_augment(args, &cfg),
        Command::CompareImages(args) => cmd_compare(args, &cfg),
        Command::CompletionRate { events } => cmd_completion_rate(&events),
    }
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)?;
    match parse_plan(&text) {
        Ok(validated) => {
            for w in &validated.warnings {
                log::warn!(
                    "clamped {}: {} -> {}",
                    w.field,
                    w.original,
                    w.clamped
                );
            }
            println!(
                "{}",
                serde_json::json!({
                    "valid": true,
                    "clamp_warnings": validated.warnings.len(),
                    "clamped_fields": validated.warnings.iter().map(|w| w.field.clone()).collect::<Vec<_>>(),
                })
            );
            Ok(())
        }
        Err(e) => Err(CliError::invalid(format!("invalid plan: {e}"))),
    }
}

fn parse_tool_mask(tools: &Option<Vec<String>>) -> Result<ToolMask, CliError> {
    let Some(tools) = tools else {
        return Ok(ToolMask::default());
    };
    let mut mask = ToolMask {
        adjust: false,
        selective: false,
        filter: false,
    };
    for t in tools {
        match t.trim() {
            "adjust" => mask.adjust = true,
            "selective" => mask.selective = true,
            "filter" => mask.filter = true,
            other => {
                return Err(CliError::invalid(format!(
                    "unknown tool {other:?}; expected adjust, selective, filter"
                )))
            }
        }
    }
    Ok(mask)
}

fn cmd_apply(args: ApplyArgs) -> Result<(), CliError> {
    let mask = parse_tool_mask(&args.tools)?;
    let img = load_image(&args.image).map_err(|e| CliError::invalid(e))?;
    let text = fs::read_to_string(&args.plan)?;
    let validated = parse_plan(&text).map_err(|e| CliError::invalid(e))?;
    let registry = PresetRegistry::bundled();
    let out = apply_plan_with(
        &img,
        &validated.plan,
        &registry,
        mask,
        gradekit::engine::DEFAULT_MAX_PIXELS,
    )
    .map_err(|e| CliError::invalid(e))?;
    save_image(&out, &args.out).map_err(|e| CliError::runtime(e))?;
    Ok(())
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: T = serde_json::from_str(line)
            .map_err(|e| CliError::invalid(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(row);
    }
    Ok(out)
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut text = String::new();
    for row in rows {
        text.push_str(&serde_json::to_string(row).expect("serializable"));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

fn cmd_dataset_build(
    logs: &Path,
    out_dir: &Path,
    test_size: usize,
    seed: u64,
) -> Result<(), CliError> {
    let (records, ingest_report) =
        dataset::ingest(logs).map_err(|e| CliError::invalid(e))?;
    let (rows, curation_report) = curate(&records);
    let split_result = split(rows.clone(), test_size, seed).map_err(|e| CliError::invalid(e))?;
    fs::create_dir_all(out_dir)?;
    write_jsonl(&out_dir.join("curated.jsonl"), &rows)?;
    write_jsonl(&out_dir.join("train.jsonl"), &split_result.train)?;
    write_jsonl(&out_dir.join("test.jsonl"), &split_result.test)?;
    let report = serde_json::json!({
        "ingest": ingest_report,
        "curation": curation_report,
        "seed": seed,
        "train_rows": split_result.train.len(),
        "test_rows": split_result.test.len(),
    });
    fs::write(
        out_dir.join("report.json"),
        serde_json::to_string_pretty(&report).expect("serializable"),
    )?;
    println!(
        "{}",
        serde_json::json!({
            "train": split_result.train.len(),
            "test": split_result.test.len(),
        })
    );
    Ok(())
}

fn cmd_dataset_stats(data: &Path, report: &Path) -> Result<(), CliError> {
    let rows: Vec<CuratedRow> = read_jsonl(data)?;
    let stats = dataset_stats(&rows);
    fs::write(
        report,
        serde_json::to_string_pretty(&stats).expect("serializable"),
    )?;
    println!(
        "{}",
        serde_json::json!({
            "rows": stats.rows,
            "adjust_used": stats.adjust.used,
            "selective_used": stats.selective.used,
            "filter_used": stats.filter.used,
        })
    );
    Ok(())
}

fn cmd_sft_export(train: &Path, out: &Path) -> Result<(), CliError> {
    let rows: Vec<CuratedRow> = read_jsonl(train)?;
    let records = export_sft(&rows).map_err(|e| CliError::invalid(e))?;
    write_jsonl(out, &records)?;
    println!("{}", serde_json::json!({"records": records.len()}));
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let truth: Vec<TruthRow> = read_jsonl(&args.truth)?;
    let pred: Vec<PredRow> = read_jsonl(&args.pred)?;
    let pred_by_intent: std::collections::BTreeMap<String, EditPlan> = pred
        .into_iter()
        .map(|p| (normalize_intent(&p.intent), p.plan))
        .collect();
    let samples: Vec<EvalSample> = truth
        .into_iter()
        .map(|t| {
            let prediction = pred_by_intent
                .get(&normalize_intent(&t.intent))
                .cloned()
                .unwrap_or_default();
            EvalSample {
                intent: t.intent,
                calls: t.calls,
                truth: t.plan,
                prediction,
            }
        })
        .collect();
    let mode = match args.filter_quality_mode {
        QualityModeArg::BothUsed => FilterQualityMode::BothUsed,
        QualityModeArg::All => FilterQualityMode::All,
    };
    let report =
        evaluate(&samples, args.min_calls, mode).map_err(|e| CliError::invalid(e))?;
    fs::write(
        &args.report,
        serde_json::to_string_pretty(&report).expect("serializable"),
    )?;
    print!("{}", render_table(std::slice::from_ref(&report)));
    Ok(())
}

fn make_client(
    endpoint: &Option<String>,
    stub: &Option<PathBuf>,
    cfg: &gradekit::config::CliConfig,
) -> Result<Box<dyn ModelClient>, CliError> {
    match (endpoint, stub) {
        (_, Some(path)) => Ok(Box::new(StubModel::load(path)?)),
        (Some(url), None) => {
            let mut ep = cfg.endpoint.clone();
            ep.url = url.clone();
            Ok(Box::new(HttpClient::new(ep)))
        }
        (None, None) if !cfg.endpoint.url.is_empty() => {
            Ok(Box::new(HttpClient::new(cfg.endpoint.clone())))
        }
        (None, None) => Err(CliError::invalid(
            "no generator configured: pass --endpoint, --stub, or a config file",
        )),
    }
}

fn cmd_augment(args: AugmentArgs, cfg: &gradekit::config::CliConfig) -> Result<(), CliError> {
    let train: Vec<CuratedRow> = read_jsonl(&args.train)?;
    let predictions: Vec<EvalSample> = read_jsonl(&args.pred)?;
    let baselines_text = fs::read_to_string(&args.baselines)?;
    let baselines: gradekit::augment::BaselineMeans = serde_json::from_str(&baselines_text)
        .map_err(|e| CliError::invalid(format!("bad baselines file: {e}")))?;
    let client = make_client(&args.endpoint, &args.stub, cfg)?;
    let out = gradekit::augment::run_iteration(
        train,
        &predictions,
        &baselines,
        client.as_ref(),
        args.sample,
        args.seed,
        !args.no_selection_mistakes,
        &args.out_dir,
    )
    .map_err(|e| match e {
        gradekit::augment::AugmentError::Client(c) => CliError::from(c),
        gradekit::augment::AugmentError::MissingBaseline { .. } => CliError::invalid(e),
        other => CliError::runtime(other),
    })?;
    println!(
        "{}",
        serde_json::to_string(&out.bookkeeping).expect("serializable")
    );
    Ok(())
}

fn cmd_compare(args: CompareArgs, cfg: &gradekit::config::CliConfig) -> Result<(), CliError> {
    let comparator: Box<dyn Comparator> = if let Some(path) = &args.stub {
        Box::new(StubComparator {
            stub: StubModel::load(path)?,
        })
    } else if args.endpoint.is_some() || !cfg.endpoint.url.is_empty() {
        Box::new(TransportComparator {
            transport: &HttpTransport,
        })
    } else {
        return Err(CliError::invalid(
            "no judge configured: pass --endpoint, --stub, or a config file",
        ));
    };
    let mut ep = cfg.endpoint.clone();
    if let Some(url) = &args.endpoint {
        ep.url = url.clone();
    }

    let jobs: Vec<ManifestRow> = if let Some(manifest) = &args.manifest {
        read_jsonl(manifest)?
    } else {
        match (&args.intent, &args.source, &args.a, &args.b) {
            (Some(intent), Some(source), Some(a), Some(b)) => vec![ManifestRow {
                intent: intent.clone(),
                source: source.clone(),
                a: a.clone(),
                b: b.clone(),
            }],
            _ => {
                return Err(CliError::invalid(
                    "pass --manifest or all of --intent --source --a --b",
                ))
            }
        }
    };

    let mut winners = Vec::new();
    for job in &jobs {
        let source = load_image(&job.source).map_err(|e| CliError::invalid(e))?;
        let a = load_image(&job.a).map_err(|e| CliError::invalid(e))?;
        let b = load_image(&job.b).map_err(|e| CliError::invalid(e))?;
        let result = compare_images(comparator.as_ref(), &ep, &job.intent, &source, &a, &b)?;
        println!(
            "{}",
            serde_json::json!({
                "intent": result.intent,
                "winner": match result.winner { Winner::B => "a", Winner::C => "b" },
            })
        );
        winners.push(result.winner);
    }
    if args.manifest.is_some() {
        let tally = tally_wins(&winners);
        println!(
            "{}",
            serde_json::json!({"tally": {"a": tally.b, "b": tally.c}})
        );
    }
    Ok(())
}

fn cmd_completion_rate(events: &Path) -> Result<(), CliError> {
    let rate = completion_rate(events).map_err(|e| CliError::invalid(e))?;
    println!(
        "{}",
        serde_json::json!({
            "started": rate.started,
            "exported": rate.exported,
            "rate": rate.rate,
        })
    );
    Ok(())
}
