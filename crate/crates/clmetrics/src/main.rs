//! Command-line surface of the metrics engine.
//!
//! Exit codes: 0 on success, 2 on data/validation/computation errors, 64 on
//! usage errors (unknown flags or malformed values).

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use clmetrics::io::{matrix_to_csv, matrix_to_json, parse_matrix_file, MatrixFormat};
use clmetrics::random_baseline::{monte_carlo_random_classifier, rand_accuracy_matrix};
use clmetrics::report::{
    build_report, report_in_percent, report_to_csv, report_to_json, MetricReport,
};
use clmetrics::rescaled::difficulty_coefficients;
use clmetrics::traditional::{average_accuracy, average_forgetting, forgetting_entries};
use clmetrics::{AccuracyMatrix, LearnerSpec, ReportSource, TaskSchedule};

#[derive(Parser)]
#[command(
    name = "clmetrics",
    version,
    about = "Continual-learning metrics: AA/AF and their difficulty-rescaled RAA/RAF",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a full metric report from an accuracy-matrix log file
    Compute(ComputeArgs),
    /// Generate a synthetic learner's matrix and compute its report
    Simulate(SimulateArgs),
    /// Emit the difficulty coefficients gamma and beta for a schedule
    Coeffs(CoeffsArgs),
    /// Print the random-classifier demonstration tables (percent, rounded)
    Table(TableArgs),
    /// Parse an input file and print its schedule summary
    Validate(ValidateArgs),
    /// Write an empirical random-classifier matrix from seeded guessing
    Montecarlo(MontecarloArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for MatrixFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => MatrixFormat::Csv,
            FormatArg::Json => MatrixFormat::Json,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Accuracy-matrix file to ingest
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Treat input entries as percentages and divide by 100 on ingest
    #[arg(long)]
    percent: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report serialization format
    #[arg(long, value_enum, default_value = "json")]
    report_format: FormatArg,
    /// Emit report values multiplied by 100 (percent-style tables)
    #[arg(long)]
    percent_output: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Learner kind: random, perfect, worst or parametric
    #[arg(long)]
    learner: String,
    /// Number of tasks K
    #[arg(long)]
    tasks: usize,
    /// Classes per task: a single count or a comma list with one entry per task
    #[arg(long)]
    classes: String,
    /// Accuracy on the current task (parametric only)
    #[arg(long)]
    plasticity: Option<f64>,
    /// Per-task geometric retention factor (parametric only)
    #[arg(long)]
    stability: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the generated accuracy matrix to this file
    #[arg(long)]
    matrix_out: Option<PathBuf>,
    /// Format of --matrix-out; inferred from its extension when omitted
    #[arg(long, value_enum)]
    matrix_format: Option<FormatArg>,
    /// Report serialization format
    #[arg(long, value_enum, default_value = "json")]
    report_format: FormatArg,
    /// Emit report values multiplied by 100 (percent-style tables)
    #[arg(long)]
    percent_output: bool,
}

#[derive(Args)]
struct CoeffsArgs {
    /// Number of tasks K
    #[arg(long)]
    tasks: usize,
    /// Classes per task: a single count or a comma list with one entry per task
    #[arg(long)]
    classes: String,
    /// Write a plot-ready CSV (k,gamma,beta) here
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// 1 for the accuracy table, 2 for the forgetting table
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
}

#[derive(Args)]
struct ValidateArgs {
    /// Accuracy-matrix file to check
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Treat input entries as percentages and divide by 100 on ingest
    #[arg(long)]
    percent: bool,
}

#[derive(Args)]
struct MontecarloArgs {
    /// Number of tasks K
    #[arg(long)]
    tasks: usize,
    /// Classes per task: a single count or a comma list with one entry per task
    #[arg(long)]
    classes: String,
    /// Guesses simulated per matrix cell
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// RNG seed; required so runs are reproducible
    #[arg(long)]
    seed: u64,
    /// Output matrix format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write the matrix here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> clmetrics::Result<()> {
    match cli.command {
        Command::Compute(args) => compute(args),
        Command::Simulate(args) => simulate(args),
        Command::Coeffs(args) => coeffs(args),
        Command::Table(args) => {
            print!("{}", render_table(args.which));
            Ok(())
        }
        Command::Validate(args) => validate(args),
        Command::Montecarlo(args) => montecarlo(args),
    }
}

fn schedule_from(tasks: usize, classes: &str) -> clmetrics::Result<TaskSchedule> {
    let counts = classes
        .split(',')
        .map(|tok| {
            tok.trim().parse::<u32>().map_err(|_| {
                clmetrics::Error::Schedule(format!("invalid class count '{}'", tok.trim()))
            })
        })
        .collect::<clmetrics::Result<Vec<u32>>>()?;
    if counts.len() == 1 {
        TaskSchedule::uniform(tasks, counts[0])
    } else {
        TaskSchedule::new(tasks, &counts)
    }
}

fn write_or_print(text: &str, output: Option<&Path>) -> clmetrics::Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_report(
    report: &MetricReport,
    format: FormatArg,
    percent_output: bool,
    output: Option<&Path>,
) -> clmetrics::Result<()> {
    let scaled;
    let report = if percent_output {
        scaled = report_in_percent(report);
        &scaled
    } else {
        report
    };
    let text = match format {
        FormatArg::Json => report_to_json(report),
        FormatArg::Csv => report_to_csv(report),
    };
    write_or_print(&text, output)
}

fn compute(args: ComputeArgs) -> clmetrics::Result<()> {
    let format = args
        .format
        .map(MatrixFormat::from)
        .unwrap_or_else(|| MatrixFormat::from_path(&args.input));
    let (matrix, learner) = parse_matrix_file(&args.input, format, args.percent)?;
    let source = match learner {
        Some(learner) => ReportSource::Synthetic { learner },
        None => ReportSource::File {
            path: args.input.display().to_string(),
        },
    };
    let report = build_report(&matrix, source)?;
    emit_report(
        &report,
        args.report_format,
        args.percent_output,
        args.output.as_deref(),
    )
}

fn simulate(args: SimulateArgs) -> clmetrics::Result<()> {
    let spec = LearnerSpec::parse(&args.learner, args.plasticity, args.stability)?;
    let schedule = schedule_from(args.tasks, &args.classes)?;
    let matrix = spec.generate(&schedule);
    if let Some(path) = &args.matrix_out {
        let format = args
            .matrix_format
            .map(MatrixFormat::from)
            .unwrap_or_else(|| MatrixFormat::from_path(path));
        let text = match format {
            MatrixFormat::Csv => matrix_to_csv(&matrix),
            MatrixFormat::Json => matrix_to_json(&matrix, Some(&spec)),
        };
        fs::write(path, text)?;
    }
    let report = build_report(&matrix, ReportSource::Synthetic { learner: spec })?;
    emit_report(
        &report,
        args.report_format,
        args.percent_output,
        args.output.as_deref(),
    )
}

fn coeffs(args: CoeffsArgs) -> clmetrics::Result<()> {
    let schedule = schedule_from(args.tasks, &args.classes)?;
    let c = difficulty_coefficients(&schedule);
    let line = |values: &[Option<f64>]| {
        values
            .iter()
            .map(|v| match v {
                Some(v) => format!("{v:?}"),
                None => "-".to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("gamma: {}", line(c.gamma.values()));
    println!("beta: {}", line(c.beta.values()));
    if c.general_path {
        eprintln!("note: non-uniform schedule; beta uses the numeric normalizer");
    }
    if let Some(path) = &args.output {
        let mut csv = String::from("k,gamma,beta\n");
        for k in 1..=schedule.num_tasks() {
            let beta = match c.beta.get(k) {
                Some(b) => format!("{b:?}"),
                None => String::new(),
            };
            csv.push_str(&format!("{k},{:?},{beta}\n", c.gamma.get(k).unwrap()));
        }
        fs::write(path, csv)?;
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> clmetrics::Result<()> {
    let format = args
        .format
        .map(MatrixFormat::from)
        .unwrap_or_else(|| MatrixFormat::from_path(&args.input));
    let (matrix, learner) = parse_matrix_file(&args.input, format, args.percent)?;
    let schedule = matrix.schedule();
    let counts = schedule
        .classes_per_task()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let kind = if schedule.is_uniform() {
        "uniform"
    } else {
        "non-uniform"
    };
    println!(
        "schedule: K={} tasks, classes per task {counts} ({kind}), {} classes total",
        schedule.num_tasks(),
        schedule.total_classes()
    );
    let entries = schedule.num_tasks() * (schedule.num_tasks() + 1) / 2;
    println!("matrix: {entries} entries, all within [0,1]");
    if let Some(spec) = learner {
        println!("provenance: synthetic learner '{}'", spec.kind());
    }
    Ok(())
}

fn montecarlo(args: MontecarloArgs) -> clmetrics::Result<()> {
    let schedule = schedule_from(args.tasks, &args.classes)?;
    let matrix = monte_carlo_random_classifier(&schedule, args.samples as usize, args.seed);
    let text = match args.format {
        FormatArg::Csv => matrix_to_csv(&matrix),
        FormatArg::Json => matrix_to_json(&matrix, None),
    };
    write_or_print(&text, args.output.as_deref())
}

/// Format `value` to `sig` significant digits, rounding or truncating, and
/// strip trailing zeros. Matches the rounding the demonstration tables were
/// printed with.
fn fmt_sig(value: f64, sig: i32, truncate: bool) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let digits_before = value.abs().log10().floor() as i32 + 1;
    let decimals = (sig - digits_before).max(0);
    let scale = 10f64.powi(decimals);
    let scaled = value * scale;
    let quantized = if truncate {
        // Tiny relative nudge so values that are exact in decimal do not
        // truncate down from a one-ulp-low float.
        (scaled + scaled.abs() * 1e-11).floor()
    } else {
        scaled.round()
    };
    let restored = quantized / scale;
    let text = format!("{:.*}", decimals.max(0) as usize, restored);
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

/// The two demonstration tables: the random classifier over 5 tasks of 2
/// classes, in percent with the printed rounding (3 significant digits for
/// cells — forgetting cells truncated — and 4 for the AF column).
fn render_table(which: u8) -> String {
    const TASKS: usize = 5;
    let schedule = TaskSchedule::uniform(TASKS, 2).expect("static schedule");
    let matrix: AccuracyMatrix = rand_accuracy_matrix(&schedule);
    let mut out = String::new();
    match which {
        1 => {
            let aa = average_accuracy(&matrix);
            for k in 1..=TASKS {
                let mut cells = Vec::with_capacity(TASKS + 1);
                for j in 1..=TASKS {
                    cells.push(if j <= k {
                        fmt_sig(matrix.a(k, j) * 100.0, 3, false)
                    } else {
                        "-".to_string()
                    });
                }
                cells.push(fmt_sig(aa.get(k).unwrap() * 100.0, 3, false));
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        _ => {
            let f = forgetting_entries(&matrix).expect("K = 5 has forgetting");
            let af = average_forgetting(&matrix);
            for k in 1..=TASKS {
                let mut cells = Vec::with_capacity(TASKS + 1);
                for j in 1..=TASKS {
                    cells.push(if j < k {
                        fmt_sig(f.f(k, j) * 100.0, 3, true)
                    } else {
                        "-".to_string()
                    });
                }
                cells.push(match af.get(k) {
                    Some(v) => fmt_sig(v * 100.0, 4, false),
                    None => "-".to_string(),
                });
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
    }
    out
}
